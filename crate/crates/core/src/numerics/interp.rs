//! Monotone piecewise-cubic interpolation (PCHIP).
//!
//! Used for timing maps: the interpolant of monotone data is monotone, is C¹,
//! and can be inverted interval-by-interval. Node derivatives follow the
//! Fritsch-Carlson weighted harmonic mean; caller-supplied derivatives are
//! clamped into the monotone region.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

fn secants(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xw, yw)| (yw[1] - yw[0]) / (xw[1] - xw[0]))
        .collect()
}

fn edge_derivative(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d * d0 <= 0.0 {
        0.0
    } else if d0 * d1 < 0.0 && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

impl MonotoneCubic {
    /// Fit monotone node derivatives from the data alone.
    pub fn fit(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        Self::check_knots(&x, &y)?;
        let n = x.len();
        let delta = secants(&x, &y);
        let mut d = vec![0.0; n];
        if n == 2 {
            d[0] = delta[0];
            d[1] = delta[0];
        } else {
            let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
            for i in 1..n - 1 {
                let (dl, dr) = (delta[i - 1], delta[i]);
                if dl * dr > 0.0 {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    d[i] = (w1 + w2) / (w1 / dl + w2 / dr);
                }
            }
            d[0] = edge_derivative(h[0], h[1], delta[0], delta[1]);
            d[n - 1] = edge_derivative(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Ok(Self { x, y, d })
    }

    /// Build the interpolant from known derivatives, clamped so the result
    /// stays monotone wherever the data is.
    pub fn from_derivatives(x: Vec<f64>, y: Vec<f64>, mut d: Vec<f64>) -> Result<Self> {
        Self::check_knots(&x, &y)?;
        if d.len() != x.len() {
            return Err(Error::Domain(
                "derivative count must match knot count".into(),
            ));
        }
        let delta = secants(&x, &y);
        let n = x.len();
        for i in 0..n {
            let left = if i > 0 { Some(delta[i - 1]) } else { None };
            let right = if i < n - 1 { Some(delta[i]) } else { None };
            let bound = match (left, right) {
                (Some(a), Some(b)) => {
                    if a * b <= 0.0 {
                        0.0
                    } else {
                        3.0 * a.abs().min(b.abs())
                    }
                }
                (Some(a), None) => 3.0 * a.abs(),
                (None, Some(b)) => 3.0 * b.abs(),
                (None, None) => 0.0,
            };
            let sign = left.or(right).unwrap_or(0.0).signum();
            if d[i] * sign < 0.0 {
                d[i] = 0.0;
            } else if d[i].abs() > bound {
                d[i] = sign * bound;
            }
        }
        Ok(Self { x, y, d })
    }

    fn check_knots(x: &[f64], y: &[f64]) -> Result<()> {
        if x.len() < 2 || x.len() != y.len() {
            return Err(Error::Domain("need at least two knots".into()));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("knots must be strictly increasing".into()));
        }
        Ok(())
    }

    pub fn knots(&self) -> (&[f64], &[f64]) {
        (&self.x, &self.y)
    }

    fn interval(&self, x: f64) -> usize {
        match self.x.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => i.min(self.x.len() - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(self.x.len() - 2),
        }
    }

    /// Evaluate at `x`, clamped to the knot range.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.x.len();
        if x <= self.x[0] {
            return self.y[0];
        }
        if x >= self.x[n - 1] {
            return self.y[n - 1];
        }
        let i = self.interval(x);
        let h = self.x[i + 1] - self.x[i];
        let t = (x - self.x[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * self.y[i]
            + (t3 - 2.0 * t2 + t) * h * self.d[i]
            + (-2.0 * t3 + 3.0 * t2) * self.y[i + 1]
            + (t3 - t2) * h * self.d[i + 1]
    }

    /// Derivative at `x` (one-sided constants past the knot range).
    pub fn deriv(&self, x: f64) -> f64 {
        let n = self.x.len();
        if x <= self.x[0] {
            return self.d[0];
        }
        if x >= self.x[n - 1] {
            return self.d[n - 1];
        }
        let i = self.interval(x);
        let h = self.x[i + 1] - self.x[i];
        let t = (x - self.x[i]) / h;
        let t2 = t * t;
        (6.0 * t2 - 6.0 * t) * (self.y[i] - self.y[i + 1]) / h
            + (3.0 * t2 - 4.0 * t + 1.0) * self.d[i]
            + (3.0 * t2 - 2.0 * t) * self.d[i + 1]
    }

    /// Invert a strictly increasing interpolant: find `x` with `eval(x) = y`.
    /// Bisection with Newton acceleration inside the bracketing interval.
    pub fn solve(&self, y: f64) -> f64 {
        let n = self.x.len();
        if y <= self.y[0] {
            return self.x[0];
        }
        if y >= self.y[n - 1] {
            return self.x[n - 1];
        }
        let i = match self.y.binary_search_by(|v| v.total_cmp(&y)) {
            Ok(i) => return self.x[i],
            Err(i) => i - 1,
        };
        let (mut lo, mut hi) = (self.x[i], self.x[i + 1]);
        let mut x = 0.5 * (lo + hi);
        for _ in 0..100 {
            let f = self.eval(x) - y;
            if f == 0.0 {
                return x;
            }
            if f > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let df = self.deriv(x);
            let newton = if df > 0.0 { x - f / df } else { f64::NAN };
            x = if newton.is_finite() && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(1.0) {
                break;
            }
        }
        x
    }
}
