//! Adaptive Gauss-Kronrod quadrature.
//!
//! Each panel is estimated with the 15-point Kronrod rule; the embedded
//! 7-point Gauss rule provides the local error estimate. Panels are split
//! at the largest-error subinterval until the global estimate meets the
//! tolerance. The final value is accumulated left to right over the sorted
//! panels, so the result does not depend on the refinement order.

use crate::error::{Error, QuadPanel, Result};

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights on the shared nodes.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    /// Relative tolerance on the integral value.
    pub rel_tol: f64,
    /// Absolute tolerance floor (used when the integral is near zero).
    pub abs_tol: f64,
    /// Subdivision budget.
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-14,
            max_panels: 2000,
        }
    }
}

impl QuadOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

/// Kronrod estimate and error for one panel.
fn eval_panel<F>(f: &mut F, lo: f64, hi: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = f(center)?;
    let mut kronrod = WGK[7] * f_center;
    let mut gauss = WG[3] * f_center;
    for (i, &x) in XGK.iter().enumerate().take(7) {
        let fa = f(center - half * x)?;
        let fb = f(center + half * x)?;
        kronrod += WGK[i] * (fa + fb);
        if i % 2 == 1 {
            gauss += WG[i / 2] * (fa + fb);
        }
    }
    Ok(Panel {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    })
}

/// Integrate `f` over `[lo, hi]` adaptively. The integrand may fail (for
/// example on a degenerate point); the first failure aborts the quadrature.
pub fn integrate<F>(mut f: F, lo: f64, hi: f64, opts: &QuadOptions) -> Result<Quadrature>
where
    F: FnMut(f64) -> Result<f64>,
{
    if lo == hi {
        return Ok(Quadrature {
            value: 0.0,
            error_estimate: 0.0,
            panels: 0,
        });
    }
    if lo > hi {
        let mut q = integrate(f, hi, lo, opts)?;
        q.value = -q.value;
        return Ok(q);
    }

    let mut panels = vec![eval_panel(&mut f, lo, hi)?];
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if err <= target {
            // Deterministic merge: left-to-right over the sorted panels.
            panels.sort_by(|a, b| a.lo.total_cmp(&b.lo));
            let value = panels.iter().map(|p| p.value).sum();
            return Ok(Quadrature {
                value,
                error_estimate: err,
                panels: panels.len(),
            });
        }
        if panels.len() >= opts.max_panels {
            panels.sort_by(|a, b| b.error.total_cmp(&a.error));
            let worst = panels
                .iter()
                .take(4)
                .map(|p| QuadPanel {
                    lo: p.lo,
                    hi: p.hi,
                    error: p.error,
                })
                .collect();
            return Err(Error::QuadratureFailure {
                lo,
                hi,
                residual: err,
                worst,
            });
        }
        let (split, _) = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .expect("non-empty panel list");
        let Panel { lo: a, hi: b, .. } = panels.swap_remove(split);
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            return Err(Error::QuadratureFailure {
                lo,
                hi,
                residual: err,
                worst: vec![QuadPanel {
                    lo: a,
                    hi: b,
                    error: err,
                }],
            });
        }
        panels.push(eval_panel(&mut f, a, mid)?);
        panels.push(eval_panel(&mut f, mid, b)?);
    }
}

/// Cumulative integral of `f` at the given knots: `out[j] = ∫_{knots[0]}^{knots[j]} f`.
/// Each subinterval is integrated adaptively, then prefix-summed in order.
pub fn cumulative<F>(mut f: F, knots: &[f64], opts: &QuadOptions) -> Result<Vec<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut out = Vec::with_capacity(knots.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in knots.windows(2) {
        acc += integrate(&mut f, w[0], w[1], opts)?.value;
        out.push(acc);
    }
    Ok(out)
}
