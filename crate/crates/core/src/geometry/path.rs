//! Curves in control-parameter space, u ∈ [0, 1], with analytic velocities.
//!
//! A path carries geometry only; timing lives in the protocol layer.

use crate::error::{Error, Result};
use crate::numerics::interp::MonotoneCubic;
use nalgebra::DVector;
use std::sync::Arc;

type VecFn = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

#[derive(Clone)]
enum Repr {
    /// Affine segment from `from` to `to`.
    Line { from: Vec<f64>, to: Vec<f64> },
    /// Closed-form curve with its analytic derivative.
    Parametric { pos: VecFn, vel: VecFn },
    /// Piecewise-cubic fit through sample points, one interpolant per
    /// coordinate (C¹, monotone knots in u).
    Sampled(Vec<MonotoneCubic>),
}

/// A curve λ⃗(u) over u ∈ [0, 1] with a continuous first derivative per
/// segment. Cheap to clone and safe to share across workers.
#[derive(Clone)]
pub struct Path {
    dim: usize,
    repr: Repr,
}

impl std::fmt::Debug for Path {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match &self.repr {
            Repr::Line { .. } => "line",
            Repr::Parametric { .. } => "parametric",
            Repr::Sampled(_) => "sampled",
        };
        write!(f, "Path({kind}, dim {})", self.dim)
    }
}

impl Path {
    /// Straight segment between two points.
    pub fn line(from: Vec<f64>, to: Vec<f64>) -> Self {
        assert_eq!(from.len(), to.len(), "endpoint dimensions must agree");
        Self {
            dim: from.len(),
            repr: Repr::Line { from, to },
        }
    }

    /// One-parameter straight segment, the common case.
    pub fn scalar_line(from: f64, to: f64) -> Self {
        Self::line(vec![from], vec![to])
    }

    /// Closed-form curve. `vel` must be the exact u-derivative of `pos`.
    pub fn parametric<P, V>(dim: usize, pos: P, vel: V) -> Self
    where
        P: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
        V: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    {
        Self {
            dim,
            repr: Repr::Parametric {
                pos: Arc::new(pos),
                vel: Arc::new(vel),
            },
        }
    }

    /// Fit a C¹ curve through samples (u strictly increasing, spanning
    /// [0, 1]); used for protocols loaded from files.
    pub fn from_samples(u: &[f64], coords: &[Vec<f64>]) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Domain("path needs at least one coordinate".into()));
        }
        let fits = coords
            .iter()
            .map(|c| MonotoneCubic::fit(u.to_vec(), c.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dim: coords.len(),
            repr: Repr::Sampled(fits),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn position(&self, u: f64) -> DVector<f64> {
        match &self.repr {
            Repr::Line { from, to } => {
                DVector::from_iterator(self.dim, from.iter().zip(to).map(|(a, b)| a + u * (b - a)))
            }
            Repr::Parametric { pos, .. } => DVector::from_vec(pos(u)),
            Repr::Sampled(fits) => DVector::from_iterator(self.dim, fits.iter().map(|f| f.eval(u))),
        }
    }

    pub fn velocity(&self, u: f64) -> DVector<f64> {
        match &self.repr {
            Repr::Line { from, to } => {
                DVector::from_iterator(self.dim, from.iter().zip(to).map(|(a, b)| b - a))
            }
            Repr::Parametric { vel, .. } => DVector::from_vec(vel(u)),
            Repr::Sampled(fits) => {
                DVector::from_iterator(self.dim, fits.iter().map(|f| f.deriv(u)))
            }
        }
    }

    pub fn start(&self) -> DVector<f64> {
        self.position(0.0)
    }

    pub fn end(&self) -> DVector<f64> {
        self.position(1.0)
    }

    /// Euclidean distance between the endpoints; zero means a trivial path.
    pub fn endpoint_separation(&self) -> f64 {
        (self.end() - self.start()).norm()
    }
}
