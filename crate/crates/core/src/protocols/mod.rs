//! Schedules: a path plus a monotone timing map s ↦ u.
//!
//! The composed control λ⃗(s) = path(timing(s)) is what a run hands to the
//! dynamics together with an operation time τ; rescaled time s = t/τ runs
//! over [0, 1].

mod closed_form;
mod constant_rate;

pub use closed_form::{
    ising_optimal_protocol_thermo, linear_protocol, lz_optimal, lz_optimal_protocol,
    sphere_circle_paths, ThermoRegion,
};
pub use constant_rate::{
    constant_rate_from_rate, constant_rate_reparametrize, ising_optimal_protocol_finite,
    DEFAULT_RATE_TOL,
};

use crate::geometry::Path;
use crate::numerics::interp::MonotoneCubic;
use nalgebra::DVector;

/// Monotone map from rescaled time s ∈ [0, 1] to path coordinate u ∈ [0, 1],
/// with exact endpoints.
#[derive(Debug, Clone)]
pub enum Timing {
    Identity,
    /// Stored as the forward cumulative map s = F(u); queries invert it.
    Map(MonotoneCubic),
}

impl Timing {
    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Timing::Identity => s.clamp(0.0, 1.0),
            Timing::Map(f) => f.solve(s.clamp(0.0, 1.0)),
        }
    }

    /// du/ds at s, from the derivative of the forward map.
    pub fn deriv(&self, s: f64) -> f64 {
        match self {
            Timing::Identity => 1.0,
            Timing::Map(f) => {
                let u = f.solve(s.clamp(0.0, 1.0));
                let slope = f.deriv(u);
                if slope > 0.0 {
                    1.0 / slope
                } else {
                    0.0
                }
            }
        }
    }
}

/// An immutable schedule; safe to share across workers.
#[derive(Debug, Clone)]
pub struct Protocol {
    path: Path,
    timing: Timing,
    label: String,
}

impl Protocol {
    pub fn new(path: Path, timing: Timing, label: impl Into<String>) -> Self {
        Self {
            path,
            timing,
            label: label.into(),
        }
    }

    pub fn from_path(path: Path, label: impl Into<String>) -> Self {
        Self::new(path, Timing::Identity, label)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn timing(&self) -> &Timing {
        &self.timing
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.path.dim()
    }

    /// λ⃗(s) = path(timing(s)).
    pub fn position(&self, s: f64) -> DVector<f64> {
        self.path.position(self.timing.eval(s))
    }

    /// dλ⃗/ds by the chain rule.
    pub fn velocity(&self, s: f64) -> DVector<f64> {
        let u = self.timing.eval(s);
        self.path.velocity(u) * self.timing.deriv(s)
    }

    /// A schedule whose endpoints coincide drives nothing.
    pub fn is_trivial(&self) -> bool {
        self.path.endpoint_separation() == 0.0
    }

    /// Uniform tabulation (s, λ⃗(s)), `points ≥ 2` rows.
    pub fn sample(&self, points: usize) -> Vec<(f64, Vec<f64>)> {
        assert!(points >= 2);
        (0..points)
            .map(|i| {
                let s = i as f64 / (points - 1) as f64;
                (s, self.position(s).iter().copied().collect())
            })
            .collect()
    }
}
