//! Error types shared across the library.

use thiserror::Error;

/// One recorded refinement step of an adaptive quadrature that failed to
/// converge: the subinterval and its local error estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadPanel {
    pub lo: f64,
    pub hi: f64,
    pub error: f64,
}

#[derive(Debug, Error)]
pub enum Error {
    /// Model parameters outside the model's domain (e.g. a non-positive gap).
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// Adjacent eigenvalues closer than the degeneracy tolerance.
    #[error(
        "degenerate spectrum: levels {lower} and {upper} separated by {gap:.3e} \
         (tolerance {tol:.3e})"
    )]
    DegenerateSpectrum {
        lower: usize,
        upper: usize,
        gap: f64,
        tol: f64,
    },

    /// A degeneracy encountered while evaluating along a path.
    #[error("degeneracy on path at u = {u}: levels {lower} and {upper}, gap {gap:.3e}")]
    PathDegeneracy {
        u: f64,
        lower: usize,
        upper: usize,
        gap: f64,
    },

    /// Adaptive quadrature exhausted its subdivision budget. The worst
    /// remaining panels are attached for diagnosis.
    #[error("quadrature failed to converge over [{lo}, {hi}]: residual error {residual:.3e}, worst panels {worst:?}")]
    QuadratureFailure {
        lo: f64,
        hi: f64,
        residual: f64,
        worst: Vec<QuadPanel>,
    },

    /// A length integral that has no finite value (gap closing on the path).
    #[error("divergent length: {0}")]
    DivergentLength(String),

    /// Argument outside the stated domain of a closed-form expression.
    #[error("domain error: {0}")]
    Domain(String),

    /// The ODE integrator could not proceed (step size underflow).
    #[error("integration failure at t = {t}: {detail}")]
    IntegrationFailure { t: f64, detail: String },

    /// Timing-map refinement did not reach the requested constant-rate
    /// tolerance within the knot budget.
    #[error("reparametrization failed: {0}")]
    Reparametrization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
