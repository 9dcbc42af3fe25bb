//! Parametrized model Hamiltonians and a gauge-consistent eigensolver.
//!
//! A model exposes the Hermitian matrix H(λ⃗) and its analytic parameter
//! derivatives ∂H/∂λᵢ. Everything downstream (metric, rates, propagation)
//! works through this interface, so models stay interchangeable.
//!
//! Built-in models:
//! - [`LandauZener`]: H = (Δ/2)(σx + λ σz), one control parameter;
//! - [`TwoLevel`]: H = (1/2) λ⃗·σ⃗, three control parameters;
//! - [`IsingModeModel`]: one momentum block of the transverse-field Ising
//!   chain in its even (pair-occupation) sector;
//! - [`IsingPairSector`]: the tensor product of all retained momentum
//!   blocks, for cross-checking many-body reductions at small site counts.

mod eigen;
mod models;

pub use eigen::{eigensystem, eigensystem_with_tol, EigenSystem, DEGENERACY_TOL};
pub use models::{
    ising_ground_coefficients, ising_mode_hamiltonian, ising_modes, lz_hamiltonian,
    two_level_hamiltonian, IsingMode, IsingModeModel, IsingPairSector, LandauZener, TwoLevel,
};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

/// A Hermitian matrix family H(λ⃗) with analytic parameter derivatives.
///
/// Implementations must be pure: repeated calls with the same arguments
/// return identical matrices, and no shared state is mutated, so models can
/// be evaluated concurrently from any number of workers.
pub trait ParamHamiltonian: Send + Sync {
    /// Hilbert-space dimension.
    fn dimension(&self) -> usize;

    /// Number of control parameters.
    fn param_count(&self) -> usize;

    /// H(λ⃗). Must be Hermitian for every admissible λ⃗.
    fn evaluate(&self, params: &[f64]) -> DMatrix<C64>;

    /// ∂H/∂λᵢ at λ⃗.
    fn derivative(&self, params: &[f64], index: usize) -> DMatrix<C64>;
}

impl<T: ParamHamiltonian + ?Sized> ParamHamiltonian for &T {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn param_count(&self) -> usize {
        (**self).param_count()
    }
    fn evaluate(&self, params: &[f64]) -> DMatrix<C64> {
        (**self).evaluate(params)
    }
    fn derivative(&self, params: &[f64], index: usize) -> DMatrix<C64> {
        (**self).derivative(params, index)
    }
}

/// Largest deviation of `m` from its own conjugate transpose.
pub fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    let adj = m.adjoint();
    (m - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
