//! Geometric design and verification of finite-time adiabatic control
//! schedules.
//!
//! The library computes a metric on the control-parameter space of a
//! parametrized Hamiltonian from its spectrum and parameter derivatives,
//! integrates that metric into an adiabatic path length, reparametrizes
//! paths so the instantaneous transition rate is constant, and checks the
//! resulting schedules by direct integration of the time-dependent
//! Schrödinger equation.
//!
//! Module map:
//! - [`hamiltonians`]: model Hamiltonians and the gauge-fixed eigensolver;
//! - [`geometry`]: metric tensor, transition rates, and path lengths;
//! - [`protocols`]: schedules (linear, constant-rate, closed forms);
//! - [`dynamics`]: Schrödinger propagation, first-order estimates, bounds;
//! - [`numerics`]: quadrature, monotone interpolation, ODE integration.

pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod hamiltonians;
pub mod numerics;
pub mod protocols;

pub use error::{Error, Result};
pub use num_complex::Complex64;
