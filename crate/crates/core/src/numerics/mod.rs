//! Shared numerical kernels: adaptive quadrature, monotone interpolation,
//! and the adaptive Runge-Kutta integrator.

pub mod interp;
pub mod ode;
pub mod quad;
