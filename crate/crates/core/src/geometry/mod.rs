//! The metric on control-parameter space and the lengths it induces.
//!
//! For a nondegenerate level n, the metric weighs transition matrix elements
//! by the fourth power of the level spacing:
//!
//!   g_{n,ij}(λ⃗) = Re Σ_{l≠n} ⟨l|∂H/∂λᵢ|n⟩⟨n|∂H/∂λⱼ|l⟩ / (E_n − E_l)⁴
//!
//! Contracting with a path velocity gives the instantaneous transition rate
//! T̃_n(u) = √(λ′ᵀ g λ′); its integral over the path is the adiabatic length
//! L_n, a parametrization-independent timescale (ħ = 1 throughout, so
//! lengths carry units of time).

mod length;
mod metric;
mod path;

pub use length::{
    adiabatic_length, adiabatic_length_with_opts, ising_adiabatic_length, ising_length_density,
    ising_rate_density, overall_rate,
};
pub use metric::{dqgt, sphere_metric, MetricTensor};
pub use path::Path;
