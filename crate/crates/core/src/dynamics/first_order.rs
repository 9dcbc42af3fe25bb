//! First-order (adiabatic perturbation) transition probability and its
//! algebraic bounds.
//!
//! For the system prepared in level n,
//!
//!   P_n(t) = (1/τ²) Σ_{l≠n} | T̃_nl(t/τ) e^{−i[Φ_n(t) − Φ_l(t)]} − T̃_nl(0) |²,
//!
//! which vanishes identically at t = 0 and, expanded, is the
//! rate-squared-plus-oscillation form of the perturbative result. The sign
//! placement in the oscillation term is fixed by the t = 0 condition and
//! validated against direct propagation. Replacing the interference by the
//! triangle inequality gives the pointwise bounds
//!
//!   P_{n,±}(t) = (1/τ²) Σ_{l≠n} [ |T̃_nl(t/τ)| ± |T̃_nl(0)| ]²,
//!
//! with P_{n,−} ≤ P_n ≤ P_{n,+} exactly. Valid for slow driving, P_n ≪ 1.

use super::frame::{PhaseAccumulator, ScheduleFrame};
use crate::error::{Error, Result};
use crate::hamiltonians::ParamHamiltonian;
use crate::protocols::Protocol;
use num_complex::Complex64 as C64;

/// First-order probability, bounds, and phases on a shared time grid.
#[derive(Debug, Clone)]
pub struct FirstOrderSeries {
    pub times: Vec<f64>,
    pub first_order: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

fn check_args(tau: f64, times: &[f64]) -> Result<()> {
    if tau <= 0.0 {
        return Err(Error::Domain(format!(
            "operation time must be positive, got {tau}"
        )));
    }
    if times.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Domain("sample times must be sorted".into()));
    }
    if times.iter().any(|&t| t < 0.0 || t > tau * (1.0 + 1e-12)) {
        return Err(Error::Domain("sample times must lie in [0, τ]".into()));
    }
    Ok(())
}

/// Evaluate the first-order probability and both bounds at the given times.
pub fn first_order_with_bounds<M>(
    model: &M,
    protocol: &Protocol,
    tau: f64,
    level: usize,
    times: &[f64],
) -> Result<FirstOrderSeries>
where
    M: ParamHamiltonian + ?Sized,
{
    check_args(tau, times)?;
    let frame = ScheduleFrame::new(model, protocol)?;
    let phases = PhaseAccumulator::build(&frame, tau, times, 1e-10)?;
    let rates0 = frame.rates_at(0.0, level)?;
    let dim = frame.dimension();
    let inv_tau2 = 1.0 / (tau * tau);

    let mut first_order = Vec::with_capacity(times.len());
    let mut lower = Vec::with_capacity(times.len());
    let mut upper = Vec::with_capacity(times.len());
    for (idx, &t) in times.iter().enumerate() {
        let rates = frame.rates_at(t / tau, level)?;
        let mut p = 0.0;
        let mut p_lo = 0.0;
        let mut p_hi = 0.0;
        for l in 0..dim {
            if l == level {
                continue;
            }
            let dphi = phases.total(level, idx) - phases.total(l, idx);
            let osc = C64::new(0.0, -dphi).exp();
            p += (rates[l] * osc - rates0[l]).norm_sqr();
            let (a, b) = (rates[l].norm(), rates0[l].norm());
            p_lo += (a - b) * (a - b);
            p_hi += (a + b) * (a + b);
        }
        first_order.push(p * inv_tau2);
        lower.push(p_lo * inv_tau2);
        upper.push(p_hi * inv_tau2);
    }
    Ok(FirstOrderSeries {
        times: times.to_vec(),
        first_order,
        lower,
        upper,
    })
}

/// First-order transition probability of `level` at one time.
pub fn first_order_probability<M>(
    model: &M,
    protocol: &Protocol,
    tau: f64,
    level: usize,
    t: f64,
) -> Result<f64>
where
    M: ParamHamiltonian + ?Sized,
{
    Ok(first_order_with_bounds(model, protocol, tau, level, &[t])?.first_order[0])
}

/// The pointwise bounds (P_minus, P_plus) at one time.
pub fn probability_bounds<M>(
    model: &M,
    protocol: &Protocol,
    tau: f64,
    level: usize,
    t: f64,
) -> Result<(f64, f64)>
where
    M: ParamHamiltonian + ?Sized,
{
    let series = first_order_with_bounds(model, protocol, tau, level, &[t])?;
    Ok((series.lower[0], series.upper[0]))
}
