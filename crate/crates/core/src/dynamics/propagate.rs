//! Direct integration of the time-dependent Schrödinger equation.
//!
//! The state is integrated in the fixed computational basis, i dψ/dt =
//! H(λ⃗(t/τ)) ψ, then projected onto the gauge-fixed instantaneous
//! eigenbasis at the requested sample times. No eigenvector derivatives
//! enter the integration.

use crate::error::{Error, Result};
use crate::hamiltonians::{eigensystem, ParamHamiltonian};
use crate::numerics::ode::{self, OdeOptions};
use crate::protocols::Protocol;
use nalgebra::DVector;
use num_complex::Complex64 as C64;

#[derive(Debug, Clone, Copy)]
pub struct PropagateOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Number of report times, uniformly spaced over [0, τ].
    pub samples: usize,
}

impl Default for PropagateOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            samples: 501,
        }
    }
}

/// Time series of instantaneous-basis amplitudes for one initial level.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Initial (tracked) level.
    pub level: usize,
    /// Report times in [0, τ].
    pub times: Vec<f64>,
    /// Rescaled times s = t/τ.
    pub rescaled: Vec<f64>,
    /// Control-parameter values λ⃗(s) at the report times.
    pub positions: Vec<Vec<f64>>,
    /// Amplitudes c_{nl}(t) in the instantaneous eigenbasis.
    pub amplitudes: Vec<DVector<C64>>,
    /// max_t |1 − Σ_l |c_l|²|, a unitarity check.
    pub norm_drift: f64,
}

impl Trajectory {
    /// P_n(t) = Σ_{l≠n} |c_l(t)|² for the tracked level.
    pub fn transition_probabilities(&self) -> Vec<f64> {
        transition_probability(self, self.level)
    }
}

/// P_n(t) = Σ_{l≠n} |c_l(t)|², clamped into [0, 1].
pub fn transition_probability(trajectory: &Trajectory, level: usize) -> Vec<f64> {
    trajectory
        .amplitudes
        .iter()
        .map(|c| {
            let p: f64 = c
                .iter()
                .enumerate()
                .filter(|(l, _)| *l != level)
                .map(|(_, z)| z.norm_sqr())
                .sum();
            p.clamp(0.0, 1.0)
        })
        .collect()
}

/// Propagate the initial eigenstate `level` under `protocol` with operation
/// time `tau`.
pub fn propagate<M>(
    model: &M,
    protocol: &Protocol,
    tau: f64,
    level: usize,
    opts: &PropagateOptions,
) -> Result<Trajectory>
where
    M: ParamHamiltonian + ?Sized,
{
    if tau <= 0.0 {
        return Err(Error::Domain(format!(
            "operation time must be positive, got {tau}"
        )));
    }
    if opts.samples < 2 {
        return Err(Error::Domain("need at least two sample times".into()));
    }
    if level >= model.dimension() {
        return Err(Error::Domain(format!(
            "level {level} out of range for dimension {}",
            model.dimension()
        )));
    }

    let start = eigensystem(model, protocol.position(0.0).as_slice())?;
    let psi0 = start.state(level);

    let times: Vec<f64> = (0..opts.samples)
        .map(|i| tau * i as f64 / (opts.samples - 1) as f64)
        .collect();
    let ode_opts = OdeOptions {
        abs_tol: opts.abs_tol,
        rel_tol: opts.rel_tol,
        ..OdeOptions::default()
    };
    let minus_i = C64::new(0.0, -1.0);
    let states = ode::integrate(
        |t, psi| {
            let h = model.evaluate(protocol.position(t / tau).as_slice());
            (h * psi) * minus_i
        },
        0.0,
        tau,
        psi0,
        &times,
        &ode_opts,
    )?;

    let mut rescaled = Vec::with_capacity(times.len());
    let mut positions = Vec::with_capacity(times.len());
    let mut amplitudes = Vec::with_capacity(times.len());
    let mut norm_drift = 0.0_f64;
    for (idx, t) in times.iter().enumerate() {
        let s = t / tau;
        let point = protocol.position(s);
        let sys = eigensystem(model, point.as_slice()).map_err(|e| match e {
            Error::DegenerateSpectrum {
                lower, upper, gap, ..
            } => Error::PathDegeneracy {
                u: s,
                lower,
                upper,
                gap,
            },
            other => other,
        })?;
        let c = if idx == 0 {
            // ψ(0) is the eigenstate itself; pin the projection exactly.
            let mut c0 = DVector::zeros(model.dimension());
            c0[level] = C64::new(1.0, 0.0);
            c0
        } else {
            DVector::from_iterator(
                model.dimension(),
                (0..model.dimension()).map(|l| sys.states.column(l).dotc(&states[idx])),
            )
        };
        let norm: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        norm_drift = norm_drift.max((1.0 - norm).abs());
        rescaled.push(s);
        positions.push(point.iter().copied().collect());
        amplitudes.push(c);
    }

    Ok(Trajectory {
        level,
        times,
        rescaled,
        positions,
        amplitudes,
        norm_drift,
    })
}
