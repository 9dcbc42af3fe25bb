//! Transition rates along paths and the adiabatic length.

use super::metric::dqgt;
use super::path::Path;
use crate::error::{Error, Result};
use crate::hamiltonians::{ising_modes, ParamHamiltonian};
use crate::numerics::quad::{self, QuadOptions};

/// Overall transition rate T̃_n(u) = √(λ′(u)ᵀ g_n(λ⃗(u)) λ′(u)) of `level`
/// at path coordinate `u`. A degeneracy is reported with the offending `u`.
pub fn overall_rate<M>(model: &M, path: &Path, u: f64, level: usize) -> Result<f64>
where
    M: ParamHamiltonian + ?Sized,
{
    let point = path.position(u);
    let g = dqgt(model, point.as_slice(), level).map_err(|e| match e {
        Error::DegenerateSpectrum {
            lower, upper, gap, ..
        } => Error::PathDegeneracy {
            u,
            lower,
            upper,
            gap,
        },
        other => other,
    })?;
    Ok(g.quadratic_form(&path.velocity(u)).sqrt())
}

/// Adiabatic length L_n = ∫₀¹ T̃_n(u) du by adaptive quadrature to the given
/// relative tolerance. Independent of how the path is parametrized.
pub fn adiabatic_length<M>(model: &M, path: &Path, level: usize, rel_tol: f64) -> Result<f64>
where
    M: ParamHamiltonian + ?Sized,
{
    adiabatic_length_with_opts(model, path, level, &QuadOptions::with_rel_tol(rel_tol))
}

pub fn adiabatic_length_with_opts<M>(
    model: &M,
    path: &Path,
    level: usize,
    opts: &QuadOptions,
) -> Result<f64>
where
    M: ParamHamiltonian + ?Sized,
{
    let q = quad::integrate(|u| overall_rate(model, path, u, level), 0.0, 1.0, opts)?;
    Ok(q.value)
}

fn check_chain(n: usize) -> Result<()> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::InvalidModel(format!(
            "site count must be even and at least 4, got {n}"
        )));
    }
    Ok(())
}

/// Per-mode-summed length density of the Ising chain ground state,
///
///   dL/dλ = Σ_{k>0} sin k / (8J (λ² − 2λ cos k + 1)^{3/2}),
///
/// over the retained momentum grid. Summing the per-mode rates before
/// squaring upper-bounds [`ising_rate_density`] (triangle inequality); the
/// two agree for a single retained mode (n = 4).
pub fn ising_length_density(n: usize, j: f64, lambda: f64) -> Result<f64> {
    check_chain(n)?;
    let mut acc = 0.0;
    for mode in ising_modes(n, j)? {
        let k = mode.wavenumber();
        let w = lambda * lambda - 2.0 * lambda * k.cos() + 1.0;
        acc += k.sin() / (8.0 * j * w.powf(1.5));
    }
    Ok(acc)
}

/// Overall transition-rate density of the Ising chain ground state per unit
/// λ: the root-sum-of-squares of the per-mode rates,
///
///   dT/dλ = [ Σ_{k>0} sin²k / (64 J² (λ² − 2λ cos k + 1)³) ]^{1/2}.
///
/// This is the density whose path integral sets the 2L²/τ² scale of the
/// ground-state transition probability.
pub fn ising_rate_density(n: usize, j: f64, lambda: f64) -> Result<f64> {
    check_chain(n)?;
    let mut acc = 0.0;
    for mode in ising_modes(n, j)? {
        let k = mode.wavenumber();
        let w = lambda * lambda - 2.0 * lambda * k.cos() + 1.0;
        let s = k.sin();
        acc += s * s / (64.0 * j * j * w * w * w);
    }
    Ok(acc.sqrt())
}

/// Ground-state adiabatic length of the Ising chain from `lambda_start` to
/// `lambda_end`, integrating [`ising_rate_density`]. Finite for every even
/// `n`: the per-mode gaps never close at finite size.
pub fn ising_adiabatic_length(
    n: usize,
    j: f64,
    lambda_start: f64,
    lambda_end: f64,
    rel_tol: f64,
) -> Result<f64> {
    check_chain(n)?;
    let q = quad::integrate(
        |x| ising_rate_density(n, j, x),
        lambda_start,
        lambda_end,
        &QuadOptions::with_rel_tol(rel_tol),
    )?;
    Ok(q.value.abs())
}
