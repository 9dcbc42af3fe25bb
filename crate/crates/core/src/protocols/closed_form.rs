//! Closed-form schedules and reference paths.

use super::{Protocol, Timing};
use crate::error::{Error, Result};
use crate::geometry::Path;
use std::f64::consts::{FRAC_PI_4, PI};

/// Straight-line schedule λ⃗(s) = (1−s) λ⃗_start + s λ⃗_end with uniform
/// timing. Coinciding endpoints yield a trivial (but valid) schedule; a
/// warning is logged so parameter sweeps degrade gracefully.
pub fn linear_protocol(start: Vec<f64>, end: Vec<f64>) -> Protocol {
    if start == end {
        log::warn!("linear protocol with identical endpoints {start:?} is trivial");
    }
    Protocol::new(Path::line(start, end), Timing::Identity, "linear")
}

/// Constant-rate schedule of the avoided-crossing model from −λ0 to +λ0:
///
///   λ(s) = −λ0 (1 − 2s) / √(1 + 4λ0² s(1−s)).
pub fn lz_optimal_protocol(lambda0: f64, s: f64) -> f64 {
    let denom = (1.0 + 4.0 * lambda0 * lambda0 * s * (1.0 - s)).sqrt();
    -lambda0 * (1.0 - 2.0 * s) / denom
}

/// The same schedule as a [`Protocol`] with its analytic velocity
/// dλ/ds = 2λ0 (1 + λ0²) / (1 + 4λ0² s(1−s))^{3/2}.
pub fn lz_optimal(lambda0: f64) -> Result<Protocol> {
    if lambda0 <= 0.0 {
        return Err(Error::Domain(format!(
            "endpoint magnitude must be positive, got {lambda0}"
        )));
    }
    let pos = move |s: f64| vec![lz_optimal_protocol(lambda0, s)];
    let vel = move |s: f64| {
        let d = 1.0 + 4.0 * lambda0 * lambda0 * s * (1.0 - s);
        vec![2.0 * lambda0 * (1.0 + lambda0 * lambda0) / (d * d.sqrt())]
    };
    Ok(Protocol::new(
        Path::parametric(1, pos, vel),
        Timing::Identity,
        "lz-optimal",
    ))
}

/// Regions of the thermodynamic-limit Ising schedule, separated by the
/// critical points λ = ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThermoRegion {
    /// λ < −1, rescaled time s ∈ (1, ∞).
    Below,
    /// −1 < λ < 1, rescaled time s ∈ (−∞, ∞).
    Inner,
    /// λ > 1, rescaled time s ∈ (1, ∞).
    Above,
}

/// Thermodynamic-limit constant-rate schedule per region:
///
///   λ(s) = −s/√(s²−1)  (λ < −1),   s/√(1+s²)  (−1 < λ < 1),
///          s/√(s²−1)   (λ > 1).
///
/// The branches asymptote to ±1 without reaching them: in the infinite
/// chain the critical points cannot be crossed in finite time, so these are
/// exposed for inspection and plotting, not for finite-τ propagation across
/// λ = ±1.
pub fn ising_optimal_protocol_thermo(region: ThermoRegion, s: f64) -> Result<f64> {
    match region {
        ThermoRegion::Inner => Ok(s / (1.0 + s * s).sqrt()),
        ThermoRegion::Below => {
            if s <= 1.0 {
                Err(Error::Domain(format!(
                    "rescaled time must exceed 1 in the outer regions, got {s}"
                )))
            } else {
                Ok(-s / (s * s - 1.0).sqrt())
            }
        }
        ThermoRegion::Above => {
            if s <= 1.0 {
                Err(Error::Domain(format!(
                    "rescaled time must exceed 1 in the outer regions, got {s}"
                )))
            } else {
                Ok(s / (s * s - 1.0).sqrt())
            }
        }
    }
}

/// The two unit-sphere comparison paths with shared endpoints
/// (±1/√2, 0, 1/√2):
///
///   small circle: λ⃗₁(s) = (√2/2)(cos πs, sin πs, 1),
///   large circle: λ⃗₂(s) = (sin[π(1−2s)/4], 0, cos[π(1−2s)/4]).
///
/// The large circle is the geodesic of the sphere-constrained metric.
pub fn sphere_circle_paths() -> (Path, Path) {
    let r = 0.5_f64.sqrt();
    let small = Path::parametric(
        3,
        move |s| vec![r * (PI * s).cos(), r * (PI * s).sin(), r],
        move |s| vec![-r * PI * (PI * s).sin(), r * PI * (PI * s).cos(), 0.0],
    );
    let large = Path::parametric(
        3,
        |s| {
            let th = FRAC_PI_4 * (1.0 - 2.0 * s);
            vec![th.sin(), 0.0, th.cos()]
        },
        |s| {
            let th = FRAC_PI_4 * (1.0 - 2.0 * s);
            let dth = -2.0 * FRAC_PI_4;
            vec![th.cos() * dth, 0.0, -th.sin() * dth]
        },
    );
    (small, large)
}
