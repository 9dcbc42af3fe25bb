//! Shared runtime between subcommands: model construction, protocol
//! construction and file round-trips, and the per-model run primitives.

use crate::config::{Circle, Config, ModelSpec, ProtocolKind};
use crate::CliError;
use quenchlab_core::dynamics::{
    first_order_with_bounds, ising_ground_transition, propagate, PropagateOptions,
};
use quenchlab_core::error::Error as CoreError;
use quenchlab_core::geometry::{adiabatic_length, ising_adiabatic_length, Path as CurvePath};
use quenchlab_core::hamiltonians::{LandauZener, TwoLevel};
use quenchlab_core::numerics::quad::{integrate, QuadOptions};
use quenchlab_core::protocols::{
    constant_rate_reparametrize, ising_optimal_protocol_finite, linear_protocol, Protocol, Timing,
};
use std::path::Path;

pub fn numerical(e: CoreError) -> CliError {
    CliError::Numerical(e.to_string())
}

/// A config's model together with its base path in parameter space.
pub enum Runtime {
    Lz { model: LandauZener, path: CurvePath },
    Ising { j: f64, n: usize, path: CurvePath },
    Sphere { path: CurvePath },
}

impl Runtime {
    pub fn from_config(config: &Config) -> Result<Self, CliError> {
        match &config.model {
            ModelSpec::Lz {
                delta,
                lambda_start,
                lambda_end,
            } => Ok(Runtime::Lz {
                model: LandauZener::new(*delta).map_err(|e| CliError::Usage(e.to_string()))?,
                path: CurvePath::scalar_line(*lambda_start, *lambda_end),
            }),
            ModelSpec::Ising {
                j,
                n,
                lambda_start,
                lambda_end,
            } => {
                if *n < 4 || n % 2 != 0 {
                    return Err(CliError::Usage(format!(
                        "ising site count must be even and at least 4, got {n}"
                    )));
                }
                if *j <= 0.0 {
                    return Err(CliError::Usage("ising coupling must be positive".into()));
                }
                Ok(Runtime::Ising {
                    j: *j,
                    n: *n,
                    path: CurvePath::scalar_line(*lambda_start, *lambda_end),
                })
            }
            ModelSpec::Sphere { circle } => {
                let (small, large) = quenchlab_core::protocols::sphere_circle_paths();
                Ok(Runtime::Sphere {
                    path: match circle {
                        Circle::Small => small,
                        Circle::Large => large,
                    },
                })
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Runtime::Sphere { .. } => 3,
            _ => 1,
        }
    }

    /// Adiabatic length of the configured path. Ising reports both density
    /// conventions: (rate-based length, per-mode-summed upper bound).
    pub fn length(&self, quad_tol: f64) -> Result<(f64, Option<f64>), CliError> {
        match self {
            Runtime::Lz { model, path } => Ok((
                adiabatic_length(model, path, 0, quad_tol).map_err(numerical)?,
                None,
            )),
            Runtime::Sphere { path } => Ok((
                adiabatic_length(&TwoLevel, path, 0, quad_tol).map_err(numerical)?,
                None,
            )),
            Runtime::Ising { j, n, path } => {
                let a = path.position(0.0)[0];
                let b = path.position(1.0)[0];
                let rss = ising_adiabatic_length(*n, *j, a, b, quad_tol).map_err(numerical)?;
                let summed = integrate(
                    |x| quenchlab_core::geometry::ising_length_density(*n, *j, x),
                    a,
                    b,
                    &QuadOptions::with_rel_tol(quad_tol),
                )
                .map_err(numerical)?
                .value
                .abs();
                Ok((rss, Some(summed)))
            }
        }
    }

    pub fn build_protocol(&self, config: &Config) -> Result<Protocol, CliError> {
        match &config.protocol {
            ProtocolKind::Linear => Ok(match self {
                Runtime::Lz { path, .. } | Runtime::Ising { path, .. } => linear_protocol(
                    path.position(0.0).iter().copied().collect(),
                    path.position(1.0).iter().copied().collect(),
                ),
                // A circle swept at uniform speed; the path is fixed, only
                // the timing is "linear".
                Runtime::Sphere { path } => Protocol::new(path.clone(), Timing::Identity, "linear"),
            }),
            ProtocolKind::Optimal => match self {
                Runtime::Lz { model, path } => {
                    constant_rate_reparametrize(model, path, 0, 1e-6).map_err(numerical)
                }
                Runtime::Ising { j, n, path } => {
                    let a = path.position(0.0)[0];
                    let b = path.position(1.0)[0];
                    ising_optimal_protocol_finite(*n, *j, a, b, 257).map_err(numerical)
                }
                Runtime::Sphere { path } => {
                    constant_rate_reparametrize(&TwoLevel, path, 0, 1e-6).map_err(numerical)
                }
            },
            ProtocolKind::File(file) => load_protocol_file(file),
        }
    }

    /// Final ground-state transition probability at operation time `tau`.
    pub fn final_probability(
        &self,
        protocol: &Protocol,
        tau: f64,
        abs_tol: f64,
        rel_tol: f64,
    ) -> Result<f64, CliError> {
        let opts = PropagateOptions {
            abs_tol,
            rel_tol,
            samples: 2,
        };
        let p = match self {
            Runtime::Lz { model, .. } => propagate(model, protocol, tau, 0, &opts)
                .map_err(numerical)?
                .transition_probabilities()[1],
            Runtime::Sphere { .. } => propagate(&TwoLevel, protocol, tau, 0, &opts)
                .map_err(numerical)?
                .transition_probabilities()[1],
            Runtime::Ising { j, n, .. } => *ising_ground_transition(*n, *j, protocol, tau, &opts)
                .map_err(numerical)?
                .total
                .last()
                .unwrap(),
        };
        Ok(p)
    }

    /// Full trajectory report used by `evolve`.
    pub fn trajectory(
        &self,
        protocol: &Protocol,
        tau: f64,
        config: &Config,
    ) -> Result<TrajectoryReport, CliError> {
        let opts = PropagateOptions {
            abs_tol: config.abs_tol,
            rel_tol: config.rel_tol,
            samples: config.samples,
        };
        match self {
            Runtime::Lz { model, .. } => two_level_report(model, protocol, tau, &opts),
            Runtime::Sphere { .. } => two_level_report(&TwoLevel, protocol, tau, &opts),
            Runtime::Ising { j, n, .. } => {
                let run =
                    ising_ground_transition(*n, *j, protocol, tau, &opts).map_err(numerical)?;
                // First-order pieces sum over the independent momentum
                // blocks in the small-probability regime.
                let times = run.times.clone();
                let mut first_order = vec![0.0; times.len()];
                let mut lower = vec![0.0; times.len()];
                let mut upper = vec![0.0; times.len()];
                for (mode, _) in &run.per_mode {
                    let model = quenchlab_core::hamiltonians::IsingModeModel::new(*mode);
                    let series = first_order_with_bounds(&model, protocol, tau, 0, &times)
                        .map_err(numerical)?;
                    for i in 0..times.len() {
                        first_order[i] += series.first_order[i];
                        lower[i] += series.lower[i];
                        upper[i] += series.upper[i];
                    }
                }
                let positions = times
                    .iter()
                    .map(|t| protocol.position(t / tau).iter().copied().collect())
                    .collect();
                Ok(TrajectoryReport {
                    times,
                    tau,
                    positions,
                    probability: run.total,
                    lower,
                    upper,
                    first_order,
                })
            }
        }
    }
}

pub struct TrajectoryReport {
    pub times: Vec<f64>,
    pub tau: f64,
    pub positions: Vec<Vec<f64>>,
    pub probability: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub first_order: Vec<f64>,
}

fn two_level_report<M>(
    model: &M,
    protocol: &Protocol,
    tau: f64,
    opts: &PropagateOptions,
) -> Result<TrajectoryReport, CliError>
where
    M: quenchlab_core::hamiltonians::ParamHamiltonian + ?Sized,
{
    let traj = propagate(model, protocol, tau, 0, opts).map_err(numerical)?;
    let series =
        first_order_with_bounds(model, protocol, tau, 0, &traj.times).map_err(numerical)?;
    Ok(TrajectoryReport {
        times: traj.times.clone(),
        tau,
        positions: traj.positions.clone(),
        probability: traj.transition_probabilities(),
        lower: series.lower,
        upper: series.upper,
        first_order: series.first_order,
    })
}

/// Tabulate a protocol: `s,lambda_1[,lambda_2,lambda_3]`, monotone s.
pub fn protocol_to_csv(protocol: &Protocol, points: usize) -> crate::output::Csv {
    let dim = protocol.dim();
    let names: Vec<String> = (1..=dim).map(|i| format!("lambda_{i}")).collect();
    let mut header = vec!["s"];
    header.extend(names.iter().map(|s| s.as_str()));
    let mut csv = crate::output::Csv::new(&header);
    for (s, lambda) in protocol.sample(points) {
        let mut row = vec![s];
        row.extend(lambda);
        csv.row(&row);
    }
    csv
}

/// Load a schedule written by `protocol_to_csv` (or by hand): the sampled
/// curve becomes the path and the timing is identity, since the file's s
/// column is already rescaled time.
pub fn load_protocol_file(path: &Path) -> Result<Protocol, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    let mut lines = text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| CliError::Usage("protocol file is empty".into()))?;
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    if columns.first() != Some(&"s") || columns.len() < 2 {
        return Err(CliError::Usage(
            "protocol file header must be s,lambda_1[,lambda_2,lambda_3]".into(),
        ));
    }
    let dim = columns.len() - 1;
    for (i, c) in columns.iter().skip(1).enumerate() {
        if *c != format!("lambda_{}", i + 1) {
            return Err(CliError::Usage(format!(
                "protocol file column {} must be lambda_{}, got `{c}`",
                i + 2,
                i + 1
            )));
        }
    }
    let mut s = Vec::new();
    let mut coords = vec![Vec::new(); dim];
    for (row_no, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != dim + 1 {
            return Err(CliError::Usage(format!(
                "protocol file row {}: expected {} cells",
                row_no + 2,
                dim + 1
            )));
        }
        let parse = |v: &str| -> Result<f64, CliError> {
            v.parse().map_err(|_| {
                CliError::Usage(format!(
                    "protocol file row {}: bad number `{v}`",
                    row_no + 2
                ))
            })
        };
        s.push(parse(cells[0])?);
        for (d, cell) in cells[1..].iter().enumerate() {
            coords[d].push(parse(cell)?);
        }
    }
    if s.len() < 2 {
        return Err(CliError::Usage(
            "protocol file needs at least two rows".into(),
        ));
    }
    if s.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Usage(
            "protocol file s column must be strictly increasing".into(),
        ));
    }
    // Affinely rescale s onto [0, 1] in case the file covers a sub-range.
    let (s0, s1) = (s[0], *s.last().unwrap());
    let s: Vec<f64> = s.iter().map(|v| (v - s0) / (s1 - s0)).collect();
    let curve = CurvePath::from_samples(&s, &coords).map_err(numerical)?;
    Ok(Protocol::new(curve, Timing::Identity, "file"))
}
