//! Experiment harness: lengths, schedules, single runs, τ sweeps, and
//! figure reproduction, driven by a flat config file.

mod config;
mod figures;
mod jobs;
mod output;
mod plot;
mod pool;

use clap::{Parser, Subcommand};
use config::Config;
use jobs::Runtime;
use output::{write_manifest, Csv};
use plot::{line_chart, Series};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or config; exit code 1.
    Usage(String),
    /// Filesystem problems; exit code 2.
    Io(String),
    /// The numerics refused (degeneracy, non-convergence, integration
    /// failure); exit code 3.
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Numerical(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "quenchlab",
    about = "geometric design and verification of adiabatic control schedules",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the adiabatic length of the configured path.
    Length {
        #[arg(long)]
        config: PathBuf,
        /// Override the quadrature relative tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Also write length.csv (+ manifest) here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the configured schedule and write it as a protocol file.
    Protocol {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Rows in the protocol file.
        #[arg(long, default_value_t = 1001)]
        points: usize,
    },
    /// Propagate a single run and export the trajectory.
    Evolve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Drive with a schedule loaded from a protocol file instead of the
        /// configured one.
        #[arg(long)]
        protocol_file: Option<PathBuf>,
    },
    /// Sweep the operation time and tabulate final probabilities.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the worker count.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Reproduce the data behind one of the reference figures.
    Figure {
        /// One of: fig2, fig3, fig4, fig5.
        recipe: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

fn main() {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {}", e.message());
        std::process::exit(e.exit_code());
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Length { config, tol, out } => cmd_length(&config, tol, out),
        Command::Protocol {
            config,
            out,
            points,
        } => cmd_protocol(&config, out, points),
        Command::Evolve {
            config,
            out,
            protocol_file,
        } => cmd_evolve(&config, out, protocol_file),
        Command::Sweep {
            config,
            out,
            workers,
        } => cmd_sweep(&config, out, workers),
        Command::Figure {
            recipe,
            out,
            workers,
        } => figures::run(&recipe, &out, workers),
    }
}

fn load(config_path: &std::path::Path) -> Result<(Config, Runtime), CliError> {
    let config = Config::from_file(config_path)?;
    let runtime = Runtime::from_config(&config)?;
    Ok((config, runtime))
}

fn out_dir(config: &Config, flag: Option<PathBuf>) -> PathBuf {
    flag.unwrap_or_else(|| config.out_dir.clone())
}

fn cmd_length(
    config_path: &std::path::Path,
    tol: Option<f64>,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let start = Instant::now();
    let (mut config, runtime) = load(config_path)?;
    if let Some(t) = tol {
        config.quad_tol = t;
    }
    let (length, summed) = runtime.length(config.quad_tol)?;
    println!("length = {length}");
    if let Some(upper) = summed {
        println!("per_mode_summed_upper_bound = {upper}");
    }
    if let Some(dir) = out {
        let csv = match summed {
            Some(upper) => {
                let mut csv = Csv::new(&["length", "per_mode_summed_upper_bound"]);
                csv.row(&[length, upper]);
                csv
            }
            None => {
                let mut csv = Csv::new(&["length"]);
                csv.row(&[length]);
                csv
            }
        };
        csv.write(&dir.join("length.csv"))?;
        write_manifest(
            &dir.join("length.manifest.txt"),
            &config,
            start.elapsed().as_millis(),
        )?;
    }
    Ok(())
}

fn cmd_protocol(
    config_path: &std::path::Path,
    out: Option<PathBuf>,
    points: usize,
) -> Result<(), CliError> {
    if points < 2 {
        return Err(CliError::Usage("points must be at least 2".into()));
    }
    let start = Instant::now();
    let (config, runtime) = load(config_path)?;
    let protocol = runtime.build_protocol(&config)?;
    if protocol.is_trivial() {
        log::warn!("configured endpoints coincide; the schedule is trivial");
    }
    let dir = out_dir(&config, out);
    jobs::protocol_to_csv(&protocol, points).write(&dir.join("protocol.csv"))?;
    write_manifest(
        &dir.join("protocol.manifest.txt"),
        &config,
        start.elapsed().as_millis(),
    )?;
    println!("wrote {}", dir.join("protocol.csv").display());
    Ok(())
}

fn cmd_evolve(
    config_path: &std::path::Path,
    out: Option<PathBuf>,
    protocol_file: Option<PathBuf>,
) -> Result<(), CliError> {
    let start = Instant::now();
    let (mut config, runtime) = load(config_path)?;
    if config.taus.len() != 1 {
        return Err(CliError::Usage(
            "evolve runs a single operation time; use sweep for several".into(),
        ));
    }
    if let Some(file) = protocol_file {
        config.protocol = config::ProtocolKind::File(file);
    }
    let tau = config.taus[0];
    let protocol = runtime.build_protocol(&config)?;
    if protocol.dim() != runtime.dim() {
        return Err(CliError::Usage(format!(
            "protocol has {} parameter(s) but the model drives {}",
            protocol.dim(),
            runtime.dim()
        )));
    }
    let report = runtime.trajectory(&protocol, tau, &config)?;

    let dim = protocol.dim();
    let lambda_names: Vec<String> = (1..=dim).map(|i| format!("lambda_{i}")).collect();
    let mut header = vec!["t", "s"];
    header.extend(lambda_names.iter().map(|s| s.as_str()));
    header.extend(["p", "p_minus", "p_plus", "first_order"]);
    let mut csv = Csv::new(&header);
    let mut p_rows = Vec::new();
    for i in 0..report.times.len() {
        let mut row = vec![report.times[i], report.times[i] / report.tau];
        row.extend(&report.positions[i]);
        row.extend([
            report.probability[i],
            report.lower[i],
            report.upper[i],
            report.first_order[i],
        ]);
        csv.row(&row);
        p_rows.push((
            report.times[i],
            vec![
                report.probability[i],
                report.lower[i],
                report.upper[i],
                report.first_order[i],
            ],
        ));
    }
    let dir = out_dir(&config, out);
    csv.write(&dir.join("trajectory.csv"))?;
    line_chart(
        &dir.join("trajectory.svg"),
        "transition probability",
        "t",
        "P(t)",
        &[
            Series {
                label: "propagated",
                points: p_rows.iter().map(|(t, v)| (*t, v[0])).collect(),
            },
            Series {
                label: "lower bound",
                points: p_rows.iter().map(|(t, v)| (*t, v[1])).collect(),
            },
            Series {
                label: "upper bound",
                points: p_rows.iter().map(|(t, v)| (*t, v[2])).collect(),
            },
            Series {
                label: "first order",
                points: p_rows.iter().map(|(t, v)| (*t, v[3])).collect(),
            },
        ],
        false,
    )?;
    write_manifest(
        &dir.join("trajectory.manifest.txt"),
        &config,
        start.elapsed().as_millis(),
    )?;
    println!("wrote {}", dir.join("trajectory.csv").display());
    Ok(())
}

fn cmd_sweep(
    config_path: &std::path::Path,
    out: Option<PathBuf>,
    workers: Option<usize>,
) -> Result<(), CliError> {
    let start = Instant::now();
    let (mut config, runtime) = load(config_path)?;
    if let Some(w) = workers {
        config.workers = w.max(1);
    }
    if config.taus.len() < 2 {
        return Err(CliError::Usage(
            "a sweep needs at least two operation times".into(),
        ));
    }
    let protocol = runtime.build_protocol(&config)?;
    let (length, _) = runtime.length(config.quad_tol)?;

    let taus = config.taus.clone();
    let results = pool::run_ordered(taus.len(), config.workers, |i| {
        runtime.final_probability(&protocol, taus[i], config.abs_tol, config.rel_tol)
    });

    let mut csv = Csv::new(&["tau", "p", "estimate", "bound"]);
    let mut rows = Vec::new();
    let mut failures = 0usize;
    for (i, result) in results.into_iter().enumerate() {
        let tau = taus[i];
        let est = 2.0 * length * length / (tau * tau);
        let bound = 4.0 * length * length / (tau * tau);
        match result {
            Ok(p) => {
                csv.row(&[tau, p, est, bound]);
                rows.push((tau, vec![p, est]));
            }
            Err(e) => {
                failures += 1;
                csv.failure(&format!("tau={tau}: {}", e.message()));
            }
        }
    }
    let dir = out_dir(&config, out);
    csv.write(&dir.join("sweep.csv"))?;
    if !rows.is_empty() {
        line_chart(
            &dir.join("sweep.svg"),
            "final transition probability",
            "tau",
            "P(tau)",
            &[
                Series {
                    label: "propagated",
                    points: rows.iter().map(|(t, v)| (*t, v[0])).collect(),
                },
                Series {
                    label: "2L^2/tau^2",
                    points: rows.iter().map(|(t, v)| (*t, v[1])).collect(),
                },
            ],
            true,
        )?;
    }
    write_manifest(
        &dir.join("sweep.manifest.txt"),
        &config,
        start.elapsed().as_millis(),
    )?;
    println!("wrote {}", dir.join("sweep.csv").display());
    if failures > 0 {
        return Err(CliError::Numerical(format!(
            "{failures} of {} sweep rows failed; partial results flushed",
            taus.len()
        )));
    }
    Ok(())
}
