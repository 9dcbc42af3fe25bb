//! Reproduction recipes: each emits the data behind one figure of the-
//! reference results with the parameters baked in, plus a quick-look SVG.
//! The CSV files are the deliverable; the plots make no styling promises.

use crate::jobs::numerical;
use crate::output::{write_file, Csv};
use crate::plot::{line_chart, Series};
use crate::pool::run_ordered;
use crate::CliError;
use quenchlab_core::dynamics::{ising_ground_transition, propagate, PropagateOptions};
use quenchlab_core::geometry::{adiabatic_length, ising_adiabatic_length};
use quenchlab_core::hamiltonians::{LandauZener, TwoLevel};
use quenchlab_core::protocols::{
    ising_optimal_protocol_finite, ising_optimal_protocol_thermo, linear_protocol, lz_optimal,
    lz_optimal_protocol, sphere_circle_paths, Protocol, ThermoRegion,
};
use std::path::Path;

pub const RECIPES: [&str; 4] = ["fig2", "fig3", "fig4", "fig5"];

pub fn run(recipe: &str, out: &Path, workers: usize) -> Result<(), CliError> {
    match recipe {
        "fig2" => fig2(out, workers),
        "fig3" => fig3(out),
        "fig4" => fig4(out, workers),
        "fig5" => fig5(out, workers),
        other => Err(CliError::Usage(format!(
            "unknown recipe `{other}`; available: {}",
            RECIPES.join(", ")
        ))),
    }
}

fn manifest(out: &Path, name: &str, lines: &[String]) -> Result<(), CliError> {
    let mut text = format!(
        "# manifest written by quenchlab {}\n# recipe = {name}\n",
        env!("CARGO_PKG_VERSION")
    );
    for l in lines {
        text.push_str(l);
        text.push('\n');
    }
    write_file(&out.join(format!("{name}.manifest.txt")), &text)
}

fn csv_series(csv_rows: &[(f64, Vec<f64>)], col: usize) -> Vec<(f64, f64)> {
    csv_rows.iter().map(|(x, ys)| (*x, ys[col])).collect()
}

/// Avoided-crossing comparison: schedules, the bounded evolution at τ = 10,
/// and final-probability sweeps, all at λ0 = 10, Δ = 2.
fn fig2(out: &Path, workers: usize) -> Result<(), CliError> {
    let (delta, lambda0, tau_b) = (2.0, 10.0, 10.0);
    let model = LandauZener::new(delta).map_err(numerical)?;
    let optimal = lz_optimal(lambda0).map_err(numerical)?;
    let linear = linear_protocol(vec![-lambda0], vec![lambda0]);
    let length = model.length(-lambda0, lambda0);

    // (a) the two schedules.
    let mut csv = Csv::new(&["s", "lambda_linear", "lambda_optimal"]);
    let mut rows = Vec::new();
    for i in 0..=1000 {
        let s = i as f64 / 1000.0;
        let lin = -lambda0 * (1.0 - 2.0 * s);
        let opt = lz_optimal_protocol(lambda0, s);
        csv.row(&[s, lin, opt]);
        rows.push((s, vec![lin, opt]));
    }
    csv.write(&out.join("fig2a.csv"))?;
    line_chart(
        &out.join("fig2a.svg"),
        "control schedules",
        "s",
        "lambda",
        &[
            Series {
                label: "linear",
                points: csv_series(&rows, 0),
            },
            Series {
                label: "optimal",
                points: csv_series(&rows, 1),
            },
        ],
        false,
    )?;

    // (b) evolution at τ = 10 with the 4L²/τ² bound.
    let opts = PropagateOptions {
        samples: 1001,
        ..PropagateOptions::default()
    };
    let p_lin = propagate(&model, &linear, tau_b, 0, &opts)
        .map_err(numerical)?
        .transition_probabilities();
    let p_opt = propagate(&model, &optimal, tau_b, 0, &opts)
        .map_err(numerical)?
        .transition_probabilities();
    let bound = 4.0 * length * length / (tau_b * tau_b);
    let mut csv = Csv::new(&["t", "p_linear", "p_optimal", "bound"]);
    let mut rows = Vec::new();
    for i in 0..p_lin.len() {
        let t = tau_b * i as f64 / (p_lin.len() - 1) as f64;
        csv.row(&[t, p_lin[i], p_opt[i], bound]);
        rows.push((t, vec![p_lin[i], p_opt[i], bound]));
    }
    csv.write(&out.join("fig2b.csv"))?;
    line_chart(
        &out.join("fig2b.svg"),
        "transition probability, tau = 10",
        "t",
        "P(t)",
        &[
            Series {
                label: "linear",
                points: csv_series(&rows, 0),
            },
            Series {
                label: "optimal",
                points: csv_series(&rows, 1),
            },
            Series {
                label: "bound",
                points: csv_series(&rows, 2),
            },
        ],
        false,
    )?;

    // (c) and (d): final probability sweeps.
    for (name, taus) in [
        ("fig2c", grid(0.5, 20.0, 40)),
        ("fig2d", grid(20.0, 100.0, 41)),
    ] {
        let finals = run_ordered(taus.len(), workers, |i| {
            let tau = taus[i];
            let small = PropagateOptions {
                samples: 2,
                ..PropagateOptions::default()
            };
            let a =
                propagate(&model, &linear, tau, 0, &small).map(|t| t.transition_probabilities()[1]);
            let b = propagate(&model, &optimal, tau, 0, &small)
                .map(|t| t.transition_probabilities()[1]);
            (a, b)
        });
        let mut csv = Csv::new(&["tau", "p_linear", "p_optimal", "estimate"]);
        let mut rows = Vec::new();
        for (i, (a, b)) in finals.into_iter().enumerate() {
            let tau = taus[i];
            let est = 2.0 * length * length / (tau * tau);
            let (pa, pb) = (a.map_err(numerical)?, b.map_err(numerical)?);
            csv.row(&[tau, pa, pb, est]);
            rows.push((tau, vec![pa, pb, est]));
        }
        csv.write(&out.join(format!("{name}.csv")))?;
        line_chart(
            &out.join(format!("{name}.svg")),
            "final transition probability",
            "tau",
            "P(tau)",
            &[
                Series {
                    label: "linear",
                    points: csv_series(&rows, 0),
                },
                Series {
                    label: "optimal",
                    points: csv_series(&rows, 1),
                },
                Series {
                    label: "2L^2/tau^2",
                    points: csv_series(&rows, 2),
                },
            ],
            true,
        )?;
    }

    manifest(
        out,
        "fig2",
        &[
            format!("# delta = {delta}, lambda0 = {lambda0}, L = {length}"),
            format!("# panel b at tau = {tau_b}"),
        ],
    )
}

/// Finite-size optimal quenches and the thermodynamic-limit branches.
fn fig3(out: &Path) -> Result<(), CliError> {
    let sizes = [4usize, 50, 100];
    let mut protocols = Vec::new();
    for &n in &sizes {
        protocols.push(ising_optimal_protocol_finite(n, 1.0, -3.0, 3.0, 257).map_err(numerical)?);
    }
    let mut csv = Csv::new(&["s_prime", "lambda_n4", "lambda_n50", "lambda_n100"]);
    let mut rows = Vec::new();
    for i in 0..=1000 {
        let s = i as f64 / 1000.0;
        let values: Vec<f64> = protocols.iter().map(|p| p.position(s)[0]).collect();
        csv.row(&[&[2.0 * s - 1.0], values.as_slice()].concat());
        rows.push((2.0 * s - 1.0, values));
    }
    csv.write(&out.join("fig3a.csv"))?;
    line_chart(
        &out.join("fig3a.svg"),
        "finite-size optimal quenches",
        "s'",
        "lambda",
        &[
            Series {
                label: "n = 4",
                points: csv_series(&rows, 0),
            },
            Series {
                label: "n = 50",
                points: csv_series(&rows, 1),
            },
            Series {
                label: "n = 100",
                points: csv_series(&rows, 2),
            },
        ],
        false,
    )?;

    // Thermodynamic limit: inner branch on its own axis, outer branches on
    // theirs (disjoint rescaled-time domains).
    let mut csv = Csv::new(&["s", "lambda"]);
    let mut rows = Vec::new();
    for i in 0..=1200 {
        let s = -6.0 + 12.0 * i as f64 / 1200.0;
        let v = ising_optimal_protocol_thermo(ThermoRegion::Inner, s).map_err(numerical)?;
        csv.row(&[s, v]);
        rows.push((s, vec![v]));
    }
    csv.write(&out.join("fig3b_inner.csv"))?;
    line_chart(
        &out.join("fig3b_inner.svg"),
        "thermodynamic limit, |lambda| < 1",
        "s",
        "lambda",
        &[Series {
            label: "inner",
            points: csv_series(&rows, 0),
        }],
        false,
    )?;

    let mut csv = Csv::new(&["s", "lambda_below", "lambda_above"]);
    let mut rows = Vec::new();
    for i in 0..=1000 {
        let s = 1.01 + (6.0 - 1.01) * i as f64 / 1000.0;
        let lo = ising_optimal_protocol_thermo(ThermoRegion::Below, s).map_err(numerical)?;
        let hi = ising_optimal_protocol_thermo(ThermoRegion::Above, s).map_err(numerical)?;
        csv.row(&[s, lo, hi]);
        rows.push((s, vec![lo, hi]));
    }
    csv.write(&out.join("fig3b_outer.csv"))?;
    line_chart(
        &out.join("fig3b_outer.svg"),
        "thermodynamic limit, |lambda| > 1",
        "s",
        "lambda",
        &[
            Series {
                label: "lambda < -1",
                points: csv_series(&rows, 0),
            },
            Series {
                label: "lambda > 1",
                points: csv_series(&rows, 1),
            },
        ],
        false,
    )?;

    manifest(
        out,
        "fig3",
        &[
            format!("# finite sizes = {sizes:?}, interval -3..3, j = 1"),
            "# thermo branches sampled on s in [-6, 6] and (1, 6]".into(),
        ],
    )
}

/// Ising quench from λ = 2 to 0: sweeps and evolutions for n = 50 and 100.
fn fig4(out: &Path, workers: usize) -> Result<(), CliError> {
    for (n, tau_evolution, sweep_name, evo_name) in [
        (50usize, 30.0, "fig4a", "fig4b"),
        (100, 80.0, "fig4c", "fig4d"),
    ] {
        let length = ising_adiabatic_length(n, 1.0, 2.0, 0.0, 1e-10).map_err(numerical)?;
        let optimal = ising_optimal_protocol_finite(n, 1.0, 2.0, 0.0, 257).map_err(numerical)?;
        let linear = linear_protocol(vec![2.0], vec![0.0]);

        let taus = grid(4.0, 100.0, 25);
        let finals = run_ordered(taus.len(), workers, |i| {
            let small = PropagateOptions {
                samples: 2,
                ..PropagateOptions::default()
            };
            let a = ising_ground_transition(n, 1.0, &linear, taus[i], &small)
                .map(|r| *r.total.last().unwrap());
            let b = ising_ground_transition(n, 1.0, &optimal, taus[i], &small)
                .map(|r| *r.total.last().unwrap());
            (a, b)
        });
        let mut csv = Csv::new(&["tau", "p_linear", "p_optimal", "estimate"]);
        let mut rows = Vec::new();
        for (i, (a, b)) in finals.into_iter().enumerate() {
            let tau = taus[i];
            let est = 2.0 * length * length / (tau * tau);
            let (pa, pb) = (a.map_err(numerical)?, b.map_err(numerical)?);
            csv.row(&[tau, pa, pb, est]);
            rows.push((tau, vec![pa, pb, est]));
        }
        csv.write(&out.join(format!("{sweep_name}.csv")))?;
        line_chart(
            &out.join(format!("{sweep_name}.svg")),
            &format!("final transition probability, n = {n}"),
            "tau",
            "P(tau)",
            &[
                Series {
                    label: "linear",
                    points: csv_series(&rows, 0),
                },
                Series {
                    label: "optimal",
                    points: csv_series(&rows, 1),
                },
                Series {
                    label: "2L^2/tau^2",
                    points: csv_series(&rows, 2),
                },
            ],
            true,
        )?;

        let opts = PropagateOptions {
            samples: 501,
            ..PropagateOptions::default()
        };
        let lin =
            ising_ground_transition(n, 1.0, &linear, tau_evolution, &opts).map_err(numerical)?;
        let opt =
            ising_ground_transition(n, 1.0, &optimal, tau_evolution, &opts).map_err(numerical)?;
        let est = 2.0 * length * length / (tau_evolution * tau_evolution);
        let mut csv = Csv::new(&["t", "p_linear", "p_optimal", "estimate"]);
        let mut rows = Vec::new();
        for (i, &t) in lin.times.iter().enumerate() {
            csv.row(&[t, lin.total[i], opt.total[i], est]);
            rows.push((t, vec![lin.total[i], opt.total[i], est]));
        }
        csv.write(&out.join(format!("{evo_name}.csv")))?;
        line_chart(
            &out.join(format!("{evo_name}.svg")),
            &format!("evolution, n = {n}, tau = {tau_evolution}"),
            "t",
            "P(t)",
            &[
                Series {
                    label: "linear",
                    points: csv_series(&rows, 0),
                },
                Series {
                    label: "optimal",
                    points: csv_series(&rows, 1),
                },
                Series {
                    label: "2L^2/tau^2",
                    points: csv_series(&rows, 2),
                },
            ],
            false,
        )?;
    }

    manifest(
        out,
        "fig4",
        &[
            "# j = 1, quench 2 -> 0; n = 50 (a, b at tau = 30), n = 100 (c, d at tau = 80)".into(),
            "# estimate uses the rate-density length".into(),
        ],
    )
}

/// Sphere-constrained control: small versus large (geodesic) circle.
fn fig5(out: &Path, workers: usize) -> Result<(), CliError> {
    let (small, large) = sphere_circle_paths();
    let p_small = Protocol::from_path(small.clone(), "small-circle");
    let p_large = Protocol::from_path(large.clone(), "large-circle");
    let l_large = adiabatic_length(&TwoLevel, &large, 0, 1e-10).map_err(numerical)?;

    let taus = grid(0.5, 50.0, 100);
    let finals = run_ordered(taus.len(), workers, |i| {
        let small_opts = PropagateOptions {
            samples: 2,
            ..PropagateOptions::default()
        };
        let a = propagate(&TwoLevel, &p_small, taus[i], 0, &small_opts)
            .map(|t| t.transition_probabilities()[1]);
        let b = propagate(&TwoLevel, &p_large, taus[i], 0, &small_opts)
            .map(|t| t.transition_probabilities()[1]);
        (a, b)
    });
    let mut csv = Csv::new(&["tau", "p_small_circle", "p_large_circle", "estimate_large"]);
    let mut rows = Vec::new();
    for (i, (a, b)) in finals.into_iter().enumerate() {
        let tau = taus[i];
        let est = 2.0 * l_large * l_large / (tau * tau);
        let (pa, pb) = (a.map_err(numerical)?, b.map_err(numerical)?);
        csv.row(&[tau, pa, pb, est]);
        rows.push((tau, vec![pa, pb, est]));
    }
    csv.write(&out.join("fig5.csv"))?;
    line_chart(
        &out.join("fig5.svg"),
        "sphere-constrained control",
        "tau",
        "P(tau)",
        &[
            Series {
                label: "small circle",
                points: csv_series(&rows, 0),
            },
            Series {
                label: "large circle",
                points: csv_series(&rows, 1),
            },
            Series {
                label: "2L^2/tau^2",
                points: csv_series(&rows, 2),
            },
        ],
        true,
    )?;

    manifest(
        out,
        "fig5",
        &[
            format!("# unit sphere, endpoints (±1/√2, 0, 1/√2), L_large = {l_large}"),
            format!("# tau grid 0.5..50, {} points", taus.len()),
        ],
    )
}

fn grid(min: f64, max: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| min + (max - min) * i as f64 / (count - 1) as f64)
        .collect()
}
