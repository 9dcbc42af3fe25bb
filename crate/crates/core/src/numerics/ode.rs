//! Dormand-Prince 5(4) integrator with dense output, for complex state
//! vectors.
//!
//! The embedded fourth-order solution drives the step-size controller; the
//! fourth-order continuous extension evaluates the solution at requested
//! sample times inside accepted steps, so output times never constrain the
//! step sequence.

use crate::error::{Error, Result};
use nalgebra::DVector;
use num_complex::Complex64 as C64;

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 6] = [
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Difference between the fifth- and fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// Dense-output coefficients for the quartic interpolant.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_steps: 50_000_000,
        }
    }
}

type State = DVector<C64>;

fn lin_comb(y: &State, h: f64, coeffs: &[f64], stages: &[State]) -> State {
    let mut out = y.clone();
    for (c, k) in coeffs.iter().zip(stages) {
        if *c != 0.0 {
            out.axpy(C64::new(h * c, 0.0), k, C64::new(1.0, 0.0));
        }
    }
    out
}

fn wrms(err: &State, y0: &State, y1: &State, opts: &OdeOptions) -> f64 {
    let n = err.len();
    let mut acc = 0.0;
    for i in 0..n {
        let sc = opts.abs_tol + opts.rel_tol * y0[i].norm().max(y1[i].norm());
        let r = err[i].norm() / sc;
        acc += r * r;
    }
    (acc / n as f64).sqrt()
}

fn initial_step<F>(rhs: &mut F, t0: f64, t1: f64, y0: &State, f0: &State, opts: &OdeOptions) -> f64
where
    F: FnMut(f64, &State) -> State,
{
    let span = t1 - t0;
    let sc = |y: &State, i: usize| opts.abs_tol + opts.rel_tol * y[i].norm();
    let norm = |v: &State, base: &State| -> f64 {
        let mut acc = 0.0;
        for i in 0..v.len() {
            let r = v[i].norm() / sc(base, i);
            acc += r * r;
        }
        (acc / v.len() as f64).sqrt()
    };
    let d0 = norm(y0, y0);
    let d1 = norm(f0, y0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(span);
    let y1 = lin_comb(y0, h0, &[1.0], std::slice::from_ref(f0));
    let f1 = rhs(t0 + h0, &y1);
    let d2 = norm(&(&f1 - f0), y0) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span)
}

/// Integrate `i dψ/dt = -i f` style systems: `rhs` returns dψ/dt directly.
/// States are reported at `sample_times`, which must be sorted inside
/// `[t0, t1]`.
pub fn integrate<F>(
    mut rhs: F,
    t0: f64,
    t1: f64,
    y0: State,
    sample_times: &[f64],
    opts: &OdeOptions,
) -> Result<Vec<State>>
where
    F: FnMut(f64, &State) -> State,
{
    debug_assert!(sample_times.windows(2).all(|w| w[0] <= w[1]));
    debug_assert!(sample_times
        .iter()
        .all(|&t| t >= t0 - 1e-12 && t <= t1 + 1e-12));

    let mut out: Vec<State> = Vec::with_capacity(sample_times.len());
    let mut next_sample = 0;
    while next_sample < sample_times.len() && sample_times[next_sample] <= t0 {
        out.push(y0.clone());
        next_sample += 1;
    }
    if next_sample == sample_times.len() {
        return Ok(out);
    }

    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    let mut h = initial_step(&mut rhs, t0, t1, &y, &k1, opts);
    let mut stages: Vec<State> = vec![State::zeros(y.len()); 7];

    for _step in 0..opts.max_steps {
        if t + h > t1 {
            h = t1 - t;
        }
        if h <= f64::EPSILON * 16.0 * t.abs().max(1.0) {
            return Err(Error::IntegrationFailure {
                t,
                detail: "step size underflow".into(),
            });
        }

        stages[0] = k1.clone();
        for i in 0..6 {
            let yi = lin_comb(&y, h, &A[i][..=i], &stages[..=i]);
            stages[i + 1] = rhs(t + C[i + 1] * h, &yi);
        }
        // FSAL: stage 6 was evaluated at (t + h, y_new) with the 5th-order weights.
        let y_new = lin_comb(&y, h, &A[5], &stages[..6]);
        let err_vec = lin_comb(&State::zeros(y.len()), h, &E, &stages);
        let err = wrms(&err_vec, &y, &y_new, opts);

        if err <= 1.0 {
            let t_new = t + h;
            if next_sample < sample_times.len() && sample_times[next_sample] <= t_new + 1e-14 {
                // Quartic interpolant over the accepted step.
                let ydiff = &y_new - &y;
                let r1 = &y;
                let r2 = &ydiff;
                let r3 = lin_comb(&(-&ydiff), h, &[1.0], std::slice::from_ref(&stages[0]));
                let r4 = lin_comb(
                    &(&ydiff - &r3),
                    -h,
                    &[1.0],
                    std::slice::from_ref(&stages[6]),
                );
                let r5 = lin_comb(&State::zeros(y.len()), h, &D, &stages);
                while next_sample < sample_times.len() && sample_times[next_sample] <= t_new + 1e-14
                {
                    let theta = ((sample_times[next_sample] - t) / h).clamp(0.0, 1.0);
                    let th = C64::new(theta, 0.0);
                    let om = C64::new(1.0 - theta, 0.0);
                    let inner2 = r4.clone() + &r5 * om;
                    let inner1 = r3.clone() + inner2 * th;
                    let val = r1 + (r2 + inner1 * om) * th;
                    out.push(val);
                    next_sample += 1;
                }
            }
            t = t_new;
            y = y_new;
            k1 = stages[6].clone();
            if next_sample == sample_times.len() || t >= t1 {
                return Ok(out);
            }
        }

        let factor = if err == 0.0 {
            10.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 10.0)
        };
        h *= factor;
    }

    Err(Error::IntegrationFailure {
        t,
        detail: format!("step budget of {} exhausted", opts.max_steps),
    })
}
