//! Instantaneous eigenframes along a schedule.
//!
//! The per-point phase convention (largest entry real positive) is fine for
//! spectra and moduli, but it can jump discontinuously along a path — on a
//! symmetric avoided-crossing sweep the dominant component of the ground
//! state switches sides at λ = 0 and the convention flips the sign of the
//! vector there. Quantities that carry relative phases between different
//! times (the oscillation term of the first-order probability, the Berry
//! connection) therefore use a frame that parallel-transports the s = 0
//! convention along the schedule: each node's eigenvectors are rephased so
//! their overlap with the previous node is real and positive. In this frame
//! the connection ⟨ñ|∂_s ñ⟩ integrates to zero by construction and any
//! residual is tracked explicitly.

use crate::error::{Error, Result};
use crate::hamiltonians::{eigensystem, EigenSystem, ParamHamiltonian};
use crate::protocols::Protocol;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

const INITIAL_NODES: usize = 257;
const MAX_NODES: usize = 1 << 15;
/// Chain is refined until consecutive per-level overlaps exceed this.
const MIN_OVERLAP: f64 = 0.999;

pub struct ScheduleFrame<'a, M: ?Sized> {
    model: &'a M,
    protocol: &'a Protocol,
    nodes: Vec<f64>,
    frames: Vec<EigenSystem>,
    /// Accumulated connection residual per level at each node (the Berry
    /// phase of the evaluation frame; zero up to roundoff by construction).
    berry: Vec<Vec<f64>>,
}

/// Rephase the columns of `sys` so each level's overlap with `reference`
/// is real positive. Returns the smallest overlap modulus encountered.
fn align_to(reference: &EigenSystem, sys: &mut EigenSystem) -> f64 {
    let dim = sys.dimension();
    let mut min_overlap = f64::INFINITY;
    for l in 0..dim {
        let overlap = reference.states.column(l).dotc(&sys.states.column(l));
        let modulus = overlap.norm();
        min_overlap = min_overlap.min(modulus);
        if modulus > 0.0 {
            let phase = overlap.conj() / C64::new(modulus, 0.0);
            for i in 0..dim {
                sys.states[(i, l)] *= phase;
            }
        }
    }
    min_overlap
}

impl<'a, M> ScheduleFrame<'a, M>
where
    M: ParamHamiltonian + ?Sized,
{
    pub fn new(model: &'a M, protocol: &'a Protocol) -> Result<Self> {
        let mut count = INITIAL_NODES;
        loop {
            match Self::try_build(model, protocol, count) {
                Ok(frame) => return Ok(frame),
                Err(BuildError::TooCoarse) if count < MAX_NODES => {
                    count = (count - 1) * 2 + 1;
                }
                Err(BuildError::TooCoarse) => {
                    return Err(Error::Domain(
                        "eigenbasis rotates too fast for the frame chain resolution".into(),
                    ))
                }
                Err(BuildError::Other(e)) => return Err(e),
            }
        }
    }

    fn try_build(
        model: &'a M,
        protocol: &'a Protocol,
        count: usize,
    ) -> std::result::Result<Self, BuildError> {
        let nodes: Vec<f64> = (0..count).map(|i| i as f64 / (count - 1) as f64).collect();
        let dim = model.dimension();
        let mut frames: Vec<EigenSystem> = Vec::with_capacity(count);
        let mut berry = vec![Vec::with_capacity(count); dim];
        for (j, &s) in nodes.iter().enumerate() {
            let mut sys = eigensystem(model, protocol.position(s).as_slice())
                .map_err(|e| BuildError::Other(path_error(e, s)))?;
            if j == 0 {
                for b in berry.iter_mut() {
                    b.push(0.0);
                }
            } else {
                let prev = &frames[j - 1];
                let min_overlap = align_to(prev, &mut sys);
                if min_overlap < MIN_OVERLAP {
                    return Err(BuildError::TooCoarse);
                }
                // Connection increment of the aligned frame: arg⟨ñ_{j−1}|ñ_j⟩
                // accumulates the discrete −i⟨ñ|∂_s ñ⟩ ds. Parallel transport
                // makes these overlaps real positive, so only the roundoff
                // residual survives.
                for (l, b) in berry.iter_mut().enumerate() {
                    let overlap = prev.states.column(l).dotc(&sys.states.column(l));
                    let prev_phase = *b.last().expect("nonempty accumulator");
                    b.push(prev_phase + overlap.arg());
                }
            }
            frames.push(sys);
        }
        Ok(Self {
            model,
            protocol,
            nodes,
            frames,
            berry,
        })
    }

    pub fn dimension(&self) -> usize {
        self.model.dimension()
    }

    fn node_at_or_before(&self, s: f64) -> usize {
        match self.nodes.binary_search_by(|v| v.total_cmp(&s)) {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) => i - 1,
        }
    }

    /// Transported eigensystem at `s`.
    pub fn frame_at(&self, s: f64) -> Result<EigenSystem> {
        let j = self.node_at_or_before(s);
        if self.nodes[j] == s {
            return Ok(self.frames[j].clone());
        }
        let mut sys = eigensystem(self.model, self.protocol.position(s).as_slice())
            .map_err(|e| path_error(e, s))?;
        let min_overlap = align_to(&self.frames[j], &mut sys);
        if min_overlap < 0.9 {
            return Err(Error::Domain(format!(
                "frame alignment ambiguous at s = {s} (overlap {min_overlap:.3})"
            )));
        }
        Ok(sys)
    }

    /// Rescaled transition rates T̃_{nl}(s) = ⟨l̃|∂_s H|ñ⟩ / (Ẽ_n − Ẽ_l)²
    /// for all l, with the entry at l = n set to zero.
    pub fn rates_at(&self, s: f64, level: usize) -> Result<DVector<C64>> {
        let sys = self.frame_at(s)?;
        self.rates_in(&sys, s, level)
    }

    fn rates_in(&self, sys: &EigenSystem, s: f64, level: usize) -> Result<DVector<C64>> {
        let dim = self.dimension();
        let velocity = self.protocol.velocity(s);
        let point = self.protocol.position(s);
        let mut dh: DMatrix<C64> = DMatrix::zeros(dim, dim);
        for i in 0..self.model.param_count() {
            if velocity[i] != 0.0 {
                dh += self.model.derivative(point.as_slice(), i) * C64::new(velocity[i], 0.0);
            }
        }
        let dh_n = &dh * sys.state(level);
        let mut rates = DVector::zeros(dim);
        for l in 0..dim {
            if l == level {
                continue;
            }
            let de = sys.energies[level] - sys.energies[l];
            rates[l] = sys.states.column(l).dotc(&dh_n) / C64::new(de * de, 0.0);
        }
        Ok(rates)
    }

    /// Connection residual (Berry phase of the evaluation frame) accumulated
    /// up to `s`; zero to machine precision by construction.
    pub fn berry_at(&self, s: f64, level: usize) -> f64 {
        self.berry[level][self.node_at_or_before(s)]
    }

    /// Sorted energies at `s` (frame-independent).
    pub fn energies_at(&self, s: f64) -> Result<DVector<f64>> {
        let sys = eigensystem(self.model, self.protocol.position(s).as_slice())
            .map_err(|e| path_error(e, s))?;
        Ok(sys.energies)
    }
}

enum BuildError {
    TooCoarse,
    Other(Error),
}

fn path_error(e: Error, s: f64) -> Error {
    match e {
        Error::DegenerateSpectrum {
            lower, upper, gap, ..
        } => Error::PathDegeneracy {
            u: s,
            lower,
            upper,
            gap,
        },
        other => other,
    }
}

/// Dynamical and Berry phases of every level at a set of sample times.
///
/// Φ_m^D(t) = τ ∫₀^{t/τ} Ẽ_m(s) ds, accumulated by adaptive panel
/// quadrature between consecutive samples (all levels share the spectral
/// evaluations). Φ_m^B is the connection residual of the evaluation frame.
pub struct PhaseAccumulator {
    times: Vec<f64>,
    dynamical: Vec<Vec<f64>>,
    berry: Vec<Vec<f64>>,
}

impl PhaseAccumulator {
    pub fn build<M>(
        frame: &ScheduleFrame<'_, M>,
        tau: f64,
        times: &[f64],
        rel_tol: f64,
    ) -> Result<Self>
    where
        M: ParamHamiltonian + ?Sized,
    {
        if tau <= 0.0 {
            return Err(Error::Domain(format!(
                "operation time must be positive, got {tau}"
            )));
        }
        debug_assert!(times.windows(2).all(|w| w[0] <= w[1]));
        let dim = frame.dimension();
        let mut dynamical = vec![Vec::with_capacity(times.len()); dim];
        let mut berry = vec![Vec::with_capacity(times.len()); dim];
        let mut acc = DVector::<f64>::zeros(dim);
        let mut s_prev = 0.0;
        for &t in times {
            let s = (t / tau).clamp(0.0, 1.0);
            if s > s_prev {
                acc += integrate_energies(frame, s_prev, s, rel_tol)?;
                s_prev = s;
            }
            for l in 0..dim {
                dynamical[l].push(tau * acc[l]);
                berry[l].push(frame.berry_at(s, l));
            }
        }
        Ok(Self {
            times: times.to_vec(),
            dynamical,
            berry,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Φ^D of `level` at sample index `idx`.
    pub fn dynamical(&self, level: usize, idx: usize) -> f64 {
        self.dynamical[level][idx]
    }

    /// Φ^B of `level` at sample index `idx`.
    pub fn berry(&self, level: usize, idx: usize) -> f64 {
        self.berry[level][idx]
    }

    /// Total phase Φ = Φ^D + Φ^B.
    pub fn total(&self, level: usize, idx: usize) -> f64 {
        self.dynamical[level][idx] + self.berry[level][idx]
    }
}

/// Adaptive Gauss-Kronrod quadrature of the energy vector over [a, b] in s.
fn integrate_energies<M>(
    frame: &ScheduleFrame<'_, M>,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<DVector<f64>>
where
    M: ParamHamiltonian + ?Sized,
{
    // 15-point Kronrod / 7-point Gauss pair, as in `numerics::quad`, applied
    // componentwise with a shared spectral evaluation per node.
    const XGK: [f64; 8] = [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144838258730,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.0,
    ];
    const WGK: [f64; 8] = [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ];
    const WG: [f64; 4] = [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ];

    let dim = frame.dimension();
    let eval_panel = |lo: f64, hi: f64| -> Result<(DVector<f64>, f64)> {
        let center = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let fc = frame.energies_at(center)?;
        let mut kron = &fc * WGK[7];
        let mut gauss = fc * WG[3];
        for (i, &x) in XGK.iter().enumerate().take(7) {
            let fa = frame.energies_at(center - half * x)?;
            let fb = frame.energies_at(center + half * x)?;
            let sum = fa + fb;
            kron += &sum * WGK[i];
            if i % 2 == 1 {
                gauss += sum * WG[i / 2];
            }
        }
        let err = (&kron - gauss).abs().max() * half;
        Ok((kron * half, err))
    };

    let mut panels = vec![(a, b, eval_panel(a, b)?)];
    for _ in 0..2000 {
        let total_err: f64 = panels.iter().map(|p| p.2 .1).sum();
        let scale = panels
            .iter()
            .map(|p| p.2 .0.abs().max())
            .fold(0.0, f64::max);
        if total_err <= (rel_tol * scale).max(1e-14) {
            panels.sort_by(|x, y| x.0.total_cmp(&y.0));
            let mut out = DVector::zeros(dim);
            for p in &panels {
                out += &p.2 .0;
            }
            return Ok(out);
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .expect("nonempty panels");
        let (lo, hi, _) = panels.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        panels.push((lo, mid, eval_panel(lo, mid)?));
        panels.push((mid, hi, eval_panel(mid, hi)?));
    }
    Err(Error::QuadratureFailure {
        lo: a,
        hi: b,
        residual: panels.iter().map(|p| p.2 .1).sum(),
        worst: vec![],
    })
}
