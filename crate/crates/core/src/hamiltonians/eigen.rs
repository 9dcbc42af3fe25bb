//! Hermitian eigendecomposition with a deterministic phase convention.

use super::ParamHamiltonian;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

/// Adjacent eigenvalues closer than this are treated as degenerate and
/// rejected rather than perturbed.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Sorted, gauge-fixed instantaneous eigensystem at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    /// Eigenvalues in strictly increasing order.
    pub energies: DVector<f64>,
    /// Matching eigenvectors as columns; in each column the entry of largest
    /// modulus is real and positive (ties broken by lowest index).
    pub states: DMatrix<C64>,
    /// Smallest adjacent level spacing.
    pub gap_min: f64,
}

impl EigenSystem {
    pub fn dimension(&self) -> usize {
        self.energies.len()
    }

    pub fn state(&self, level: usize) -> DVector<C64> {
        self.states.column(level).into_owned()
    }
}

/// Apply the phase convention to each column in place.
pub(crate) fn fix_gauge(states: &mut DMatrix<C64>) {
    let (rows, cols) = states.shape();
    for j in 0..cols {
        let mut best = 0;
        let mut best_mod = 0.0;
        for i in 0..rows {
            let m = states[(i, j)].norm();
            if m > best_mod {
                best_mod = m;
                best = i;
            }
        }
        if best_mod == 0.0 {
            continue;
        }
        let phase = states[(best, j)] / C64::new(best_mod, 0.0);
        let correction = phase.conj();
        for i in 0..rows {
            states[(i, j)] *= correction;
        }
        // Pin the anchor entry exactly real.
        states[(best, j)] = C64::new(states[(best, j)].re, 0.0);
    }
}

/// Diagonalize `model` at `params` with the default degeneracy tolerance.
pub fn eigensystem<M>(model: &M, params: &[f64]) -> Result<EigenSystem>
where
    M: ParamHamiltonian + ?Sized,
{
    eigensystem_with_tol(model, params, DEGENERACY_TOL)
}

pub fn eigensystem_with_tol<M>(model: &M, params: &[f64], tol: f64) -> Result<EigenSystem>
where
    M: ParamHamiltonian + ?Sized,
{
    let h = model.evaluate(params);
    decompose(&h, tol)
}

pub(crate) fn decompose(h: &DMatrix<C64>, tol: f64) -> Result<EigenSystem> {
    let dim = h.nrows();
    let se = nalgebra::SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));

    let energies = DVector::from_iterator(dim, order.iter().map(|&i| se.eigenvalues[i]));
    let mut states = DMatrix::zeros(dim, dim);
    for (col, &src) in order.iter().enumerate() {
        states.set_column(col, &se.eigenvectors.column(src));
    }
    fix_gauge(&mut states);

    let mut gap_min = f64::INFINITY;
    for i in 0..dim.saturating_sub(1) {
        let gap = energies[i + 1] - energies[i];
        if gap < tol {
            return Err(Error::DegenerateSpectrum {
                lower: i,
                upper: i + 1,
                gap,
                tol,
            });
        }
        gap_min = gap_min.min(gap);
    }
    Ok(EigenSystem {
        energies,
        states,
        gap_min,
    })
}
