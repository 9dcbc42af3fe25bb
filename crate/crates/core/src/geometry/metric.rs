//! The metric tensor and its closed two-level form.

use crate::error::{Error, Result};
use crate::hamiltonians::{eigensystem, ParamHamiltonian};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

/// A symmetric positive-semidefinite metric evaluated at one point of the
/// control-parameter space.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTensor {
    pub point: Vec<f64>,
    pub matrix: DMatrix<f64>,
}

impl MetricTensor {
    /// Quadratic form v·g·v, clamped at zero to absorb roundoff.
    pub fn quadratic_form(&self, v: &DVector<f64>) -> f64 {
        (v.dot(&(&self.matrix * v))).max(0.0)
    }

    /// Largest off-symmetry entry (should be zero by construction).
    pub fn symmetry_defect(&self) -> f64 {
        let t = self.matrix.transpose();
        (&self.matrix - t).iter().fold(0.0, |m, v| v.abs().max(m))
    }

    /// Smallest eigenvalue, for positive-semidefiniteness checks.
    pub fn min_eigenvalue(&self) -> f64 {
        let sym = nalgebra::SymmetricEigen::new(self.matrix.clone());
        sym.eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Metric of level `level` at `params`, from the spectral formula above.
///
/// Gauge independent: only squared moduli of matrix elements enter.
pub fn dqgt<M>(model: &M, params: &[f64], level: usize) -> Result<MetricTensor>
where
    M: ParamHamiltonian + ?Sized,
{
    let sys = eigensystem(model, params)?;
    let dim = model.dimension();
    let np = model.param_count();
    let n_state = sys.state(level);

    // elements[i][l] = ⟨l|∂H/∂λᵢ|n⟩
    let mut elements: Vec<DVector<C64>> = Vec::with_capacity(np);
    for i in 0..np {
        let dh = model.derivative(params, i);
        let dh_n = &dh * &n_state;
        let col = DVector::from_iterator(dim, (0..dim).map(|l| sys.state(l).dotc(&dh_n)));
        elements.push(col);
    }

    let mut g = DMatrix::zeros(np, np);
    for i in 0..np {
        for j in i..np {
            let mut acc = 0.0;
            for l in 0..dim {
                if l == level {
                    continue;
                }
                let de = sys.energies[level] - sys.energies[l];
                let w = de * de * de * de;
                acc += (elements[i][l] * elements[j][l].conj()).re / w;
            }
            g[(i, j)] = acc;
            g[(j, i)] = acc;
        }
    }
    Ok(MetricTensor {
        point: params.to_vec(),
        matrix: g,
    })
}

/// Closed-form metric of the general two-level model (1/2) λ⃗·σ⃗:
///
///   g = (1/(4λ⁴)) (I − λ̂ λ̂ᵀ),
///
/// written out as (1/(4λ⁶)) [[λy²+λz², −λxλy, −λxλz], …]. The radial
/// direction is a null direction: changing only |λ⃗| never mixes the levels.
pub fn sphere_metric(lambda: &[f64; 3]) -> Result<MetricTensor> {
    let n2 = lambda.iter().map(|v| v * v).sum::<f64>();
    if n2 == 0.0 {
        return Err(Error::DegenerateSpectrum {
            lower: 0,
            upper: 1,
            gap: 0.0,
            tol: crate::hamiltonians::DEGENERACY_TOL,
        });
    }
    let scale = 1.0 / (4.0 * n2 * n2 * n2);
    let [x, y, z] = *lambda;
    let matrix = DMatrix::from_row_slice(
        3,
        3,
        &[
            y * y + z * z,
            -x * y,
            -x * z,
            -x * y,
            x * x + z * z,
            -y * z,
            -x * z,
            -y * z,
            x * x + y * y,
        ],
    ) * scale;
    Ok(MetricTensor {
        point: lambda.to_vec(),
        matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::{LandauZener, TwoLevel};

    #[test]
    fn lz_metric_at_zero() {
        let model = LandauZener::new(2.0).unwrap();
        let g = dqgt(&model, &[0.0], 0).unwrap();
        assert!((g.matrix[(0, 0)] - 0.0625).abs() < 1e-14);
    }

    #[test]
    fn lz_metric_matches_closed_form() {
        let model = LandauZener::new(2.0).unwrap();
        for &lambda in &[-7.0, -0.5, 0.0, 1.3, 10.0] {
            let g = dqgt(&model, &[lambda], 0).unwrap();
            assert!(
                (g.matrix[(0, 0)] - model.metric(lambda)).abs()
                    < 1e-12 * model.metric(lambda).max(1e-30)
            );
        }
    }

    #[test]
    fn lz_metric_same_for_both_levels() {
        let model = LandauZener::new(2.0).unwrap();
        for &lambda in &[-2.0, 0.1, 5.0] {
            let g0 = dqgt(&model, &[lambda], 0).unwrap();
            let g1 = dqgt(&model, &[lambda], 1).unwrap();
            assert!((g0.matrix[(0, 0)] - g1.matrix[(0, 0)]).abs() < 1e-15);
        }
    }

    #[test]
    fn two_level_metric_along_z() {
        let g = dqgt(&TwoLevel, &[0.0, 0.0, 1.0], 0).unwrap();
        let expect = [0.25, 0.0, 0.0, 0.0, 0.25, 0.0, 0.0, 0.0, 0.0];
        for (a, b) in g.matrix.iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn sphere_metric_matches_spectral_computation() {
        let points: [[f64; 3]; 4] = [
            [0.0, 0.0, 1.0],
            [0.3, -0.4, 0.5],
            [1.0, 2.0, -0.7],
            [-0.2, 0.1, 0.05],
        ];
        for p in points {
            let closed = sphere_metric(&p).unwrap();
            let spectral = dqgt(&TwoLevel, &p, 0).unwrap();
            for (a, b) in closed.matrix.iter().zip(spectral.matrix.iter()) {
                assert!((a - b).abs() < 1e-10, "point {p:?}");
            }
        }
    }

    #[test]
    fn radial_direction_is_null() {
        let p = [0.3, -0.4, 0.5];
        let g = sphere_metric(&p).unwrap();
        let radial = DVector::from_vec(p.to_vec());
        assert!((&g.matrix * radial).norm() < 1e-14);
    }

    #[test]
    fn metric_is_symmetric_and_psd() {
        let g = dqgt(&TwoLevel, &[0.4, 0.2, -0.9], 1).unwrap();
        assert!(g.symmetry_defect() < 1e-14);
        assert!(g.min_eigenvalue() >= -1e-10);
    }

    #[test]
    fn sphere_origin_is_degenerate() {
        assert!(sphere_metric(&[0.0, 0.0, 0.0]).is_err());
    }
}
