//! The built-in model Hamiltonians and their closed-form helpers.

use super::ParamHamiltonian;
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn im(x: f64) -> C64 {
    C64::new(0.0, x)
}

fn pauli_x() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[re(0.0), re(1.0), re(1.0), re(0.0)])
}

fn pauli_y() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[re(0.0), im(-1.0), im(1.0), re(0.0)])
}

fn pauli_z() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[re(1.0), re(0.0), re(0.0), re(-1.0)])
}

/// Avoided-crossing two-level Hamiltonian (Δ/2)(σx + λ σz).
///
/// The gap is Δ√(1+λ²); λ is the single control parameter.
pub fn lz_hamiltonian(delta: f64, lambda: f64) -> Result<DMatrix<C64>> {
    if delta <= 0.0 {
        return Err(Error::InvalidModel(format!(
            "level splitting must be positive, got {delta}"
        )));
    }
    Ok((pauli_x() + pauli_z() * re(lambda)) * re(0.5 * delta))
}

/// General two-level Hamiltonian (1/2) λ⃗·σ⃗ with eigenvalues ±|λ⃗|/2.
pub fn two_level_hamiltonian(lambda: &[f64; 3]) -> Result<DMatrix<C64>> {
    let norm = (lambda[0] * lambda[0] + lambda[1] * lambda[1] + lambda[2] * lambda[2]).sqrt();
    if norm == 0.0 {
        return Err(Error::DegenerateSpectrum {
            lower: 0,
            upper: 1,
            gap: 0.0,
            tol: super::DEGENERACY_TOL,
        });
    }
    Ok(
        (pauli_x() * re(lambda[0]) + pauli_y() * re(lambda[1]) + pauli_z() * re(lambda[2]))
            * re(0.5),
    )
}

/// The avoided-crossing model as a [`ParamHamiltonian`] with one control
/// parameter λ.
#[derive(Debug, Clone, Copy)]
pub struct LandauZener {
    delta: f64,
}

impl LandauZener {
    pub fn new(delta: f64) -> Result<Self> {
        if delta <= 0.0 {
            return Err(Error::InvalidModel(format!(
                "level splitting must be positive, got {delta}"
            )));
        }
        Ok(Self { delta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Closed-form metric 1/(4Δ²(1+λ²)³), identical for both levels.
    pub fn metric(&self, lambda: f64) -> f64 {
        let w = 1.0 + lambda * lambda;
        1.0 / (4.0 * self.delta * self.delta * w * w * w)
    }

    /// Closed-form path length from `a` to `b`: the antiderivative of √g is
    /// λ/(2Δ√(1+λ²)).
    pub fn length(&self, a: f64, b: f64) -> f64 {
        let anti = |x: f64| x / (2.0 * self.delta * (1.0 + x * x).sqrt());
        (anti(b) - anti(a)).abs()
    }
}

impl ParamHamiltonian for LandauZener {
    fn dimension(&self) -> usize {
        2
    }
    fn param_count(&self) -> usize {
        1
    }
    fn evaluate(&self, params: &[f64]) -> DMatrix<C64> {
        (pauli_x() + pauli_z() * re(params[0])) * re(0.5 * self.delta)
    }
    fn derivative(&self, _params: &[f64], index: usize) -> DMatrix<C64> {
        assert_eq!(index, 0);
        pauli_z() * re(0.5 * self.delta)
    }
}

/// General two-level model with the three components of λ⃗ as controls.
#[derive(Debug, Clone, Copy, Default)]
pub struct TwoLevel;

impl ParamHamiltonian for TwoLevel {
    fn dimension(&self) -> usize {
        2
    }
    fn param_count(&self) -> usize {
        3
    }
    fn evaluate(&self, params: &[f64]) -> DMatrix<C64> {
        (pauli_x() * re(params[0]) + pauli_y() * re(params[1]) + pauli_z() * re(params[2]))
            * re(0.5)
    }
    fn derivative(&self, _params: &[f64], index: usize) -> DMatrix<C64> {
        match index {
            0 => pauli_x() * re(0.5),
            1 => pauli_y() * re(0.5),
            2 => pauli_z() * re(0.5),
            _ => panic!("two-level model has three parameters"),
        }
    }
}

/// One retained momentum of the transverse-field Ising chain.
///
/// For an even chain of `n` sites with periodic boundaries, the admissible
/// wavenumbers are k = 2πm/n for m = 1, …, n/2 − 1; the k = 0 and k = π
/// modes decouple from the drive and are excluded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsingMode {
    k: f64,
    j: f64,
    n: usize,
}

impl IsingMode {
    pub fn new(k: f64, j: f64, n: usize) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidModel(format!(
                "site count must be even and at least 4, got {n}"
            )));
        }
        if j <= 0.0 {
            return Err(Error::InvalidModel(format!(
                "coupling must be positive, got {j}"
            )));
        }
        if !(k > 0.0 && k < PI) {
            return Err(Error::InvalidModel(format!(
                "wavenumber {k} outside (0, π)"
            )));
        }
        let m = k * n as f64 / (2.0 * PI);
        if (m - m.round()).abs() > 1e-9 {
            return Err(Error::InvalidModel(format!(
                "wavenumber {k} not on the 2π/{n} grid"
            )));
        }
        Ok(Self { k, j, n })
    }

    pub fn from_index(m: usize, j: f64, n: usize) -> Result<Self> {
        Self::new(2.0 * PI * m as f64 / n as f64, j, n)
    }

    pub fn wavenumber(&self) -> f64 {
        self.k
    }

    pub fn coupling(&self) -> f64 {
        self.j
    }

    pub fn sites(&self) -> usize {
        self.n
    }

    /// Quasiparticle energy ε_k = 2J(λ² − 2λ cos k + 1)^{1/2}.
    pub fn quasiparticle_energy(&self, lambda: f64) -> f64 {
        2.0 * self.j * (lambda * lambda - 2.0 * lambda * self.k.cos() + 1.0).sqrt()
    }
}

/// The retained momentum grid k = 2π/n, 4π/n, …, π − 2π/n.
pub fn ising_modes(n: usize, j: f64) -> Result<Vec<IsingMode>> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::InvalidModel(format!(
            "site count must be even and at least 4, got {n}"
        )));
    }
    (1..n / 2).map(|m| IsingMode::from_index(m, j, n)).collect()
}

/// The 2×2 block of one momentum pair on the even sector
/// {|0_k 0_{−k}⟩, |1_k 1_{−k}⟩} (vacuum pair first):
///
///   2J [ λ − cos k    −i sin k  ]
///      [  i sin k    −λ + cos k ]
///
/// The eigenvalues are ±ε_k. This convention puts +(λ − cos k) on the
/// vacuum-pair diagonal; the opposite overall sign yields identical gaps,
/// metrics, and transition probabilities.
pub fn ising_mode_hamiltonian(mode: &IsingMode, lambda: f64) -> DMatrix<C64> {
    let a = lambda - mode.k.cos();
    let b = mode.k.sin();
    DMatrix::from_row_slice(2, 2, &[re(a), im(-b), im(b), re(-a)]) * re(2.0 * mode.j)
}

/// Bogoliubov pair amplitudes (u_k, v_k) = (cos θ_k/2, sin θ_k/2) with
/// tan θ_k = sin k / (λ − cos k). The two-argument angle keeps the branch
/// θ_k ∈ (0, π) continuous in λ, with θ_k → 0 as λ → +∞. The state
/// u_k|0_k 0_{−k}⟩ + i v_k|1_k 1_{−k}⟩ is the block eigenvector at energy
/// +ε_k of [`ising_mode_hamiltonian`].
pub fn ising_ground_coefficients(mode: &IsingMode, lambda: f64) -> (f64, f64) {
    let theta = mode.k.sin().atan2(lambda - mode.k.cos());
    ((0.5 * theta).cos(), (0.5 * theta).sin())
}

/// One momentum block as a [`ParamHamiltonian`] in λ.
#[derive(Debug, Clone, Copy)]
pub struct IsingModeModel {
    mode: IsingMode,
}

impl IsingModeModel {
    pub fn new(mode: IsingMode) -> Self {
        Self { mode }
    }

    pub fn mode(&self) -> &IsingMode {
        &self.mode
    }
}

impl ParamHamiltonian for IsingModeModel {
    fn dimension(&self) -> usize {
        2
    }
    fn param_count(&self) -> usize {
        1
    }
    fn evaluate(&self, params: &[f64]) -> DMatrix<C64> {
        ising_mode_hamiltonian(&self.mode, params[0])
    }
    fn derivative(&self, _params: &[f64], index: usize) -> DMatrix<C64> {
        assert_eq!(index, 0);
        pauli_z() * re(2.0 * self.mode.j)
    }
}

/// Tensor product of all retained momentum blocks, dimension 2^(n/2 − 1).
///
/// Small chains only: this exists to check that the many-body computation
/// reduces to the per-mode one, not to scale.
#[derive(Debug, Clone)]
pub struct IsingPairSector {
    modes: Vec<IsingMode>,
}

impl IsingPairSector {
    pub fn new(n: usize, j: f64) -> Result<Self> {
        let modes = ising_modes(n, j)?;
        if modes.len() > 12 {
            return Err(Error::InvalidModel(format!(
                "pair-sector product space with {} modes is too large",
                modes.len()
            )));
        }
        Ok(Self { modes })
    }

    pub fn modes(&self) -> &[IsingMode] {
        &self.modes
    }

    /// Lift a 2×2 block acting on `slot` into the product space.
    fn lift(&self, slot: usize, block: &DMatrix<C64>) -> DMatrix<C64> {
        let mut out = DMatrix::identity(1, 1);
        for idx in 0..self.modes.len() {
            let factor = if idx == slot {
                block.clone()
            } else {
                DMatrix::identity(2, 2)
            };
            out = out.kronecker(&factor);
        }
        out
    }
}

impl ParamHamiltonian for IsingPairSector {
    fn dimension(&self) -> usize {
        1 << self.modes.len()
    }
    fn param_count(&self) -> usize {
        1
    }
    fn evaluate(&self, params: &[f64]) -> DMatrix<C64> {
        let dim = self.dimension();
        let mut h = DMatrix::zeros(dim, dim);
        for (slot, mode) in self.modes.iter().enumerate() {
            h += self.lift(slot, &ising_mode_hamiltonian(mode, params[0]));
        }
        h
    }
    fn derivative(&self, _params: &[f64], index: usize) -> DMatrix<C64> {
        assert_eq!(index, 0);
        let dim = self.dimension();
        let mut h = DMatrix::zeros(dim, dim);
        for (slot, mode) in self.modes.iter().enumerate() {
            h += self.lift(slot, &(pauli_z() * re(2.0 * mode.j)));
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::hermiticity_defect;

    fn gap2(h: &DMatrix<C64>) -> f64 {
        let se = nalgebra::SymmetricEigen::new(h.clone());
        (se.eigenvalues[0] - se.eigenvalues[1]).abs()
    }

    #[test]
    fn lz_at_zero_is_pure_sigma_x() {
        let h = lz_hamiltonian(2.0, 0.0).unwrap();
        assert_eq!(h, pauli_x());
    }

    #[test]
    fn lz_gap_matches_closed_form_and_is_even_in_lambda() {
        let h = lz_hamiltonian(2.0, 10.0).unwrap();
        assert!((gap2(&h) - 2.0 * 101.0_f64.sqrt()).abs() < 1e-12);
        let hm = lz_hamiltonian(2.0, -10.0).unwrap();
        assert!((gap2(&hm) - gap2(&h)).abs() < 1e-12);
    }

    #[test]
    fn lz_rejects_nonpositive_splitting() {
        assert!(lz_hamiltonian(0.0, 1.0).is_err());
        assert!(LandauZener::new(-1.0).is_err());
    }

    #[test]
    fn two_level_along_z_is_diagonal() {
        let h = two_level_hamiltonian(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(h, pauli_z() * re(0.5));
    }

    #[test]
    fn two_level_eigenvalues_are_half_norm() {
        let x = 0.5_f64.sqrt();
        let h = two_level_hamiltonian(&[x, 0.0, x]).unwrap();
        assert!((gap2(&h) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_level_origin_is_degenerate() {
        assert!(matches!(
            two_level_hamiltonian(&[0.0, 0.0, 0.0]),
            Err(Error::DegenerateSpectrum { .. })
        ));
    }

    #[test]
    fn ising_block_at_half_pi() {
        let mode = IsingMode::new(PI / 2.0, 1.0, 4).unwrap();
        let h = ising_mode_hamiltonian(&mode, 0.0);
        let expect = DMatrix::from_row_slice(2, 2, &[re(0.0), im(-2.0), im(2.0), re(0.0)]);
        assert!((&h - expect).iter().all(|v| v.norm() < 1e-15));
        // Eigenvalues ±ε_k with ε = 2, so the block gap is 2ε = 4.
        assert!((gap2(&h) - 4.0).abs() < 1e-12);
        assert!((mode.quasiparticle_energy(0.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn ising_gap_closes_at_criticality_for_small_k() {
        let mode = IsingMode::from_index(1, 1.0, 1000).unwrap();
        let h = ising_mode_hamiltonian(&mode, 1.0);
        assert!(gap2(&h) < 0.03);
    }

    #[test]
    fn ising_gap_far_from_criticality() {
        let mode = IsingMode::new(PI / 2.0, 1.0, 4).unwrap();
        let h = ising_mode_hamiltonian(&mode, 10.0);
        assert!((gap2(&h) - 4.0 * 101.0_f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn mode_grid_validation() {
        assert!(IsingMode::new(0.0, 1.0, 8).is_err());
        assert!(IsingMode::new(PI, 1.0, 8).is_err());
        assert!(IsingMode::new(1.0, 1.0, 8).is_err()); // off-grid
        assert!(IsingMode::new(PI / 2.0, 1.0, 6).is_err()); // π/2 not on the n = 6 grid
        assert!(ising_modes(5, 1.0).is_err());
        assert!(ising_modes(2, 1.0).is_err());
        let modes = ising_modes(8, 1.0).unwrap();
        let ks: Vec<f64> = modes.iter().map(|m| m.wavenumber()).collect();
        assert_eq!(ks.len(), 3);
        assert!((ks[0] - PI / 4.0).abs() < 1e-15);
        assert!((ks[2] - 3.0 * PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn ground_coefficients_normalized_and_limits() {
        let mode = IsingMode::new(PI / 2.0, 1.0, 4).unwrap();
        for &lambda in &[-5.0, -1.0, 0.0, 0.3, 1.0, 7.0] {
            let (u, v) = ising_ground_coefficients(&mode, lambda);
            assert!((u * u + v * v - 1.0).abs() < 1e-12);
            assert!(v >= 0.0); // θ ∈ (0, π)
        }
        let (u, v) = ising_ground_coefficients(&mode, 1e9);
        assert!((u - 1.0).abs() < 1e-9 && v < 1e-9);
        let (u, v) = ising_ground_coefficients(&mode, 0.0);
        assert!((u - (PI / 4.0).cos()).abs() < 1e-15);
        assert!((v - (PI / 4.0).sin()).abs() < 1e-15);
    }

    #[test]
    fn pair_state_is_block_eigenvector() {
        let mode = IsingMode::new(PI / 2.0, 1.0, 4).unwrap();
        for &lambda in &[-3.0, 0.0, 0.9, 2.5] {
            let (u, v) = ising_ground_coefficients(&mode, lambda);
            let h = ising_mode_hamiltonian(&mode, lambda);
            let eps = mode.quasiparticle_energy(lambda);
            let state = nalgebra::DVector::from_vec(vec![re(u), im(v)]);
            let residual = &h * &state - &state * re(eps);
            assert!(residual.norm() < 1e-10, "λ = {lambda}");
        }
    }

    #[test]
    fn pair_sector_dimensions_and_hermiticity() {
        let model = IsingPairSector::new(6, 1.0).unwrap();
        assert_eq!(model.dimension(), 4);
        let h = model.evaluate(&[0.7]);
        assert!(hermiticity_defect(&h) < 1e-14);
        // Spectrum is all sign combinations of the per-mode energies.
        let se = nalgebra::SymmetricEigen::new(h);
        let mut eig: Vec<f64> = se.eigenvalues.iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        let e1 = model.modes()[0].quasiparticle_energy(0.7);
        let e2 = model.modes()[1].quasiparticle_energy(0.7);
        let mut expect = vec![-e1 - e2, -(e1 - e2).abs(), (e1 - e2).abs(), e1 + e2];
        expect.sort_by(f64::total_cmp);
        for (a, b) in eig.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    // Structural check of the even-sector reduction: build the full 4-dim
    // momentum-pair space from fermion operators and verify that the
    // single-occupancy states decouple and sit at zero energy.
    #[test]
    fn single_occupancy_states_decouple() {
        let a = DMatrix::from_row_slice(2, 2, &[re(0.0), re(1.0), re(0.0), re(0.0)]);
        let z = pauli_z();
        let id = DMatrix::<C64>::identity(2, 2);
        let c1 = a.kronecker(&id); // annihilates the +k mode
        let c2 = z.kronecker(&a); // annihilates the −k mode, with the parity string
                                  // Fermionic algebra sanity: {c1, c2} = 0, {c1, c1†} = 1.
        assert!((&c1 * &c2 + &c2 * &c1).iter().all(|v| v.norm() < 1e-15));
        assert!(hermiticity_defect(&(&c1 * c1.adjoint() + c1.adjoint() * &c1)) < 1e-15);

        let mode = IsingMode::new(PI / 2.0, 1.0, 4).unwrap();
        for &lambda in &[-1.0, 0.2, 1.7] {
            let aa = lambda - mode.wavenumber().cos();
            let bb = mode.wavenumber().sin();
            let n1 = c1.adjoint() * &c1;
            let n2 = c2.adjoint() * &c2;
            let h4 = (&n1 + &n2 - DMatrix::identity(4, 4)) * re(2.0 * aa)
                + (c1.adjoint() * c2.adjoint()) * im(-2.0 * bb)
                + (&c2 * &c1) * im(2.0 * bb);

            // Rows/columns 1 and 2 are the single-occupancy states |0_k 1_{−k}⟩
            // and |1_k 0_{−k}⟩: annihilated identically.
            for idx in [1usize, 2] {
                assert!(h4.column(idx).iter().all(|v| v.norm() < 1e-14));
                assert!(h4.row(idx).iter().all(|v| v.norm() < 1e-14));
            }
            // The pair block is the mode Hamiltonian up to the documented
            // overall sign.
            let block =
                DMatrix::from_row_slice(2, 2, &[h4[(0, 0)], h4[(0, 3)], h4[(3, 0)], h4[(3, 3)]]);
            let spec_block = ising_mode_hamiltonian(&mode, lambda);
            assert!((&block + &spec_block).iter().all(|v| v.norm() < 1e-12));
        }
    }
}
