//! Exact thermal state of a finite ring by per-sector dense diagonalization.
//!
//! `βH` commutes with `Sᶻ`, so each of the `N + 1` magnetization blocks is
//! diagonalized on its own. Boltzmann weights are always formed relative to
//! the lowest `βE` over all sectors, so `βμB` in the tens does not overflow.

use nalgebra::{DMatrix, DVector, Matrix4};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::chain::{
    eigh_sorted, sector_hamiltonian, BasisState, ChainParams, HermitianOperator, SectorBasis,
    SectorIndex, DEFAULT_MAX_SECTOR_DIM,
};
use crate::entanglement::{TwoQubitDensity, TwoSiteDensity};
use crate::error::{Error, Result};

/// Default ring-size limit for the all-sector solve (largest block 3432).
pub const DEFAULT_MAX_EXACT_SITES: usize = 14;

/// Eigenpairs of one magnetization block.
#[derive(Debug, Clone)]
pub struct SectorSpectrum {
    basis: SectorBasis,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

impl SectorSpectrum {
    pub fn sector(&self) -> SectorIndex {
        self.basis.sector()
    }

    pub fn basis(&self) -> &SectorBasis {
        &self.basis
    }

    /// Ascending `βE` values.
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors as columns over [`Self::basis`].
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }
}

/// Diagonalizes one block of `βH` (allowed for rings beyond the all-sector cap).
pub fn solve_sector(
    params: &ChainParams,
    sector: SectorIndex,
    max_dim: usize,
) -> Result<SectorSpectrum> {
    let (basis, h) = sector_hamiltonian(params, sector, max_dim)?;
    let (eigenvalues, eigenvectors) = eigh_sorted(h);
    Ok(SectorSpectrum {
        basis,
        eigenvalues,
        eigenvectors,
    })
}

/// Full thermal state `e^{−βH}/Z`, stored block by block.
#[derive(Debug, Clone)]
pub struct ThermalState {
    params: ChainParams,
    spectra: Vec<SectorSpectrum>,
    /// Normalized density matrix restricted to each block.
    blocks: Vec<DMatrix<f64>>,
    log_partition: f64,
    min_energy: f64,
}

/// [`solve_thermal_with_cap`] at [`DEFAULT_MAX_EXACT_SITES`].
pub fn solve_thermal(params: &ChainParams) -> Result<ThermalState> {
    solve_thermal_with_cap(params, DEFAULT_MAX_EXACT_SITES)
}

pub fn solve_thermal_with_cap(params: &ChainParams, max_sites: usize) -> Result<ThermalState> {
    let n = params.n_sites();
    if n > max_sites {
        return Err(Error::Capacity {
            what: "ring size",
            size: n,
            limit: max_sites,
            hint: " for exact diagonalization; use the truncated method for larger rings",
        });
    }
    let spectra = (0..=n)
        .into_par_iter()
        .map(|k| solve_sector(params, SectorIndex::new(k), DEFAULT_MAX_SECTOR_DIM))
        .collect::<Result<Vec<_>>>()?;

    let min_energy = spectra
        .iter()
        .map(|s| s.eigenvalues.min())
        .fold(f64::INFINITY, f64::min);
    // Sum in a fixed order so the result does not depend on scheduling.
    let shifted_z: f64 = spectra
        .iter()
        .flat_map(|s| s.eigenvalues.iter())
        .map(|e| (-(e - min_energy)).exp())
        .sum();
    let log_partition = -min_energy + shifted_z.ln();

    let blocks = spectra
        .par_iter()
        .map(|s| {
            let weights = s.eigenvalues.map(|e| (-(e - min_energy)).exp() / shifted_z);
            let mut scaled = s.eigenvectors.clone();
            for (mut col, p) in scaled.column_iter_mut().zip(weights.iter()) {
                col *= *p;
            }
            scaled * s.eigenvectors.transpose()
        })
        .collect();

    Ok(ThermalState {
        params: *params,
        spectra,
        blocks,
        log_partition,
        min_energy,
    })
}

impl ThermalState {
    pub fn params(&self) -> &ChainParams {
        &self.params
    }

    pub fn spectra(&self) -> &[SectorSpectrum] {
        &self.spectra
    }

    /// `ln Z` with `Z = tr e^{−βH}`.
    pub fn log_partition(&self) -> f64 {
        self.log_partition
    }

    /// `ln(Z·e^{βε₀})`, comparable with the truncated partition function.
    pub fn shifted_log_partition(&self) -> f64 {
        self.log_partition + crate::chain::ground_state_energy(&self.params)
    }

    /// Lowest `βE` over all sectors.
    pub fn min_energy(&self) -> f64 {
        self.min_energy
    }

    /// Normalized Boltzmann weights, sector by sector.
    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        let shift = self.min_energy;
        let norm = (self.log_partition + shift).exp();
        self.spectra
            .iter()
            .flat_map(|s| s.eigenvalues.iter())
            .map(move |e| (-(e - shift)).exp() / norm)
    }

    fn check_pair(&self, m: usize, n: usize) -> Result<()> {
        self.params.check_site(m)?;
        self.params.check_site(n)?;
        if m == n {
            return Err(Error::InvalidPair(m));
        }
        Ok(())
    }
}

/// Thermal `u⁺, u⁻, w, z` from the spin correlation functions
/// `⟨(1±σᶻ_m)(1±σᶻ_n)⟩/4` and `⟨σ⁻_m σ⁺_n⟩`.
///
/// `σ⁺` raises a down spin and `σ⁻` lowers an up spin, so `σ⁻_m σ⁺_n` moves an
/// up spin from `m` to `n` and only couples states of one sector.
pub fn two_site_rdm_exact(state: &ThermalState, m: usize, n: usize) -> Result<TwoSiteDensity> {
    state.check_pair(m, n)?;
    let (mut u_plus, mut u_minus, mut w, mut z) = (0.0, 0.0, 0.0, 0.0);
    for (spectrum, rho) in state.spectra.iter().zip(&state.blocks) {
        let basis = &spectrum.basis;
        for (i, &s) in basis.states().iter().enumerate() {
            let p = rho[(i, i)];
            match (s.is_up(m), s.is_up(n)) {
                (true, true) => u_plus += p,
                (false, false) => u_minus += p,
                (false, true) => w += p,
                (true, false) => {
                    // ⟨s|ρ σ⁻_m σ⁺_n|s⟩ = ρ[s, s'] with s' = s moved m → n
                    let moved = s.flip(m).flip(n);
                    let j = basis
                        .index_of(moved)
                        .expect("moving a spin stays in the sector");
                    z += rho[(i, j)];
                }
            }
        }
    }
    TwoSiteDensity::new(u_plus, u_minus, w, z)
}

/// Full `4×4` partial trace over every site except `m` and `n`, without assuming
/// any structure of the result.
pub fn two_site_rdm_full(state: &ThermalState, m: usize, n: usize) -> Result<TwoQubitDensity> {
    state.check_pair(m, n)?;
    // qubit label 0 ≡ up, index = 2·label(m) + label(n)
    let local =
        |s: BasisState| -> usize { 2 * usize::from(!s.is_up(m)) + usize::from(!s.is_up(n)) };
    let with_local = |s: BasisState, idx: usize| -> BasisState {
        let mut bits = s.0 & !(1 << m) & !(1 << n);
        if idx & 2 == 0 {
            bits |= 1 << m;
        }
        if idx & 1 == 0 {
            bits |= 1 << n;
        }
        BasisState(bits)
    };

    let mut out = Matrix4::<Complex64>::zeros();
    for (spectrum, rho) in state.spectra.iter().zip(&state.blocks) {
        let basis = &spectrum.basis;
        for (i, &s) in basis.states().iter().enumerate() {
            let row = local(s);
            for col in 0..4 {
                if let Some(j) = basis.index_of(with_local(s, col)) {
                    out[(row, col)] += Complex64::new(rho[(i, j)], 0.0);
                }
            }
        }
    }
    TwoQubitDensity::new(out)
}

/// The X-form density as a `4×4` Hermitian operator in `|00⟩,|01⟩,|10⟩,|11⟩`.
pub fn rdm_as_matrix(d: &TwoSiteDensity) -> HermitianOperator {
    let m = d.to_matrix();
    HermitianOperator::new(DMatrix::from_fn(4, 4, |r, c| m[(r, c)]))
        .expect("X-form matrix is symmetric")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::full_hamiltonian;
    use crate::entanglement::{is_x_form, x_form_parameters};

    fn params(n: usize, bj: f64, bmu: f64) -> ChainParams {
        ChainParams::new(n, bj, bmu).unwrap()
    }

    #[test]
    fn weights_are_normalized() {
        let state = solve_thermal(&params(3, 1.0, 1.0)).unwrap();
        let total: f64 = state.weights().sum();
        assert!((total - 1.0).abs() < 1e-14);
        assert_eq!(state.weights().count(), 8);
    }

    #[test]
    fn log_partition_matches_unblocked_diagonalization() {
        let p = params(4, 0.5, 2.0);
        let state = solve_thermal(&p).unwrap();
        let dense = HermitianOperator::from_real(&full_hamiltonian(&p).unwrap())
            .unwrap()
            .eigenvalues();
        let z: f64 = dense.iter().map(|e| (-e).exp()).sum();
        assert!((state.log_partition() - z.ln()).abs() < 1e-10);
    }

    #[test]
    fn spectra_scale_linearly_with_beta() {
        let s1 = solve_thermal(&params(5, 0.4, 0.7)).unwrap();
        let s2 = solve_thermal(&params(5, 0.8, 1.4)).unwrap();
        for (a, b) in s1.spectra().iter().zip(s2.spectra()) {
            for (x, y) in a.eigenvalues().iter().zip(b.eigenvalues().iter()) {
                assert!((2.0 * x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn eigenpairs_are_accurate_and_orthonormal() {
        let p = params(8, 0.6, 3.0);
        let state = solve_thermal(&p).unwrap();
        for s in state.spectra() {
            let (_, h) = sector_hamiltonian(&p, s.sector(), DEFAULT_MAX_SECTOR_DIM).unwrap();
            let v = s.eigenvectors();
            let residual = &h * v - v * DMatrix::from_diagonal(s.eigenvalues());
            assert!(residual.column_iter().all(|c| c.norm() < 1e-10));
            let gram = v.transpose() * v;
            let dim = gram.nrows();
            assert!((gram - DMatrix::identity(dim, dim)).amax() < 1e-10);
        }
    }

    #[test]
    fn strong_field_freezes_all_spins_down() {
        let state = solve_thermal(&params(4, 1.0, 50.0)).unwrap();
        let d = two_site_rdm_exact(&state, 0, 2).unwrap();
        assert!((d.u_minus - 1.0).abs() < 1e-12);
        assert!(d.u_plus.abs() < 1e-12 && d.w.abs() < 1e-12 && d.z.abs() < 1e-12);
    }

    #[test]
    fn infinite_temperature_is_maximally_mixed() {
        let p = ChainParams::new_unchecked(5, 1e-12, 0.0);
        let state = solve_thermal(&p).unwrap();
        let d = two_site_rdm_exact(&state, 1, 3).unwrap();
        for x in [d.u_plus, d.u_minus, d.w] {
            assert!((x - 0.25).abs() < 1e-10);
        }
        assert!(d.z.abs() < 1e-10);
    }

    #[test]
    fn partial_trace_agrees_with_correlation_functions() {
        let p = params(6, 0.6, 1.5);
        let state = solve_thermal(&p).unwrap();
        for m in 0..6 {
            for n in 0..6 {
                if m == n {
                    continue;
                }
                let full = two_site_rdm_full(&state, m, n).unwrap();
                assert!(is_x_form(&full, 1e-12), "({m},{n})");
                let from_full = x_form_parameters(&full, 1e-12).unwrap();
                let corr = two_site_rdm_exact(&state, m, n).unwrap();
                assert!(from_full.max_abs_diff(&corr) < 1e-12);
            }
        }
    }

    #[test]
    fn invalid_pairs() {
        let state = solve_thermal(&params(4, 1.0, 1.0)).unwrap();
        assert_eq!(two_site_rdm_exact(&state, 2, 2), Err(Error::InvalidPair(2)));
        assert!(matches!(
            two_site_rdm_exact(&state, 0, 4),
            Err(Error::SiteOutOfRange { .. })
        ));
        assert!(two_site_rdm_full(&state, 1, 1).is_err());
    }

    #[test]
    fn capacity_limit_suggests_truncation() {
        let err = solve_thermal(&params(15, 1.0, 1.0)).unwrap_err();
        assert!(err.is_capacity());
        assert!(err.to_string().contains("truncated"), "{err}");
        assert!(solve_thermal_with_cap(&params(5, 1.0, 1.0), 4).is_err());
    }

    #[test]
    fn single_sector_beyond_the_cap() {
        let p = params(20, 0.6, 3.0);
        let s = solve_sector(&p, SectorIndex::new(1), DEFAULT_MAX_SECTOR_DIM).unwrap();
        // lowest one-magnon level: βε₀ + 2βμB
        assert!((s.eigenvalues()[0] - (-72.0 + 6.0)).abs() < 1e-10);
    }

    #[test]
    fn rdm_matrix_examples() {
        let d = TwoSiteDensity::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let m = rdm_as_matrix(&d);
        assert_eq!(m.entry(0, 0).re, 1.0);
        assert_eq!(m.as_matrix().iter().filter(|z| z.norm() > 0.0).count(), 1);

        let bell = rdm_as_matrix(&TwoSiteDensity::new(0.0, 0.0, 0.5, 0.5).unwrap());
        let sq = bell.as_matrix() * bell.as_matrix();
        assert!((sq - bell.as_matrix()).norm() < 1e-15);
        let ev = bell.eigenvalues();
        assert!((ev[3] - 1.0).abs() < 1e-14 && ev[..3].iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn gaussian_parameter_set_matrix() {
        // N = 20, βJ = 0.6, βμB = 3, d = 1
        let w = 1.0 / (20.0 + (8.0 * std::f64::consts::PI * 0.6).sqrt() * 6f64.exp());
        let z = w * (-1.0f64 / 4.8).exp();
        let d = TwoSiteDensity::new(0.0, 1.0 - 2.0 * w, w, z).unwrap();
        let m = rdm_as_matrix(&d);
        assert!((m.entry(1, 2).re - 5.117_410_586_7e-4).abs() < 1e-13);
        assert_eq!(m.entry(1, 2), m.entry(2, 1));
    }
}
