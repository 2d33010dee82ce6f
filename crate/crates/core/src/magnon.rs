//! Ground state plus one-magnon band: the low-temperature truncation.
//!
//! Thermal averages keep only the all-down state `|ε₀⟩` and the Fourier modes
//! `|ψ_s⟩ = N^{-1/2} Σ_k e^{2πisk/N}|k⟩` with
//! `βλ_s = βε₀ + 2βμB + 8βJ·sin²(πs/N)`. Every sum over `s` is carried out
//! exactly; the integral and saddle-point versions live in
//! [`crate::asymptotics`].
//!
//! Weights are always taken relative to the ground state,
//! `q_s = e^{−β(λ_s − ε₀)}`, so nothing overflows for large `βμB`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chain::{
    binomial, ground_state_energy, BasisState, ChainParams, HermitianOperator, MAX_FULL_SPACE_SITES,
};
use crate::entanglement::TwoSiteDensity;
use crate::error::{Error, Result};

/// `8 sin²(πs/N)`, the dispersion in units of `βJ`.
fn dispersion(n_sites: usize, s: usize) -> f64 {
    let x = (PI * s as f64 / n_sites as f64).sin();
    8.0 * x * x
}

/// The `N` one-magnon energies `βλ_s`, `s = 0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnonBand {
    params: ChainParams,
    energies: Vec<f64>,
}

impl MagnonBand {
    pub fn new(params: &ChainParams) -> Self {
        let n = params.n_sites();
        let base = ground_state_energy(params) + 2.0 * params.beta_mub();
        let energies = (0..n)
            .map(|s| base + params.beta_j() * dispersion(n, s))
            .collect();
        Self {
            params: *params,
            energies,
        }
    }

    pub fn params(&self) -> &ChainParams {
        &self.params
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn momenta(&self) -> std::ops::Range<usize> {
        0..self.energies.len()
    }

    /// `e^{−β(λ_s − ε₀)}` for every `s`.
    pub fn relative_weights(&self) -> Vec<f64> {
        let n = self.params.n_sites();
        (0..n)
            .map(|s| {
                (-2.0 * self.params.beta_mub() - self.params.beta_j() * dispersion(n, s)).exp()
            })
            .collect()
    }
}

/// `βλ_s = βε₀ + 2βμB + 8βJ sin²(πs/N)`.
pub fn magnon_energy(params: &ChainParams, s: usize) -> Result<f64> {
    let n = params.n_sites();
    if s >= n {
        return Err(Error::param(
            "momentum",
            format!("s = {s} must lie in 0..{n}"),
        ));
    }
    Ok(ground_state_energy(params) + 2.0 * params.beta_mub() + params.beta_j() * dispersion(n, s))
}

/// `βH` on the single-flip states `|k⟩`:
/// `βH|k⟩ = −2βJ(|k−1⟩ + |k+1⟩) + β(J(4−N) + μB(2−N))|k⟩`.
pub fn one_magnon_hamiltonian(params: &ChainParams) -> HermitianOperator {
    let n = params.n_sites();
    let nf = n as f64;
    let diag = params.beta_j() * (4.0 - nf) + params.beta_mub() * (2.0 - nf);
    let mut h = DMatrix::zeros(n, n);
    for k in 0..n {
        h[(k, k)] = diag;
        h[((k + 1) % n, k)] = -2.0 * params.beta_j();
        h[((k + n - 1) % n, k)] = -2.0 * params.beta_j();
    }
    HermitianOperator::from_real(&h).expect("circulant hopping matrix is symmetric")
}

/// Coefficients `c_k = e^{2πisk/N}/√N` of `|ψ_s⟩` over `|k⟩`.
pub fn fourier_coefficients(n_sites: usize, s: usize) -> Vec<Complex64> {
    let norm = 1.0 / (n_sites as f64).sqrt();
    (0..n_sites)
        .map(|k| Complex64::from_polar(norm, 2.0 * PI * (s * k % n_sites) as f64 / n_sites as f64))
        .collect()
}

fn full_space(n_sites: usize) -> Result<Vec<Complex64>> {
    if n_sites > MAX_FULL_SPACE_SITES {
        return Err(Error::Capacity {
            what: "ring size",
            size: n_sites,
            limit: MAX_FULL_SPACE_SITES,
            hint: " for full-space state vectors",
        });
    }
    Ok(vec![Complex64::new(0.0, 0.0); 1 << n_sites])
}

/// `|ψ_s⟩` as a vector over the whole `2^N` space (indexed by bit pattern).
pub fn one_magnon_state(n_sites: usize, s: usize) -> Result<Vec<Complex64>> {
    let mut psi = full_space(n_sites)?;
    for (k, c) in fourier_coefficients(n_sites, s).into_iter().enumerate() {
        psi[1 << k] = c;
    }
    Ok(psi)
}

/// Uniform superposition of all two-up states, the lowest two-magnon state.
pub fn flat_two_magnon_state(n_sites: usize) -> Result<Vec<Complex64>> {
    let mut psi = full_space(n_sites)?;
    let amp = Complex64::new(1.0 / (binomial(n_sites, 2) as f64).sqrt(), 0.0);
    for s in crate::chain::enumerate_sector(n_sites, 2) {
        psi[s.0 as usize] = amp;
    }
    Ok(psi)
}

/// `β(ε₀ + 4μB)`, the energy of [`flat_two_magnon_state`].
pub fn flat_two_magnon_energy(params: &ChainParams) -> f64 {
    ground_state_energy(params) + 4.0 * params.beta_mub()
}

/// `Σ_s e^{−8βJ sin²(πs/N)}`, summed exactly.
pub fn band_sum(n_sites: usize, beta_j: f64) -> f64 {
    (0..n_sites)
        .map(|s| (-beta_j * dispersion(n_sites, s)).exp())
        .sum()
}

/// `Σ_s e^{2πids/N − 8βJ sin²(πs/N)}`, summed exactly.
pub fn band_fourier_sum(n_sites: usize, beta_j: f64, distance: usize) -> Complex64 {
    (0..n_sites)
        .map(|s| {
            let phase = 2.0 * PI * ((distance * s) % n_sites) as f64 / n_sites as f64;
            Complex64::from_polar((-beta_j * dispersion(n_sites, s)).exp(), phase)
        })
        .sum()
}

/// `ln(Z·e^{βε₀}) = ln(1 + e^{−2βμB}·Σ_s e^{−8βJ sin²(πs/N)})` with the
/// ground state and one-magnon band only.
pub fn truncated_partition(params: &ChainParams) -> Result<f64> {
    params.require_field()?;
    Ok(shifted_partition(params).ln())
}

fn shifted_partition(params: &ChainParams) -> f64 {
    1.0 + (-2.0 * params.beta_mub()).exp() * band_sum(params.n_sites(), params.beta_j())
}

/// Two-site density at separation `distance` from the truncated ensemble.
///
/// The ground state enters `u⁻` with its own weight `e^{−βε₀}`: it is the only
/// state contributing `⟨(1−σᶻ_m)(1−σᶻ_n)⟩/4 = 1` outside the band.
pub fn truncated_rdm(params: &ChainParams, distance: usize) -> Result<TwoSiteDensity> {
    params.require_field()?;
    params.check_distance(distance)?;
    let n = params.n_sites();
    let nf = n as f64;
    let field = (-2.0 * params.beta_mub()).exp();
    let band = field * band_sum(n, params.beta_j());
    let z_rel = 1.0 + band;

    let w = band / (nf * z_rel);
    let u_minus = (1.0 + (1.0 - 2.0 / nf) * band) / z_rel;
    let coherence = field * band_fourier_sum(n, params.beta_j(), distance) / (nf * z_rel);
    if coherence.im.abs() >= 1e-10 {
        return Err(Error::Numerical(format!(
            "coherence has imaginary part {:e}",
            coherence.im
        )));
    }
    TwoSiteDensity::new(0.0, u_minus, w, coherence.re)
}

/// How much Boltzmann weight the truncation keeps, and the weight of the first
/// state it drops.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationReport {
    pub retained_weight: f64,
    pub leading_neglected_weight: f64,
}

/// Compares the retained ground + one-magnon weight with the flat two-magnon
/// state at `β(ε₀ + 4μB)`, both normalized by their sum.
///
/// The rest of the two-magnon band lies higher, so the neglected weight is a
/// lower bound on what the truncation discards.
pub fn truncation_weight(params: &ChainParams) -> TruncationReport {
    let retained = shifted_partition(params);
    let neglected = (-4.0 * params.beta_mub()).exp();
    let total = retained + neglected;
    TruncationReport {
        retained_weight: retained / total,
        leading_neglected_weight: neglected / total,
    }
}

/// Lowers the up spin at `from` and raises the spin at `to` on a full-space
/// vector (`σ⁻_from σ⁺_to`).
pub fn apply_hop(psi: &[Complex64], from: usize, to: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
    for (b, amp) in psi.iter().enumerate() {
        let s = BasisState(b as u64);
        if s.is_up(from) && !s.is_up(to) {
            out[s.flip(from).flip(to).0 as usize] += amp;
        }
    }
    out
}
