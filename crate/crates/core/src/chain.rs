//! Ring geometry, occupation basis and the dimensionless Hamiltonian.
//!
//! Everything here works with the products `βJ` and `βμB` (with `k_B = μ = 1`),
//! so the operator that is built is `βH` directly:
//!
//! ```text
//! βH = βJ·N − 2βJ·Σ_l P_{l,l+1} + βμB·Σ_l σᶻ_l      (site N ≡ site 0)
//! ```
//!
//! A basis state is an `N`-bit occupation pattern; bit `k` set means the spin at
//! site `k` points up (`σᶻ = +1`, qubit label `|0⟩`).

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default limit on the dimension of a single magnetization block.
pub const DEFAULT_MAX_SECTOR_DIM: usize = 20_000;

/// Largest ring for which the unblocked `2^N` space is ever materialized.
pub const MAX_FULL_SPACE_SITES: usize = 16;

/// Largest ring representable by [`BasisState`].
pub const MAX_SITES: usize = 63;

/// Dimensionless description of a periodic Heisenberg ring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    n_sites: usize,
    beta_j: f64,
    beta_mub: f64,
}

impl ChainParams {
    pub fn new(n_sites: usize, beta_j: f64, beta_mub: f64) -> Result<Self> {
        if n_sites < 3 {
            return Err(Error::param(
                "n_sites",
                format!("a ring needs at least 3 sites, got {n_sites}"),
            ));
        }
        if !beta_j.is_finite() || beta_j <= 0.0 {
            return Err(Error::param(
                "beta_j",
                format!("ferromagnetic coupling must be finite and > 0, got {beta_j}"),
            ));
        }
        if !beta_mub.is_finite() || beta_mub < 0.0 {
            return Err(Error::param(
                "beta_mub",
                format!("field must be finite and >= 0, got {beta_mub}"),
            ));
        }
        Ok(Self {
            n_sites,
            beta_j,
            beta_mub,
        })
    }

    /// Bypasses validation; used for degenerate limits (zero couplings) in
    /// internal checks.
    #[cfg(test)]
    pub(crate) fn new_unchecked(n_sites: usize, beta_j: f64, beta_mub: f64) -> Self {
        Self {
            n_sites,
            beta_j,
            beta_mub,
        }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn beta_j(&self) -> f64 {
        self.beta_j
    }

    pub fn beta_mub(&self) -> f64 {
        self.beta_mub
    }

    /// The truncated and Gaussian layers only make sense with a polarizing field.
    pub fn require_field(&self) -> Result<()> {
        if self.beta_mub > 0.0 {
            Ok(())
        } else {
            Err(Error::param(
                "beta_mub",
                "the one-magnon truncation requires beta_mub > 0",
            ))
        }
    }

    pub fn check_site(&self, site: usize) -> Result<()> {
        if site < self.n_sites {
            Ok(())
        } else {
            Err(Error::SiteOutOfRange {
                site,
                n_sites: self.n_sites,
            })
        }
    }

    pub fn check_distance(&self, distance: usize) -> Result<()> {
        if (1..self.n_sites).contains(&distance) {
            Ok(())
        } else {
            Err(Error::DistanceOutOfRange {
                distance,
                min: 1,
                max: self.n_sites - 1,
            })
        }
    }

    /// Same couplings on a different ring size.
    pub fn with_n_sites(&self, n_sites: usize) -> Result<Self> {
        Self::new(n_sites, self.beta_j, self.beta_mub)
    }
}

/// Occupation pattern of the ring; bit `k` set ⇔ spin `k` is up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisState(pub u64);

impl BasisState {
    pub fn is_up(self, site: usize) -> bool {
        self.0 >> site & 1 == 1
    }

    pub fn n_up(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Eigenvalue of `2Sᶻ = Σ σᶻ_l`.
    pub fn magnetization(self, n_sites: usize) -> i64 {
        2 * self.n_up() as i64 - n_sites as i64
    }

    pub fn flip(self, site: usize) -> Self {
        BasisState(self.0 ^ (1 << site))
    }

    /// Cyclic translation `|s₀, s₁, …, s_{N−1}⟩ → |s₁, …, s_{N−1}, s₀⟩`.
    pub fn translate(self, n_sites: usize) -> Self {
        let mask = full_mask(n_sites);
        let bits = self.0 & mask;
        BasisState(((bits >> 1) | ((bits & 1) << (n_sites - 1))) & mask)
    }

    /// Site reversal `|s₀, …, s_{N−1}⟩ → |s_{N−1}, …, s₀⟩`.
    pub fn reflect(self, n_sites: usize) -> Self {
        let bits = self.0 & full_mask(n_sites);
        BasisState(bits.reverse_bits() >> (64 - n_sites))
    }

    pub fn to_bit_string(self, n_sites: usize) -> String {
        (0..n_sites)
            .rev()
            .map(|k| if self.is_up(k) { '1' } else { '0' })
            .collect()
    }
}

fn full_mask(n_sites: usize) -> u64 {
    if n_sites >= 64 {
        u64::MAX
    } else {
        (1u64 << n_sites) - 1
    }
}

/// Fixed-magnetization block, labelled by the number of up spins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SectorIndex {
    pub n_up: usize,
}

impl SectorIndex {
    pub fn new(n_up: usize) -> Self {
        Self { n_up }
    }

    pub fn dimension(&self, n_sites: usize) -> usize {
        binomial(n_sites, self.n_up)
    }

    pub fn check(&self, n_sites: usize) -> Result<()> {
        if self.n_up <= n_sites {
            Ok(())
        } else {
            Err(Error::param(
                "sector",
                format!("n_up = {} exceeds the {} sites", self.n_up, n_sites),
            ))
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All patterns with `n_up` bits set among the low `n_sites` bits, ascending.
pub fn enumerate_sector(n_sites: usize, n_up: usize) -> Vec<BasisState> {
    assert!(
        n_sites <= MAX_SITES,
        "at most {MAX_SITES} sites are supported"
    );
    if n_up > n_sites {
        return Vec::new();
    }
    if n_up == 0 {
        return vec![BasisState(0)];
    }
    let len = binomial(n_sites, n_up);
    let mut out = Vec::with_capacity(len);
    // Gosper's hack: next larger integer with the same popcount.
    let mut v: u64 = (1 << n_up) - 1;
    for _ in 0..len {
        out.push(BasisState(v));
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
    out
}

/// Ordered basis of one magnetization block with reverse lookup.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorBasis {
    n_sites: usize,
    sector: SectorIndex,
    states: Vec<BasisState>,
}

impl SectorBasis {
    pub fn new(n_sites: usize, sector: SectorIndex) -> Result<Self> {
        sector.check(n_sites)?;
        if n_sites > MAX_SITES {
            return Err(Error::Capacity {
                what: "ring size",
                size: n_sites,
                limit: MAX_SITES,
                hint: "",
            });
        }
        Ok(Self {
            n_sites,
            sector,
            states: enumerate_sector(n_sites, sector.n_up),
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn sector(&self) -> SectorIndex {
        self.sector
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, state: BasisState) -> Option<usize> {
        self.states.binary_search(&state).ok()
    }
}

/// Dense Hermitian matrix with complex entries.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: DMatrix<Complex64>,
}

impl HermitianOperator {
    /// Maximum tolerated `|a_ij − conj(a_ji)|`.
    pub const TOLERANCE: f64 = 1e-12;

    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Numerical(format!(
                "operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let defect = hermiticity_defect(&matrix);
        if defect > Self::TOLERANCE {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self { matrix })
    }

    pub fn from_real(matrix: &DMatrix<f64>) -> Result<Self> {
        Self::new(matrix.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    /// True when every imaginary part vanishes.
    pub fn is_real(&self) -> bool {
        self.matrix.iter().all(|z| z.im == 0.0)
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut values: Vec<f64> = SymmetricEigen::new(self.matrix.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        values.sort_by(f64::total_cmp);
        values
    }
}

pub(crate) fn hermiticity_defect(matrix: &DMatrix<Complex64>) -> f64 {
    let n = matrix.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Real symmetric eigendecomposition with eigenpairs sorted by ascending value.
pub(crate) fn eigh_sorted(matrix: DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = matrix.nrows();
    let eig = SymmetricEigen::new(matrix);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// `βε₀ = −(βJ + βμB)·N`, the energy of the all-down state.
pub fn ground_state_energy(params: &ChainParams) -> f64 {
    -(params.beta_j + params.beta_mub) * params.n_sites as f64
}

/// Diagonal of `βH` on one occupation pattern.
fn diagonal_energy(params: &ChainParams, state: BasisState) -> f64 {
    let n = params.n_sites;
    let field: f64 = (0..n)
        .map(|l| if state.is_up(l) { 1.0 } else { -1.0 })
        .sum();
    let aligned = (0..n)
        .filter(|&l| state.is_up(l) == state.is_up((l + 1) % n))
        .count();
    params.beta_j * n as f64 - 2.0 * params.beta_j * aligned as f64 + params.beta_mub * field
}

/// Calls `f(target, amplitude)` for every off-diagonal term `⟨target|βH|state⟩`.
fn for_each_hop(params: &ChainParams, state: BasisState, mut f: impl FnMut(BasisState, f64)) {
    let n = params.n_sites;
    for l in 0..n {
        let r = (l + 1) % n;
        if state.is_up(l) != state.is_up(r) {
            f(state.flip(l).flip(r), -2.0 * params.beta_j);
        }
    }
}

/// `βH` on one magnetization block, together with its basis.
pub fn sector_hamiltonian(
    params: &ChainParams,
    sector: SectorIndex,
    max_dim: usize,
) -> Result<(SectorBasis, DMatrix<f64>)> {
    sector.check(params.n_sites)?;
    let dim = sector.dimension(params.n_sites);
    if dim > max_dim {
        return Err(Error::Capacity {
            what: "sector dimension",
            size: dim,
            limit: max_dim,
            hint: "",
        });
    }
    let basis = SectorBasis::new(params.n_sites, sector)?;
    let mut h = DMatrix::zeros(dim, dim);
    for (i, &state) in basis.states().iter().enumerate() {
        h[(i, i)] = diagonal_energy(params, state);
        for_each_hop(params, state, |target, amp| {
            let j = basis
                .index_of(target)
                .expect("hopping conserves the number of up spins");
            h[(j, i)] += amp;
        });
    }
    Ok((basis, h))
}

/// `βH` restricted to `sector` as a Hermitian operator, capped at
/// [`DEFAULT_MAX_SECTOR_DIM`].
pub fn build_dimensionless_hamiltonian(
    params: &ChainParams,
    sector: SectorIndex,
) -> Result<HermitianOperator> {
    let (_, h) = sector_hamiltonian(params, sector, DEFAULT_MAX_SECTOR_DIM)?;
    HermitianOperator::from_real(&h)
}

fn check_full_space(n_sites: usize) -> Result<()> {
    if n_sites > MAX_FULL_SPACE_SITES {
        Err(Error::Capacity {
            what: "ring size",
            size: n_sites,
            limit: MAX_FULL_SPACE_SITES,
            hint: " for the unblocked Hilbert space",
        })
    } else {
        Ok(())
    }
}

/// Unblocked `2^N × 2^N` matrix of `βH`, indexed by the raw bit pattern.
pub fn full_hamiltonian(params: &ChainParams) -> Result<DMatrix<f64>> {
    check_full_space(params.n_sites)?;
    let dim = 1usize << params.n_sites;
    let mut h = DMatrix::zeros(dim, dim);
    for b in 0..dim {
        let state = BasisState(b as u64);
        h[(b, b)] = diagonal_energy(params, state);
        for_each_hop(params, state, |target, amp| {
            h[(target.0 as usize, b)] += amp
        });
    }
    Ok(h)
}

/// Matrix-free `βH|ψ⟩` on the full space (amplitudes indexed by bit pattern).
pub fn apply_hamiltonian(params: &ChainParams, psi: &[Complex64]) -> Result<Vec<Complex64>> {
    check_full_space(params.n_sites)?;
    let dim = 1usize << params.n_sites;
    if psi.len() != dim {
        return Err(Error::Numerical(format!(
            "state has {} amplitudes, expected 2^{} = {dim}",
            psi.len(),
            params.n_sites
        )));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for (b, &amp) in psi.iter().enumerate() {
        if amp == Complex64::new(0.0, 0.0) {
            continue;
        }
        let state = BasisState(b as u64);
        out[b] += amp * diagonal_energy(params, state);
        for_each_hop(params, state, |target, h| out[target.0 as usize] += amp * h);
    }
    Ok(out)
}

/// `‖βH|ψ⟩ − βE|ψ⟩‖` on the full space.
pub fn eigen_residual(params: &ChainParams, psi: &[Complex64], energy: f64) -> Result<f64> {
    let h_psi = apply_hamiltonian(params, psi)?;
    Ok(h_psi
        .iter()
        .zip(psi)
        .map(|(hp, p)| (hp - p * energy).norm_sqr())
        .sum::<f64>()
        .sqrt())
}
