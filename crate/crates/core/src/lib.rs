//! Pairwise thermal entanglement in the ferromagnetic Heisenberg ring
//!
//! ```text
//! H = −J Σ_l σ_l·σ_{l+1} + μB Σ_l σᶻ_l      (periodic, J > 0)
//! ```
//!
//! at low temperature, computed three ways:
//!
//! - [`oracle`]: exact thermal state by dense diagonalization of each
//!   magnetization block, for rings up to a few dozen thousand states per block;
//! - [`magnon`]: the ground state plus the one-magnon band with exact sums;
//! - [`asymptotics`]: the saddle-point closed form, a Gaussian concurrence
//!   profile `C(d) = C₀·e^{−d²/(2l²)}`.
//!
//! Concurrence itself lives in [`entanglement`], both as the general Wootters
//! procedure and as the closed form for X-shaped states. All inputs are the
//! dimensionless products `βJ` and `βμB` (`k_B = μ = 1`).

pub mod asymptotics;
pub mod chain;
pub mod entanglement;
pub mod error;
pub mod magnon;
pub mod oracle;
pub mod profile;

pub use asymptotics::{
    entanglement_length, gaussian_profile, gaussian_rdm, saddle_band_sum, GaussianProfileParams,
};
pub use chain::{
    build_dimensionless_hamiltonian, enumerate_sector, ground_state_energy, BasisState,
    ChainParams, HermitianOperator, SectorIndex,
};
pub use entanglement::{
    concurrence_general, concurrence_xstate, is_x_form, spin_flip, TwoQubitDensity, TwoSiteDensity,
};
pub use error::{Error, Result};
pub use magnon::{
    magnon_energy, one_magnon_hamiltonian, truncated_partition, truncated_rdm, truncation_weight,
    MagnonBand, TruncationReport,
};
pub use oracle::{
    rdm_as_matrix, solve_thermal, solve_thermal_with_cap, two_site_rdm_exact, two_site_rdm_full,
    SectorSpectrum, ThermalState,
};
pub use profile::{ConcurrenceProfile, Method, ProfilePoint};
