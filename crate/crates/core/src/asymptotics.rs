//! Closed forms for large rings at low temperature.
//!
//! Replacing the band sums by Gaussian integrals around `s = 0` gives
//!
//! ```text
//! Σ_s e^{−8βJ sin²(πs/N)}            ≈ N/√(8πβJ)
//! Σ_s e^{2πids/N − 8βJ sin²(πs/N)}   ≈ N/√(8πβJ) · e^{−d²/(8βJ)}
//! ```
//!
//! so the pair density is Gaussian in the separation,
//! `C(d) = C₀·e^{−d²/(2l²)}` with `C₀ = 2/(N + √(8πβJ)e^{2βμB})` and
//! `l = 2√(βJ)`. The separation entering the exponent is the ring distance
//! `min(d, N − d)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::chain::ChainParams;
use crate::entanglement::TwoSiteDensity;
use crate::error::{Error, Result};
use crate::profile::{ConcurrenceProfile, Method, ProfilePoint};

/// Below this `2βμB` the two-magnon states are no longer negligible.
pub const MIN_FIELD_GAP: f64 = 3.0;

/// Below this `βJ` the band is too flat for the Gaussian integral.
pub const MIN_BETA_J: f64 = 0.1;

/// Amplitude and width of the Gaussian concurrence profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianProfileParams {
    pub amplitude: f64,
    pub length: f64,
}

impl GaussianProfileParams {
    pub fn new(params: &ChainParams) -> Result<Self> {
        params.require_field()?;
        Ok(Self {
            amplitude: amplitude(params),
            length: entanglement_length(params),
        })
    }

    pub fn concurrence_at(&self, ring_distance: f64) -> f64 {
        self.amplitude * (-ring_distance * ring_distance / (2.0 * self.length * self.length)).exp()
    }
}

/// `N/√(8πβJ)`.
pub fn saddle_band_sum(params: &ChainParams) -> f64 {
    params.n_sites() as f64 / (8.0 * PI * params.beta_j()).sqrt()
}

/// `1/(N + √(8πβJ)·e^{2βμB})`, written so that large fields underflow to zero
/// instead of overflowing.
fn diagonal_weight(params: &ChainParams) -> f64 {
    let field = (-2.0 * params.beta_mub()).exp();
    field / (params.n_sites() as f64 * field + (8.0 * PI * params.beta_j()).sqrt())
}

/// `C₀ = 2/(N + √(8πβJ)·e^{2βμB})`.
pub fn amplitude(params: &ChainParams) -> f64 {
    2.0 * diagonal_weight(params)
}

/// `l = 2√(βJ)`, in lattice spacings.
pub fn entanglement_length(params: &ChainParams) -> f64 {
    2.0 * params.beta_j().sqrt()
}

/// `min(d, N − d)`.
pub fn ring_distance(n_sites: usize, distance: usize) -> usize {
    let d = distance % n_sites;
    d.min(n_sites - d)
}

/// Closed-form pair density at separation `distance`.
pub fn gaussian_rdm(params: &ChainParams, distance: usize) -> Result<TwoSiteDensity> {
    params.require_field()?;
    params.check_distance(distance)?;
    let w = diagonal_weight(params);
    let d = ring_distance(params.n_sites(), distance) as f64;
    let z = w * (-d * d / (8.0 * params.beta_j())).exp();
    TwoSiteDensity::new(0.0, 1.0 - 2.0 * w, w, z)
}

/// `C(d) = C₀·e^{−d_ring²/(2l²)}` for each requested distance.
///
/// `d = 0` is accepted as the formal peak of the curve.
pub fn gaussian_profile(params: &ChainParams, distances: &[usize]) -> Result<ConcurrenceProfile> {
    let g = GaussianProfileParams::new(params)?;
    let n = params.n_sites();
    let points = distances
        .iter()
        .map(|&d| {
            if d >= n {
                return Err(Error::DistanceOutOfRange {
                    distance: d,
                    min: 0,
                    max: n - 1,
                });
            }
            Ok(ProfilePoint {
                d,
                c: g.concurrence_at(ring_distance(n, d) as f64),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ConcurrenceProfile::new(*params, Method::Gaussian, points)
}

/// Human-readable notes when the truncation or the saddle point is doubtful.
pub fn validity_warnings(params: &ChainParams) -> Vec<String> {
    let mut out = Vec::new();
    let gap = 2.0 * params.beta_mub();
    if gap < MIN_FIELD_GAP {
        out.push(format!(
            "2*beta_mub = {gap} < {MIN_FIELD_GAP}: multi-magnon states are not negligible"
        ));
    }
    if params.beta_j() < MIN_BETA_J {
        out.push(format!(
            "beta_j = {} < {MIN_BETA_J}: the band is too flat for the Gaussian closed form",
            params.beta_j()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::concurrence_xstate;
    use crate::magnon::{band_sum, truncated_rdm};

    fn params(n: usize, bj: f64, bmu: f64) -> ChainParams {
        ChainParams::new(n, bj, bmu).unwrap()
    }

    /// Modified Bessel function `I_k(x)` by trapezoidal quadrature of
    /// `(1/π)∫₀^π e^{x cos θ} cos(kθ) dθ`, exponentially convergent for a
    /// periodic integrand.
    fn bessel_i(k: usize, x: f64) -> f64 {
        let steps = 4000;
        let h = PI / steps as f64;
        let f = |t: f64| (x * t.cos()).exp() * (k as f64 * t).cos();
        let inner: f64 = (1..steps).map(|i| f(i as f64 * h)).sum();
        (inner + 0.5 * (f(0.0) + f(PI))) * h / PI
    }

    #[test]
    fn saddle_sum_examples() {
        let big = params(100, 1.0, 1.0);
        assert!((saddle_band_sum(&big) - 19.947_114_020_071_6).abs() < 1e-9);
        let doubled = params(200, 1.0, 1.0);
        assert_eq!(saddle_band_sum(&doubled), 2.0 * saddle_band_sum(&big));
        assert!((saddle_band_sum(&params(20, 0.6, 3.0)) - 5.150_322_693_6).abs() < 1e-9);
    }

    #[test]
    fn exact_band_sum_is_a_bessel_function() {
        // Σ_s e^{−8βJ sin²(πs/N)} = N e^{−4βJ} I₀(4βJ) up to aliasing terms
        // ~ I_N(4βJ), negligible here.
        let exact = band_sum(100, 1.0);
        let bessel = 100.0 * (-4.0f64).exp() * bessel_i(0, 4.0);
        assert!((exact - bessel).abs() < 1e-9);
        // The leading saddle correction is 1 + 1/(32βJ): about 3.8% at βJ = 1.
        let rel = exact / saddle_band_sum(&params(100, 1.0, 1.0)) - 1.0;
        assert!((0.037..0.039).contains(&rel), "{rel}");
        // and it shrinks for stiffer bands
        let rel_stiff = band_sum(100, 5.0) / saddle_band_sum(&params(100, 5.0, 1.0)) - 1.0;
        assert!(rel_stiff < 0.01);
    }

    #[test]
    fn rdm_examples() {
        let p = params(20, 0.6, 3.0);
        let d = gaussian_rdm(&p, 1).unwrap();
        let w = 1.0 / (20.0 + (8.0 * PI * 0.6).sqrt() * 6f64.exp());
        assert!((d.w - w).abs() < 1e-16);
        assert!((d.z - w * (-1.0f64 / 4.8).exp()).abs() < 1e-16);
        assert_eq!(d.u_plus, 0.0);
        assert_eq!(d.trace(), 1.0);
        // the exact-sum model at the same point agrees within 2%
        let t = truncated_rdm(&p, 1).unwrap();
        assert!((d.z / t.z - 1.0).abs() < 0.02);
        assert!(gaussian_rdm(&p, 0).is_err());
        assert!(gaussian_rdm(&params(20, 0.6, 0.0), 1).is_err());
    }

    #[test]
    fn ring_distance_folds() {
        assert_eq!(ring_distance(20, 3), 3);
        assert_eq!(ring_distance(20, 17), 3);
        assert_eq!(ring_distance(20, 10), 10);
        assert_eq!(ring_distance(20, 0), 0);
    }

    #[test]
    fn profile_examples() {
        let solid = GaussianProfileParams::new(&params(20, 0.6, 3.0)).unwrap();
        assert!((solid.amplitude - 1.260_544_773_241e-3).abs() < 1e-15);
        assert!((solid.length - 1.549_193_338_482_967).abs() < 1e-14);
        let dashed = GaussianProfileParams::new(&params(20, 0.8, 4.0)).unwrap();
        assert!((dashed.amplitude - 1.494_031_939_969e-4).abs() < 1e-15);
        assert!(dashed.amplitude < solid.amplitude);
        assert!(dashed.length > solid.length);

        let strong = amplitude(&params(20, 0.6, 400.0));
        assert_eq!(strong, 0.0);
    }

    #[test]
    fn profile_is_twice_the_coherence() {
        let p = params(20, 0.6, 3.0);
        let profile = gaussian_profile(&p, &(1..20).collect::<Vec<_>>()).unwrap();
        for pt in profile.points() {
            let rdm = gaussian_rdm(&p, pt.d).unwrap();
            assert!((pt.c - 2.0 * rdm.z).abs() < 1e-18);
            assert!((pt.c - concurrence_xstate(&rdm)).abs() < 1e-18);
        }
        let peak = gaussian_profile(&p, &[0]).unwrap().points()[0].c;
        assert_eq!(peak, amplitude(&p));
        assert!(gaussian_profile(&p, &[20]).is_err());
        assert!(gaussian_profile(&p, &[2, 1]).is_err());
    }

    #[test]
    fn length_examples() {
        assert_eq!(entanglement_length(&params(10, 0.25, 1.0)), 1.0);
        assert!((entanglement_length(&params(10, 0.6, 1.0)) - 1.5492).abs() < 1e-4);
        assert_eq!(
            entanglement_length(&params(10, 0.6, 1.0)),
            entanglement_length(&params(99, 0.6, 10.0))
        );
    }

    #[test]
    fn log_ratio_identity() {
        let p = params(30, 0.7, 2.5);
        let prof = gaussian_profile(&p, &(1..=15).collect::<Vec<_>>()).unwrap();
        for a in prof.points() {
            for b in prof.points() {
                let lhs = a.c.ln() - b.c.ln();
                let rhs = -((a.d * a.d) as f64 - (b.d * b.d) as f64) / (8.0 * 0.7);
                assert!((lhs - rhs).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn amplitude_monotonicity() {
        let mut last = f64::INFINITY;
        for n in [10, 20, 50, 100, 1000, 100_000] {
            let a = amplitude(&params(n, 0.6, 3.0));
            assert!(a < last);
            last = a;
        }
        assert!(last < 2e-5);
        let mut last = f64::INFINITY;
        for bmu in [0.5, 1.0, 2.0, 4.0, 8.0] {
            let a = amplitude(&params(20, 0.6, bmu));
            assert!(a < last);
            last = a;
        }
    }

    #[test]
    fn warnings() {
        assert!(validity_warnings(&params(20, 0.6, 3.0)).is_empty());
        assert_eq!(validity_warnings(&params(20, 0.6, 1.0)).len(), 1);
        assert_eq!(validity_warnings(&params(20, 0.05, 1.0)).len(), 2);
    }
}
