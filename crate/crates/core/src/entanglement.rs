//! Two-qubit density matrices and their concurrence.
//!
//! Basis order is `|00⟩, |01⟩, |10⟩, |11⟩` with the first label belonging to
//! site `m` and `|0⟩ ≡ |↑⟩`.
//!
//! The general route follows Wootters: with `ρ = Σ pᵢ|vᵢ⟩⟨vᵢ|`, the square
//! roots `λᵢ` of the eigenvalues of `ρρ̃` are the singular values of
//! `τᵢⱼ = √(pᵢpⱼ)·⟨vᵢ|σʸ⊗σʸ|vⱼ*⟩`. Working with `τ` keeps rank-deficient states
//! (pure states, `u⁺ = 0` states) exact instead of taking square roots of
//! roundoff-sized eigenvalues.

use nalgebra::{DMatrix, Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for the `TwoSiteDensity` trace and positivity invariants.
pub const X_STATE_TOLERANCE: f64 = 1e-12;

/// Tolerance for Hermiticity, trace and positivity of a general two-qubit state.
pub const DENSITY_TOLERANCE: f64 = 1e-10;

/// Eigenvalues of `ρ` below this are treated as exact zeros.
const RANK_CUTOFF: f64 = 1e-14;

/// Two-site reduced density matrix of a ring with conserved `Sᶻ` and
/// reflection symmetry:
///
/// ```text
/// ⎡ u⁺  ·  ·  ·  ⎤
/// ⎢ ·   w  z  ·  ⎥
/// ⎢ ·   z  w  ·  ⎥
/// ⎣ ·   ·  ·  u⁻ ⎦
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoSiteDensity {
    pub u_plus: f64,
    pub u_minus: f64,
    pub w: f64,
    pub z: f64,
}

impl TwoSiteDensity {
    pub fn new(u_plus: f64, u_minus: f64, w: f64, z: f64) -> Result<Self> {
        let d = Self {
            u_plus,
            u_minus,
            w,
            z,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let values = [self.u_plus, self.u_minus, self.w, self.z];
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidDensity(format!(
                "non-finite entry in {self:?}"
            )));
        }
        let trace_err = (self.trace() - 1.0).abs();
        if trace_err > X_STATE_TOLERANCE {
            return Err(Error::InvalidDensity(format!(
                "trace deviates from 1 by {trace_err:e}"
            )));
        }
        let min = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -X_STATE_TOLERANCE {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }

    pub fn trace(&self) -> f64 {
        self.u_plus + 2.0 * self.w + self.u_minus
    }

    /// `[u⁺, u⁻, w + z, w − z]`.
    pub fn eigenvalues(&self) -> [f64; 4] {
        [self.u_plus, self.u_minus, self.w + self.z, self.w - self.z]
    }

    pub fn to_matrix(&self) -> Matrix4<Complex64> {
        let c = |x: f64| Complex64::new(x, 0.0);
        let mut m = Matrix4::zeros();
        m[(0, 0)] = c(self.u_plus);
        m[(1, 1)] = c(self.w);
        m[(2, 2)] = c(self.w);
        m[(3, 3)] = c(self.u_minus);
        m[(1, 2)] = c(self.z);
        m[(2, 1)] = c(self.z);
        m
    }

    /// Largest componentwise difference.
    pub fn max_abs_diff(&self, other: &TwoSiteDensity) -> f64 {
        [
            self.u_plus - other.u_plus,
            self.u_minus - other.u_minus,
            self.w - other.w,
            self.z - other.z,
        ]
        .into_iter()
        .map(f64::abs)
        .fold(0.0, f64::max)
    }
}

/// General two-qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitDensity(Matrix4<Complex64>);

impl TwoQubitDensity {
    pub fn new(matrix: Matrix4<Complex64>) -> Result<Self> {
        let rho = Self(matrix);
        rho.validate()?;
        Ok(rho)
    }

    /// Wraps a matrix without checking it; operations re-validate what they need.
    pub fn new_unchecked(matrix: Matrix4<Complex64>) -> Self {
        Self(matrix)
    }

    pub fn validate(&self) -> Result<()> {
        let defect = self.hermiticity_defect();
        if defect > DENSITY_TOLERANCE {
            return Err(Error::NotHermitian(defect));
        }
        let trace = self.0.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > DENSITY_TOLERANCE {
            return Err(Error::InvalidDensity(format!("trace is {trace}")));
        }
        let min = self.eigenvalues()[0];
        if min < -DENSITY_TOLERANCE {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in i..4 {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Ascending eigenvalues of the Hermitian part.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let herm = (self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(herm);
        let mut out = [0.0; 4];
        for (o, v) in out.iter_mut().zip(eig.eigenvalues.iter()) {
            *o = *v;
        }
        out.sort_by(f64::total_cmp);
        out
    }

    /// `ρ → U ρ U†`.
    pub fn conjugate_by(&self, unitary: &Matrix4<Complex64>) -> Self {
        Self(unitary * self.0 * unitary.adjoint())
    }
}

impl From<&TwoSiteDensity> for TwoQubitDensity {
    fn from(d: &TwoSiteDensity) -> Self {
        Self(d.to_matrix())
    }
}

/// `σʸ ⊗ σʸ` in the computational basis (real).
pub fn sigma_yy() -> Matrix4<Complex64> {
    let c = |x: f64| Complex64::new(x, 0.0);
    let mut m = Matrix4::zeros();
    m[(0, 3)] = c(-1.0);
    m[(1, 2)] = c(1.0);
    m[(2, 1)] = c(1.0);
    m[(3, 0)] = c(-1.0);
    m
}

/// `ρ̃ = (σʸ⊗σʸ)·ρ*·(σʸ⊗σʸ)`.
pub fn spin_flip(rho: &TwoQubitDensity) -> Result<TwoQubitDensity> {
    let defect = rho.hermiticity_defect();
    if defect > DENSITY_TOLERANCE {
        return Err(Error::NotHermitian(defect));
    }
    let yy = sigma_yy();
    Ok(TwoQubitDensity(yy * rho.0.conjugate() * yy))
}

/// Square roots of the eigenvalues of `ρρ̃`, in decreasing order.
pub fn wootters_lambdas(rho: &TwoQubitDensity) -> Result<[f64; 4]> {
    rho.validate()?;
    let herm = (rho.0 + rho.0.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);

    let kept: Vec<usize> = (0..4)
        .filter(|&i| eig.eigenvalues[i] > RANK_CUTOFF)
        .collect();
    if kept.is_empty() {
        return Err(Error::InvalidDensity(
            "state has no positive eigenvalue".into(),
        ));
    }
    // Subnormalized eigenvectors √pᵢ|vᵢ⟩ as columns.
    let w = DMatrix::from_fn(4, kept.len(), |r, c| {
        let k = kept[c];
        eig.eigenvectors[(r, k)] * eig.eigenvalues[k].sqrt()
    });
    let yy = DMatrix::from_fn(4, 4, |r, c| sigma_yy()[(r, c)]);
    let tau = w.adjoint() * yy * w.conjugate();
    let singular = tau.singular_values();

    let mut lambdas = [0.0; 4];
    for (l, s) in lambdas.iter_mut().zip(singular.iter()) {
        if !s.is_finite() {
            return Err(Error::Numerical(format!("non-finite singular value {s}")));
        }
        *l = *s;
    }
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok(lambdas)
}

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`.
pub fn concurrence_general(rho: &TwoQubitDensity) -> Result<f64> {
    let l = wootters_lambdas(rho)?;
    Ok((l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0))
}

/// Closed form for the X-shaped state: `2·max(0, |z| − √(u⁺u⁻))`.
pub fn concurrence_xstate(d: &TwoSiteDensity) -> f64 {
    let product = (d.u_plus * d.u_minus).max(0.0);
    (2.0 * (d.z.abs() - product.sqrt())).clamp(0.0, 1.0)
}

/// True when `rho` has the diagonal-plus-central-block pattern with equal
/// middle diagonals.
pub fn is_x_form(rho: &TwoQubitDensity, tol: f64) -> bool {
    let m = &rho.0;
    let allowed = |i: usize, j: usize| i == j || (i, j) == (1, 2) || (i, j) == (2, 1);
    for i in 0..4 {
        for j in 0..4 {
            if !allowed(i, j) && m[(i, j)].norm() >= tol {
                return false;
            }
        }
    }
    (m[(1, 1)] - m[(2, 2)]).norm() < tol
}

/// Reads `u⁺, u⁻, w, z` off an X-form matrix; `z` must be real within `tol`.
pub fn x_form_parameters(rho: &TwoQubitDensity, tol: f64) -> Result<TwoSiteDensity> {
    if !is_x_form(rho, tol) {
        return Err(Error::InvalidDensity("matrix is not of X form".into()));
    }
    let m = &rho.0;
    let z = m[(1, 2)];
    if z.im.abs() >= tol {
        return Err(Error::InvalidDensity(format!(
            "off-diagonal coherence is not real: {z}"
        )));
    }
    TwoSiteDensity::new(
        m[(0, 0)].re,
        m[(3, 3)].re,
        0.5 * (m[(1, 1)].re + m[(2, 2)].re),
        z.re,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn pure(psi: [Complex64; 4]) -> TwoQubitDensity {
        let v = nalgebra::Vector4::from(psi);
        TwoQubitDensity::new(v * v.adjoint()).unwrap()
    }

    fn bell() -> TwoSiteDensity {
        TwoSiteDensity::new(0.0, 0.0, 0.5, 0.5).unwrap()
    }

    #[test]
    fn x_matrix_layout() {
        let d = TwoSiteDensity::new(1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(
            d.to_matrix(),
            Matrix4::from_diagonal(&nalgebra::Vector4::new(c(1.0), c(0.0), c(0.0), c(0.0)))
        );
        let b = bell().to_matrix();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = nalgebra::Vector4::new(c(0.0), c(s), c(s), c(0.0));
        assert!((b - psi * psi.adjoint()).norm() < 1e-15);
    }

    #[test]
    fn spin_flip_examples() {
        let up_up = TwoQubitDensity::from(&TwoSiteDensity::new(1.0, 0.0, 0.0, 0.0).unwrap());
        let flipped = spin_flip(&up_up).unwrap();
        let expected = TwoSiteDensity::new(0.0, 1.0, 0.0, 0.0).unwrap().to_matrix();
        assert!((flipped.matrix() - expected).norm() < 1e-15);

        let b = TwoQubitDensity::from(&bell());
        assert!((spin_flip(&b).unwrap().matrix() - b.matrix()).norm() < 1e-15);
    }

    #[test]
    fn spin_flip_rejects_non_hermitian() {
        let mut m = Matrix4::identity() * c(0.25);
        m[(0, 1)] = c(0.1);
        let rho = TwoQubitDensity::new_unchecked(m);
        assert!(matches!(spin_flip(&rho), Err(Error::NotHermitian(_))));
        assert!(TwoQubitDensity::new(m).is_err());
    }

    #[test]
    fn concurrence_of_reference_states() {
        let mixed = TwoQubitDensity::new(Matrix4::identity() * c(0.25)).unwrap();
        assert!(concurrence_general(&mixed).unwrap().abs() < 1e-12);
        let b = TwoQubitDensity::from(&bell());
        assert!((concurrence_general(&b).unwrap() - 1.0).abs() < 1e-12);
        assert!((concurrence_xstate(&bell()) - 1.0).abs() < 1e-15);
        // (|00⟩ + i|11⟩)/√2
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phase = pure([c(s), c(0.0), c(0.0), Complex64::new(0.0, s)]);
        assert!((concurrence_general(&phase).unwrap() - 1.0).abs() < 1e-12);
        let product = pure([c(1.0), c(0.0), c(0.0), c(0.0)]);
        assert_eq!(concurrence_general(&product).unwrap(), 0.0);
    }

    /// Independent route: eigenvalues of the Hermitian `√ρ ρ̃ √ρ`.
    fn lambdas_via_hermitian_form(rho: &TwoQubitDensity) -> [f64; 4] {
        let eig = SymmetricEigen::new(*rho.matrix());
        let sqrt_p = eig.eigenvalues.map(|p| c(p.max(0.0).sqrt()));
        let sqrt_rho =
            eig.eigenvectors * Matrix4::from_diagonal(&sqrt_p) * eig.eigenvectors.adjoint();
        let flipped = sigma_yy() * rho.matrix().conjugate() * sigma_yy();
        let m = sqrt_rho * flipped * sqrt_rho;
        let mut out = [0.0; 4];
        for (o, v) in out
            .iter_mut()
            .zip(SymmetricEigen::new(m).eigenvalues.iter())
        {
            *o = v.max(0.0).sqrt();
        }
        out.sort_by(|a, b| b.total_cmp(a));
        out
    }

    #[test]
    fn werner_state_dual_path() {
        // ρ(p) = p|Ψ⁻⟩⟨Ψ⁻| + (1−p)I/4, C = max(0, (3p − 1)/2)
        let p = 0.5;
        let singlet = TwoSiteDensity::new(0.0, 0.0, 0.5, -0.5)
            .unwrap()
            .to_matrix();
        let rho = TwoQubitDensity::new(singlet * c(p) + Matrix4::identity() * c((1.0 - p) / 4.0))
            .unwrap();
        let c_general = concurrence_general(&rho).unwrap();
        let other = lambdas_via_hermitian_form(&rho);
        let c_other = other[0] - other[1] - other[2] - other[3];
        assert!((c_general - c_other).abs() < 1e-12);
        assert!((c_general - 0.25).abs() < 1e-12);
        let ours = wootters_lambdas(&rho).unwrap();
        for (a, b) in ours.iter().zip(other) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_lambdas_do_not_matter() {
        // Werner at p = 1/3 sits on the separability boundary with a triply
        // degenerate tail.
        let singlet = TwoSiteDensity::new(0.0, 0.0, 0.5, -0.5)
            .unwrap()
            .to_matrix();
        let p = 1.0 / 3.0;
        let rho = TwoQubitDensity::new(singlet * c(p) + Matrix4::identity() * c((1.0 - p) / 4.0))
            .unwrap();
        let l = wootters_lambdas(&rho).unwrap();
        assert!((l[1] - l[2]).abs() < 1e-12 && (l[2] - l[3]).abs() < 1e-12);
        assert!(concurrence_general(&rho).unwrap() < 1e-12);
    }

    #[test]
    fn xstate_closed_form_examples() {
        let d = TwoSiteDensity::new(0.0, 0.6, 0.2, 0.15).unwrap();
        assert!((concurrence_xstate(&d) - 0.3).abs() < 1e-15);
        let boundary = TwoSiteDensity::new(0.25, 0.25, 0.25, 0.25).unwrap();
        assert_eq!(concurrence_xstate(&boundary), 0.0);
    }

    #[test]
    fn x_form_detection() {
        let d = TwoSiteDensity::new(0.1, 0.5, 0.2, 0.05).unwrap();
        let rho = TwoQubitDensity::from(&d);
        assert!(is_x_form(&rho, 1e-12));
        assert_eq!(x_form_parameters(&rho, 1e-12).unwrap(), d);

        let mut m = *rho.matrix();
        m[(0, 3)] = c(0.1);
        m[(3, 0)] = c(0.1);
        assert!(!is_x_form(&TwoQubitDensity::new_unchecked(m), 1e-12));

        let diag = nalgebra::Vector4::new(c(0.1), c(0.3), c(0.2), c(0.4));
        assert!(!is_x_form(
            &TwoQubitDensity::new(Matrix4::from_diagonal(&diag)).unwrap(),
            1e-12
        ));
    }

    #[test]
    fn invalid_two_site_density() {
        assert!(TwoSiteDensity::new(0.5, 0.5, 0.1, 0.0).is_err());
        assert!(TwoSiteDensity::new(0.0, 0.6, 0.2, 0.3).is_err());
        assert!(TwoSiteDensity::new(f64::NAN, 0.6, 0.2, 0.0).is_err());
    }

    fn arb_x_state() -> impl Strategy<Value = TwoSiteDensity> {
        (0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b, c, s)| {
            let total = a + b + 2.0 * c + 1e-9;
            let (u_plus, w) = (a / total, c / total);
            let z = s * w;
            TwoSiteDensity {
                u_plus,
                u_minus: 1.0 - u_plus - 2.0 * w,
                w,
                z,
            }
        })
    }

    proptest! {
        #[test]
        fn general_route_matches_closed_form(d in arb_x_state()) {
            let rho = TwoQubitDensity::from(&d);
            let general = concurrence_general(&rho).unwrap();
            prop_assert!((general - concurrence_xstate(&d)).abs() < 1e-10);
            prop_assert!((0.0..=1.0).contains(&general));
        }

        #[test]
        fn spin_flip_preserves_x_form(d in arb_x_state()) {
            let flipped = spin_flip(&TwoQubitDensity::from(&d)).unwrap();
            prop_assert!(is_x_form(&flipped, 1e-14));
        }
    }
}
