//! Single-qubit state algebra.
//!
//! A [`QubitState`] stores its Bloch vector; the density matrix
//! `½(I + s·σ)` is produced on demand. [`Complex2x2`] is the raw matrix view
//! used for operators that are built directly in a basis (the Gram-type state,
//! prior states, Helstrom differences).

use nalgebra::{Matrix2, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Uniform tolerance for Bloch norms, Hermiticity, trace and positivity.
pub const STATE_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// The Pauli matrices `(σx, σy, σz)`.
pub fn pauli() -> [Matrix2<Complex64>; 3] {
    [
        Matrix2::new(ZERO, ONE, ONE, ZERO),
        Matrix2::new(ZERO, -I, I, ZERO),
        Matrix2::new(ONE, ZERO, ZERO, -ONE),
    ]
}

/// A 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex2x2(pub Matrix2<Complex64>);

impl Complex2x2 {
    pub fn new(m00: Complex64, m01: Complex64, m10: Complex64, m11: Complex64) -> Self {
        Self(Matrix2::new(m00, m01, m10, m11))
    }

    pub fn diag(d0: f64, d1: f64) -> Self {
        Self::new(d0.into(), ZERO, ZERO, d1.into())
    }

    pub fn identity() -> Self {
        Self::diag(1.0, 1.0)
    }

    /// Rank-one projector `|v⟩⟨v|` (no normalization applied).
    pub fn outer(v: [Complex64; 2]) -> Self {
        Self::new(
            v[0] * v[0].conj(),
            v[0] * v[1].conj(),
            v[1] * v[0].conj(),
            v[1] * v[1].conj(),
        )
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[(0, 0)] + self.0[(1, 1)]
    }

    pub fn det(&self) -> Complex64 {
        self.0[(0, 0)] * self.0[(1, 1)] - self.0[(0, 1)] * self.0[(1, 0)]
    }

    pub fn scale(&self, k: f64) -> Self {
        Self(self.0 * Complex64::from(k))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0 + other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0 - other.0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(self.0 * other.0)
    }

    /// `Tr(AB)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        let (a, b) = (&self.0, &other.0);
        a[(0, 0)] * b[(0, 0)] + a[(0, 1)] * b[(1, 0)] + a[(1, 0)] * b[(0, 1)] + a[(1, 1)] * b[(1, 1)]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.0 - other.0).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let m = &self.0;
        m[(0, 0)].im.abs() <= tol && m[(1, 1)].im.abs() <= tol && (m[(0, 1)] - m[(1, 0)].conj()).norm() <= tol
    }

    /// Eigenvalues `(λ_min, λ_max)` of the Hermitian part.
    pub fn hermitian_eigenvalues(&self) -> (f64, f64) {
        let m = &self.0;
        let a = m[(0, 0)].re;
        let d = m[(1, 1)].re;
        let b = 0.5 * (m[(0, 1)] + m[(1, 0)].conj());
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        (mean - radius, mean + radius)
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && self.hermitian_eigenvalues().0 >= -tol
    }

    /// Hermitian, unit trace and positive semidefinite within `tol`.
    pub fn is_density(&self, tol: f64) -> bool {
        self.is_psd(tol) && (self.trace() - ONE).norm() <= tol
    }

    /// Trace norm of a Hermitian matrix: sum of absolute eigenvalues.
    pub fn trace_norm_hermitian(&self) -> f64 {
        let (lo, hi) = self.hermitian_eigenvalues();
        lo.abs() + hi.abs()
    }

    /// Bloch vector `(2 Re ρ₁₀, 2 Im ρ₁₀, ρ₀₀ − ρ₁₁)` of a unit-trace Hermitian matrix.
    pub fn bloch_vector(&self) -> Vector3<f64> {
        let m = &self.0;
        Vector3::new(2.0 * m[(1, 0)].re, 2.0 * m[(1, 0)].im, m[(0, 0)].re - m[(1, 1)].re)
    }
}

/// Single-qubit density operator, stored as its Bloch vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    bloch: Vector3<f64>,
}

impl QubitState {
    /// `ρ = ½(I + s·σ)`; rejects `‖s‖ > 1 + 1e−12`.
    pub fn from_bloch(s: Vector3<f64>) -> Result<Self> {
        let norm = s.norm();
        if !norm.is_finite() || norm > 1.0 + STATE_TOL {
            return Err(Error::UnphysicalBloch { norm });
        }
        Ok(Self { bloch: s })
    }

    pub fn maximally_mixed() -> Self {
        Self {
            bloch: Vector3::zeros(),
        }
    }

    /// `|0⟩⟨0|` for `bit = 0`, `|1⟩⟨1|` otherwise.
    pub fn computational(bit: u8) -> Self {
        let z = if bit == 0 { 1.0 } else { -1.0 };
        Self {
            bloch: Vector3::new(0.0, 0.0, z),
        }
    }

    /// Pure state of a (not necessarily normalized) ket.
    pub fn from_ket(v: [Complex64; 2]) -> Result<Self> {
        let n2 = v[0].norm_sqr() + v[1].norm_sqr();
        if n2 <= 0.0 || !n2.is_finite() {
            return Err(Error::InvalidState("zero ket".into()));
        }
        Self::from_matrix(&Complex2x2::outer(v).scale(1.0 / n2))
    }

    /// Accepts any matrix passing the density checks.
    pub fn from_matrix(m: &Complex2x2) -> Result<Self> {
        if !m.is_density(STATE_TOL) {
            return Err(Error::InvalidState(format!("{:?} is not a density matrix", m.0)));
        }
        Self::from_bloch(m.bloch_vector())
    }

    pub fn bloch(&self) -> Vector3<f64> {
        self.bloch
    }

    pub fn matrix(&self) -> Complex2x2 {
        let [sx, sy, sz] = pauli();
        let s = &self.bloch;
        let half = Complex64::from(0.5);
        Complex2x2(
            (Matrix2::identity() + sx * Complex64::from(s.x) + sy * Complex64::from(s.y) + sz * Complex64::from(s.z))
                * half,
        )
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        (self.bloch.norm() - 1.0).abs() <= tol
    }

    /// `Tr ρ² = ½(1 + ‖s‖²)`.
    pub fn purity(&self) -> f64 {
        0.5 * (1.0 + self.bloch.norm_squared())
    }

    /// `Tr(ρσ) = ½(1 + s·s′)`.
    pub fn overlap(&self, other: &QubitState) -> f64 {
        0.5 * (1.0 + self.bloch.dot(&other.bloch))
    }

    /// `det ρ = (1 − Tr ρ²)/2 = (1 − ‖s‖²)/4`.
    pub fn det(&self) -> f64 {
        0.25 * (1.0 - self.bloch.norm_squared())
    }
}

/// Qubit fidelity `Tr(ρσ) + 2√(det ρ det σ)`.
///
/// Both arguments must be density matrices. Determinants below `1e−15`
/// (down to `−1e−12`) are round-off on a pure state and count as zero;
/// anything more negative is an invalid state.
pub fn fidelity_qubit(rho: &Complex2x2, sigma: &Complex2x2) -> Result<f64> {
    for m in [rho, sigma] {
        if !m.is_density(STATE_TOL) {
            return Err(Error::InvalidState(format!("{:?} is not a density matrix", m.0)));
        }
    }
    let det_rho = clamp_det(rho.det().re)?;
    let det_sigma = clamp_det(sigma.det().re)?;
    Ok(rho.trace_product(sigma).re + 2.0 * (det_rho * det_sigma).sqrt())
}

fn clamp_det(det: f64) -> Result<f64> {
    if det < -STATE_TOL {
        Err(Error::InvalidState(format!("negative determinant {det}")))
    } else {
        Ok(if det < DET_FLOOR { 0.0 } else { det })
    }
}

const DET_FLOOR: f64 = 1e-15;

/// Minimum-error guessing probability `½(1 + ‖π₊ρ₊ − π₋ρ₋‖₁)`.
pub fn helstrom_guess(prior_plus: f64, rho_plus: &QubitState, prior_minus: f64, rho_minus: &QubitState) -> Result<f64> {
    check_priors(prior_plus, prior_minus)?;
    let diff = rho_plus
        .matrix()
        .scale(prior_plus)
        .sub(&rho_minus.matrix().scale(prior_minus));
    Ok(0.5 * (1.0 + diff.trace_norm_hermitian()))
}

pub(crate) fn check_priors(first: f64, second: f64) -> Result<()> {
    let ok = first.is_finite()
        && second.is_finite()
        && first >= 0.0
        && second >= 0.0
        && (first + second - 1.0).abs() <= STATE_TOL;
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidPriors { first, second })
    }
}
