//! Single-qubit algebra: Bloch vectors, 2×2 complex matrices, density
//! matrices and the closed-form Hermitian eigendecomposition.
//!
//! Everything here is exact closed-form arithmetic on 2×2 blocks. Density
//! matrices are not validated on construction; call
//! [`DensityMatrix::validate`] when the invariants matter, since unnormalized
//! intermediates show up inside compositions.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for algebraic identities on 2×2 blocks.
pub const ALGEBRA_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const ORIGIN: BlochVector = BlochVector::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (*self - *other).norm()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Largest componentwise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let d = *self - *other;
        d.x.abs().max(d.y.abs()).max(d.z.abs())
    }

    /// Fails with [`Error::BallViolation`] when the vector leaves the Bloch ball.
    pub fn check_ball(&self) -> Result<()> {
        let norm = self.norm();
        if norm > 1.0 + ALGEBRA_TOL || !norm.is_finite() {
            return Err(Error::BallViolation { norm });
        }
        Ok(())
    }

    pub fn is_pure(&self) -> bool {
        (self.norm() - 1.0).abs() <= ALGEBRA_TOL
    }
}

impl From<[f64; 3]> for BlochVector {
    fn from(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }
}

impl From<BlochVector> for [f64; 3] {
    fn from(v: BlochVector) -> Self {
        v.to_array()
    }
}

impl Add for BlochVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for BlochVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Neg for BlochVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<BlochVector> for f64 {
    type Output = BlochVector;
    fn mul(self, v: BlochVector) -> BlochVector {
        BlochVector::new(self * v.x, self * v.y, self * v.z)
    }
}

impl fmt::Display for BlochVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// A 2×2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);
    pub const PAULI_X: Mat2 = Mat2([[ZERO, ONE], [ONE, ZERO]]);
    pub const PAULI_Y: Mat2 = Mat2([[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]]);
    pub const PAULI_Z: Mat2 = Mat2([[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]]);

    pub fn new(m00: Complex64, m01: Complex64, m10: Complex64, m11: Complex64) -> Self {
        Mat2([[m00, m01], [m10, m11]])
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        Mat2([
            [Complex64::from(m[0][0]), Complex64::from(m[0][1])],
            [Complex64::from(m[1][0]), Complex64::from(m[1][1])],
        ])
    }

    pub fn diag(a: f64, d: f64) -> Self {
        Self::from_real([[a, 0.0], [0.0, d]])
    }

    /// `a·I + b·σ`.
    pub fn pauli_expansion(a: f64, b: BlochVector) -> Self {
        Mat2([
            [Complex64::new(a + b.z, 0.0), Complex64::new(b.x, -b.y)],
            [Complex64::new(b.x, b.y), Complex64::new(a - b.z, 0.0)],
        ])
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: [Complex64; 2]) -> Self {
        let mut m = Self::ZERO;
        for (r, row) in m.0.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = v[r] * v[c].conj();
            }
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.0[r][c]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let m = &self.0;
        Mat2([[f(m[0][0]), f(m[0][1])], [f(m[1][0]), f(m[1][1])]])
    }

    fn zip(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let (a, b) = (&self.0, &other.0);
        Mat2([
            [f(a[0][0], b[0][0]), f(a[0][1], b[0][1])],
            [f(a[1][0], b[1][0]), f(a[1][1], b[1][1])],
        ])
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let m = &self.0;
        (m[1][0] - m[0][1].conj())
            .norm()
            .max(m[0][0].im.abs())
            .max(m[1][1].im.abs())
    }

    /// `tr(self · other)` for Hermitian operands, real part only.
    pub fn trace_product_re(&self, other: &Self) -> f64 {
        let (a, b) = (&self.0, &other.0);
        (a[0][0] * b[0][0] + a[0][1] * b[1][0] + a[1][0] * b[0][1] + a[1][1] * b[1][1]).re
    }

    /// Coefficients `(a, b)` of the expansion `a·I + b·σ` for a Hermitian matrix.
    pub fn pauli_coefficients(&self) -> (f64, BlochVector) {
        let m = &self.0;
        let off = (m[0][1].conj() + m[1][0]) * 0.5;
        let a = 0.5 * (m[0][0].re + m[1][1].re);
        (
            a,
            BlochVector::new(off.re, off.im, 0.5 * (m[0][0].re - m[1][1].re)),
        )
    }

    /// Trace norm `tr√(A†A)` of a Hermitian matrix: the sum of absolute eigenvalues.
    pub fn hermitian_trace_norm(&self) -> f64 {
        let e = eig2(self);
        e.values[0].abs() + e.values[1].abs()
    }
}

impl Add for Mat2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip(&rhs, |a, b| a + b)
    }
}

impl AddAssign for Mat2 {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for Mat2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip(&rhs, |a, b| a - b)
    }
}

impl Mul for Mat2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (&self.0, &rhs.0);
        Self(std::array::from_fn(|r| {
            std::array::from_fn(|c| a[r][0] * b[0][c] + a[r][1] * b[1][c])
        }))
    }
}

impl Mul<Mat2> for f64 {
    type Output = Mat2;
    fn mul(self, m: Mat2) -> Mat2 {
        m.scale(self)
    }
}

/// Eigenvalues in descending order with their orthonormal eigenvectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenPair2 {
    pub values: [f64; 2],
    pub vectors: [[Complex64; 2]; 2],
}

impl EigenPair2 {
    pub fn projector(&self, k: usize) -> Mat2 {
        Mat2::outer(self.vectors[k])
    }

    /// `Σ f(λᵢ)|eᵢ⟩⟨eᵢ|`.
    pub fn spectral_map(&self, f: impl Fn(f64) -> f64) -> Mat2 {
        self.projector(0).scale(f(self.values[0])) + self.projector(1).scale(f(self.values[1]))
    }

    pub fn reconstruct(&self) -> Mat2 {
        self.spectral_map(|x| x)
    }

    /// Modulus of `⟨e₀|e₁⟩`.
    pub fn overlap(&self) -> f64 {
        let [u, v] = &self.vectors;
        (u[0].conj() * v[0] + u[1].conj() * v[1]).norm()
    }
}

/// Closed-form eigendecomposition of a Hermitian 2×2 matrix.
///
/// Only the upper triangle and the real parts of the diagonal are read (the
/// off-diagonal is symmetrized first). A matrix proportional to the identity
/// gets the computational basis.
pub fn eig2(h: &Mat2) -> EigenPair2 {
    let m = &h.0;
    let a = m[0][0].re;
    let d = m[1][1].re;
    let b = (m[0][1] + m[1][0].conj()) * 0.5;
    let mean = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let radius = half_diff.hypot(b.norm());
    let values = [mean + radius, mean - radius];

    if radius == 0.0 {
        return EigenPair2 {
            values,
            vectors: [[ONE, ZERO], [ZERO, ONE]],
        };
    }

    // Pick whichever of the two null vectors of (H − λ₊) has the larger norm.
    let top = if half_diff >= 0.0 {
        [Complex64::from(half_diff + radius), b.conj()]
    } else {
        [b, Complex64::from(radius - half_diff)]
    };
    let n = (top[0].norm_sqr() + top[1].norm_sqr()).sqrt();
    let e0 = [top[0] / n, top[1] / n];
    let e1 = [-e0[1].conj(), e0[0].conj()];
    EigenPair2 {
        values,
        vectors: [e0, e1],
    }
}

/// A qubit density matrix. Invariants are checked by [`DensityMatrix::validate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix(Mat2);

impl DensityMatrix {
    pub fn from_matrix(m: Mat2) -> Self {
        Self(m)
    }

    pub fn maximally_mixed() -> Self {
        Self(Mat2::IDENTITY.scale(0.5))
    }

    /// `|v⟩⟨v|` for a (not necessarily normalized) ket.
    pub fn from_ket(v: [Complex64; 2]) -> Self {
        Self(Mat2::outer(v))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat2 {
        self.0
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.0.get(r, c)
    }

    pub fn eigen(&self) -> EigenPair2 {
        eig2(&self.0)
    }

    /// Checks Hermiticity, unit trace and positivity, each within [`ALGEBRA_TOL`].
    pub fn validate(&self) -> Result<()> {
        let herm = self.0.hermiticity_defect();
        if herm > ALGEBRA_TOL || !herm.is_finite() {
            return Err(Error::InvalidState(format!(
                "not Hermitian (defect {herm:e})"
            )));
        }
        let tr = self.0.trace().re;
        if (tr - 1.0).abs() > ALGEBRA_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min = self.eigen().values[1];
        if min < -ALGEBRA_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// Convex combination `Σ wᵢ ρᵢ`.
    pub fn mixture<'a>(terms: impl IntoIterator<Item = (f64, &'a DensityMatrix)>) -> Self {
        let mut acc = Mat2::ZERO;
        for (w, rho) in terms {
            acc += rho.0.scale(w);
        }
        Self(acc)
    }
}

/// `ρ(v) = (I + v·σ)/2`.
pub fn bloch_to_density(v: BlochVector) -> Result<DensityMatrix> {
    v.check_ball()?;
    Ok(DensityMatrix(Mat2::pauli_expansion(0.5, 0.5 * v)))
}

/// Inverse of [`bloch_to_density`]: `vₖ = tr(ρ σₖ)`.
pub fn density_to_bloch(rho: &DensityMatrix) -> Result<BlochVector> {
    rho.validate()?;
    Ok(bloch_components(rho.matrix()))
}

pub(crate) fn bloch_components(m: &Mat2) -> BlochVector {
    let (_, b) = m.pauli_coefficients();
    2.0 * b
}

/// Trace-norm distance `‖ρ − σ‖₁` (the full trace norm, not halved).
pub fn trace_norm_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    (rho.0 - sigma.0).hermitian_trace_norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bloch_to_density_examples() {
        let center = bloch_to_density(BlochVector::ORIGIN).unwrap();
        assert!(center.matrix().max_abs_diff(&Mat2::diag(0.5, 0.5)) < 1e-15);

        let up = bloch_to_density(BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        assert!(up.matrix().max_abs_diff(&Mat2::diag(1.0, 0.0)) < 1e-15);

        let plus = bloch_to_density(BlochVector::new(1.0, 0.0, 0.0)).unwrap();
        let expected = Mat2::from_real([[0.5, 0.5], [0.5, 0.5]]);
        assert!(plus.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn bloch_to_density_rejects_outside_ball() {
        let err = bloch_to_density(BlochVector::new(0.8, 0.8, 0.0)).unwrap_err();
        assert!(matches!(err, Error::BallViolation { .. }));
        // Just inside the tolerance is fine.
        assert!(bloch_to_density(BlochVector::new(0.0, 0.0, 1.0 + 5e-13)).is_ok());
    }

    #[test]
    fn density_to_bloch_examples() {
        let cases = [
            (Mat2::diag(0.5, 0.5), BlochVector::ORIGIN),
            (Mat2::diag(1.0, 0.0), BlochVector::new(0.0, 0.0, 1.0)),
            (
                Mat2::from_real([[0.5, 0.5], [0.5, 0.5]]),
                BlochVector::new(1.0, 0.0, 0.0),
            ),
        ];
        for (m, v) in cases {
            let got = density_to_bloch(&DensityMatrix::from_matrix(m)).unwrap();
            assert!(got.max_abs_diff(&v) < 1e-15, "{got} vs {v}");
        }
    }

    #[test]
    fn density_to_bloch_rejects_invalid() {
        let not_herm = Mat2::new(c(0.5, 0.0), c(0.1, 0.0), c(0.2, 0.0), c(0.5, 0.0));
        let bad_trace = Mat2::diag(0.6, 0.6);
        let negative = Mat2::diag(1.2, -0.2);
        for m in [not_herm, bad_trace, negative] {
            let err = density_to_bloch(&DensityMatrix::from_matrix(m)).unwrap_err();
            assert!(matches!(err, Error::InvalidState(_)));
        }
    }

    #[test]
    fn eig2_examples() {
        let e = eig2(&Mat2::IDENTITY);
        assert_eq!(e.values, [1.0, 1.0]);
        assert_eq!(e.vectors, [[ONE, ZERO], [ZERO, ONE]]);

        let e = eig2(&Mat2::PAULI_Z);
        assert_eq!(e.values, [1.0, -1.0]);
        assert!((e.vectors[0][0].norm() - 1.0).abs() < 1e-15);
        assert!((e.vectors[1][1].norm() - 1.0).abs() < 1e-15);

        let rho = bloch_to_density(BlochVector::new(0.6, 0.0, 0.0)).unwrap();
        let e = rho.eigen();
        assert!((e.values[0] - 0.8).abs() < 1e-15);
        assert!((e.values[1] - 0.2).abs() < 1e-15);
    }

    #[test]
    fn eig2_negative_half_difference_branch() {
        let h = Mat2::new(c(-2.0, 0.0), c(0.5, -1.5), c(0.5, 1.5), c(3.0, 0.0));
        let e = eig2(&h);
        assert!(e.values[0] >= e.values[1]);
        assert!(e.reconstruct().max_abs_diff(&h) < 1e-13);
        assert!(e.overlap() < 1e-15);
    }

    #[test]
    fn trace_norm_distance_examples() {
        let up = bloch_to_density(BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        let down = bloch_to_density(BlochVector::new(0.0, 0.0, -1.0)).unwrap();
        let plus = bloch_to_density(BlochVector::new(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(trace_norm_distance(&up, &up), 0.0);
        assert!((trace_norm_distance(&up, &down) - 2.0).abs() < 1e-15);
        assert!((trace_norm_distance(&plus, &up) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn bloch_vector_serializes_as_array() {
        let v = BlochVector::new(0.25, -1.0, 0.5);
        assert_eq!(serde_json::to_string(&v).unwrap(), "[0.25,-1.0,0.5]");
        let back: BlochVector = serde_json::from_str("[0.25,-1.0,0.5]").unwrap();
        assert_eq!(back, v);
    }
}
