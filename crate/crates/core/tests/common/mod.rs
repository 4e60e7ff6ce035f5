#![allow(dead_code)]

use helstrom::{BlochVector, Mat2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rotation as both a 3×3 matrix on Bloch vectors and the matching SU(2) element.
pub struct Rotation {
    pub matrix: [[f64; 3]; 3],
    pub unitary: Mat2,
}

impl Rotation {
    /// From a unit quaternion `(w, x, y, z)`.
    pub fn from_quaternion(q: [f64; 4]) -> Self {
        let n = q.iter().map(|c| c * c).sum::<f64>().sqrt();
        let [w, x, y, z] = q.map(|c| c / n);
        let matrix = [
            [
                1.0 - 2.0 * (y * y + z * z),
                2.0 * (x * y - w * z),
                2.0 * (x * z + w * y),
            ],
            [
                2.0 * (x * y + w * z),
                1.0 - 2.0 * (x * x + z * z),
                2.0 * (y * z - w * x),
            ],
            [
                2.0 * (x * z - w * y),
                2.0 * (y * z + w * x),
                1.0 - 2.0 * (x * x + y * y),
            ],
        ];
        // U = w·I − i(x σx + y σy + z σz)
        let unitary = Mat2::new(
            Complex64::new(w, -z),
            Complex64::new(-y, -x),
            Complex64::new(y, -x),
            Complex64::new(w, z),
        );
        Self { matrix, unitary }
    }

    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let q = [0; 4].map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal));
        Self::from_quaternion(q)
    }

    pub fn apply(&self, v: BlochVector) -> BlochVector {
        let a = v.to_array();
        let m = &self.matrix;
        BlochVector::new(
            m[0][0] * a[0] + m[0][1] * a[1] + m[0][2] * a[2],
            m[1][0] * a[0] + m[1][1] * a[1] + m[1][2] * a[2],
            m[2][0] * a[0] + m[2][1] * a[1] + m[2][2] * a[2],
        )
    }
}

/// Random Hermitian matrix with entries in [−scale, scale].
pub fn random_hermitian<R: Rng>(rng: &mut R, scale: f64) -> Mat2 {
    let mut u = || rng.random_range(-scale..=scale);
    let (a, d) = (u(), u());
    let b = Complex64::new(u(), u());
    Mat2::new(Complex64::from(a), b, b.conj(), Complex64::from(d))
}
