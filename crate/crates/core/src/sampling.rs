//! Random states and detectors for property checks and CLI demos.

use rand::Rng;
use rand_distr::{Distribution, UnitBall, UnitSphere};

use crate::discrimination::BinaryPovm;
use crate::qubit::BlochVector;

/// Uniform over the Bloch ball.
pub fn bloch_in_ball<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    BlochVector::from(UnitBall.sample(rng))
}

/// Uniform over the Bloch sphere (pure states).
pub fn pure_bloch<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    BlochVector::from(UnitSphere.sample(rng))
}

/// A pair of distinct states drawn uniformly from the ball.
pub fn distinct_pair<R: Rng + ?Sized>(rng: &mut R) -> (BlochVector, BlochVector) {
    loop {
        let (r0, r1) = (bloch_in_ball(rng), bloch_in_ball(rng));
        if r0.distance(&r1) > 1e-6 {
            return (r0, r1);
        }
    }
}

/// `Π₀ = a·I + b·σ` with `a ~ U[0, 1]` and `b` uniform in the ball of radius `min(a, 1 − a)`.
pub fn binary_povm<R: Rng + ?Sized>(rng: &mut R) -> BinaryPovm {
    let a: f64 = rng.random();
    let radius = a.min(1.0 - a);
    BinaryPovm::from_parameters(a, radius * bloch_in_ball(rng))
}
