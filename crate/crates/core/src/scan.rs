//! Brute-force sweep over binary qubit POVMs.
//!
//! Writing `Π₀ = a·I + s·n̂·σ` with `n̂` in the closed half-sphere `y ≥ 0`
//! and `s` signed, the valid `(a, s)` pairs form the square
//! `|s| ≤ min(a, 1 − a)`. The error rate is affine in `(a, s·n̂)`, so its
//! minimum sits on the boundary of that square; the grid walks the boundary
//! with `N` points and covers `(θ, φ) ∈ [0, π]²` with `N` points each.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::discrimination::{helstrom_bound, response, BinaryPovm, DetectorDocument};
use crate::error::{Error, Result};
use crate::qubit::{bloch_to_density, BlochVector, DensityMatrix};
use crate::scenario::{Preparation, Scenario};

pub const MIN_GRID: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub grid: usize,
    pub detectors: u64,
    pub helstrom_bound: f64,
    pub min_error: f64,
    pub argmin: DetectorDocument,
    pub max_abs_gap: f64,
}

/// Point `t ∈ [0, 1)` on the boundary of the `(a, s)` square, starting at
/// `(0, 0)` and passing through `(1/2, 1/2)`, `(1, 0)` and `(1/2, −1/2)`.
fn boundary_point(t: f64) -> (f64, f64) {
    if t < 0.25 {
        (2.0 * t, 2.0 * t)
    } else if t < 0.5 {
        (2.0 * t, 1.0 - 2.0 * t)
    } else if t < 0.75 {
        (2.0 - 2.0 * t, 1.0 - 2.0 * t)
    } else {
        (2.0 - 2.0 * t, 2.0 * t - 2.0)
    }
}

/// Detector at grid index `(boundary, polar, azimuth)` for resolution `n`.
pub fn grid_detector(n: usize, boundary: usize, polar: usize, azimuth: usize) -> BinaryPovm {
    let step = PI / (n - 1) as f64;
    let (a, s) = boundary_point(boundary as f64 / n as f64);
    let (theta, phi) = (polar as f64 * step, azimuth as f64 * step);
    let axis = BlochVector::new(
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    );
    BinaryPovm::from_parameters(a, s * axis)
}

struct Targets {
    rho0: DensityMatrix,
    rho1: DensityMatrix,
    ensembles: [[(f64, DensityMatrix); 2]; 2],
}

impl Targets {
    fn error_rate(&self, d: &BinaryPovm) -> f64 {
        0.5 * (response(d, &self.rho0).p1 + response(d, &self.rho1).p0)
    }

    fn gap(&self, d: &BinaryPovm) -> f64 {
        let weighted = |j: usize, outcome: usize| -> f64 {
            self.ensembles[j]
                .iter()
                .map(|(w, rho)| {
                    let r = response(d, rho);
                    w * if outcome == 0 { r.p0 } else { r.p1 }
                })
                .sum()
        };
        weighted(0, 0) + weighted(1, 1) - 1.0
    }
}

/// Sweeps `n³` detectors and reports the best error rate and the largest
/// `|D₀⁰ + D₁¹ − 1|` seen.
pub fn scan(s: &Scenario, n: usize) -> Result<ScanReport> {
    if n < MIN_GRID {
        return Err(Error::InvalidConfig(format!(
            "grid resolution {n} below {MIN_GRID}"
        )));
    }
    let targets = Targets {
        rho0: bloch_to_density(s.r0)?,
        rho1: bloch_to_density(s.r1)?,
        ensembles: [
            s.components(Preparation::Zero)?,
            s.components(Preparation::One)?,
        ],
    };
    let mut min_error = f64::INFINITY;
    let mut argmin = BinaryPovm::random_guess();
    let mut max_abs_gap: f64 = 0.0;
    for boundary in 0..n {
        for polar in 0..n {
            for azimuth in 0..n {
                let d = grid_detector(n, boundary, polar, azimuth);
                let e = targets.error_rate(&d);
                if e < min_error {
                    min_error = e;
                    argmin = d;
                }
                max_abs_gap = max_abs_gap.max(targets.gap(&d).abs());
            }
        }
    }
    Ok(ScanReport {
        grid: n,
        detectors: (n as u64).pow(3),
        helstrom_bound: helstrom_bound(s.r0, s.r1)?,
        min_error,
        argmin: DetectorDocument::from_povm(&argmin),
        max_abs_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::build_scenario;

    #[test]
    fn boundary_walk_hits_the_vertices() {
        assert_eq!(boundary_point(0.0), (0.0, 0.0));
        assert_eq!(boundary_point(0.25), (0.5, 0.5));
        assert_eq!(boundary_point(0.5), (1.0, 0.0));
        assert_eq!(boundary_point(0.75), (0.5, -0.5));
        for k in 0..200 {
            let (a, s) = boundary_point(k as f64 / 200.0);
            assert!((s.abs() - a.min(1.0 - a)).abs() < 1e-15);
        }
    }

    #[test]
    fn every_grid_point_is_a_valid_povm() {
        let n = MIN_GRID;
        for b in 0..n {
            for p in 0..n {
                for q in 0..n {
                    grid_detector(n, b, p, q).validate().unwrap();
                }
            }
        }
    }

    #[test]
    fn grid_below_minimum_is_rejected() {
        let s = build_scenario(
            BlochVector::new(1.0, 0.0, 0.0),
            BlochVector::new(0.0, 0.0, 1.0),
        )
        .unwrap();
        assert!(scan(&s, 7).is_err());
    }

    #[test]
    fn coarse_grid_never_beats_helstrom() {
        let s = build_scenario(
            BlochVector::new(1.0, 0.0, 0.0),
            BlochVector::new(0.0, 0.0, 1.0),
        )
        .unwrap();
        let r = scan(&s, 8).unwrap();
        assert!(r.min_error >= r.helstrom_bound - 1e-12);
        assert_eq!(r.detectors, 512);
    }
}
