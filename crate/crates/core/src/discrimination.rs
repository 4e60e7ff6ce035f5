//! Minimum-error discrimination of two equiprobable qubit states.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubit::{bloch_to_density, eig2, BlochVector, DensityMatrix, Mat2, ALGEBRA_TOL};
use crate::scenario::{Scenario, DEGENERACY_CUTOFF};

/// A two-outcome qubit measurement `{Π₀, Π₁}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BinaryPovm {
    pub element0: Mat2,
    pub element1: Mat2,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorResponse {
    pub p0: f64,
    pub p1: f64,
}

impl BinaryPovm {
    /// `Π₀ = a·I + b·σ`, `Π₁ = I − Π₀`. Valid iff `‖b‖ ≤ min(a, 1 − a)`.
    pub fn from_parameters(a: f64, b: BlochVector) -> Self {
        let element0 = Mat2::pauli_expansion(a, b);
        Self {
            element0,
            element1: Mat2::IDENTITY - element0,
        }
    }

    pub fn from_element0(element0: Mat2) -> Self {
        Self {
            element0,
            element1: Mat2::IDENTITY - element0,
        }
    }

    /// The uninformative detector `{I/2, I/2}`.
    pub fn random_guess() -> Self {
        Self::from_parameters(0.5, BlochVector::ORIGIN)
    }

    /// `(a, b)` with `Π₀ = a·I + b·σ`.
    pub fn parameters(&self) -> (f64, BlochVector) {
        self.element0.pauli_coefficients()
    }

    pub fn validate(&self) -> Result<()> {
        for (k, e) in [self.element0, self.element1].iter().enumerate() {
            let defect = e.hermiticity_defect();
            if defect > ALGEBRA_TOL || !defect.is_finite() {
                return Err(Error::InvalidPovm(format!(
                    "element {k} not Hermitian ({defect:e})"
                )));
            }
            let ev = eig2(e).values;
            if ev[1] < -ALGEBRA_TOL || ev[0] > 1.0 + ALGEBRA_TOL {
                return Err(Error::InvalidPovm(format!(
                    "element {k} eigenvalues {ev:?} outside [0, 1]"
                )));
            }
        }
        let completeness = (self.element0 + self.element1).max_abs_diff(&Mat2::IDENTITY);
        if completeness > ALGEBRA_TOL {
            return Err(Error::InvalidPovm(format!(
                "elements do not sum to I ({completeness:e})"
            )));
        }
        Ok(())
    }

    pub fn swapped(&self) -> Self {
        Self {
            element0: self.element1,
            element1: self.element0,
        }
    }

    /// Relabels outcomes so that `P₀(ρ₀) ≥ P₀(ρ₁)`.
    pub fn canonicalize(&self, r0: BlochVector, r1: BlochVector) -> Result<Self> {
        let p0_rho0 = response(self, &bloch_to_density(r0)?).p0;
        let p0_rho1 = response(self, &bloch_to_density(r1)?).p0;
        Ok(if p0_rho0 < p0_rho1 {
            self.swapped()
        } else {
            *self
        })
    }

    /// Conjugates both elements by a unitary, `U Πₖ U†`.
    pub fn conjugated(&self, u: &Mat2) -> Self {
        let ud = u.adjoint();
        Self {
            element0: *u * self.element0 * ud,
            element1: *u * self.element1 * ud,
        }
    }
}

/// Born-rule outcome probabilities `Pᵢ(ρ) = tr(Πᵢ ρ)`.
pub fn response(d: &BinaryPovm, rho: &DensityMatrix) -> DetectorResponse {
    DetectorResponse {
        p0: d.element0.trace_product_re(rho.matrix()),
        p1: d.element1.trace_product_re(rho.matrix()),
    }
}

/// Minimum average error for equal priors: `1/2 − ‖ρ(r0) − ρ(r1)‖₁/4`.
pub fn helstrom_bound(r0: BlochVector, r1: BlochVector) -> Result<f64> {
    let rho0 = bloch_to_density(r0)?;
    let rho1 = bloch_to_density(r1)?;
    Ok(0.5 - 0.25 * crate::qubit::trace_norm_distance(&rho0, &rho1))
}

/// Projective measurement attaining the Helstrom bound.
///
/// `Π₀` projects onto the non-negative eigenspace of `ρ₀ − ρ₁`; a zero
/// eigenvalue is assigned to `Π₀`.
pub fn helstrom_detector(r0: BlochVector, r1: BlochVector) -> Result<BinaryPovm> {
    let rho0 = bloch_to_density(r0)?;
    let rho1 = bloch_to_density(r1)?;
    let separation = r0.distance(&r1);
    if separation < DEGENERACY_CUTOFF {
        return Err(Error::DegenerateScenario { separation });
    }
    let eig = eig2(&(*rho0.matrix() - *rho1.matrix()));
    let element0 = eig.spectral_map(|lambda| if lambda >= 0.0 { 1.0 } else { 0.0 });
    Ok(BinaryPovm::from_element0(element0))
}

/// Average error `[P₁(ρ₀) + P₀(ρ₁)]/2` under equal priors.
pub fn error_rate(d: &BinaryPovm, r0: BlochVector, r1: BlochVector) -> Result<f64> {
    let miss0 = response(d, &bloch_to_density(r0)?).p1;
    let miss1 = response(d, &bloch_to_density(r1)?).p0;
    Ok(0.5 * (miss0 + miss1))
}

/// JSON description of Bob's detector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DetectorDocument {
    Povm { a: f64, b: BlochVector },
    Helstrom,
}

impl DetectorDocument {
    pub fn from_povm(d: &BinaryPovm) -> Self {
        let (a, b) = d.parameters();
        DetectorDocument::Povm { a, b }
    }

    /// Materializes the detector; `helstrom` needs the scenario's targets.
    pub fn resolve(&self, scenario: &Scenario) -> Result<BinaryPovm> {
        let d = match self {
            DetectorDocument::Povm { a, b } => BinaryPovm::from_parameters(*a, *b),
            DetectorDocument::Helstrom => helstrom_detector(scenario.r0, scenario.r1)?,
        };
        d.validate()?;
        Ok(d)
    }
}
