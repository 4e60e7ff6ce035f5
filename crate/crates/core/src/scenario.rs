//! The equal-average ensemble construction.
//!
//! Given two target states `ρ₀ = ρ(r0)` and `ρ₁ = ρ(r1)`, Bob's two
//! ensembles are
//!
//! ```text
//! ρ_B⁽⁰⁾ = p·ρ₀ + (1−p)·|δ⟩⟨δ|,    ρ_B⁽¹⁾ = p·ρ₁ + (1−p)·|−δ⟩⟨−δ|
//! ```
//!
//! with `|±δ⟩` orthogonal pure flags. Requiring `ρ_B⁽⁰⁾ = ρ_B⁽¹⁾` fixes
//! `p = 2/(‖r0 − r1‖ + 2)` and `δ̂ = (r1 − r0)/‖r1 − r0‖`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubit::{
    bloch_components, bloch_to_density, trace_norm_distance, BlochVector, DensityMatrix,
    ALGEBRA_TOL,
};

/// Separations below this leave the flag direction undefined.
pub const DEGENERACY_CUTOFF: f64 = 1e-9;

/// Residual above which a fully specified scenario document is rejected.
pub const DOCUMENT_TOL: f64 = 1e-9;

/// Eigenvalues below this are dropped from pure decompositions.
const ZERO_WEIGHT: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scenario {
    pub r0: BlochVector,
    pub r1: BlochVector,
    pub p: f64,
    pub delta_hat: BlochVector,
    pub r_b: BlochVector,
}

/// Which of Alice's two preparations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preparation {
    Zero,
    One,
}

impl Preparation {
    pub const BOTH: [Preparation; 2] = [Preparation::Zero, Preparation::One];

    pub fn index(self) -> usize {
        match self {
            Preparation::Zero => 0,
            Preparation::One => 1,
        }
    }
}

/// Builds the scenario for a pair of target states.
pub fn build_scenario(r0: BlochVector, r1: BlochVector) -> Result<Scenario> {
    r0.check_ball()?;
    r1.check_ball()?;
    let separation = r0.distance(&r1);
    if separation < DEGENERACY_CUTOFF {
        return Err(Error::DegenerateScenario { separation });
    }
    let p = 2.0 / (separation + 2.0);
    // p/(2(1−p)) = 1/‖r1 − r0‖, so δ̂ is the normalized difference.
    let delta_hat = (1.0 / separation) * (r1 - r0);
    // Midpoint of the two equal expressions p·r0 + (1−p)·δ̂ and p·r1 − (1−p)·δ̂.
    let r_b = (0.5 * p) * (r0 + r1);
    Ok(Scenario {
        r0,
        r1,
        p,
        delta_hat,
        r_b,
    })
}

impl Scenario {
    pub fn separation(&self) -> f64 {
        self.r0.distance(&self.r1)
    }

    pub fn target(&self, j: Preparation) -> BlochVector {
        match j {
            Preparation::Zero => self.r0,
            Preparation::One => self.r1,
        }
    }

    /// Bloch vector of the flag state mixed into ensemble `j`: `δ̂` for 0, `−δ̂` for 1.
    pub fn flag(&self, j: Preparation) -> BlochVector {
        match j {
            Preparation::Zero => self.delta_hat,
            Preparation::One => -self.delta_hat,
        }
    }

    /// Bloch vector of `p·ρⱼ + (1−p)·flagⱼ`.
    pub fn ensemble_average(&self, j: Preparation) -> BlochVector {
        self.p * self.target(j) + (1.0 - self.p) * self.flag(j)
    }

    /// The two weighted components of ensemble `j`: target first, flag second.
    pub fn components(&self, j: Preparation) -> Result<[(f64, DensityMatrix); 2]> {
        Ok([
            (self.p, bloch_to_density(self.target(j))?),
            (1.0 - self.p, bloch_to_density(self.flag(j))?),
        ])
    }

    pub fn shared_state(&self) -> Result<DensityMatrix> {
        bloch_to_density(self.r_b)
    }

    /// Largest violation among the type invariants.
    pub fn invariant_residual(&self) -> f64 {
        let p_expected = 2.0 / (self.separation() + 2.0);
        [
            (self.p - p_expected).abs(),
            (self.delta_hat.norm() - 1.0).abs(),
            self.ensemble_average(Preparation::Zero)
                .max_abs_diff(&self.r_b),
            self.ensemble_average(Preparation::One)
                .max_abs_diff(&self.r_b),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Result<()> {
        self.r0.check_ball()?;
        self.r1.check_ball()?;
        let residual = self.invariant_residual();
        if residual > ALGEBRA_TOL || self.r_b.norm() >= 1.0 {
            return Err(Error::InvalidState(format!(
                "scenario invariants violated (residual {residual:e}, |r_B| = {})",
                self.r_b.norm()
            )));
        }
        Ok(())
    }
}

/// Trace-norm distance between the two ensembles' density matrices.
///
/// Both mixtures are formed from their components, so a hand-built scenario
/// with a wrong `p` shows a nonzero residual.
pub fn verify_ensemble_equality(s: &Scenario) -> Result<f64> {
    let [a0, a1] = s.components(Preparation::Zero)?;
    let [b0, b1] = s.components(Preparation::One)?;
    let rho0 = DensityMatrix::mixture([(a0.0, &a0.1), (a1.0, &a1.1)]);
    let rho1 = DensityMatrix::mixture([(b0.0, &b0.1), (b1.0, &b1.1)]);
    Ok(trace_norm_distance(&rho0, &rho1))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureTerm {
    pub weight: f64,
    pub state: BlochVector,
}

/// Pure-state ensemble, ordered by descending weight.
#[derive(Clone, Debug, PartialEq)]
pub struct PureDecomposition {
    pub terms: Vec<PureTerm>,
}

impl PureDecomposition {
    pub fn average(&self) -> Result<DensityMatrix> {
        let states = self
            .terms
            .iter()
            .map(|t| bloch_to_density(t.state))
            .collect::<Result<Vec<_>>>()?;
        Ok(DensityMatrix::mixture(
            self.terms.iter().map(|t| t.weight).zip(states.iter()),
        ))
    }
}

/// Spectral decomposition of `ρ` into orthogonal pure states.
///
/// Weights tied within `1e-12` are ordered by descending lexicographic Bloch
/// coordinates, so `I/2` yields `|0⟩` before `|1⟩`.
pub fn pure_decomposition(rho: &DensityMatrix) -> Result<PureDecomposition> {
    rho.validate()?;
    let eig = rho.eigen();
    let mut terms: Vec<PureTerm> = (0..2)
        .filter(|&k| eig.values[k] >= ZERO_WEIGHT)
        .map(|k| PureTerm {
            weight: eig.values[k],
            state: bloch_components(&eig.projector(k)),
        })
        .collect();
    // A pure input is a single term of exact weight 1.
    if terms.len() == 1 {
        terms[0].weight = 1.0;
    }
    terms.sort_by(|a, b| {
        if (a.weight - b.weight).abs() > ZERO_WEIGHT {
            b.weight.total_cmp(&a.weight)
        } else {
            lexicographic(&b.state, &a.state)
        }
    });
    Ok(PureDecomposition { terms })
}

fn lexicographic(a: &BlochVector, b: &BlochVector) -> Ordering {
    a.to_array()
        .iter()
        .zip(b.to_array().iter())
        .map(|(x, y)| x.partial_cmp(y).unwrap_or(Ordering::Equal))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// JSON form of a scenario. Only `r0`/`r1` are required.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioDocument {
    pub r0: BlochVector,
    pub r1: BlochVector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_hat: Option<BlochVector>,
    #[serde(rename = "r_B", default, skip_serializing_if = "Option::is_none")]
    pub r_b: Option<BlochVector>,
}

impl From<&Scenario> for ScenarioDocument {
    fn from(s: &Scenario) -> Self {
        Self {
            r0: s.r0,
            r1: s.r1,
            p: Some(s.p),
            delta_hat: Some(s.delta_hat),
            r_b: Some(s.r_b),
        }
    }
}

impl ScenarioDocument {
    /// Rebuilds the scenario from `r0`/`r1` and checks any derived fields
    /// present in the document against it.
    pub fn resolve(&self) -> Result<Scenario> {
        let s = build_scenario(self.r0, self.r1)?;
        let residual = [
            self.p.map(|p| (p - s.p).abs()),
            self.delta_hat.map(|d| d.max_abs_diff(&s.delta_hat)),
            self.r_b.map(|r| r.max_abs_diff(&s.r_b)),
        ]
        .into_iter()
        .flatten()
        .fold(0.0, f64::max);
        if residual > DOCUMENT_TOL || residual.is_nan() {
            return Err(Error::InconsistentDocument { residual });
        }
        Ok(s)
    }
}

impl Serialize for Scenario {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        ScenarioDocument::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Scenario {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        ScenarioDocument::deserialize(deserializer)?
            .resolve()
            .map_err(serde::de::Error::custom)
    }
}
