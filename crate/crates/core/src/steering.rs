//! Remote preparation of ensemble decompositions.
//!
//! Bob's shared state `ρ_B` is purified onto a two-qubit pure state held by
//! Alice and Bob. For any decomposition `ρ_B = Σₖ wₖ σₖ`, Alice's POVM with
//! elements `wₖ·(ρ_B^{-1/2} σₖ ρ_B^{-1/2})ᵀ` leaves Bob in `σₖ` with
//! probability `wₖ`. All transposes are taken in the computational basis.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qubit::{trace_norm_distance, DensityMatrix, Mat2};
use crate::scenario::{Preparation, Scenario};

/// Residual tolerance for the decomposition to match Bob's marginal.
pub const AVERAGE_TOL: f64 = 1e-10;

/// Minimum eigenvalue of `ρ_B` below which `ρ_B^{-1/2}` is refused.
pub const SINGULARITY_CUTOFF: f64 = 1e-10;

/// Below this an outcome is treated as impossible.
pub const ZERO_PROBABILITY: f64 = 1e-14;

/// Two-qubit pure state; amplitude index is `2·a + b` for Alice's `a` and Bob's `b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JointPureState {
    pub amplitudes: [Complex64; 4],
}

impl JointPureState {
    pub fn amplitude(&self, alice: usize, bob: usize) -> Complex64 {
        self.amplitudes[2 * alice + bob]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn bob_marginal(&self) -> DensityMatrix {
        self.unnormalized_bob_state(&Mat2::IDENTITY)
    }

    pub fn alice_marginal(&self) -> DensityMatrix {
        let mut m = Mat2::ZERO;
        for a in 0..2 {
            for a2 in 0..2 {
                m.0[a][a2] = (0..2)
                    .map(|b| self.amplitude(a, b) * self.amplitude(a2, b).conj())
                    .sum();
            }
        }
        DensityMatrix::from_matrix(m)
    }

    /// `(U ⊗ I)|ψ⟩`: the same purification in a rotated Alice basis.
    pub fn rotate_alice(&self, u: &Mat2) -> Self {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for b in 0..2 {
            let column = u.apply([self.amplitude(0, b), self.amplitude(1, b)]);
            out[b] = column[0];
            out[2 + b] = column[1];
        }
        Self { amplitudes: out }
    }

    /// `Tr_A[(E ⊗ I)|ψ⟩⟨ψ|]`, not renormalized.
    fn unnormalized_bob_state(&self, element: &Mat2) -> DensityMatrix {
        let mut m = Mat2::ZERO;
        for b in 0..2 {
            for b2 in 0..2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for a in 0..2 {
                    for a2 in 0..2 {
                        acc += element.get(a, a2)
                            * self.amplitude(a2, b)
                            * self.amplitude(a, b2).conj();
                    }
                }
                m.0[b][b2] = acc;
            }
        }
        DensityMatrix::from_matrix(m)
    }
}

/// Minimal purification `Σᵢ |i⟩_A ⊗ √ρ_B|i⟩_B`.
pub fn purify(rho_b: &DensityMatrix) -> Result<JointPureState> {
    rho_b.validate()?;
    let sqrt = rho_b.eigen().spectral_map(|x| x.max(0.0).sqrt());
    let mut amplitudes = [Complex64::new(0.0, 0.0); 4];
    for i in 0..2 {
        for b in 0..2 {
            amplitudes[2 * i + b] = sqrt.get(b, i);
        }
    }
    Ok(JointPureState { amplitudes })
}

/// Outcome probability and Bob's post-measurement state when Alice's
/// measurement returns the outcome for `element`.
pub fn conditional_state(psi: &JointPureState, element: &Mat2) -> Result<(f64, DensityMatrix)> {
    let unnormalized = psi.unnormalized_bob_state(element);
    let prob = unnormalized.matrix().trace().re;
    if prob < ZERO_PROBABILITY {
        return Err(Error::ZeroProbability { prob });
    }
    Ok((
        prob,
        DensityMatrix::from_matrix(unnormalized.matrix().scale(1.0 / prob)),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SteeringEntry {
    pub element: Mat2,
    pub target_weight: f64,
    pub target_state: DensityMatrix,
}

/// Alice's POVM together with the ensemble it is meant to prepare.
#[derive(Clone, Debug, PartialEq)]
pub struct SteeringMeasurement {
    pub entries: Vec<SteeringEntry>,
}

/// Worst-case deviations of a steering measurement from its contract.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SteeringCheck {
    pub completeness: f64,
    pub min_eigenvalue: f64,
    pub probability: f64,
    pub conditional_state: f64,
    pub marginal: f64,
}

impl SteeringMeasurement {
    pub fn elements(&self) -> impl Iterator<Item = &Mat2> {
        self.entries.iter().map(|e| &e.element)
    }

    /// Measures every entry against `ψ` and reports the largest deviations.
    pub fn check(&self, psi: &JointPureState) -> Result<SteeringCheck> {
        let mut sum = Mat2::ZERO;
        let mut marginal = Mat2::ZERO;
        let mut check = SteeringCheck {
            min_eigenvalue: f64::INFINITY,
            ..Default::default()
        };
        for entry in &self.entries {
            sum += entry.element;
            check.min_eigenvalue = check
                .min_eigenvalue
                .min(crate::qubit::eig2(&entry.element).values[1]);
            let (prob, state) = conditional_state(psi, &entry.element)?;
            check.probability = check.probability.max((prob - entry.target_weight).abs());
            check.conditional_state = check
                .conditional_state
                .max(trace_norm_distance(&state, &entry.target_state));
            marginal += state.matrix().scale(prob);
        }
        check.completeness = sum.max_abs_diff(&Mat2::IDENTITY);
        check.marginal = marginal.max_abs_diff(psi.bob_marginal().matrix());
        Ok(check)
    }
}

/// Builds Alice's POVM steering Bob into the given decomposition of his marginal.
///
/// `psi` must be the purification returned by [`purify`]; for a purification
/// rotated by `U` on Alice's side, conjugate the elements by the same `U`.
pub fn steering_measurement(
    psi: &JointPureState,
    components: &[(f64, DensityMatrix)],
) -> Result<SteeringMeasurement> {
    let rho_b = psi.bob_marginal();
    let average = DensityMatrix::mixture(components.iter().map(|(w, s)| (*w, s)));
    let residual = average.matrix().max_abs_diff(rho_b.matrix());
    if residual > AVERAGE_TOL || residual.is_nan() {
        return Err(Error::MismatchedAverage { residual });
    }
    let eig = rho_b.eigen();
    let min_eigenvalue = eig.values[1];
    if min_eigenvalue < SINGULARITY_CUTOFF {
        return Err(Error::NearSingularAverage { min_eigenvalue });
    }
    let inv_sqrt = eig.spectral_map(|x| 1.0 / x.sqrt());
    let entries = components
        .iter()
        .map(|(w, state)| SteeringEntry {
            element: (inv_sqrt * *state.matrix() * inv_sqrt)
                .scale(*w)
                .transpose(),
            target_weight: *w,
            target_state: *state,
        })
        .collect();
    Ok(SteeringMeasurement { entries })
}

/// The purification of `ρ_B` and Alice's measurements `M₀`, `M₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct SteeringSetup {
    pub state: JointPureState,
    pub measurements: [SteeringMeasurement; 2],
}

impl SteeringSetup {
    pub fn for_scenario(s: &Scenario) -> Result<Self> {
        let state = purify(&s.shared_state()?)?;
        let m0 = steering_measurement(&state, &s.components(Preparation::Zero)?)?;
        let m1 = steering_measurement(&state, &s.components(Preparation::One)?)?;
        Ok(Self {
            state,
            measurements: [m0, m1],
        })
    }

    pub fn measurement(&self, j: Preparation) -> &SteeringMeasurement {
        &self.measurements[j.index()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::{bloch_to_density, BlochVector};
    use crate::scenario::{build_scenario, pure_decomposition};

    fn v(x: f64, y: f64, z: f64) -> BlochVector {
        BlochVector::new(x, y, z)
    }

    /// Forms `(E ⊗ I)|ψ⟩⟨ψ|` as a dense 4×4 matrix and traces out Alice.
    fn brute_force_conditional(psi: &JointPureState, element: &Mat2) -> (f64, Mat2) {
        let zero = Complex64::new(0.0, 0.0);
        let mut kron = [[zero; 4]; 4];
        let mut proj = [[zero; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                let bob_id = if r % 2 == c % 2 { 1.0 } else { 0.0 };
                kron[r][c] = element.get(r / 2, c / 2) * bob_id;
                proj[r][c] = psi.amplitudes[r] * psi.amplitudes[c].conj();
            }
        }
        let mut product = [[zero; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                product[r][c] = (0..4).map(|k| kron[r][k] * proj[k][c]).sum();
            }
        }
        let mut out = Mat2::ZERO;
        for b in 0..2 {
            for b2 in 0..2 {
                out.0[b][b2] = product[b][b2] + product[2 + b][2 + b2];
            }
        }
        let prob = out.trace().re;
        (prob, out.scale(1.0 / prob))
    }

    #[test]
    fn purify_examples() {
        let psi = purify(&DensityMatrix::maximally_mixed()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [h, 0.0, 0.0, h];
        for (a, e) in psi.amplitudes.iter().zip(expected) {
            assert!((a - Complex64::from(e)).norm() < 1e-15);
        }

        let psi = purify(&DensityMatrix::from_matrix(Mat2::diag(1.0, 0.0))).unwrap();
        assert_eq!(psi.amplitudes[0], Complex64::from(1.0));
        assert!(psi.amplitudes[1..].iter().all(|z| z.norm() == 0.0));

        let rho = DensityMatrix::from_matrix(Mat2::diag(0.75, 0.25));
        let psi = purify(&rho).unwrap();
        let expected = [0.75f64.sqrt(), 0.0, 0.0, 0.5];
        for (a, e) in psi.amplitudes.iter().zip(expected) {
            assert!((a - Complex64::from(e)).norm() < 1e-15);
        }
        let (prob, marginal) = brute_force_conditional(&psi, &Mat2::IDENTITY);
        assert!((prob - 1.0).abs() < 1e-15);
        assert!(marginal.max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn purification_marginals() {
        let rho = bloch_to_density(v(0.3, -0.4, 0.5)).unwrap();
        let psi = purify(&rho).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-14);
        assert!(psi.bob_marginal().matrix().max_abs_diff(rho.matrix()) < 1e-14);
        assert!(
            psi.alice_marginal()
                .matrix()
                .max_abs_diff(&rho.matrix().transpose())
                < 1e-14
        );
    }

    #[test]
    fn conditional_state_examples() {
        let rho = bloch_to_density(v(0.2, 0.1, -0.3)).unwrap();
        let psi = purify(&rho).unwrap();
        let (prob, state) = conditional_state(&psi, &Mat2::IDENTITY).unwrap();
        assert!((prob - 1.0).abs() < 1e-14);
        assert!(state.matrix().max_abs_diff(rho.matrix()) < 1e-14);

        let bell = purify(&DensityMatrix::maximally_mixed()).unwrap();
        let (prob, state) = conditional_state(&bell, &Mat2::diag(1.0, 0.0)).unwrap();
        assert!((prob - 0.5).abs() < 1e-15);
        assert!(state.matrix().max_abs_diff(&Mat2::diag(1.0, 0.0)) < 1e-15);

        let target = bloch_to_density(v(0.8, 0.0, 0.0)).unwrap();
        let element = target.matrix().scale(10.0 / 9.0).transpose();
        let (prob, state) = conditional_state(&bell, &element).unwrap();
        let (bf_prob, bf_state) = brute_force_conditional(&bell, &element);
        assert!((prob - 5.0 / 9.0).abs() < 1e-15 && (prob - bf_prob).abs() < 1e-15);
        assert!(state.matrix().max_abs_diff(target.matrix()) < 1e-15);
        assert!(state.matrix().max_abs_diff(&bf_state) < 1e-15);
    }

    #[test]
    fn conditional_state_zero_probability() {
        let psi = purify(&DensityMatrix::from_matrix(Mat2::diag(1.0, 0.0))).unwrap();
        let err = conditional_state(&psi, &Mat2::diag(0.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::ZeroProbability { .. }));
    }

    #[test]
    fn antipodal_scenario_elements() {
        let s = build_scenario(v(0.8, 0.0, 0.0), v(-0.8, 0.0, 0.0)).unwrap();
        let setup = SteeringSetup::for_scenario(&s).unwrap();
        let m0 = setup.measurement(Preparation::Zero);
        let e0 = bloch_to_density(v(0.8, 0.0, 0.0))
            .unwrap()
            .matrix()
            .scale(10.0 / 9.0)
            .transpose();
        let e1 = bloch_to_density(v(-1.0, 0.0, 0.0))
            .unwrap()
            .matrix()
            .scale(8.0 / 9.0)
            .transpose();
        assert!(m0.entries[0].element.max_abs_diff(&e0) < 1e-14);
        assert!(m0.entries[1].element.max_abs_diff(&e1) < 1e-14);
        let ev0 = crate::qubit::eig2(&m0.entries[0].element).values;
        let ev1 = crate::qubit::eig2(&m0.entries[1].element).values;
        assert!((ev0[0] - 1.0).abs() < 1e-14 && (ev0[1] - 1.0 / 9.0).abs() < 1e-14);
        assert!((ev1[0] - 8.0 / 9.0).abs() < 1e-14 && ev1[1].abs() < 1e-14);

        for j in Preparation::BOTH {
            let check = setup.measurement(j).check(&setup.state).unwrap();
            assert!(check.completeness < 1e-14);
            assert!(check.probability < 1e-14);
            assert!(check.conditional_state < 1e-14);
            assert!(check.marginal < 1e-14);
        }
    }

    #[test]
    fn trivial_decomposition_is_identity() {
        let rho = bloch_to_density(v(0.1, 0.5, -0.2)).unwrap();
        let psi = purify(&rho).unwrap();
        let m = steering_measurement(&psi, &[(1.0, rho)]).unwrap();
        assert_eq!(m.entries.len(), 1);
        assert!(m.entries[0].element.max_abs_diff(&Mat2::IDENTITY) < 1e-14);
    }

    #[test]
    fn spectral_decomposition_probabilities_are_eigenvalues() {
        let rho = bloch_to_density(v(0.1, 0.5, -0.2)).unwrap();
        let psi = purify(&rho).unwrap();
        let d = pure_decomposition(&rho).unwrap();
        let components: Vec<_> = d
            .terms
            .iter()
            .map(|t| (t.weight, bloch_to_density(t.state).unwrap()))
            .collect();
        let m = steering_measurement(&psi, &components).unwrap();
        let eig = rho.eigen();
        for (entry, lambda) in m.entries.iter().zip(eig.values) {
            let (prob, state) = conditional_state(&psi, &entry.element).unwrap();
            assert!((prob - lambda).abs() < 1e-13);
            assert!(trace_norm_distance(&state, &entry.target_state) < 1e-13);
        }
    }

    #[test]
    fn mismatched_and_singular_inputs() {
        let rho = bloch_to_density(v(0.0, 0.0, 0.5)).unwrap();
        let psi = purify(&rho).unwrap();
        let wrong = bloch_to_density(v(0.0, 0.0, 0.4)).unwrap();
        assert!(matches!(
            steering_measurement(&psi, &[(1.0, wrong)]),
            Err(Error::MismatchedAverage { .. })
        ));

        let pure = bloch_to_density(v(0.0, 0.0, 1.0)).unwrap();
        let psi = purify(&pure).unwrap();
        assert!(matches!(
            steering_measurement(&psi, &[(1.0, pure)]),
            Err(Error::NearSingularAverage { .. })
        ));
    }
}
