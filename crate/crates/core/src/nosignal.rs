//! The no-signalling argument as executable checks.
//!
//! `Dᵢʲ` is the probability that Bob's detector reports `i` when Alice has
//! prepared ensemble `j`. Because both ensembles average to the same `ρ_B`,
//! any physical detector has `D₀⁰ + D₁¹ = 1`. A black-box detector that beats
//! the Helstrom error forces `D₀⁰ + D₁¹ > 1` whatever it does on the flag
//! states, which would let Bob read Alice's choice.

use serde::{Deserialize, Serialize};

use crate::discrimination::{response, BinaryPovm};
use crate::error::{Error, Result};
use crate::qubit::bloch_to_density;
use crate::scenario::{Preparation, Scenario};

/// Gap lower bounds above this are reported as signalling.
pub const SIGNALLING_THRESHOLD: f64 = 1e-9;

/// Slack for the inequality flags.
pub const CHAIN_TOL: f64 = 1e-12;

/// Closed interval `[lo, hi]`; serialized as a two-element array.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// `1 − [lo, hi]`.
    pub fn complement(&self) -> Self {
        Self::new(1.0 - self.hi, 1.0 - self.lo)
    }
}

impl std::ops::Add for Interval {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.lo + rhs.lo, self.hi + rhs.hi)
    }
}

impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        [self.lo, self.hi].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Point(f64),
            Pair([f64; 2]),
        }
        Ok(match Repr::deserialize(deserializer)? {
            Repr::Point(x) => Interval::point(x),
            Repr::Pair([lo, hi]) => Interval::new(lo, hi),
        })
    }
}

/// Input/output table of a detector with no assumed physical model.
/// `None` flag responses are unconstrained in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlackBoxResponse {
    pub p0_rho0: f64,
    pub p0_rho1: f64,
    #[serde(default)]
    pub p0_delta_plus: Option<f64>,
    #[serde(default)]
    pub p0_delta_minus: Option<f64>,
}

impl BlackBoxResponse {
    /// The table a physical detector produces on the scenario's four states.
    pub fn from_povm(d: &BinaryPovm, s: &Scenario) -> Result<Self> {
        let p0 = |r| -> Result<f64> { Ok(response(d, &bloch_to_density(r)?).p0) };
        Ok(Self {
            p0_rho0: p0(s.r0)?,
            p0_rho1: p0(s.r1)?,
            p0_delta_plus: Some(p0(s.delta_hat)?),
            p0_delta_minus: Some(p0(-s.delta_hat)?),
        })
    }

    /// Detector reporting the right target with probability `1 − error` on each.
    pub fn symmetric(error: f64) -> Self {
        Self {
            p0_rho0: 1.0 - error,
            p0_rho1: error,
            p0_delta_plus: None,
            p0_delta_minus: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let entries = [
            Some(self.p0_rho0),
            Some(self.p0_rho1),
            self.p0_delta_plus,
            self.p0_delta_minus,
        ];
        for x in entries.into_iter().flatten() {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::InvalidConfig(format!(
                    "response probability {x} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

/// Truth values of each link of the bound chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainFlags {
    /// `D₀⁰ ≥ p·P₀(ρ₀)`
    pub d00_covers_target: bool,
    /// `D₁¹ ≥ p·P₁(ρ₁)`
    pub d11_covers_target: bool,
    /// `D₀⁰ + D₁¹ ≤ 1` is achievable
    pub no_signalling: bool,
    /// `p·(P₀(ρ₀) + P₁(ρ₁)) ≤ 1`
    pub weighted_success_bounded: bool,
    /// `e ≥ 1 − 1/(2p)`
    pub above_nosignal_floor: bool,
    /// `e ≥ 1/2 − ‖r0 − r1‖/4`
    pub above_helstrom_floor: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignallingReport {
    pub d00: Interval,
    pub d10: Interval,
    pub d01: Interval,
    pub d11: Interval,
    pub gap: Interval,
    pub error_rate: f64,
    pub nosignal_floor: f64,
    pub helstrom_floor: f64,
    pub chain_flags: ChainFlags,
    pub signalling: bool,
}

/// `(D₀ʲ, D₁ʲ)` for a physical detector on ensemble `j`.
pub fn ensemble_response(d: &BinaryPovm, s: &Scenario, j: Preparation) -> Result<(f64, f64)> {
    let [(w_target, target), (w_flag, flag)] = s.components(j)?;
    let d0 = w_target * response(d, &target).p0 + w_flag * response(d, &flag).p0;
    let d1 = w_target * response(d, &target).p1 + w_flag * response(d, &flag).p1;
    Ok((d0, d1))
}

/// `D₀⁰ + D₁¹ − 1` for a physical detector.
pub fn signalling_gap(d: &BinaryPovm, s: &Scenario) -> Result<f64> {
    let (d00, _) = ensemble_response(d, s, Preparation::Zero)?;
    let (_, d11) = ensemble_response(d, s, Preparation::One)?;
    Ok(d00 + d11 - 1.0)
}

/// The error floor implied by no-signalling, `1 − 1/(2p)`.
pub fn nosignal_error_bound(s: &Scenario) -> f64 {
    1.0 - 1.0 / (2.0 * s.p)
}

/// Evaluates the bound chain for a black-box detector, propagating
/// unspecified flag responses as intervals over `[0, 1]`.
pub fn blackbox_report(b: &BlackBoxResponse, s: &Scenario) -> Result<SignallingReport> {
    b.validate()?;
    let p = s.p;
    let flag = |x: Option<f64>| x.map_or(Interval::new(0.0, 1.0), Interval::point);
    let flag_plus = flag(b.p0_delta_plus);
    let flag_minus = flag(b.p0_delta_minus).complement();

    let target0 = p * b.p0_rho0;
    let target1 = p * (1.0 - b.p0_rho1);
    let d00 = Interval::new(
        target0 + (1.0 - p) * flag_plus.lo,
        target0 + (1.0 - p) * flag_plus.hi,
    );
    let d11 = Interval::new(
        target1 + (1.0 - p) * flag_minus.lo,
        target1 + (1.0 - p) * flag_minus.hi,
    );
    let gap = d00 + d11 + Interval::point(-1.0);

    let error_rate = 0.5 * ((1.0 - b.p0_rho0) + b.p0_rho1);
    let nosignal_floor = nosignal_error_bound(s);
    let helstrom_floor = 0.5 - 0.25 * s.separation();
    let signalling = gap.lo > SIGNALLING_THRESHOLD;

    let chain_flags = ChainFlags {
        d00_covers_target: d00.lo >= target0 - CHAIN_TOL,
        d11_covers_target: d11.lo >= target1 - CHAIN_TOL,
        no_signalling: !signalling,
        weighted_success_bounded: target0 + target1 <= 1.0 + CHAIN_TOL,
        above_nosignal_floor: error_rate >= nosignal_floor - CHAIN_TOL,
        above_helstrom_floor: error_rate >= helstrom_floor - CHAIN_TOL,
    };

    Ok(SignallingReport {
        d00,
        d10: d00.complement(),
        d01: d11.complement(),
        d11,
        gap,
        error_rate,
        nosignal_floor,
        helstrom_floor,
        chain_flags,
        signalling,
    })
}
