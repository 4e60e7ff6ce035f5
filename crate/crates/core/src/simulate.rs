//! Monte-Carlo run of the steering protocol.
//!
//! Each round draws, in order: Alice's choice `j` (fair coin), the outcome
//! of her measurement `Mⱼ` (which component Bob now holds), and Bob's
//! detector outcome. Draw `k` of round `r` comes from a ChaCha stream keyed
//! by the seed with stream id `r`, so results do not depend on how rounds
//! are split across threads.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::discrimination::{response, BinaryPovm};
use crate::error::{Error, Result};
use crate::scenario::{Preparation, Scenario};
use crate::steering::{conditional_state, SteeringSetup};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig {
    pub scenario: Scenario,
    pub detector: BinaryPovm,
    pub rounds: u64,
    pub seed: u64,
    pub threads: usize,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::InvalidConfig("rounds must be at least 1".into()));
        }
        if self.threads == 0 {
            return Err(Error::InvalidConfig("threads must be at least 1".into()));
        }
        self.detector.validate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimRecord {
    pub round: u64,
    pub alice_choice: u8,
    pub alice_outcome: u8,
    pub bob_outcome: u8,
    pub correct: bool,
}

/// Raw counts; merged by addition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    /// `[j][i]`: Bob said `i` while Alice chose `j`.
    pub bob: [[u64; 2]; 2],
    /// `[j][k]`: Alice's measurement `Mⱼ` returned component `k`.
    pub alice: [[u64; 2]; 2],
    /// `[j][k]`: rounds with `i ≠ j` given Alice's `(j, k)`.
    pub errors: [[u64; 2]; 2],
}

impl Tally {
    fn add(&mut self, rec: &SimRecord) {
        let (j, k, i) = (
            rec.alice_choice as usize,
            rec.alice_outcome as usize,
            rec.bob_outcome as usize,
        );
        self.bob[j][i] += 1;
        self.alice[j][k] += 1;
        if !rec.correct {
            self.errors[j][k] += 1;
        }
    }

    fn merge(&mut self, other: &Tally) {
        for a in 0..2 {
            for b in 0..2 {
                self.bob[a][b] += other.bob[a][b];
                self.alice[a][b] += other.alice[a][b];
                self.errors[a][b] += other.errors[a][b];
            }
        }
    }

    pub fn rounds(&self) -> u64 {
        self.bob.iter().flatten().sum()
    }
}

/// An empirical frequency with its binomial standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_err: f64,
    pub trials: u64,
}

impl Estimate {
    /// With no trials the estimate is the uninformative 1/2.
    fn from_counts(hits: u64, trials: u64) -> Self {
        if trials == 0 {
            return Self {
                value: 0.5,
                std_err: 0.5,
                trials,
            };
        }
        let value = hits as f64 / trials as f64;
        Self {
            value,
            std_err: (value * (1.0 - value) / trials as f64).sqrt(),
            trials,
        }
    }

    /// `|x − value|` in units of `σ`, with `σ` taken at the reference value.
    pub fn z_score(&self, reference: f64) -> f64 {
        let sigma = (reference * (1.0 - reference) / self.trials.max(1) as f64).sqrt();
        let diff = (self.value - reference).abs();
        if sigma == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            diff / sigma
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimReport {
    pub rounds: u64,
    /// Fraction of rounds where Bob's output differs from Alice's choice.
    pub e_hat: Estimate,
    /// Error on rounds where Bob held the target state, averaged over `j`:
    /// the empirical `[P₁(ρ₀) + P₀(ρ₁)]/2`.
    pub target_error_hat: f64,
    pub target_error_std_err: f64,
    /// `d_hat[i][j]` estimates `Dᵢʲ`.
    pub d_hat: [[f64; 2]; 2],
    pub d_hat_std_err: [f64; 2],
    /// `[j][k]`: how often `Mⱼ` returned component `k`.
    pub alice_frequency: [[Estimate; 2]; 2],
    /// `[j][k]`: Bob's error rate given Alice's `(j, k)`.
    pub component_error: [[Estimate; 2]; 2],
    pub tally: Tally,
    pub elapsed_secs: f64,
    #[serde(skip)]
    pub records: Vec<SimRecord>,
}

/// Equality ignores wall-clock time.
impl PartialEq for SimReport {
    fn eq(&self, other: &Self) -> bool {
        self.rounds == other.rounds
            && self.e_hat == other.e_hat
            && self.target_error_hat == other.target_error_hat
            && self.target_error_std_err == other.target_error_std_err
            && self.d_hat == other.d_hat
            && self.d_hat_std_err == other.d_hat_std_err
            && self.alice_frequency == other.alice_frequency
            && self.component_error == other.component_error
            && self.tally == other.tally
            && self.records == other.records
    }
}

impl SimReport {
    pub fn from_records(records: Vec<SimRecord>) -> Self {
        let mut tally = Tally::default();
        records.iter().for_each(|r| tally.add(r));
        Self::from_tally(tally, records, 0.0)
    }

    fn from_tally(tally: Tally, records: Vec<SimRecord>, elapsed_secs: f64) -> Self {
        let rounds = tally.rounds();
        let errors: u64 = tally.errors.iter().flatten().sum();
        let per_choice = [
            tally.bob[0][0] + tally.bob[0][1],
            tally.bob[1][0] + tally.bob[1][1],
        ];

        let mut d_hat = [[0.0; 2]; 2];
        let mut d_hat_std_err = [0.0; 2];
        for j in 0..2 {
            let est = Estimate::from_counts(tally.bob[j][0], per_choice[j]);
            d_hat[0][j] = est.value;
            d_hat[1][j] = 1.0 - est.value;
            d_hat_std_err[j] = est.std_err;
        }

        let alice_frequency =
            [0, 1].map(|j| [0, 1].map(|k| Estimate::from_counts(tally.alice[j][k], per_choice[j])));
        let component_error = [0, 1]
            .map(|j| [0, 1].map(|k| Estimate::from_counts(tally.errors[j][k], tally.alice[j][k])));
        let target = [component_error[0][0], component_error[1][0]];
        let target_error_hat = 0.5 * (target[0].value + target[1].value);
        let target_error_std_err = 0.5 * target[0].std_err.hypot(target[1].std_err);

        Self {
            rounds,
            e_hat: Estimate::from_counts(errors, rounds),
            target_error_hat,
            target_error_std_err,
            d_hat,
            d_hat_std_err,
            alice_frequency,
            component_error,
            tally,
            elapsed_secs,
            records,
        }
    }
}

/// Per-round probabilities, resolved once from the steering construction.
struct RoundModel {
    /// `[j]`: probability that `Mⱼ` prepares the target component.
    target_prob: [f64; 2],
    /// `[j][k]`: `P₀` of Bob's conditional state.
    bob_p0: [[f64; 2]; 2],
}

impl RoundModel {
    fn new(c: &SimConfig) -> Result<Self> {
        let setup = SteeringSetup::for_scenario(&c.scenario)?;
        let mut target_prob = [0.0; 2];
        let mut bob_p0 = [[0.0; 2]; 2];
        for j in Preparation::BOTH {
            let m = setup.measurement(j);
            for (k, entry) in m.entries.iter().enumerate() {
                let (prob, state) = conditional_state(&setup.state, &entry.element)?;
                if k == 0 {
                    target_prob[j.index()] = prob;
                }
                bob_p0[j.index()][k] = response(&c.detector, &state).p0;
            }
        }
        Ok(Self {
            target_prob,
            bob_p0,
        })
    }

    fn play(&self, rng: &mut ChaCha8Rng, round: u64) -> SimRecord {
        rng.set_stream(round);
        rng.set_word_pos(0);
        let j = usize::from(rng.random::<f64>() >= 0.5);
        let k = usize::from(rng.random::<f64>() >= self.target_prob[j]);
        let i = usize::from(rng.random::<f64>() >= self.bob_p0[j][k]);
        SimRecord {
            round,
            alice_choice: j as u8,
            alice_outcome: k as u8,
            bob_outcome: i as u8,
            correct: i == j,
        }
    }
}

pub fn run_protocol(c: &SimConfig) -> Result<SimReport> {
    c.validate()?;
    let start = Instant::now();
    let model = RoundModel::new(c)?;
    let base = ChaCha8Rng::seed_from_u64(c.seed);

    let threads = (c.threads as u64).min(c.rounds);
    let chunk = c.rounds.div_ceil(threads);
    let run_chunk = |lo: u64, hi: u64| {
        let mut rng = base.clone();
        let mut tally = Tally::default();
        let records: Vec<SimRecord> = (lo..hi)
            .map(|r| {
                let rec = model.play(&mut rng, r);
                tally.add(&rec);
                rec
            })
            .collect();
        (tally, records)
    };

    let parts: Vec<(Tally, Vec<SimRecord>)> = if threads == 1 {
        vec![run_chunk(0, c.rounds)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    let lo = t * chunk;
                    let hi = ((t + 1) * chunk).min(c.rounds);
                    let run_chunk = &run_chunk;
                    scope.spawn(move || run_chunk(lo, hi.max(lo)))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("simulation worker panicked"))
                .collect()
        })
    };

    let mut tally = Tally::default();
    let mut records = Vec::with_capacity(c.rounds as usize);
    for (t, recs) in parts {
        tally.merge(&t);
        records.extend(recs);
    }
    Ok(SimReport::from_tally(
        tally,
        records,
        start.elapsed().as_secs_f64(),
    ))
}

/// `D̂₀⁰ + D̂₁¹ − 1`.
pub fn empirical_gap(r: &SimReport) -> f64 {
    r.d_hat[0][0] + r.d_hat[1][1] - 1.0
}

/// Writes one CSV row per round, with a header.
pub fn write_records<W: Write>(r: &SimReport, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record([
        "round",
        "alice_choice",
        "alice_outcome",
        "bob_outcome",
        "correct",
    ])?;
    for rec in &r.records {
        w.write_record([
            rec.round.to_string(),
            rec.alice_choice.to_string(),
            rec.alice_outcome.to_string(),
            rec.bob_outcome.to_string(),
            u8::from(rec.correct).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
