//! Minimum-error discrimination of qubit states and its no-signalling bound.
//!
//! Two target states are embedded in a pair of ensembles with identical
//! averages. Alice can steer Bob's half of a shared entangled state into
//! either ensemble, so any detector Bob uses to tell the targets apart also
//! bounds how well he could learn Alice's choice. Requiring that he learn
//! nothing reproduces the Helstrom bound exactly.
//!
//! - [`qubit`]: Bloch vectors, density matrices, closed-form 2×2 eigensystems.
//! - [`scenario`]: the equal-average ensemble construction.
//! - [`discrimination`]: Helstrom bound, optimal detector, error rates.
//! - [`steering`]: purification and Alice's steering measurements.
//! - [`nosignal`]: the bound chain for physical and black-box detectors.
//! - [`simulate`]: seeded Monte-Carlo runs of the protocol.
//! - [`scan`]: brute-force sweep over binary POVMs.

pub mod discrimination;
pub mod error;
pub mod nosignal;
pub mod qubit;
pub mod sampling;
pub mod scan;
pub mod scenario;
pub mod simulate;
pub mod steering;

pub use discrimination::{
    error_rate, helstrom_bound, helstrom_detector, response, BinaryPovm, DetectorResponse,
};
pub use error::{Error, Result};
pub use nosignal::{
    blackbox_report, ensemble_response, nosignal_error_bound, signalling_gap, BlackBoxResponse,
    SignallingReport,
};
pub use qubit::{
    bloch_to_density, density_to_bloch, eig2, trace_norm_distance, BlochVector, DensityMatrix,
    EigenPair2, Mat2,
};
pub use scenario::{
    build_scenario, pure_decomposition, verify_ensemble_equality, Preparation, Scenario,
};
pub use simulate::{empirical_gap, run_protocol, write_records, SimConfig, SimReport};
pub use steering::{
    conditional_state, purify, steering_measurement, JointPureState, SteeringMeasurement,
    SteeringSetup,
};
