//! State-vector simulator and closed-form oracles for a two-spin quantum
//! Turing machine: a head spin rotated by a Fibonacci-driven angle sequence
//! and a tape spin flipped by a head-controlled NOT.

pub mod analytic;
pub mod drive;
pub mod error;
pub mod experiment;
pub mod gates;
pub mod metrics;
pub mod statevec;

pub use drive::{Angle, DriveRule, DriveSequence, PiFraction};
pub use error::{QtmError, Result};
pub use experiment::{run_experiment, ExperimentConfig, ExperimentKind, ExperimentResult, OutputFormat};
pub use gates::{head_rotation, lambda_operator, qcnot, run, run_with_angles, GateMatrix, Generator, Trajectory};
pub use metrics::{bures_d2, overlap_oprime, DistanceSeries, Subsystem};
pub use statevec::{BlochVector, DensityMatrix, NetworkState, TapeSpin};
