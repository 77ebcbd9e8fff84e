//! Workloads shared by the benchmarks.

use qtm_core::{Angle, DriveSequence, NetworkState, TapeSpin};

/// Steps in the long-trajectory workloads.
pub const TRAJECTORY_STEPS: usize = 10_000;

/// `|0⟩ ⊗ |0⟩` and enough Fibonacci angles for `steps` steps.
pub fn ground_workload(alpha1: Angle, steps: usize) -> (NetworkState, Vec<f64>) {
    let state = NetworkState::product(0.0, &[TapeSpin::Zero]).expect("two-spin product state");
    let angles = DriveSequence::fibonacci(alpha1).angles(steps.div_ceil(2));
    (state, angles)
}

/// The exact `2π/5` drive and the decimal `(2/5)·3.141592654`.
pub fn reference_angles() -> [(&'static str, Angle); 2] {
    [
        ("exact", Angle::exact(2, 5).expect("valid fraction")),
        ("decimal", Angle::from_radians(1.2566370616)),
    ]
}
