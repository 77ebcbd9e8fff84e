//! Squared trace distance `D² = Tr((ρ − ρ')²)` between perturbed and
//! unperturbed evolutions, the overlap `O'`, and per-step distance series.

use std::fmt;
use std::str::FromStr;

use crate::error::{QtmError, Result};
use crate::gates::Trajectory;
use crate::statevec::{DensityMatrix, NetworkState};

/// Slack allowed on the `[0, 2]` bound of `D²`.
pub const D2_BOUND_SLACK: f64 = 1e-12;

/// `Tr((ρ − ρ')²)` for density matrices of equal dimension.
pub fn bures_d2(rho: &DensityMatrix, rho_prime: &DensityMatrix) -> Result<f64> {
    rho.squared_distance(rho_prime)
}

/// `2(1 − |⟨ψ|ψ'⟩|²)`, the same distance for two pure states.
pub fn bures_d2_pure(psi: &NetworkState, psi_prime: &NetworkState) -> Result<f64> {
    Ok(2.0 * (1.0 - psi.inner_product(psi_prime)?.norm_sqr()))
}

/// `O' = |⟨ψ'_n|ψ_n⟩|²` between two runs at step `n`.
pub fn overlap_oprime(traj: &Trajectory, traj_pert: &Trajectory, n: usize) -> Result<f64> {
    let psi = traj.state(n)?;
    let psi_prime = traj_pert.state(n)?;
    Ok(psi_prime.inner_product(psi)?.norm_sqr())
}

/// Part of the network a distance is measured on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    Head,
    Tape,
    Total,
}

impl Subsystem {
    pub const ALL: [Subsystem; 3] = [Subsystem::Head, Subsystem::Tape, Subsystem::Total];
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subsystem::Head => "head",
            Subsystem::Tape => "tape",
            Subsystem::Total => "total",
        })
    }
}

impl FromStr for Subsystem {
    type Err = QtmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "head" => Ok(Subsystem::Head),
            "tape" => Ok(Subsystem::Tape),
            "total" => Ok(Subsystem::Total),
            other => Err(QtmError::InvalidArgument(format!(
                "subsystem `{other}` (expected head, tape or total)"
            ))),
        }
    }
}

/// `D²` of two network states restricted to a subsystem. Head and tape use
/// the reduced 2×2 operators; `Total` uses the full projectors.
pub fn subsystem_d2(a: &NetworkState, b: &NetworkState, subsystem: Subsystem) -> Result<f64> {
    match subsystem {
        Subsystem::Head => bures_d2(&a.partial_trace(0)?, &b.partial_trace(0)?),
        Subsystem::Tape => bures_d2(&a.partial_trace(1)?, &b.partial_trace(1)?),
        Subsystem::Total => bures_d2(&DensityMatrix::from_pure(a), &DensityMatrix::from_pure(b)),
    }
}

/// A step where `D²` fell back well below its earlier maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Revival {
    pub step: usize,
    pub d2: f64,
    pub running_max: f64,
}

/// `D²(n)` for `n = 0..=steps` on one subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceSeries {
    pub subsystem: Subsystem,
    pub entries: Vec<(usize, f64)>,
}

impl DistanceSeries {
    pub fn from_trajectories(traj: &Trajectory, traj_pert: &Trajectory, subsystem: Subsystem) -> Result<Self> {
        if traj.steps() != traj_pert.steps() {
            return Err(QtmError::DimensionMismatch {
                left: traj.steps(),
                right: traj_pert.steps(),
            });
        }
        let entries = traj
            .states()
            .iter()
            .zip(traj_pert.states())
            .enumerate()
            .map(|(n, (a, b))| Ok((n, subsystem_d2(a, b, subsystem)?)))
            .collect::<Result<_>>()?;
        Ok(DistanceSeries { subsystem, entries })
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|&(_, d2)| d2)
    }

    pub fn at(&self, n: usize) -> Option<f64> {
        self.entries.get(n).map(|&(_, d2)| d2)
    }

    pub fn max(&self) -> f64 {
        self.values().fold(0.0, f64::max)
    }

    /// First step whose `D²` exceeds `threshold`.
    pub fn first_exceeding(&self, threshold: f64) -> Option<usize> {
        self.entries.iter().find(|&&(_, d2)| d2 > threshold).map(|&(n, _)| n)
    }

    /// First step `n ≥ start` with `D²(n) < fraction·max_{k<n} D²(k)` while that
    /// running maximum is at least `min_peak`.
    pub fn find_revival(&self, start: usize, fraction: f64, min_peak: f64) -> Option<Revival> {
        let mut running_max = 0.0f64;
        for &(n, d2) in &self.entries {
            if n >= start && running_max >= min_peak && d2 < fraction * running_max {
                return Some(Revival {
                    step: n,
                    d2,
                    running_max,
                });
            }
            running_max = running_max.max(d2);
        }
        None
    }

    /// Whether every entry lies within `[−slack, 2 + slack]`.
    pub fn within_bounds(&self) -> bool {
        self.values()
            .all(|d2| (-D2_BOUND_SLACK..=2.0 + D2_BOUND_SLACK).contains(&d2))
    }
}

/// Runs both evolutions and returns `D²` on the chosen subsystem.
pub fn distance_series(
    drives: (&[f64], &[f64]),
    initials: (&NetworkState, &NetworkState),
    subsystem: Subsystem,
    steps: usize,
) -> Result<DistanceSeries> {
    let traj = crate::gates::run_with_angles(initials.0, drives.0, steps)?;
    let traj_pert = crate::gates::run_with_angles(initials.1, drives.1, steps)?;
    DistanceSeries::from_trajectories(&traj, &traj_pert, subsystem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drive::{Angle, DriveRule, DriveSequence};
    use crate::gates::run;
    use crate::statevec::TapeSpin;
    use num_complex::Complex64;

    #[test]
    fn identical_states_are_at_distance_zero() {
        let s = NetworkState::product(0.4, &[TapeSpin::Plus]).unwrap();
        for sub in Subsystem::ALL {
            assert!(subsystem_d2(&s, &s, sub).unwrap().abs() < 1e-15);
        }
        assert!(bures_d2_pure(&s, &s).unwrap().abs() < 1e-15);
    }

    #[test]
    fn orthogonal_pure_states_are_at_distance_two() {
        let a = NetworkState::basis(2, 0).unwrap();
        let b = NetworkState::basis(2, 2).unwrap();
        assert_eq!(subsystem_d2(&a, &b, Subsystem::Head).unwrap(), 2.0);
        assert_eq!(subsystem_d2(&a, &b, Subsystem::Tape).unwrap(), 0.0);
        assert_eq!(subsystem_d2(&a, &b, Subsystem::Total).unwrap(), 2.0);
        assert_eq!(bures_d2_pure(&a, &b).unwrap(), 2.0);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let a = DensityMatrix::from_pure(&NetworkState::basis(2, 0).unwrap());
        let b = NetworkState::basis(2, 0).unwrap().partial_trace(0).unwrap();
        assert!(matches!(bures_d2(&a, &b), Err(QtmError::DimensionMismatch { .. })));
    }

    #[test]
    fn overlap_of_initial_head_states() {
        let delta = 1e-3;
        let drive = DriveSequence::fibonacci(Angle::exact(2, 5).unwrap());
        let pert = DriveSequence::fibonacci_perturbed(Angle::exact(2, 5).unwrap(), delta);
        let t = run(&NetworkState::basis(2, 0).unwrap(), &drive, 20).unwrap();
        let tp = run(&NetworkState::product(delta, &[TapeSpin::Zero]).unwrap(), &pert, 20).unwrap();
        let o = overlap_oprime(&t, &tp, 0).unwrap();
        assert!((o - (delta / 2.0).cos().powi(2)).abs() < 1e-15);
        for n in 0..=20 {
            let o = overlap_oprime(&t, &tp, n).unwrap();
            let d2 = subsystem_d2(t.state(n).unwrap(), tp.state(n).unwrap(), Subsystem::Total).unwrap();
            assert!((d2 - 2.0 * (1.0 - o)).abs() < 1e-12);
        }
        assert!(matches!(
            overlap_oprime(&t, &tp, 21),
            Err(QtmError::StepOutOfRange { .. })
        ));
    }

    #[test]
    fn zero_delta_overlap_is_one() {
        let drive = DriveSequence::fibonacci(Angle::from_radians(0.7));
        let s = NetworkState::basis(2, 0).unwrap();
        let t = run(&s, &drive, 50).unwrap();
        for n in 0..=50 {
            assert!((overlap_oprime(&t, &t, n).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn series_helpers() {
        let series = DistanceSeries {
            subsystem: Subsystem::Head,
            entries: vec![(0, 0.001), (1, 0.5), (2, 1.5), (3, 1.0), (4, 0.05), (5, 0.2)],
        };
        assert_eq!(series.max(), 1.5);
        assert_eq!(series.first_exceeding(1.2), Some(2));
        assert_eq!(series.first_exceeding(1.6), None);
        let r = series.find_revival(0, 0.05, 0.1).unwrap();
        assert_eq!(r.step, 4);
        assert!(series.find_revival(5, 0.05, 0.1).is_none());
        assert!(series.within_bounds());
    }

    #[test]
    fn identical_drives_give_flat_zero_series() {
        let angles = DriveSequence {
            rule: DriveRule::Constant,
            alpha1: Angle::from_radians(0.9),
            delta: 0.0,
        }
        .angles(50);
        let s = NetworkState::product(0.1, &[TapeSpin::Zero]).unwrap();
        let series = distance_series((&angles, &angles), (&s, &s), Subsystem::Head, 100).unwrap();
        assert_eq!(series.entries.len(), 101);
        assert!(series.values().all(|d| d == 0.0));
    }

    #[test]
    fn mixed_head_states_distance() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex64::new(0.0, 0.0);
        let bell =
            NetworkState::from_amplitudes(2, vec![Complex64::new(h, 0.0), z, z, Complex64::new(h, 0.0)]).unwrap();
        let ground = NetworkState::basis(2, 0).unwrap();
        // diag(1/2, 1/2) against diag(1, 0).
        assert!((subsystem_d2(&bell, &ground, Subsystem::Head).unwrap() - 0.5).abs() < 1e-15);
    }
}
