//! Experiment runners producing tables for the head patterns, distance
//! evolution, stability multipliers, the small-`n` distance table, ad-hoc
//! simulation and periodic-orbit search.

mod config;
mod result;

use std::collections::HashSet;

pub use config::{ExperimentConfig, ExperimentKind, InitialSpec, OutputFormat, CONFIG_KEYS};
pub use result::{Cell, Check, ExperimentResult};

use crate::analytic::{
    find_periodic_orbit, head_bloch_superposed_at, head_stability, primitive_bloch, table1_d2, tape_lambda3,
    tape_stability, PrimitiveSign, DEFAULT_M_MAX, MAX_STABILITY_M, TABLE1_ROWS,
};
use crate::drive::{angle_difference, fib_number, fibonacci_angles, Angle, DriveRule, DriveSequence};
use crate::error::{QtmError, Result};
use crate::gates::{for_each_step, run, run_with_angles, Trajectory};
use crate::metrics::{overlap_oprime, subsystem_d2, DistanceSeries, Subsystem};
use crate::statevec::{BlochVector, NetworkState, TapeSpin};

/// Simulation against closed forms.
pub const ORACLE_TOLERANCE: f64 = 1e-10;
/// Distance table and `D² = 2(1 − O')` identities.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;
/// Simulated multipliers against their finite-`δ` closed forms (relative).
pub const MULTIPLIER_TOLERANCE: f64 = 1e-6;
/// Finite-`δ` multipliers against their `δ → 0` limits (relative).
pub const LIMIT_TOLERANCE: f64 = 1e-3;
/// Rows enter the limit checks only while `δ·F(m+1)` stays below this.
pub const LIMIT_REGIME: f64 = 1e-3;
/// Orbit recurrence on the head Bloch vector.
pub const RECURRENCE_TOLERANCE: f64 = 1e-9;
/// Pattern points closer than this count as one.
pub const PATTERN_RESOLUTION: f64 = 1e-9;
/// Horizon within which the arithmetic drive shows its first revival.
pub const REVIVAL_HORIZON: usize = 500;
/// A revival is a dip below this fraction of the running maximum.
pub const REVIVAL_FRACTION: f64 = 0.05;
/// Default `m` range for the stability table.
pub const DEFAULT_STABILITY_M: u64 = 20;

/// Runs the configured experiment.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    match config.experiment {
        ExperimentKind::Pattern => run_pattern(config),
        ExperimentKind::Bures => run_bures(config),
        ExperimentKind::Stability => run_stability(config),
        ExperimentKind::Table1 => run_table1(config),
        ExperimentKind::Simulate => run_simulate(config),
        ExperimentKind::OrbitSearch => run_orbit_search(config),
    }
}

fn drive_of(config: &ExperimentConfig) -> DriveSequence {
    DriveSequence {
        rule: config.driver,
        alpha1: config.alpha1,
        delta: config.delta,
    }
}

fn bloch_dev(b: &BlochVector, l2: f64, l3: f64) -> f64 {
    b.l1.abs().max((b.l2 - l2).abs()).max((b.l3 - l3).abs())
}

/// Closed-form head/tape checks that apply to a two-spin run.
fn oracle_checks(initial: &InitialSpec, drive: &DriveSequence, traj: &Trajectory) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    if initial.tape.len() != 1 {
        return Ok(checks);
    }
    let head = traj.head_bloch();
    let head_angle = initial.head.radians();
    let fib = matches!(drive.rule, DriveRule::Fibonacci);
    match initial.tape[0] {
        tape @ (TapeSpin::Plus | TapeSpin::Minus) => {
            let sign = if tape == TapeSpin::Plus {
                PrimitiveSign::Plus
            } else {
                PrimitiveSign::Minus
            };
            let devs = head
                .iter()
                .enumerate()
                .map(|(n, b)| {
                    let (l2, l3) = primitive_bloch(n, sign, traj.angles(), head_angle)?;
                    Ok(bloch_dev(b, l2, l3))
                })
                .collect::<Result<Vec<_>>>()?;
            checks.push(Check::from_deviations("head_primitive", devs, ORACLE_TOLERANCE));
        }
        TapeSpin::Zero => {
            let tape_delta = if fib && head_angle == 0.0 {
                let devs = head.iter().enumerate().map(|(n, b)| {
                    let (l2, l3) = head_bloch_superposed_at(n as u64, &drive.alpha1);
                    bloch_dev(b, l2, l3)
                });
                checks.push(Check::from_deviations("head_superposed", devs, ORACLE_TOLERANCE));
                Some(0.0)
            } else if drive.rule == DriveRule::FibonacciPerturbed && head_angle == drive.delta {
                Some(drive.delta)
            } else {
                None
            };
            if let Some(delta) = tape_delta {
                let tape = traj.tape_bloch();
                let devs = tape.iter().enumerate().map(|(n, b)| {
                    let l3 = tape_lambda3(n as u64, &drive.alpha1, delta);
                    b.l1.abs().max(b.l2.abs()).max((b.l3 - l3).abs())
                });
                checks.push(Check::from_deviations("tape_lambda3", devs, ORACLE_TOLERANCE));
            }
        }
        TapeSpin::One => {}
    }
    Ok(checks)
}

/// Number of distinct `(λ2, λ3)` points after snapping to `resolution`.
pub fn distinct_points(points: impl IntoIterator<Item = (f64, f64)>, resolution: f64) -> usize {
    points
        .into_iter()
        .map(|(a, b)| ((a / resolution).round() as i64, (b / resolution).round() as i64))
        .collect::<HashSet<_>>()
        .len()
}

/// Head pattern `(n, λ2, λ3)` under the Fibonacci drive.
pub fn run_pattern(config: &ExperimentConfig) -> Result<ExperimentResult> {
    if config.driver != DriveRule::Fibonacci {
        return Err(QtmError::InvalidArgument(format!(
            "pattern needs the fibonacci driver, got {}",
            config.driver
        )));
    }
    let drive = drive_of(config);
    let traj = run(&config.initial.state()?, &drive, config.steps)?;
    let head = traj.head_bloch();

    let mut result = ExperimentResult::new("pattern", &["n", "lambda2", "lambda3"]);
    for (n, b) in head.iter().enumerate() {
        result.push_row(vec![n.into(), b.l2.into(), b.l3.into()]);
    }
    result.note("alpha1", config.alpha1);
    result.note("initial", &config.initial);
    result.note(
        "distinct_points",
        distinct_points(head.iter().map(|b| (b.l2, b.l3)), PATTERN_RESOLUTION),
    );
    result.checks = oracle_checks(&config.initial, &drive, &traj)?;
    Ok(result)
}

/// Unperturbed and perturbed runs for a distance experiment: the perturbed
/// run starts with the head turned by `δ` and, for Fibonacci and arithmetic
/// drives, uses the `δ`-perturbed angle law.
pub fn perturbation_runs(config: &ExperimentConfig) -> Result<(Trajectory, Trajectory)> {
    let (drive, drive_p) = DriveSequence::perturbation_pair(config.driver, config.alpha1, config.delta);
    let traj = run(&config.initial.state()?, &drive, config.steps)?;
    let traj_p = run(&config.initial.shifted_state(config.delta)?, &drive_p, config.steps)?;
    Ok((traj, traj_p))
}

/// `D²(n)` on head, tape and whole network.
pub fn run_bures(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let (traj, traj_p) = perturbation_runs(config)?;
    let with_table =
        matches!(config.driver, DriveRule::Fibonacci | DriveRule::FibonacciPerturbed) && config.initial.is_ground();

    let mut columns = vec!["n", "d2_head", "d2_tape", "d2_total", "oprime"];
    if with_table {
        columns.push("d2_head_table");
    }
    let mut result = ExperimentResult::new("bures", &columns);
    let mut bound_excess = Vec::new();
    let mut identity_dev = Vec::new();
    let mut table_dev = Vec::new();
    for n in 0..=config.steps {
        let (a, b) = (traj.state(n)?, traj_p.state(n)?);
        let d2: Vec<f64> = Subsystem::ALL
            .iter()
            .map(|&s| subsystem_d2(a, b, s))
            .collect::<Result<_>>()?;
        let oprime = overlap_oprime(&traj, &traj_p, n)?;
        bound_excess.extend(d2.iter().map(|&d| (-d).max(d - 2.0).max(0.0)));
        identity_dev.push((d2[2] - 2.0 * (1.0 - oprime)).abs());
        let mut row: Vec<Cell> = vec![n.into()];
        row.extend(d2.iter().map(|&d| Cell::from(d)));
        row.push(oprime.into());
        if with_table {
            let analytic = (n < TABLE1_ROWS)
                .then(|| table1_d2(n, config.alpha1.radians(), config.delta))
                .transpose()?;
            if let Some(v) = analytic {
                table_dev.push((d2[0] - v).abs());
            }
            row.push(analytic.into());
        }
        result.push_row(row);
    }

    let series = DistanceSeries::from_trajectories(&traj, &traj_p, config.subsystem)?;
    let at2 = series.at(2);
    result.note("driver", config.driver);
    result.note("alpha1", config.alpha1);
    result.note("delta", config.delta);
    result.note("subsystem", config.subsystem);
    result.note("max_d2", series.max());
    if let Some(at2) = at2 {
        result.note("d2_at_2", at2);
        if at2 > 0.0 {
            result.note("max_over_d2_at_2", series.max() / at2);
        }
        let revival = series.find_revival(4, REVIVAL_FRACTION, 100.0 * at2);
        result.note(
            "revival",
            revival.map_or("none".to_string(), |r| {
                format!("n={} d2={:.6e} running_max={:.6e}", r.step, r.d2, r.running_max)
            }),
        );
    }
    result.note(
        "first_step_above_1",
        series
            .first_exceeding(1.0)
            .map_or("none".to_string(), |n| n.to_string()),
    );
    result
        .checks
        .push(Check::from_deviations("d2_bounds", bound_excess, IDENTITY_TOLERANCE));
    result.checks.push(Check::from_deviations(
        "d2_total_vs_overlap",
        identity_dev,
        IDENTITY_TOLERANCE,
    ));
    if with_table {
        result.checks.push(Check::from_deviations(
            "d2_head_vs_table",
            table_dev,
            IDENTITY_TOLERANCE,
        ));
    }
    Ok(result)
}

/// Head multipliers read off simulated primitive runs at `n = 2m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulatedHeadMultipliers {
    pub m: u64,
    /// Shift of `𝒜_m` between the perturbed and unperturbed runs.
    pub delta_a: f64,
    /// Shift of `ℬ_m`.
    pub delta_b: f64,
    pub m11: f64,
    pub m22: f64,
}

/// Finite-difference head multipliers for `m = 2..=m_max`.
///
/// The `|+⟩` and `|−⟩` primitives are run with and without the perturbation
/// (head seed `δ`, drive seeded `(δ, α1)`); the cumulative angles are read back
/// as `atan2(λ2, −λ3)`, and their shifts give `Δ𝒜 = (Δ𝒞+ − Δ𝒞−)/2` and
/// `Δℬ = (Δ𝒞+ + Δ𝒞−)/2`. The multipliers are then
/// `cos Δ𝒜·sin Δℬ / sin δ` and `cos Δ𝒜·cos Δℬ / cos δ`.
pub fn simulated_head_multipliers(alpha1: &Angle, delta: f64, m_max: u64) -> Result<Vec<SimulatedHeadMultipliers>> {
    if delta == 0.0 {
        return Err(QtmError::ZeroDelta);
    }
    let steps = 2 * m_max as usize;
    let angles = DriveSequence::fibonacci(*alpha1).angles(m_max as usize);
    let angles_p = DriveSequence::fibonacci_perturbed(*alpha1, delta).angles(m_max as usize);
    let phases = |tape: TapeSpin| -> Result<(Vec<f64>, Vec<f64>)> {
        let c = |b: &BlochVector| b.l2.atan2(-b.l3);
        let t = run_with_angles(&NetworkState::product(0.0, &[tape])?, &angles, steps)?;
        let tp = run_with_angles(&NetworkState::product(delta, &[tape])?, &angles_p, steps)?;
        Ok((
            t.head_bloch().iter().map(c).collect(),
            tp.head_bloch().iter().map(c).collect(),
        ))
    };
    let (plus, plus_p) = phases(TapeSpin::Plus)?;
    let (minus, minus_p) = phases(TapeSpin::Minus)?;
    Ok((2..=m_max)
        .map(|m| {
            let n = 2 * m as usize;
            let dp = angle_difference(plus_p[n], plus[n]);
            let dm = angle_difference(minus_p[n], minus[n]);
            let (da, db) = ((dp - dm) / 2.0, (dp + dm) / 2.0);
            SimulatedHeadMultipliers {
                m,
                delta_a: da,
                delta_b: db,
                m11: da.cos() * db.sin() / delta.sin(),
                m22: da.cos() * db.cos() / delta.cos(),
            }
        })
        .collect())
}

/// Tape multipliers `Δλ3(2m+2)/Δλ3(2)` from simulated runs out of `|0⟩ ⊗ |0⟩`.
pub fn simulated_tape_multipliers(alpha1: &Angle, delta: f64, m_max: u64) -> Result<Vec<(u64, f64)>> {
    let steps = 2 * m_max as usize + 2;
    let count = steps / 2;
    let t = run_with_angles(
        &NetworkState::product(0.0, &[TapeSpin::Zero])?,
        &DriveSequence::fibonacci(*alpha1).angles(count),
        steps,
    )?;
    let tp = run_with_angles(
        &NetworkState::product(delta, &[TapeSpin::Zero])?,
        &DriveSequence::fibonacci_perturbed(*alpha1, delta).angles(count),
        steps,
    )?;
    let (a, b) = (t.tape_bloch(), tp.tape_bloch());
    let diff = |n: usize| b[n].l3 - a[n].l3;
    Ok((1..=m_max).map(|m| (m, diff(2 * m as usize + 2) / diff(2))).collect())
}

/// Head and tape multipliers, simulated and closed-form, for `m = 2..=m_max`.
pub fn run_stability(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let delta = config.delta;
    if delta == 0.0 {
        return Err(QtmError::ZeroDelta);
    }
    if delta < 0.0 {
        return Err(QtmError::InvalidArgument(format!(
            "stability needs delta > 0, got {delta}"
        )));
    }
    let m_max = config.m_max.unwrap_or(DEFAULT_STABILITY_M);
    if !(2..=MAX_STABILITY_M).contains(&m_max) {
        return Err(QtmError::InvalidArgument(format!(
            "stability needs 2 <= m-max <= {MAX_STABILITY_M}, got {m_max}"
        )));
    }
    let alpha1 = config.alpha1;
    let head_sim = simulated_head_multipliers(&alpha1, delta, m_max)?;
    let tape_sim = simulated_tape_multipliers(&alpha1, delta, m_max)?;

    let mut result = ExperimentResult::new(
        "stability",
        &[
            "m",
            "M11_finite",
            "M11_closed_form",
            "M11_limit",
            "M22_finite",
            "M22_closed_form",
            "tape_M_finite",
            "tape_M_closed_form",
            "tape_M_limit",
            "tape_period_compatible",
        ],
    );
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
    let (mut m11_dev, mut m22_dev, mut tape_dev) = (Vec::new(), Vec::new(), Vec::new());
    let (mut m11_lim, mut m22_lim, mut tape_lim) = (Vec::new(), Vec::new(), Vec::new());
    for sim in &head_sim {
        let m = sim.m;
        let head = head_stability(m, delta)?;
        let tape = tape_stability(m, delta, &alpha1)?;
        let tape_fd = tape_sim[(m - 1) as usize].1;
        let spread = delta * fib_number(m + 1)? as f64;
        if spread < 1.0 {
            m11_dev.push(rel(sim.m11, head.m11));
            m22_dev.push(rel(sim.m22, head.m22));
            tape_dev.push(rel(tape_fd, tape.m_finite));
        }
        if spread <= LIMIT_REGIME {
            m11_lim.push((sim.m11 / head.m11_limit as f64 - 1.0).abs());
            m22_lim.push((sim.m22 - 1.0).abs());
            if tape.period_compatible {
                tape_lim.push((tape.m_finite - tape.m_limit).abs() / fib_number(m + 1)? as f64);
            }
        }
        result.push_row(vec![
            m.into(),
            sim.m11.into(),
            head.m11.into(),
            head.m11_limit.into(),
            sim.m22.into(),
            head.m22.into(),
            tape_fd.into(),
            tape.m_finite.into(),
            tape.m_limit.into(),
            Cell::Int(i64::from(tape.period_compatible)),
        ]);
    }
    result.note("alpha1", alpha1);
    result.note("delta", delta);
    result.note("limit_rows", m11_lim.len());
    result.checks.push(Check::from_deviations(
        "M11_finite_vs_closed_form",
        m11_dev,
        MULTIPLIER_TOLERANCE,
    ));
    result.checks.push(Check::from_deviations(
        "M22_finite_vs_closed_form",
        m22_dev,
        MULTIPLIER_TOLERANCE,
    ));
    result.checks.push(Check::from_deviations(
        "tape_M_finite_vs_closed_form",
        tape_dev,
        MULTIPLIER_TOLERANCE,
    ));
    result
        .checks
        .push(Check::from_deviations("M11_limit", m11_lim, LIMIT_TOLERANCE));
    result
        .checks
        .push(Check::from_deviations("M22_limit", m22_lim, LIMIT_TOLERANCE));
    result
        .checks
        .push(Check::from_deviations("tape_M_limit", tape_lim, LIMIT_TOLERANCE));
    Ok(result)
}

/// Simulated head `D²(n)` for `n ≤ 12` beside the closed-form rows, from
/// `|0⟩ ⊗ |0⟩` under the Fibonacci drive.
pub fn run_table1(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let mut cfg = config.clone();
    cfg.driver = DriveRule::Fibonacci;
    cfg.initial = InitialSpec::ground();
    cfg.steps = TABLE1_ROWS - 1;
    let (traj, traj_p) = perturbation_runs(&cfg)?;
    let mut result = ExperimentResult::new("table1", &["n", "d2_simulated", "d2_table", "abs_diff"]);
    let mut devs = Vec::new();
    for n in 0..TABLE1_ROWS {
        let sim = subsystem_d2(traj.state(n)?, traj_p.state(n)?, Subsystem::Head)?;
        let table = table1_d2(n, cfg.alpha1.radians(), cfg.delta)?;
        devs.push((sim - table).abs());
        result.push_row(vec![n.into(), sim.into(), table.into(), (sim - table).abs().into()]);
    }
    result.note("alpha1", cfg.alpha1);
    result.note("delta", cfg.delta);
    result
        .checks
        .push(Check::from_deviations("d2_head_vs_table", devs, IDENTITY_TOLERANCE));
    Ok(result)
}

/// Head and tape Bloch vectors along one run.
pub fn run_simulate(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let drive = drive_of(config);
    let traj = run(&config.initial.state()?, &drive, config.steps)?;
    let mut result = ExperimentResult::new(
        "simulate",
        &[
            "n",
            "head_l1",
            "head_l2",
            "head_l3",
            "tape_l1",
            "tape_l2",
            "tape_l3",
            "head_bloch_norm",
        ],
    );
    for (n, (h, t)) in traj.head_bloch().iter().zip(traj.tape_bloch()).enumerate() {
        result.push_row(vec![
            n.into(),
            h.l1.into(),
            h.l2.into(),
            h.l3.into(),
            t.l1.into(),
            t.l2.into(),
            t.l3.into(),
            h.norm().into(),
        ]);
    }
    result.note("drive", drive);
    result.note("initial", &config.initial);
    result.checks.push(Check::from_deviations(
        "state_norm",
        traj.states().iter().map(|s| (s.norm() - 1.0).abs()),
        ORACLE_TOLERANCE,
    ));
    result.checks.extend(oracle_checks(&config.initial, &drive, &traj)?);
    Ok(result)
}

/// Recurrence of the run from `|0⟩ ⊗ |0⟩` after `2m` steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitRecurrence {
    pub m: u64,
    /// `‖ψ_{2m} − ψ_0‖`.
    pub state_distance: f64,
    /// `√(1 − |⟨ψ_0|ψ_{2m}⟩|²)`, blind to a global phase.
    pub projective_distance: f64,
    pub head_distance: f64,
    /// Smallest `‖ψ_n − ψ_0‖` over even `0 < n < 2m`.
    pub min_earlier_state_distance: Option<f64>,
    /// Smallest head Bloch distance over even `0 < n < 2m`.
    pub min_earlier_head_distance: Option<f64>,
}

/// Simulates `2m` steps from `|0⟩ ⊗ |0⟩` and measures how closely the run returns.
pub fn orbit_recurrence(alpha1: &Angle, m: u64) -> Result<OrbitRecurrence> {
    let angles: Vec<f64> = fibonacci_angles(alpha1, m as usize)
        .iter()
        .map(Angle::radians)
        .collect();
    let start = NetworkState::product(0.0, &[TapeSpin::Zero])?;
    let start_head = start.head_bloch();
    let steps = 2 * m as usize;
    let (mut min_state, mut min_head) = (None::<f64>, None::<f64>);
    let mut visit_err = None;
    let last = for_each_step(&start, &angles, steps, |n, s| {
        if n == 0 || n == steps || n % 2 == 1 {
            return;
        }
        match s.distance(&start) {
            Ok(d) => min_state = Some(min_state.map_or(d, |x| x.min(d))),
            Err(e) => visit_err = Some(e),
        }
        let h = s.head_bloch().distance(&start_head);
        min_head = Some(min_head.map_or(h, |x| x.min(h)));
    })?;
    if let Some(e) = visit_err {
        return Err(e);
    }
    let overlap = start.inner_product(&last)?.norm_sqr();
    Ok(OrbitRecurrence {
        m,
        state_distance: last.distance(&start)?,
        projective_distance: (1.0 - overlap).max(0.0).sqrt(),
        head_distance: last.head_bloch().distance(&start_head),
        min_earlier_state_distance: min_state,
        min_earlier_head_distance: min_head,
    })
}

/// Smallest head orbit period for an exact `α1`, confirmed by simulation.
/// The run always starts from `|0⟩ ⊗ |0⟩`.
pub fn run_orbit_search(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let alpha1 = config.alpha1;
    let m_max = config.m_max.unwrap_or(DEFAULT_M_MAX);
    let found = find_periodic_orbit(&alpha1, m_max)?;
    let mut result = ExperimentResult::new(
        "orbit-search",
        &[
            "m",
            "n",
            "state_distance",
            "projective_distance",
            "head_distance",
            "min_earlier_state_distance",
            "min_earlier_head_distance",
        ],
    );
    result.note("alpha1", alpha1);
    result.note("m_max", m_max);
    let Some(m) = found else {
        result.note("orbit", format!("none <= {m_max}"));
        return Ok(result);
    };
    let rec = orbit_recurrence(&alpha1, m)?;
    result.push_row(vec![
        m.into(),
        (2 * m).into(),
        rec.state_distance.into(),
        rec.projective_distance.into(),
        rec.head_distance.into(),
        rec.min_earlier_state_distance.into(),
        rec.min_earlier_head_distance.into(),
    ]);
    result.note("orbit", format!("m={m} n={}", 2 * m));
    let kind = if rec.state_distance < RECURRENCE_TOLERANCE {
        "exact"
    } else if rec.projective_distance < RECURRENCE_TOLERANCE {
        "up to global phase"
    } else {
        "head only"
    };
    result.note("state_recurrence", kind);
    result
        .checks
        .push(Check::new("head_recurrence", rec.head_distance, RECURRENCE_TOLERANCE));
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::head_stability;

    fn config(kind: ExperimentKind) -> ExperimentConfig {
        ExperimentConfig::new(kind)
    }

    #[test]
    fn pattern_zero_steps_is_ground_point() {
        let mut c = config(ExperimentKind::Pattern);
        c.steps = 0;
        let r = run_pattern(&c).unwrap();
        assert_eq!(r.rows, vec![vec![Cell::Int(0), Cell::Float(0.0), Cell::Float(-1.0)]]);
        assert!(r.passed());
    }

    #[test]
    fn pattern_rejects_regular_drivers() {
        let mut c = config(ExperimentKind::Pattern);
        c.driver = DriveRule::Constant;
        assert!(run_pattern(&c).is_err());
    }

    #[test]
    fn simulated_shifts_follow_fibonacci() {
        let delta = 1e-6;
        let sims = simulated_head_multipliers(&Angle::exact(2, 5).unwrap(), delta, 15).unwrap();
        for s in sims {
            let fm = fib_number(s.m).unwrap() as f64;
            let fm1 = fib_number(s.m - 1).unwrap() as f64;
            assert!((s.delta_a / (delta * fm) - 1.0).abs() < 1e-6, "m={}", s.m);
            assert!((s.delta_b / (delta * fm1) - 1.0).abs() < 1e-6, "m={}", s.m);
            let closed = head_stability(s.m, delta).unwrap();
            assert!((s.m11 / closed.m11 - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn table1_experiment_passes() {
        let r = run_table1(&config(ExperimentKind::Table1)).unwrap();
        assert_eq!(r.rows.len(), 13);
        assert!(r.passed(), "{:?}", r.checks);
    }

    #[test]
    fn orbit_search_for_zero_drive() {
        let mut c = config(ExperimentKind::OrbitSearch);
        c.alpha1 = Angle::zero();
        let r = run_orbit_search(&c).unwrap();
        assert_eq!(r.rows[0][0], Cell::Int(1));
        assert!(r.passed());
    }

    #[test]
    fn orbit_search_rejects_decimal_angle() {
        let mut c = config(ExperimentKind::OrbitSearch);
        c.alpha1 = Angle::from_radians(1.2566370614);
        assert!(matches!(run_orbit_search(&c), Err(QtmError::InexactAngle(_))));
    }

    #[test]
    fn stability_rejects_bad_delta() {
        let mut c = config(ExperimentKind::Stability);
        c.delta = 0.0;
        assert!(matches!(run_stability(&c), Err(QtmError::ZeroDelta)));
        c.delta = -1e-6;
        assert!(run_stability(&c).is_err());
    }

    #[test]
    fn distinct_points_snap() {
        assert_eq!(
            distinct_points([(0.0, -1.0), (-0.0, -1.0), (1e-12, -1.0), (0.5, 0.5)], 1e-9),
            2
        );
    }
}
