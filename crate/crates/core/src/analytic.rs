//! Closed-form trajectories, periodic-orbit congruences, stability
//! multipliers and the small-`n` distance table.
//!
//! Every growing-power expression is carried as an integer Fibonacci
//! coefficient and reduced through [`reduce_combination`], so the formulas
//! stay exact for step counts far beyond where `α1·F(m)` fits in an `f64`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::drive::{fib_big, fib_mod, fib_number, reduce_combination, wrap_angle, Angle};
use crate::error::{QtmError, Result};

/// Default cap for [`find_periodic_orbit`].
pub const DEFAULT_M_MAX: u64 = 1_000_000;

/// Largest `m` accepted by [`head_stability`] (`F(m)` must fit in a `u64`).
pub const MAX_STABILITY_M: u64 = 93;

/// Tape eigenstate selecting a primitive (entanglement-free) head trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrimitiveSign {
    Plus,
    Minus,
}

/// Which half of the `m`-th step pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepParity {
    /// `n = 2m − 1`, right after the head rotation.
    Odd,
    /// `n = 2m`, right after the QCNOT.
    Even,
}

/// Cumulative rotation angles at step `2m`, all in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CumulativeAngles {
    pub c_plus: f64,
    pub c_minus: f64,
    /// `α_m + α_{m−2} + …`
    pub a_m: f64,
    /// `α_{m−1} + α_{m−3} + …`
    pub b_m: f64,
}

fn require(alphas: &[f64], count: usize) -> Result<()> {
    if alphas.len() < count {
        return Err(QtmError::DriveExhausted {
            available: alphas.len(),
            required: count,
        });
    }
    Ok(())
}

fn sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `𝒞_{2m}(+) = Σ_{j≤m} α_j` mod 2π.
pub fn cumulative_plus(m: usize, alphas: &[f64]) -> Result<f64> {
    require(alphas, m)?;
    Ok(wrap_angle(alphas[..m].iter().sum()))
}

/// `𝒞_n(−)` by its step recursion: a rotation adds `α_m`, a QCNOT negates.
pub fn cumulative_minus(n: usize, alphas: &[f64]) -> Result<f64> {
    require(alphas, n.div_ceil(2))?;
    let mut c = 0.0;
    for step in 1..=n {
        c = if step % 2 == 1 {
            wrap_angle(alphas[step / 2] + c)
        } else {
            wrap_angle(-c)
        };
    }
    Ok(c)
}

/// `𝒞_n(−)` in closed form: `(−1)^{m−1}·Σ(−1)^j α_j` at `n = 2m`, the
/// opposite sign at `n = 2m − 1`.
pub fn cumulative_minus_closed(n: usize, alphas: &[f64]) -> Result<f64> {
    let m = n.div_ceil(2);
    require(alphas, m)?;
    let alternating: f64 = alphas[..m].iter().enumerate().map(|(i, a)| sign(i + 1) * a).sum();
    let outer = if n.is_multiple_of(2) { sign(m + 1) } else { sign(m) };
    Ok(wrap_angle(outer * alternating))
}

/// All four cumulative angles at `n = 2m`, from direct partial sums.
pub fn cumulative_angles(m: usize, alphas: &[f64]) -> Result<CumulativeAngles> {
    require(alphas, m)?;
    let stride = |start: usize| -> f64 { (1..=start).rev().step_by(2).map(|j| alphas[j - 1]).sum() };
    Ok(CumulativeAngles {
        c_plus: cumulative_plus(m, alphas)?,
        c_minus: cumulative_minus(2 * m, alphas)?,
        a_m: wrap_angle(stride(m)),
        b_m: wrap_angle(if m >= 1 { stride(m - 1) } else { 0.0 }),
    })
}

/// Head `(λ2, λ3)` at step `n` for the primitive started from
/// `R(φ0)|0⟩ ⊗ |±⟩`: `(sin 𝒞, −cos 𝒞)`.
///
/// The initial head angle enters `𝒞_n(+)` unchanged and `𝒞_n(−)` with the
/// sign flipped by every QCNOT, `(−1)^{⌊n/2⌋}·φ0`.
pub fn primitive_bloch(n: usize, sign_: PrimitiveSign, alphas: &[f64], head_angle: f64) -> Result<(f64, f64)> {
    let c = match sign_ {
        PrimitiveSign::Plus => head_angle + cumulative_plus(n.div_ceil(2), alphas)?,
        PrimitiveSign::Minus => sign(n / 2) * head_angle + cumulative_minus(n, alphas)?,
    };
    Ok((c.sin(), -c.cos()))
}

/// `(𝒜_m, ℬ_m)` via `𝒜_m = α1·(F(m+1) − [m even])`, `ℬ_m = α1·(F(m) − [m odd])`.
pub fn superposed_split(m: u64, alpha1: &Angle) -> (f64, f64) {
    let even = BigInt::from(u8::from(m.is_multiple_of(2)));
    let odd = BigInt::from(u8::from(m % 2 == 1));
    let a = reduce_combination(&[(alpha1, fib_big(m as i64 + 1) - even)]);
    let b = reduce_combination(&[(alpha1, fib_big(m as i64) - odd)]);
    (a, b)
}

/// Head `(λ2, λ3)` for `|ψ0⟩ = |0⟩ ⊗ |0⟩` at `n = 2m` (`cos 𝒜·(sin ℬ, −cos ℬ)`)
/// or `n = 2m − 1` (`cos ℬ·(sin 𝒜, −cos 𝒜)`).
pub fn head_bloch_superposed(m: u64, parity: StepParity, alpha1: &Angle) -> Result<(f64, f64)> {
    if m == 0 {
        return Err(QtmError::InvalidArgument("superposed head formula needs m >= 1".into()));
    }
    let (a, b) = superposed_split(m, alpha1);
    Ok(match parity {
        StepParity::Even => (a.cos() * b.sin(), -a.cos() * b.cos()),
        StepParity::Odd => (b.cos() * a.sin(), -b.cos() * a.cos()),
    })
}

/// [`head_bloch_superposed`] indexed by step, with `n = 0` giving `(0, −1)`.
pub fn head_bloch_superposed_at(n: u64, alpha1: &Angle) -> (f64, f64) {
    if n == 0 {
        return (0.0, -1.0);
    }
    let parity = if n.is_multiple_of(2) {
        StepParity::Even
    } else {
        StepParity::Odd
    };
    head_bloch_superposed(n.div_ceil(2), parity, alpha1).expect("m >= 1")
}

fn exact_parts(alpha1: &Angle) -> Result<(i128, i128)> {
    let frac = alpha1
        .pi_fraction()
        .ok_or_else(|| QtmError::InexactAngle(alpha1.to_string()))?;
    Ok((frac.num() as i128, 2 * frac.den() as i128))
}

fn orbit_congruences(p: i128, modulus: i128, f_prev: i128, f_next: i128, f_next2: i128, m: u64) -> bool {
    let zero = |x: i128| (p * x).rem_euclid(modulus) == 0;
    let alternating = if m.is_multiple_of(2) { 1 } else { -1 };
    zero(f_next2 - 1) && zero(alternating - f_prev) && zero(f_next - 1)
}

/// Whether the drive `α1 = (p/q)·π` closes a head orbit of period `2m` from
/// `|0⟩ ⊗ |0⟩`: `𝒞_{2m}(+) ≡ 𝒞_{2m}(−) ≡ 0` and `α_{m+1} ≡ α_1` (mod 2π).
///
/// With `Σ_{j≤m} F(j) = F(m+2) − 1` and `Σ_{j≤m} (−1)^j F(j) = (−1)^m F(m−1) − 1`
/// these read `p·(F(m+2) − 1) ≡ 0`, `p·((−1)^m − F(m−1)) ≡ 0` and
/// `p·(F(m+1) − 1) ≡ 0`, all modulo `2q`.
pub fn periodic_orbit_check(alpha1: &Angle, m: u64) -> Result<bool> {
    if m == 0 {
        return Err(QtmError::InvalidArgument("orbit period 2m needs m >= 1".into()));
    }
    let (p, modulus) = exact_parts(alpha1)?;
    let f = |k: u64| fib_mod(k, modulus as u64) as i128;
    Ok(orbit_congruences(p, modulus, f(m - 1), f(m + 1), f(m + 2), m))
}

/// Smallest `m ≤ m_max` passing [`periodic_orbit_check`].
pub fn find_periodic_orbit(alpha1: &Angle, m_max: u64) -> Result<Option<u64>> {
    let (p, modulus) = exact_parts(alpha1)?;
    // (F(m−1), F(m)) mod 2q, starting at m = 1.
    let (mut prev, mut cur) = (0i128, 1 % modulus);
    for m in 1..=m_max {
        let next = (prev + cur) % modulus;
        let next2 = (cur + next) % modulus;
        if orbit_congruences(p, modulus, prev, next, next2, m) {
            return Ok(Some(m));
        }
        prev = cur;
        cur = next;
    }
    Ok(None)
}

/// Head deviation multipliers at `n = 2m` for a seed perturbation `δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeadMultipliers {
    /// `cos(δF(m))·sin(δF(m−1))/sin δ`
    pub m11: f64,
    /// `cos(δF(m))·cos(δF(m−1))/cos δ`
    pub m22: f64,
    /// `F(m−1)`, the `δ → 0` limit of `m11`; the limit of `m22` is 1.
    pub m11_limit: u64,
}

fn check_delta(delta: f64) -> Result<()> {
    if delta == 0.0 {
        return Err(QtmError::ZeroDelta);
    }
    if !delta.is_finite() {
        return Err(QtmError::InvalidArgument(format!("delta {delta}")));
    }
    Ok(())
}

pub fn head_stability(m: u64, delta: f64) -> Result<HeadMultipliers> {
    check_delta(delta)?;
    if delta.abs() >= 0.1 {
        return Err(QtmError::InvalidArgument(format!(
            "stability multipliers need 0 < |delta| < 0.1, got {delta}"
        )));
    }
    if !(2..=MAX_STABILITY_M).contains(&m) {
        return Err(QtmError::InvalidArgument(format!(
            "stability multipliers need 2 <= m <= {MAX_STABILITY_M}, got {m}"
        )));
    }
    let d_m = delta * fib_number(m)? as f64;
    let d_prev = delta * fib_number(m - 1)? as f64;
    Ok(HeadMultipliers {
        m11: d_m.cos() * d_prev.sin() / delta.sin(),
        m22: d_m.cos() * d_prev.cos() / delta.cos(),
        m11_limit: fib_number(m - 1)?,
    })
}

/// Tape `λ3` at step `n` from `R(δ)|0⟩ ⊗ |0⟩` driven by the `δ`-seeded
/// Fibonacci sequence. With `k = ⌊n/2⌋`:
/// `−cos(α_{k+1} − α1 + δF(k))` for `n ≡ 0, 1 (mod 4)` and
/// `cos(α_{k+1} + δF(k))` for `n ≡ 2, 3`.
pub fn tape_lambda3(n: u64, alpha1: &Angle, delta: f64) -> f64 {
    let k = (n / 2) as i64;
    let delta = Angle::from_radians(delta);
    if n % 4 < 2 {
        let phase = reduce_combination(&[(alpha1, fib_big(k + 1) - 1), (&delta, fib_big(k))]);
        -phase.cos()
    } else {
        let phase = reduce_combination(&[(alpha1, fib_big(k + 1)), (&delta, fib_big(k))]);
        phase.cos()
    }
}

/// Tape deviation multiplier `Δλ3(2m+2) = M·Δλ3(2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TapeMultiplier {
    /// Ratio of finite differences of [`tape_lambda3`].
    pub m_finite: f64,
    /// `F(m+1)·sin(α_{m+2})/sin(α1)`.
    pub m_limit: f64,
    /// `2m ≡ 0 (mod 4)`: only then does `m_limit` describe the finite ratio.
    pub period_compatible: bool,
}

pub fn tape_stability(m: u64, delta: f64, alpha1: &Angle) -> Result<TapeMultiplier> {
    check_delta(delta)?;
    if m == 0 {
        return Err(QtmError::InvalidArgument("tape multiplier needs m >= 1".into()));
    }
    let s1 = alpha1.radians().sin();
    if s1.abs() < 1e-12 {
        return Err(QtmError::DegenerateAlpha(alpha1.radians()));
    }
    let diff = |n: u64| tape_lambda3(n, alpha1, delta) - tape_lambda3(n, alpha1, 0.0);
    let alpha_m2 = reduce_combination(&[(alpha1, fib_big(m as i64 + 2))]);
    let f_next = fib_big(m as i64 + 1).to_f64().unwrap_or(f64::INFINITY);
    Ok(TapeMultiplier {
        m_finite: diff(2 * m + 2) / diff(2),
        m_limit: f_next * alpha_m2.sin() / s1,
        period_compatible: m.is_multiple_of(2),
    })
}

/// Whether the tape `λ3` series repeats with period `2m`; `None` when
/// `2m ≡ 2 (mod 4)`, where the two branches of [`tape_lambda3`] swap and no
/// tape orbit exists.
pub fn tape_orbit_check(alpha1: &Angle, m: u64) -> Result<Option<bool>> {
    if m == 0 {
        return Err(QtmError::InvalidArgument("orbit period 2m needs m >= 1".into()));
    }
    let (p, modulus) = exact_parts(alpha1)?;
    if m % 2 == 1 {
        return Ok(None);
    }
    // α_{k+m+1} ≡ α_{k+1} for all k iff it holds for k = 0 and k = 1.
    let f = |k: u64| fib_mod(k, modulus as u64) as i128;
    let zero = |x: i128| (p * x).rem_euclid(modulus) == 0;
    Ok(Some(zero(f(m + 1) - 1) && zero(f(m + 2) - 1)))
}

/// Head and tape multipliers at one `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub m: u64,
    pub delta: f64,
    pub m11: f64,
    pub m22: f64,
    pub m11_limit: u64,
    pub tape_m: f64,
    pub tape_m_limit: f64,
}

pub fn stability_report(m: u64, delta: f64, alpha1: &Angle) -> Result<StabilityReport> {
    let head = head_stability(m, delta)?;
    let tape = tape_stability(m, delta, alpha1)?;
    Ok(StabilityReport {
        m,
        delta,
        m11: head.m11,
        m22: head.m22,
        m11_limit: head.m11_limit,
        tape_m: tape.m_finite,
        tape_m_limit: tape.m_limit,
    })
}

/// Number of closed-form rows in [`table1_d2`].
pub const TABLE1_ROWS: usize = 13;

/// Closed-form head `D²(n)` for `n ≤ 12` between the unperturbed run from
/// `|0⟩ ⊗ |0⟩` and the run with head seed and drive both perturbed by `δ`.
pub fn table1_d2(n: usize, alpha1: f64, delta: f64) -> Result<f64> {
    let (a, d) = (alpha1, delta);
    let cos = f64::cos;
    let value = match n {
        0 | 1 => 1.0 - cos(d),
        2 => 0.5 + 0.25 * cos(2.0 * a + 2.0 * d) - 0.5 * cos(2.0 * a + d) - 0.5 * cos(d) + 0.25 * cos(2.0 * a),
        3 | 4 => 0.25 - 0.25 * cos(2.0 * d),
        5 => {
            0.5 - 0.25 * cos(2.0 * a + 3.0 * d) - 0.25 * cos(3.0 * d) + 0.25 * cos(2.0 * a + 2.0 * d)
                - 0.25 * cos(2.0 * a - d)
                - 0.25 * cos(d)
                + 0.25 * cos(2.0 * a)
        }
        6 | 8 | 10 | 12 => {
            let (k, p, q, r) = match n {
                6 => (6.0, 4.0, 3.0, 1.0),
                8 => (8.0, 6.0, 5.0, 1.0),
                10 => (16.0, 10.0, 8.0, 2.0),
                _ => (24.0, 16.0, 13.0, 3.0),
            };
            let ka = k * a;
            0.5 + 0.25 * cos(ka + p * d)
                - 0.25 * cos(ka + q * d)
                - 0.25 * cos(q * d)
                - 0.25 * cos(ka + r * d)
                - 0.25 * cos(r * d)
                + 0.25 * cos(ka)
        }
        7 | 9 | 11 => {
            let (k, p, q, r) = match n {
                7 => (6.0, 5.0, 4.0, 1.0),
                9 => (8.0, 8.0, 6.0, 2.0),
                _ => (16.0, 13.0, 10.0, 3.0),
            };
            let ka = k * a;
            0.5 - 0.25 * cos(ka + p * d) - 0.25 * cos(p * d) + 0.25 * cos(ka + q * d)
                - 0.25 * cos(ka - r * d)
                - 0.25 * cos(r * d)
                + 0.25 * cos(ka)
        }
        _ => return Err(QtmError::NoTableRow(n)),
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drive::{angle_difference, fibonacci_angles};
    use std::f64::consts::PI;

    fn two_fifths() -> Angle {
        Angle::exact(2, 5).unwrap()
    }

    fn radians(alpha1: &Angle, count: usize) -> Vec<f64> {
        fibonacci_angles(alpha1, count).iter().map(Angle::radians).collect()
    }

    #[test]
    fn cumulative_plus_examples() {
        let alphas = radians(&two_fifths(), 10);
        assert_eq!(cumulative_plus(0, &alphas).unwrap(), 0.0);
        assert!((cumulative_plus(1, &alphas).unwrap() - 2.0 * PI / 5.0).abs() < 1e-15);
        assert!((cumulative_plus(3, &alphas).unwrap() - 8.0 * PI / 5.0).abs() < 1e-14);
        assert!(matches!(
            cumulative_plus(11, &alphas),
            Err(QtmError::DriveExhausted { .. })
        ));
    }

    #[test]
    fn cumulative_minus_examples() {
        let alphas = radians(&two_fifths(), 10);
        assert_eq!(cumulative_minus(0, &alphas).unwrap(), 0.0);
        assert!((cumulative_minus(1, &alphas).unwrap() - alphas[0]).abs() < 1e-15);
        let want = wrap_angle(-alphas[0]);
        assert!((cumulative_minus(2, &alphas).unwrap() - want).abs() < 1e-15);
        assert!((cumulative_minus_closed(2, &alphas).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn minus_recursion_matches_closed_form() {
        for alpha1 in [two_fifths(), Angle::from_radians(0.7), Angle::from_radians(2.345)] {
            let alphas = radians(&alpha1, 100);
            for n in 0..=200 {
                let r = cumulative_minus(n, &alphas).unwrap();
                let c = cumulative_minus_closed(n, &alphas).unwrap();
                assert!(angle_difference(r, c).abs() < 1e-12, "n={n}");
            }
        }
    }

    #[test]
    fn split_angles_add_up_to_plus_angle() {
        for alpha1 in [two_fifths(), Angle::from_radians(0.7)] {
            let alphas = radians(&alpha1, 60);
            for m in 1..=60 {
                let cum = cumulative_angles(m, &alphas).unwrap();
                assert!(angle_difference(cum.a_m + cum.b_m, cum.c_plus).abs() < 1e-12);
                let (a, b) = superposed_split(m as u64, &alpha1);
                assert!(angle_difference(a, cum.a_m).abs() < 1e-12, "m={m}");
                assert!(angle_difference(b, cum.b_m).abs() < 1e-12, "m={m}");
            }
        }
    }

    #[test]
    fn superposed_first_steps() {
        let a1 = two_fifths();
        let (l2, l3) = head_bloch_superposed(1, StepParity::Even, &a1).unwrap();
        assert!(l2.abs() < 1e-15);
        assert!((l3 + 0.309_016_994_374_947_4).abs() < 1e-15);
        let (l2, l3) = head_bloch_superposed(1, StepParity::Odd, &a1).unwrap();
        assert!((l2 - a1.radians().sin()).abs() < 1e-15);
        assert!((l3 + a1.radians().cos()).abs() < 1e-15);
        assert_eq!(head_bloch_superposed_at(0, &a1), (0.0, -1.0));
        assert!(head_bloch_superposed(0, StepParity::Even, &a1).is_err());
    }

    #[test]
    fn primitive_examples() {
        let alphas = radians(&Angle::from_radians(0.7), 50);
        for s in [PrimitiveSign::Plus, PrimitiveSign::Minus] {
            assert_eq!(primitive_bloch(0, s, &alphas, 0.0).unwrap(), (0.0, -1.0));
        }
        for m in 1..=50 {
            let odd = primitive_bloch(2 * m - 1, PrimitiveSign::Plus, &alphas, 0.0).unwrap();
            let even = primitive_bloch(2 * m, PrimitiveSign::Plus, &alphas, 0.0).unwrap();
            assert_eq!(odd, even);
            assert!((odd.0.hypot(odd.1) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn two_fifths_orbit_is_twenty() {
        let a1 = two_fifths();
        assert!(periodic_orbit_check(&a1, 20).unwrap());
        assert!(!periodic_orbit_check(&a1, 10).unwrap());
        assert!((1..20).all(|m| !periodic_orbit_check(&a1, m).unwrap()));
        assert_eq!(find_periodic_orbit(&a1, DEFAULT_M_MAX).unwrap(), Some(20));
        assert_eq!(find_periodic_orbit(&a1, 19).unwrap(), None);
    }

    #[test]
    fn orbit_search_matches_pointwise_check() {
        for (p, q) in [(1, 4), (1, 3), (2, 7), (3, 8), (5, 12), (1, 1), (0, 1)] {
            let a1 = Angle::exact(p, q).unwrap();
            let found = find_periodic_orbit(&a1, 10_000).unwrap().unwrap();
            assert!(periodic_orbit_check(&a1, found).unwrap());
            assert!((1..found).all(|m| !periodic_orbit_check(&a1, m).unwrap()));
        }
        assert_eq!(find_periodic_orbit(&Angle::zero(), 10).unwrap(), Some(1));
    }

    #[test]
    fn orbit_search_needs_exact_angle() {
        let a1 = Angle::from_radians(1.2566370614);
        assert!(matches!(periodic_orbit_check(&a1, 20), Err(QtmError::InexactAngle(_))));
        assert!(matches!(find_periodic_orbit(&a1, 100), Err(QtmError::InexactAngle(_))));
    }

    #[test]
    fn head_multiplier_limits() {
        let r = head_stability(20, 1e-9).unwrap();
        assert_eq!(r.m11_limit, 4181);
        assert!((r.m11 / 4181.0 - 1.0).abs() < 1e-3);
        assert!((r.m22 - 1.0).abs() < 1e-6);
        let r = head_stability(5, 1e-6).unwrap();
        assert!((r.m11 / 3.0 - 1.0).abs() < 1e-3);
        // The limit only describes a fixed δ while δ·F(m) stays small.
        for m in 2..=15 {
            let r = head_stability(m, 1e-6).unwrap();
            assert!((r.m22 - 1.0).abs() < 1e-3, "m={m}");
        }
    }

    #[test]
    fn head_multiplier_preconditions() {
        assert!(matches!(head_stability(5, 0.0), Err(QtmError::ZeroDelta)));
        assert!(head_stability(1, 1e-6).is_err());
        assert!(head_stability(5, 0.2).is_err());
        assert!(head_stability(94, 1e-6).is_err());
        assert!(head_stability(93, 1e-30).is_ok());
    }

    #[test]
    fn tape_lambda3_examples() {
        let a1 = two_fifths();
        assert_eq!(tape_lambda3(0, &a1, 0.0), -1.0);
        assert!((tape_lambda3(2, &a1, 0.0) - 0.309_016_994_374_947_4).abs() < 1e-15);
        for n in [0, 1] {
            assert_eq!(tape_lambda3(n, &a1, 0.0), tape_lambda3(n, &a1, 1e-3));
        }
        assert_ne!(tape_lambda3(2, &a1, 0.0), tape_lambda3(2, &a1, 1e-3));
    }

    #[test]
    fn tape_multiplier_examples() {
        let t = tape_stability(1, 1e-6, &Angle::from_radians(0.7)).unwrap();
        assert!((t.m_limit - 1.4f64.sin() / 0.7f64.sin()).abs() < 1e-14);
        assert!(!t.period_compatible);
        let t = tape_stability(6, 1e-6, &two_fifths()).unwrap();
        assert!(t.period_compatible);
        assert!((t.m_finite / t.m_limit - 1.0).abs() < 1e-3);
        assert!(matches!(
            tape_stability(3, 1e-6, &Angle::exact(1, 1).unwrap()),
            Err(QtmError::DegenerateAlpha(_))
        ));
        assert!(matches!(
            tape_stability(3, 0.0, &two_fifths()),
            Err(QtmError::ZeroDelta)
        ));
    }

    #[test]
    fn tape_orbits_skip_twice_odd_periods() {
        let a1 = two_fifths();
        for m in (1..60).step_by(2) {
            assert_eq!(tape_orbit_check(&a1, m).unwrap(), None);
        }
        assert_eq!(tape_orbit_check(&a1, 20).unwrap(), Some(true));
        assert_eq!(tape_orbit_check(&a1, 10).unwrap(), Some(false));
    }

    #[test]
    fn table_rows() {
        let (a, d) = (2.0 * PI / 5.0, 1e-3);
        assert!((table1_d2(0, a, d).unwrap() - (1.0 - d.cos())).abs() < 1e-18);
        assert!((table1_d2(3, a, d).unwrap() - (0.25 - 0.25 * (2.0 * d).cos())).abs() < 1e-18);
        let row2 =
            0.5 + 0.25 * (2.0 * a + 2.0 * d).cos() - 0.5 * (2.0 * a + d).cos() - 0.5 * d.cos() + 0.25 * (2.0 * a).cos();
        assert_eq!(table1_d2(2, a, d).unwrap(), row2);
        assert!(matches!(table1_d2(13, a, d), Err(QtmError::NoTableRow(13))));
        for n in 0..TABLE1_ROWS {
            assert!(table1_d2(n, a, 0.0).unwrap().abs() < 1e-15, "n={n}");
        }
    }
}
