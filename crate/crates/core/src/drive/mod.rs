//! Rotation-angle sequences that drive the head spin.
//!
//! The chaotic drive is the Fibonacci recurrence `α_{m+1} = α_m + α_{m-1}`
//! (mod 2π) with `α_0 = 0`, so `α_m = α1·F(m)`. Two regular drives serve as
//! zero-Lyapunov contrasts: the constant drive `α_m = α1` and the arithmetic
//! drive `α_m = m·α1`.
//!
//! Angle sequences are indexed from `m = 1`: element `i` of a returned vector
//! is `α_{i+1}`.

mod angle;
pub mod phase;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

pub use angle::{Angle, PiFraction, MAX_DENOMINATOR};
pub use phase::{angle_difference, fib_big, reduce_combination, wrap_angle};

use crate::error::{QtmError, Result};

/// Golden ratio `(1 + √5)/2`.
pub const GOLDEN: f64 = 1.618_033_988_749_895;
/// Conjugate root `(1 - √5)/2`.
pub const GOLDEN_CONJUGATE: f64 = -0.618_033_988_749_894_9;

/// Largest index whose Fibonacci number fits in a `u64`.
pub const MAX_FIB_INDEX: u64 = 93;

/// `F(m)` by integer recurrence, `F(0) = 0`, `F(1) = 1`.
pub fn fib_number(m: u64) -> Result<u64> {
    if m > MAX_FIB_INDEX {
        return Err(QtmError::FibonacciOverflow(m));
    }
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..m {
        // b runs one index ahead and may wrap on the final step; it is discarded.
        (a, b) = (b, a.wrapping_add(b));
    }
    Ok(a)
}

/// `F(m) mod modulus` by fast doubling.
pub fn fib_mod(m: u64, modulus: u64) -> u64 {
    assert!(modulus > 0, "modulus must be positive");
    fib_pair_mod(m, modulus as u128).0 as u64
}

fn fib_pair_mod(k: u64, n: u128) -> (u128, u128) {
    if k == 0 {
        return (0, 1 % n);
    }
    let (a, b) = fib_pair_mod(k / 2, n);
    let c = a * ((2 * b + n - a) % n) % n;
    let d = (a * a + b * b) % n;
    if k.is_multiple_of(2) {
        (c, d)
    } else {
        (d, (c + d) % n)
    }
}

/// `δ·F(m)`, the accumulated angle offset a seed perturbation `δ` picks up
/// after `m` Fibonacci steps.
pub fn delta_fib(delta: f64, m: u64) -> Result<f64> {
    Ok(delta * fib_number(m)? as f64)
}

/// `α1·F(m)` through powers of the golden ratio, reduced mod 2π.
///
/// Only meaningful for small `m`; it exists to cross-check the integer path.
pub fn fibonacci_closed_form(alpha1: f64, m: u32) -> f64 {
    let sqrt5 = 5f64.sqrt();
    let growth = GOLDEN.powi(m as i32) - GOLDEN_CONJUGATE.powi(m as i32);
    wrap_angle(alpha1 / sqrt5 * growth)
}

/// The `m`-th Fibonacci angles `α_1..α_count` for `α_{m+1} = α_m + α_{m-1}`,
/// `α_0 = 0`.
///
/// Exact inputs stay exact: the numerators `p·F(m)` are carried modulo `2q`.
pub fn fibonacci_angles(alpha1: &Angle, count: usize) -> Vec<Angle> {
    match alpha1.pi_fraction() {
        Some(frac) => {
            let period = 2 * frac.den() as i128;
            let seed = (frac.num() as i128).rem_euclid(period);
            let (mut prev, mut cur) = (0i128, seed);
            let mut out = Vec::with_capacity(count);
            for _ in 0..count {
                out.push(Angle::exact(cur as i64, frac.den()).expect("denominator already validated"));
                let next = (prev + cur) % period;
                prev = cur;
                cur = next;
            }
            out
        }
        None => {
            let (mut prev, mut cur) = (BigInt::zero(), BigInt::from(1u8));
            let mut out = Vec::with_capacity(count);
            for _ in 0..count {
                out.push(Angle::from_radians(reduce_combination(&[(alpha1, cur.clone())])));
                let next = &prev + &cur;
                prev = cur;
                cur = next;
            }
            out
        }
    }
}

/// Fibonacci angles seeded with `α'_0 = δ`, `α'_1 = α1`.
///
/// The recurrence is run on the integer coefficients of `α1` and `δ`
/// (`α'_m = a_m·α1 + b_m·δ`), so no rounding accumulates along the sequence.
pub fn perturbed_angles(alpha1: &Angle, delta: f64, count: usize) -> Vec<f64> {
    let delta = Angle::from_radians(delta);
    let mut prev = (BigInt::zero(), BigInt::from(1u8));
    let mut cur = (BigInt::from(1u8), BigInt::zero());
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(reduce_combination(&[(alpha1, cur.0.clone()), (&delta, cur.1.clone())]));
        let next = (&prev.0 + &cur.0, &prev.1 + &cur.1);
        prev = cur;
        cur = next;
    }
    out
}

/// Angles of a regular (zero-Lyapunov) drive.
///
/// `Constant` gives `α_m = α1`; the perturbation of that drive lives in the
/// initial head state, so `delta` is ignored. `Arithmetic` gives
/// `α_m = m·α1 − (m−1)·δ`.
pub fn regular_angles(rule: DriveRule, alpha1: &Angle, delta: f64, count: usize) -> Result<Vec<f64>> {
    match rule {
        DriveRule::Constant => Ok(vec![wrap_angle(alpha1.radians()); count]),
        DriveRule::Arithmetic => {
            let delta = Angle::from_radians(delta);
            Ok((1..=count as i64)
                .map(|m| reduce_combination(&[(alpha1, BigInt::from(m)), (&delta, BigInt::from(1 - m))]))
                .collect())
        }
        other => Err(QtmError::NotRegularRule(other.to_string())),
    }
}

/// The rule generating a drive sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DriveRule {
    Fibonacci,
    FibonacciPerturbed,
    Constant,
    Arithmetic,
}

impl fmt::Display for DriveRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DriveRule::Fibonacci => "fibonacci",
            DriveRule::FibonacciPerturbed => "fibonacci_perturbed",
            DriveRule::Constant => "constant",
            DriveRule::Arithmetic => "arithmetic",
        })
    }
}

impl FromStr for DriveRule {
    type Err = QtmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "fibonacci" | "fib" => Ok(DriveRule::Fibonacci),
            "fibonacci_perturbed" => Ok(DriveRule::FibonacciPerturbed),
            "constant" => Ok(DriveRule::Constant),
            "arithmetic" => Ok(DriveRule::Arithmetic),
            _ => Err(QtmError::UnknownRule(s.to_string())),
        }
    }
}

/// A rule plus its parameters; generates `α_1, α_2, …` on demand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSequence {
    pub rule: DriveRule,
    pub alpha1: Angle,
    /// Perturbation in radians; zero when the rule does not use one.
    pub delta: f64,
}

impl DriveSequence {
    pub fn fibonacci(alpha1: Angle) -> Self {
        DriveSequence {
            rule: DriveRule::Fibonacci,
            alpha1,
            delta: 0.0,
        }
    }

    pub fn fibonacci_perturbed(alpha1: Angle, delta: f64) -> Self {
        DriveSequence {
            rule: DriveRule::FibonacciPerturbed,
            alpha1,
            delta,
        }
    }

    pub fn constant(alpha1: Angle) -> Self {
        DriveSequence {
            rule: DriveRule::Constant,
            alpha1,
            delta: 0.0,
        }
    }

    pub fn arithmetic(alpha1: Angle, delta: f64) -> Self {
        DriveSequence {
            rule: DriveRule::Arithmetic,
            alpha1,
            delta,
        }
    }

    /// The unperturbed drive and its `δ`-perturbed partner for a rule.
    ///
    /// A `FibonacciPerturbed` rule is treated like `Fibonacci`.
    pub fn perturbation_pair(rule: DriveRule, alpha1: Angle, delta: f64) -> (Self, Self) {
        match rule {
            DriveRule::Fibonacci | DriveRule::FibonacciPerturbed => {
                (Self::fibonacci(alpha1), Self::fibonacci_perturbed(alpha1, delta))
            }
            DriveRule::Constant => (Self::constant(alpha1), Self::constant(alpha1)),
            DriveRule::Arithmetic => (Self::arithmetic(alpha1, 0.0), Self::arithmetic(alpha1, delta)),
        }
    }

    /// `α_1..α_count` in radians, each in `[0, 2π)`.
    pub fn angles(&self, count: usize) -> Vec<f64> {
        match self.rule {
            DriveRule::Fibonacci => fibonacci_angles(&self.alpha1, count)
                .iter()
                .map(Angle::radians)
                .collect(),
            DriveRule::FibonacciPerturbed => perturbed_angles(&self.alpha1, self.delta, count),
            rule => regular_angles(rule, &self.alpha1, self.delta, count).expect("regular rule"),
        }
    }
}

impl fmt::Display for DriveSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(alpha1={}", self.rule, self.alpha1)?;
        if self.delta != 0.0 {
            write!(f, ", delta={}", self.delta)?;
        }
        f.write_str(")")
    }
}
