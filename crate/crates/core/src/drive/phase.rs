//! Reduction of integer combinations of angles into `[0, 2π)`.
//!
//! Fibonacci-driven angles are `α1·F(m)` with `F(m)` growing like `1.618^m`, so
//! reducing them in `f64` loses every significant digit by `m ≈ 75`. Here the
//! exact rational-π parts are reduced with integer arithmetic and the remaining
//! decimal parts with a big-float whose precision tracks the size of the
//! product, which keeps every reduced angle within a few ulps of the true value.

use std::cell::RefCell;
use std::f64::consts::{PI, TAU};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::Angle;

const RM: RoundingMode = RoundingMode::ToEven;
/// Guard bits kept beyond the integer part of a product before reduction.
const GUARD_BITS: usize = 128;

struct PhaseReducer {
    consts: Consts,
    two_pi: BigFloat,
    precision: usize,
}

impl PhaseReducer {
    fn new() -> Self {
        let mut consts = Consts::new().expect("allocate big-float constant cache");
        let precision = 256;
        let two_pi = two_pi_at(&mut consts, precision);
        PhaseReducer {
            consts,
            two_pi,
            precision,
        }
    }

    fn two_pi(&mut self, precision: usize) -> &BigFloat {
        if precision > self.precision {
            // Grow geometrically so a rising sequence of requests stays cheap.
            self.precision = precision.max(self.precision * 2);
            self.two_pi = two_pi_at(&mut self.consts, self.precision);
        }
        &self.two_pi
    }

    fn pi(&mut self, precision: usize) -> BigFloat {
        self.consts.pi(precision, RM)
    }
}

fn two_pi_at(consts: &mut Consts, precision: usize) -> BigFloat {
    let pi = consts.pi(precision, RM);
    pi.mul(&BigFloat::from_u8(2, 64), precision, RM)
}

thread_local! {
    static REDUCER: RefCell<PhaseReducer> = RefCell::new(PhaseReducer::new());
}

pub(crate) fn bigint_to_bigfloat(value: &BigInt) -> BigFloat {
    if value.is_zero() {
        return BigFloat::from_u8(0, 64);
    }
    let (sign, digits) = value.to_u64_digits();
    let sign = match sign {
        num_bigint::Sign::Minus => Sign::Neg,
        _ => Sign::Pos,
    };
    BigFloat::from_words(&digits, sign, (64 * digits.len()) as i32)
}

pub(crate) fn bigfloat_to_f64(value: &BigFloat) -> f64 {
    if value.is_zero() {
        return 0.0;
    }
    let (words, _, sign, exponent, _) = value.as_raw_parts().expect("finite big-float value");
    let top = *words.last().expect("non-empty mantissa");
    let magnitude = (top as f64) * 2f64.powi(exponent - 64);
    match sign {
        Sign::Neg => -magnitude,
        Sign::Pos => magnitude,
    }
}

/// Wraps an `f64` angle into `[0, 2π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let mut r = x % TAU;
    if r < 0.0 {
        r += TAU;
    }
    if r >= TAU {
        r -= TAU;
    }
    r
}

/// Signed angular difference `a - b` folded into `(-π, π]`.
pub fn angle_difference(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

/// `(num/den)·π` rounded to the nearest `f64`.
pub(crate) fn pi_fraction_radians(num: i64, den: u64) -> f64 {
    REDUCER.with(|cell| {
        let mut reducer = cell.borrow_mut();
        let pi = reducer.pi(192);
        let scaled = pi.mul(&BigFloat::from_i64(num, 64), 192, RM);
        let value = scaled.div(&BigFloat::from_u64(den, 64), 192, RM);
        bigfloat_to_f64(&value)
    })
}

/// Evaluates `Σ coefficient·angle` reduced into `[0, 2π)`.
///
/// Terms whose angle carries an exact `p/q·π` form contribute through integer
/// arithmetic modulo `2·lcm(q)`; all other terms are accumulated exactly in a
/// big-float and reduced against `2π` carried to enough bits that the
/// absolute error of the reduction stays below `2^-100`.
pub fn reduce_combination(terms: &[(&Angle, BigInt)]) -> f64 {
    let mut exact_den = BigInt::from(1u8);
    for (angle, _) in terms {
        if let Some(frac) = angle.pi_fraction() {
            exact_den = exact_den.lcm(&BigInt::from(frac.den()));
        }
    }

    let mut exact_num = BigInt::zero();
    // Adding to a big-float zero at full precision yields an empty mantissa,
    // so the sum starts from the first nonzero product instead.
    let mut inexact: Option<BigFloat> = None;
    for (angle, coefficient) in terms {
        if coefficient.is_zero() {
            continue;
        }
        match angle.pi_fraction() {
            Some(frac) => {
                let scale = &exact_den / BigInt::from(frac.den());
                exact_num += coefficient * BigInt::from(frac.num()) * scale;
            }
            None if angle.radians() == 0.0 => {}
            None => {
                let radians = BigFloat::from_f64(angle.radians(), 64);
                let product = radians.mul_full_prec(&bigint_to_bigfloat(coefficient));
                inexact = Some(match inexact {
                    Some(sum) => sum.add_full_prec(&product),
                    None => product,
                });
            }
        }
    }

    let exact_part = if exact_num.is_zero() {
        0.0
    } else {
        let period = &exact_den * 2;
        let residue = exact_num.mod_floor(&period);
        // residue < 2·den, so both fit comfortably and the ratio is in [0, 2).
        let ratio = residue.to_f64().unwrap_or(0.0) / exact_den.to_f64().unwrap_or(1.0);
        ratio * PI
    };

    let inexact_part = match inexact {
        Some(x) if !x.is_zero() => reduce_bigfloat(&x),
        _ => 0.0,
    };

    wrap_angle(exact_part + inexact_part)
}

fn reduce_bigfloat(x: &BigFloat) -> f64 {
    let magnitude_bits = x.exponent().unwrap_or(0).max(0) as usize;
    let precision = (magnitude_bits + GUARD_BITS).div_ceil(64) * 64;
    REDUCER.with(|cell| {
        let mut reducer = cell.borrow_mut();
        let two_pi = reducer.two_pi(precision).clone();
        let turns = x.div(&two_pi, precision, RM).floor();
        let remainder = x.sub(&turns.mul(&two_pi, precision + 64, RM), precision, RM);
        bigfloat_to_f64(&remainder)
    })
}

/// Fibonacci numbers as big integers, with `F(-k) = (-1)^(k+1)·F(k)`.
pub fn fib_big(index: i64) -> BigInt {
    if index < 0 {
        let k = index.unsigned_abs();
        let value = fib_pair(k).0;
        return if k.is_multiple_of(2) { -value } else { value };
    }
    fib_pair(index as u64).0
}

/// `(F(k), F(k+1))` by fast doubling.
fn fib_pair(k: u64) -> (BigInt, BigInt) {
    if k == 0 {
        return (BigInt::zero(), BigInt::from(1u8));
    }
    let (a, b) = fib_pair(k / 2);
    let c = &a * (&b * 2 - &a);
    let d = &a * &a + &b * &b;
    if k.is_multiple_of(2) {
        (c, d)
    } else {
        let e = &c + &d;
        (d, e)
    }
}
