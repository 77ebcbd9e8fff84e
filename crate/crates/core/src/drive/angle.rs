use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use super::phase::pi_fraction_radians;
use crate::error::{QtmError, Result};

/// Largest denominator accepted for an exact angle.
pub const MAX_DENOMINATOR: u64 = 1 << 31;

/// A rational multiple of π, `num/den · π`, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PiFraction {
    num: i64,
    den: u64,
}

impl PiFraction {
    pub fn new(num: i64, den: u64) -> Result<Self> {
        if den == 0 || den > MAX_DENOMINATOR {
            return Err(QtmError::AngleDenominator(den));
        }
        let g = (num.unsigned_abs()).gcd(&den).max(1);
        Ok(PiFraction {
            num: num / g as i64,
            den: den / g,
        })
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }
}

/// A drive angle in radians, optionally with an exact `p/q·π` form.
///
/// The exact form is what makes periodicity decidable: Fibonacci combinations
/// of an exact angle are reduced with integer arithmetic and compare bit-for-bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle {
    exact: Option<PiFraction>,
    radians: f64,
}

impl Angle {
    /// `num/den · π`.
    pub fn exact(num: i64, den: u64) -> Result<Self> {
        let frac = PiFraction::new(num, den)?;
        Ok(Angle {
            exact: Some(frac),
            radians: pi_fraction_radians(frac.num, frac.den),
        })
    }

    /// A decimal angle. Zero is exactly `0·π` and keeps the exact form.
    pub fn from_radians(radians: f64) -> Self {
        if radians == 0.0 {
            return Angle::zero();
        }
        Angle { exact: None, radians }
    }

    pub fn zero() -> Self {
        Angle {
            exact: Some(PiFraction { num: 0, den: 1 }),
            radians: 0.0,
        }
    }

    pub fn radians(&self) -> f64 {
        self.radians
    }

    pub fn pi_fraction(&self) -> Option<PiFraction> {
        self.exact
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some(PiFraction { num, den: 1 }) => write!(f, "{num} pi"),
            Some(PiFraction { num, den }) => write!(f, "{num}/{den} pi"),
            None => write!(f, "{}", self.radians),
        }
    }
}

impl FromStr for Angle {
    type Err = QtmError;

    /// Accepts `p/q pi`, `p/q*pi`, `p pi`, `pi`, `-pi` or decimal radians.
    fn from_str(s: &str) -> Result<Self> {
        let syntax = || QtmError::AngleSyntax(s.to_string());
        let text = s.trim().to_ascii_lowercase();
        let Some(coeff) = text.strip_suffix("pi") else {
            let radians: f64 = text.parse().map_err(|_| syntax())?;
            if !radians.is_finite() {
                return Err(syntax());
            }
            return Ok(Angle::from_radians(radians));
        };
        let coeff = coeff.trim_end();
        let coeff = coeff.strip_suffix('*').unwrap_or(coeff).trim();
        let (num, den) = match coeff {
            "" | "+" => (1, 1),
            "-" => (-1, 1),
            _ => match coeff.split_once('/') {
                Some((n, d)) => (
                    n.trim().parse::<i64>().map_err(|_| syntax())?,
                    d.trim().parse::<u64>().map_err(|_| syntax())?,
                ),
                None => (coeff.parse::<i64>().map_err(|_| syntax())?, 1),
            },
        };
        Angle::exact(num, den)
    }
}
