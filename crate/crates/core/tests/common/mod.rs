//! Double-double oracle for `a·b mod 2π`, independent of the big-float path.

#![allow(dead_code)]

use std::f64::consts::TAU;

// 2π = C1 + C2 + C3, with C1 and C2 short enough that `k·C1`, `k·C2` are
// exact for |k| < 2^24.
const C1: f64 = 6.28125;
const C2: f64 = 0.0019353071693331003;
const C3: f64 = 1.0253376606378076e-11;

/// `a·b` reduced to `[0, 2π)`, good to a few ulps of 2π while
/// `|a·b| < 2^24·2π`.
pub fn product_mod_tau(a: f64, b: f64) -> f64 {
    let hi = a * b;
    let lo = a.mul_add(b, -hi);
    let k = (hi / TAU).floor();
    assert!(k.abs() < (1u64 << 24) as f64, "product too large for the split");
    let r = ((hi - k * C1) - k * C2) - k * C3 + lo;
    r.rem_euclid(TAU)
}

/// Signed distance between two angles on the circle.
pub fn circle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > std::f64::consts::PI {
        d - TAU
    } else {
        d
    }
}

pub fn fib(m: u64) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..m {
        (a, b) = (b, a + b);
    }
    a
}
