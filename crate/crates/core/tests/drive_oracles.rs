mod common;

use proptest::prelude::*;

use qtm_core::drive::{fib_mod, fib_number, fibonacci_angles, perturbed_angles};
use qtm_core::{Angle, DriveSequence};

#[test]
fn inexact_fibonacci_angles_match_double_double() {
    for alpha1 in [0.7, 1.2566370614, 2.5] {
        // The split stays exact while α1·F(m)/2π < 2^24.
        let angles = DriveSequence::fibonacci(Angle::from_radians(alpha1)).angles(36);
        for m in 1..=36u64 {
            let expected = common::product_mod_tau(alpha1, common::fib(m) as f64);
            let gap = common::circle_gap(angles[(m - 1) as usize], expected).abs();
            assert!(gap < 1e-12, "alpha1={alpha1} m={m} gap={gap:e}");
        }
    }
}

#[test]
fn exact_angles_are_integer_fibonacci_residues() {
    let alpha1 = Angle::exact(3, 7).unwrap();
    for (i, a) in fibonacci_angles(&alpha1, 200).iter().enumerate() {
        let m = i as u64 + 1;
        let frac = a.pi_fraction().unwrap();
        // α_m = 3·F(m)/7·π, compared as numerators over 14.
        let expected = (3 * fib_mod(m, 14)) % 14;
        assert_eq!((frac.num() as u64 * 7 / frac.den()) % 14, expected, "m={m}");
    }
}

#[test]
fn perturbed_sequence_obeys_recurrence() {
    let alpha1 = Angle::from_radians(0.7);
    let a = perturbed_angles(&alpha1, 1e-3, 60);
    for w in a.windows(3) {
        let gap = common::circle_gap(w[2], w[0] + w[1]).abs();
        assert!(gap < 1e-12);
    }
}

proptest! {
    #[test]
    fn fib_mod_matches_exact(m in 0u64..90, modulus in 1u64..10_000) {
        prop_assert_eq!(fib_mod(m, modulus), fib_number(m).unwrap() % modulus);
    }

    #[test]
    fn pisano_period_of_ten_is_sixty(m in 0u64..1_000_000) {
        prop_assert_eq!(fib_mod(m, 10), fib_mod(m + 60, 10));
    }
}
