//! Randomized invariants that cut across modules: things that must hold for
//! every input, checked on generated cases rather than curated examples.

use num_bigint::BigUint;
use proptest::prelude::*;

use palinsieve::equidist::equidist_error;
use palinsieve::expsums::{pal_exp_sum, phi};
use palinsieve::lemmas::{discrepancy, star_discrepancy, PointSet};
use palinsieve::moments::{r_exact, r_inclusion_exclusion, CompositionTable};
use palinsieve::numeric::Angle;
use palinsieve::palindromes::{class_counts, is_palindrome, Filter, PalConfig, PalindromeStream};
use palinsieve::sieve::{delta_r, factorize, is_prime};

fn digit_count(mut n: u64, base: u32) -> u32 {
    let mut d = 0;
    while n > 0 {
        n /= base as u64;
        d += 1;
    }
    d
}

fn filter_from(idx: u8) -> Filter {
    match idx % 3 {
        0 => Filter::All,
        1 => Filter::OddDigits,
        _ => Filter::Star,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn streams_yield_sorted_filtered_palindromes(
        base in 2u32..=16,
        x in 1u64..=500_000,
        fidx in 0u8..3,
    ) {
        let filter = filter_from(fidx);
        let cfg = PalConfig::new(base, filter).unwrap();
        let star_mod = cfg.star_modulus();
        let mut prev = 0u64;
        for p in PalindromeStream::new(cfg, x) {
            prop_assert!(p > prev, "not strictly ascending at {p}");
            prop_assert!(p <= x);
            prop_assert!(is_palindrome(p, base).unwrap());
            if filter != Filter::All {
                prop_assert_eq!(digit_count(p, base) % 2, 1);
            }
            if filter == Filter::Star {
                prop_assert_eq!(num_integer::gcd(p, star_mod), 1);
            }
            prev = p;
        }
    }

    #[test]
    fn class_counts_partition_the_stream(
        base in 2u32..=10,
        x in 1u64..=100_000,
        q in 1u64..=64,
        fidx in 0u8..3,
    ) {
        let cfg = PalConfig::new(base, filter_from(fidx)).unwrap();
        let total: u64 = class_counts(cfg, x, q).unwrap().iter().sum();
        prop_assert_eq!(total, PalindromeStream::new(cfg, x).count() as u64);
    }

    #[test]
    fn angle_complement_is_an_isometry(num in -1_000_000i64..=1_000_000, den in 1u64..=1_000_000) {
        let a = Angle::new(num, den).unwrap();
        let c = a.complement();
        prop_assert_eq!(a.dist(), c.dist());
        let round = a.try_add(&c).unwrap();
        prop_assert!(round.is_zero());
    }

    #[test]
    fn angle_addition_commutes(
        n1 in -10_000i64..=10_000, d1 in 1u64..=10_000,
        n2 in -10_000i64..=10_000, d2 in 1u64..=10_000,
    ) {
        let a = Angle::new(n1, d1).unwrap();
        let b = Angle::new(n2, d2).unwrap();
        if let (Ok(ab), Ok(ba)) = (a.try_add(&b), b.try_add(&a)) {
            prop_assert_eq!(ab.num(), ba.num());
            prop_assert_eq!(ab.den(), ba.den());
        }
    }

    #[test]
    fn phi_respects_reflection_and_its_peak(
        base in 2u32..=16,
        num in 0i64..=10_000,
        den in 1u64..=10_000,
    ) {
        let a = Angle::new(num, den).unwrap();
        let v = phi(base, a);
        prop_assert!(v >= 0.0);
        prop_assert!(v <= base as f64 + 1e-9, "phi = {v} above the digit count");
        let w = phi(base, a.complement());
        prop_assert!((v - w).abs() <= 1e-9 * (1.0 + v), "reflection broke: {v} vs {w}");
    }

    #[test]
    fn exp_sum_never_beats_the_triangle_inequality(
        base in 2u32..=5,
        x in 1u64..=200_000,
        num in 0i64..=5_000,
        den in 1u64..=5_000,
    ) {
        let cfg = PalConfig::new(base, Filter::OddDigits).unwrap();
        let count = PalindromeStream::new(cfg, x).count() as f64;
        let a = Angle::new(num, den).unwrap();
        let s = pal_exp_sum(base, x, a).unwrap();
        prop_assert!(s.norm() <= count + 1e-9 * (count + 1.0));
        let at_zero = pal_exp_sum(base, x, Angle::ZERO).unwrap();
        prop_assert!((at_zero.re - count).abs() < 1e-9 * (count + 1.0));
        prop_assert!(at_zero.im.abs() < 1e-12 * (count + 1.0));
    }

    #[test]
    fn composition_routes_agree_and_total_correctly(base in 2u32..=6, k in 1u32..=10) {
        let table = CompositionTable::new(base, k).unwrap();
        let mut total = BigUint::default();
        for (n, v) in table.values().iter().enumerate() {
            prop_assert_eq!(v, &r_exact(n as i64, k, base).unwrap());
            prop_assert_eq!(v, &r_inclusion_exclusion(n as i64, k, base).unwrap());
            total += v;
        }
        prop_assert_eq!(total, BigUint::from(base).pow(k));
        prop_assert_eq!(r_exact(-1, k, base).unwrap(), BigUint::default());
        prop_assert_eq!(r_exact(table.degree() as i64 + 1, k, base).unwrap(), BigUint::default());
    }

    #[test]
    fn factorization_round_trips(n in 2u64..=1_000_000_000_000) {
        let f = factorize(n).unwrap();
        prop_assert_eq!(f.reconstruct(), n as u128);
        for &(p, e) in f.factors() {
            prop_assert!(e >= 1);
            prop_assert!(is_prime(p), "claimed factor {p} of {n} is composite");
        }
        let ps: Vec<u64> = f.factors().iter().map(|&(p, _)| p).collect();
        prop_assert!(ps.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(f.p_min(), ps.first().copied());
    }

    #[test]
    fn discrepancy_bracket_holds(points in prop::collection::vec(0.0f64..1.0, 1..64)) {
        let ps = PointSet::new(points).unwrap();
        let dstar = star_discrepancy(&ps);
        let d = discrepancy(&ps);
        prop_assert!(dstar > 0.0);
        prop_assert!(dstar <= d + 1e-12);
        prop_assert!(d <= 2.0 * dstar + 1e-12);
        prop_assert!(d <= 1.0 + 1e-12);
    }

    #[test]
    fn class_deviation_sup_is_monotone_in_the_bound(
        base in 2u32..=3,
        q in 1u64..=50,
        x1 in 1u64..=65_536,
        x2 in 1u64..=65_536,
    ) {
        let (lo, hi) = (x1.min(x2), x1.max(x2));
        let e_lo = equidist_error(base, lo, q).unwrap();
        let e_hi = equidist_error(base, hi, q).unwrap();
        prop_assert!(e_lo <= e_hi, "sup shrank: {e_lo} at {lo} vs {e_hi} at {hi}");
    }

    #[test]
    fn sieve_exponents_increase_with_the_factor_budget(r in 2u32..=40) {
        let here = delta_r(r).unwrap();
        let next = delta_r(r + 1).unwrap();
        prop_assert!(here < next);
        prop_assert!(here > r as f64 - 0.2619);
        prop_assert!(here < r as f64);
    }
}
