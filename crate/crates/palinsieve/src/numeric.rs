//! Exact arithmetic on rational points of the circle, small modular helpers,
//! and deterministic floating-point accumulation.
//!
//! Everything downstream that evaluates a trigonometric quantity at a rational
//! point goes through [`Angle`], so "is this angle exactly an integer" and
//! "is `b * angle` exactly an integer" are decided by integer arithmetic, not
//! by comparing floats against a tolerance.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// A point of R/Z stored as a reduced fraction `num/den`,
/// with `0 <= num < den` and `gcd(num, den) = 1`. The integer point is
/// canonically `0/1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Angle {
    num: u64,
    den: u64,
}

impl Angle {
    pub const ZERO: Angle = Angle { num: 0, den: 1 };

    /// Build `num/den` reduced modulo 1. Negative numerators wrap around,
    /// so `-1/3` becomes `2/3` and `7/3` becomes `1/3`.
    pub fn new(num: i64, den: u64) -> Result<Angle> {
        if den == 0 {
            return Err(Error::InvalidDenominator);
        }
        let n = num.rem_euclid(den as i64) as u64;
        Ok(Angle::reduced(n, den))
    }

    fn reduced(num: u64, den: u64) -> Angle {
        debug_assert!(den > 0 && num < den);
        let g = num.gcd(&den);
        Angle { num: num / g, den: den / g }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// True exactly when the angle is an integer point.
    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Multiply by a machine-size integer. The multiplier is reduced modulo
    /// `den` first, so chained scalings never overflow.
    pub fn scale(&self, m: u64) -> Angle {
        let m = m % self.den;
        let n = (self.num as u128 * m as u128 % self.den as u128) as u64;
        Angle::reduced(n, self.den)
    }

    /// Multiply by an arbitrary-precision integer (reduced modulo `den`).
    /// Huge multipliers such as towers of base powers therefore cost one
    /// remainder, not a full materialization.
    pub fn scale_big(&self, m: &BigInt) -> Angle {
        let d = BigInt::from(self.den);
        let r = m.mod_floor(&d).to_u64().expect("residue fits u64");
        self.scale(r)
    }

    /// Sum modulo 1. Fails only if the reduced common denominator would
    /// exceed the `u64` range.
    pub fn try_add(&self, other: &Angle) -> Result<Angle> {
        let g = self.den.gcd(&other.den);
        let lcm = self.den as u128 / g as u128 * other.den as u128;
        if lcm > u64::MAX as u128 {
            return Err(Error::Overflow("angle addition"));
        }
        let num = (self.num as u128 * (lcm / self.den as u128)
            + other.num as u128 * (lcm / other.den as u128))
            % lcm;
        Ok(Angle::reduced(num as u64, lcm as u64))
    }

    /// Distance to the nearest integer, `min(num, den-num)/den`, computed on
    /// integers and converted once at the end.
    pub fn dist(&self) -> f64 {
        let (n, d) = self.dist_parts();
        n as f64 / d as f64
    }

    /// Exact numerator/denominator of the distance to the nearest integer.
    pub fn dist_parts(&self) -> (u64, u64) {
        (self.num.min(self.den - self.num), self.den)
    }

    /// The reflection `1 - a` (already reduced since gcd is symmetric).
    pub fn complement(&self) -> Angle {
        if self.num == 0 {
            Angle::ZERO
        } else {
            Angle { num: self.den - self.num, den: self.den }
        }
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `e(a) = exp(2 pi i a)`.
    pub fn phasor(&self) -> Complex64 {
        let t = std::f64::consts::TAU * self.num as f64 / self.den as f64;
        Complex64::new(t.cos(), t.sin())
    }
}

impl std::fmt::Display for Angle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// `base^exp mod m` by square and multiply; `m = 1` gives 0.
pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    assert!(m >= 1, "modulus must be positive");
    if m == 1 {
        return 0;
    }
    let mut acc: u64 = 1;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    assert!(m >= 1);
    if m == 1 {
        return Some(0);
    }
    // extended Euclid on (a mod m, m)
    let (mut r0, mut r1) = ((a % m) as i128, m as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

/// `(b^n + b^(two_n - n)) mod m`, the mirrored-position multiplier, computed
/// with two modular exponentiations so the larger power is never formed.
pub fn mirror_multiplier(b: u64, n: u32, two_n: u32, m: u64) -> u64 {
    assert!(n <= two_n, "exponent {n} out of range 0..={two_n}");
    let lo = mod_pow(b, n as u64, m);
    let hi = mod_pow(b, (two_n - n) as u64, m);
    ((lo as u128 + hi as u128) % m as u128) as u64
}

/// Trial-division factorization, adequate up to ~10^12 where it is used
/// (totients and orders of desk-scale moduli). The heavy factorizer with
/// Brent cycling lives in the sieve module.
pub(crate) fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |p: u64, e: u32| {
        if e > 0 {
            out.push((p, e));
        }
    };
    let mut e = 0;
    while n % 2 == 0 {
        n /= 2;
        e += 1;
    }
    push(2, e);
    let mut d = 3u64;
    while d as u128 * d as u128 <= n as u128 {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        push(d, e);
        d += 2;
    }
    push(n, u32::from(n > 1));
    out
}

/// Euler's totient by trial division.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1);
    trial_factor(n)
        .into_iter()
        .fold(1u64, |acc, (p, e)| acc * (p - 1) * p.pow(e - 1))
}

/// Number of divisors.
pub fn divisor_count(n: u64) -> u64 {
    assert!(n >= 1);
    trial_factor(n).into_iter().map(|(_, e)| e as u64 + 1).product()
}

/// Multiplicative order of `a` modulo `m`; `None` unless `gcd(a, m) = 1`.
pub fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    assert!(m >= 1);
    if m == 1 {
        return Some(1);
    }
    if (a % m).gcd(&m) != 1 {
        return None;
    }
    let phi = euler_phi(m);
    let mut ord = phi;
    for (p, _) in trial_factor(phi) {
        while ord % p == 0 && mod_pow(a, ord / p, m) == 1 {
            ord /= p;
        }
    }
    Some(ord)
}

/// Largest `z` with `z^k <= x`, exact in integers.
pub fn nth_root_u64(x: u64, k: u32) -> u64 {
    assert!(k >= 1);
    num_integer::Roots::nth_root(&x, k)
}

/// Pairwise (tree) summation: splits at the midpoint recursively, so the
/// result is a pure function of the element order, independent of any worker
/// partitioning the caller used to produce the slice.
pub fn sum_deterministic(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    sum_deterministic(&xs[..mid]) + sum_deterministic(&xs[mid..])
}

/// Natural logarithm of a positive big integer, computed from the leading
/// 53 bits plus the binary length, accurate to a few ulp.
pub fn ln_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    assert!(bits > 0, "ln of zero");
    if bits <= 53 {
        return (n.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 53;
    let top = (n >> shift).to_u64().unwrap();
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Reject NaN at the boundary where a float leaves numeric code.
pub fn ensure_finite(x: f64, what: &'static str) -> Result<f64> {
    if x.is_nan() {
        Err(Error::NotFinite(what))
    } else {
        Ok(x)
    }
}

/// Derive a per-instance RNG seed from a root seed and a stream index
/// (splitmix64 finalizer). Instances stay reproducible independently of how
/// work is partitioned across threads.
pub fn mix_seed(root: u64, stream: u64) -> u64 {
    let mut z = root ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn angle_wraps_and_reduces() {
        let a = Angle::new(7, 3).unwrap();
        assert_eq!((a.num(), a.den()), (1, 3));
        let b = Angle::new(-1, 3).unwrap();
        assert_eq!((b.num(), b.den()), (2, 3));
        let z = Angle::new(0, 1).unwrap();
        assert!(z.is_zero());
        assert!(Angle::new(1, 0).is_err());
        assert_eq!(Angle::new(4, 6).unwrap(), Angle::new(2, 3).unwrap());
    }

    #[test]
    fn angle_scale_mirrors_big_multiplier() {
        // 1/7 scaled by 2^1 + 2^5 = 34: 34 mod 7 = 6.
        let a = Angle::new(1, 7).unwrap();
        assert_eq!(a.scale(34), Angle::new(6, 7).unwrap());

        // The modular route must agree with materializing b^n + b^(2N-n).
        for &b in &[2u64, 3, 10] {
            for two_n in (2..=40u32).step_by(7) {
                for n in 0..=two_n {
                    let den = 9973;
                    let full = BigInt::from(b).pow(n) + BigInt::from(b).pow(two_n - n);
                    let via_big = Angle::new(1, den).unwrap().scale_big(&full);
                    let via_mod =
                        Angle::new(1, den).unwrap().scale(mirror_multiplier(b, n, two_n, den));
                    assert_eq!(via_big, via_mod);
                }
            }
        }
    }

    #[test]
    fn angle_add_and_dist() {
        let a = Angle::new(1, 4).unwrap();
        let b = Angle::new(5, 6).unwrap();
        let s = a.try_add(&b).unwrap();
        assert_eq!(s, Angle::new(1, 12).unwrap());
        assert_eq!(Angle::new(2, 3).unwrap().dist(), 1.0 / 3.0);
        assert_eq!(Angle::ZERO.dist(), 0.0);
        // complement keeps the distance
        let c = b.complement();
        assert_eq!(c.dist(), b.dist());
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(mod_pow(2, 10, 1000), 24);
        assert_eq!(mod_pow(5, 0, 7), 1);
        assert_eq!(mod_inverse(2, 3), Some(2));
        assert_eq!(mod_inverse(4, 8), None);
        assert_eq!(euler_phi(6), 2);
        assert_eq!(euler_phi(990), 240);
        assert_eq!(divisor_count(12), 6);
        assert_eq!(multiplicative_order(2, 7), Some(3));
        assert_eq!(multiplicative_order(10, 7), Some(6));
        assert_eq!(multiplicative_order(2, 4), None);
        assert_eq!(nth_root_u64(u64::MAX, 1), u64::MAX);
        assert_eq!(nth_root_u64(1 << 17, 21), 1);
        assert_eq!(nth_root_u64(2u64.pow(42), 21), 4);
    }

    #[test]
    fn deterministic_sum_matches_exact_rational() {
        // 0.1f64 is exactly 3602879701896397 / 2^55; a million copies sum to
        // an exactly representable rational we can compare against.
        let xs = vec![0.1f64; 1_000_000];
        let got = sum_deterministic(&xs);
        let exact = (1_000_000i128 * 3602879701896397i128) as f64 / 2f64.powi(55);
        assert!((got - exact).abs() / exact <= 1e-6);
        // and much better than the naive bound in practice
        assert!((got - exact).abs() / exact <= 1e-12);
    }

    #[test]
    fn ln_big_accuracy() {
        let n = BigUint::from(3u32).pow(500);
        let want = 500.0 * 3f64.ln();
        assert!((ln_big(&n) - want).abs() < 1e-9 * want);
        assert_eq!(ln_big(&BigUint::from(1u32)), 0.0);
    }
}
