//! Exponential sums over odd-digit palindromes and the products of geometric
//! digit sums that bound them.
//!
//! The central function is `phi(b, a)`, the magnitude of the length-`b`
//! geometric sum at a rational angle. Mirrored-position products of `phi`
//! (the quantity this module calls a mirror product) control palindromic
//! exponential sums through a digit-by-digit decomposition; everything here
//! reduces the angle arguments exactly before any trigonometry happens.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numeric::{
    ensure_finite, mirror_multiplier, mix_seed, mod_inverse, mod_pow, multiplicative_order,
    Angle,
};
use crate::palindromes::{Filter, PalConfig, PalindromeStream};

/// Magnitude of the geometric digit sum `|sum_{0<=m<b} e(a m)|` at a rational
/// angle: exactly `b` at integer angles, `|sin(pi b a) / sin(pi a)|`
/// otherwise. Both integer tests are decided on the exact fraction.
pub fn phi(base: u32, a: Angle) -> f64 {
    debug_assert!(base >= 2);
    if a.is_zero() {
        return base as f64;
    }
    let scaled = a.scale(base as u64);
    if scaled.is_zero() {
        return 0.0;
    }
    // |sin(pi t)| depends only on the distance from t to the nearest integer
    (PI * scaled.dist()).sin() / (PI * a.dist()).sin()
}

/// `phi` at an arbitrary floating point, for point sets that do not come from
/// fractions. Clamped to the mathematical range `[0, b]` so roundoff near the
/// poles of `csc` cannot push the value outside it.
pub fn phi_real(base: u32, t: f64) -> f64 {
    let b = base as f64;
    let frac = t - t.floor();
    if frac == 0.0 {
        return b;
    }
    let dist = frac.min(1.0 - frac);
    let num = (PI * (b * frac - (b * frac).round()).abs()).sin();
    let den = (PI * dist).sin();
    (num / den).clamp(0.0, b)
}

/// A product of `phi` factors carried in log space. Mirror products reach
/// `b^(N-1)` and also vanish exactly, so both extremes need a representation
/// that plain floats in linear space do not give once exponents pile up.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LogValue {
    /// Some factor was exactly zero.
    Zero,
    /// Natural logarithm of a positive value.
    Ln(f64),
}

impl LogValue {
    pub const ONE: LogValue = LogValue::Ln(0.0);

    pub fn is_zero(&self) -> bool {
        matches!(self, LogValue::Zero)
    }

    /// The logarithm, if the value is positive.
    pub fn ln(&self) -> Option<f64> {
        match self {
            LogValue::Zero => None,
            LogValue::Ln(t) => Some(*t),
        }
    }

    /// Back to linear space. May overflow to infinity for huge logs; callers
    /// that cannot tolerate that stay in log space.
    pub fn value(&self) -> f64 {
        match self {
            LogValue::Zero => 0.0,
            LogValue::Ln(t) => t.exp(),
        }
    }

    pub fn mul(self, other: LogValue) -> LogValue {
        match (self, other) {
            (LogValue::Ln(a), LogValue::Ln(b)) => LogValue::Ln(a + b),
            _ => LogValue::Zero,
        }
    }

    /// Raise to a nonnegative integer power (`x^0 = 1`, including for zero).
    pub fn powi(self, k: u32) -> LogValue {
        if k == 0 {
            return LogValue::ONE;
        }
        match self {
            LogValue::Zero => LogValue::Zero,
            LogValue::Ln(t) => LogValue::Ln(t * k as f64),
        }
    }
}

impl PartialOrd for LogValue {
    fn partial_cmp(&self, other: &LogValue) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering;
        match (self, other) {
            (LogValue::Zero, LogValue::Zero) => Some(Ordering::Equal),
            (LogValue::Zero, LogValue::Ln(_)) => Some(Ordering::Less),
            (LogValue::Ln(_), LogValue::Zero) => Some(Ordering::Greater),
            (LogValue::Ln(a), LogValue::Ln(b)) => a.partial_cmp(b),
        }
    }
}

/// A product `prod_{lo <= n <= hi} phi_b((a + shift) * (b^n + b^(two_n - n)))`
/// over a contiguous range of mirrored digit positions. `lo > hi` encodes the
/// empty product (value 1).
#[derive(Clone, Copy, Debug)]
pub struct ProductSpec {
    pub base: u32,
    pub two_n: u32,
    pub lo: u32,
    pub hi: u32,
    pub shift: Angle,
}

impl ProductSpec {
    pub fn new(base: u32, two_n: u32, lo: u32, hi: u32, shift: Angle) -> Result<ProductSpec> {
        if base < 2 {
            return Err(Error::domain(format!("base must be >= 2, got {base}")));
        }
        if lo <= hi && hi > two_n {
            return Err(Error::domain(format!(
                "exponent range {lo}..={hi} exceeds mirror width {two_n}"
            )));
        }
        Ok(ProductSpec { base, two_n, lo, hi, shift })
    }

    /// The full mirror product over `1 <= n < N` with mirror width `2N`;
    /// empty (value 1) for `N <= 1`.
    pub fn full(base: u32, n_cap: u32) -> ProductSpec {
        ProductSpec {
            base,
            two_n: 2 * n_cap,
            lo: 1,
            hi: n_cap.saturating_sub(1),
            shift: Angle::ZERO,
        }
    }

    /// The prefix product over `1 <= n <= M` inside mirror width `2N`
    /// (requires `M <= 2N`).
    pub fn prefix(base: u32, m: u32, n_ambient: u32) -> Result<ProductSpec> {
        if m > 2 * n_ambient {
            return Err(Error::domain(format!(
                "prefix length {m} exceeds 2N = {}",
                2 * n_ambient
            )));
        }
        ProductSpec::new(base, 2 * n_ambient, 1, m, Angle::ZERO)
    }

    pub fn with_shift(mut self, shift: Angle) -> ProductSpec {
        self.shift = shift;
        self
    }

    fn is_empty(&self) -> bool {
        self.lo > self.hi
    }
}

/// Evaluate the product described by `spec` at angle `a`, in log space.
/// Each multiplier `b^n + b^(two_n - n)` is reduced modulo the angle's
/// denominator by modular exponentiation, so the mirror width can be huge
/// without ever materializing the power.
pub fn log_product(spec: &ProductSpec, a: Angle) -> Result<LogValue> {
    let arg = a.try_add(&spec.shift)?;
    if spec.is_empty() {
        return Ok(LogValue::ONE);
    }
    let mut total = 0.0;
    for n in spec.lo..=spec.hi {
        let m = mirror_multiplier(spec.base as u64, n, spec.two_n, arg.den());
        let factor = phi(spec.base, arg.scale(m));
        if factor == 0.0 {
            return Ok(LogValue::Zero);
        }
        total += factor.ln();
    }
    ensure_finite(total, "log of phi product")?;
    Ok(LogValue::Ln(total))
}

/// Convenience wrapper: the full mirror product of width `2N` at angle `a`.
pub fn mirror_product_log(base: u32, n_cap: u32, a: Angle) -> Result<LogValue> {
    log_product(&ProductSpec::full(base, n_cap), a)
}

/// `sum_{n odd-digit palindrome <= x} e(a n)`, evaluated exactly: each term
/// uses the residue `n * num mod den`, never a floating multiple of `a`.
pub fn pal_exp_sum(base: u32, x: u64, a: Angle) -> Result<Complex64> {
    if x < 1 {
        return Err(Error::domain("upper bound must be >= 1"));
    }
    let cfg = PalConfig::new(base, Filter::OddDigits)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in PalindromeStream::new(cfg, x) {
        acc += a.scale(n).phasor();
    }
    Ok(acc)
}

/// The decomposition upper bound for `|pal_exp_sum|`:
/// `b^2 * sum_{N : b^(2N) <= x} sum_{M <= N} PhiM(a * b^(N-M))`,
/// where `PhiM` is the full mirror product of width `2M`.
pub fn decomposition_bound(base: u32, x: u64, a: Angle) -> Result<f64> {
    if x < 1 {
        return Err(Error::domain("upper bound must be >= 1"));
    }
    let b = base as u64;
    let mut n_cap = 0u32;
    while (b as u128).checked_pow(2 * (n_cap + 1)).is_some_and(|p| p <= x as u128) {
        n_cap += 1;
    }
    let mut total = 0.0;
    for nn in 0..=n_cap {
        for m in 0..=nn {
            let shifted = a.scale(mod_pow(b, (nn - m) as u64, a.den()));
            total += mirror_product_log(base, m, shifted)?.value();
        }
    }
    ensure_finite((base as f64).powi(2) * total, "decomposition bound")
}

/// `|sum_{1<=n<=M} e_q(aa * b^n + k * binv^n)|` where `binv` is the inverse
/// of `b` modulo `q`. Fails when `b` is not invertible modulo `q`.
pub fn twisted_sum(base: u32, q: u64, m_terms: u64, aa: u64, k: u64) -> Result<f64> {
    if q < 2 {
        return Err(Error::domain(format!("modulus must be >= 2, got {q}")));
    }
    let b = base as u64 % q;
    let binv = mod_inverse(b, q).ok_or(Error::NoInverse { value: base as u64, modulus: q })?;
    let (aa, k) = (aa % q, k % q);
    let mut acc = Complex64::new(0.0, 0.0);
    let (mut pow, mut ipow) = (1u64, 1u64);
    for _ in 0..m_terms {
        pow = (pow as u128 * b as u128 % q as u128) as u64;
        ipow = (ipow as u128 * binv as u128 % q as u128) as u64;
        let residue =
            ((aa as u128 * pow as u128 + k as u128 * ipow as u128) % q as u128) as i64;
        acc += Angle::new(residue, q)?.phasor();
    }
    Ok(acc.norm())
}

/// Right-hand side of the standard twisted-sum estimate,
/// `M tau(q) sqrt(q) / ord_q(b) + ord_q(b)`.
pub fn twisted_sum_bound(base: u32, q: u64, m_terms: u64) -> Result<f64> {
    if q < 2 {
        return Err(Error::domain(format!("modulus must be >= 2, got {q}")));
    }
    let ord = multiplicative_order(base as u64, q)
        .ok_or(Error::NoInverse { value: base as u64, modulus: q })?;
    let tau = crate::numeric::divisor_count(q);
    Ok(m_terms as f64 * tau as f64 * (q as f64).sqrt() / ord as f64 + ord as f64)
}

/// How many residues `h` the decay fit enumerates exhaustively before it
/// switches to seeded sampling.
const FIT_ENUM_LIMIT: u64 = 10_000;

/// Empirical decay rate of the sup-norm of prefix products along `h/q` plus a
/// fixed shift `k/(b^3 - b)`.
///
/// For each `M` the routine computes `ratio(M) = max_h P_M(h/q + shift)/b^M`
/// over residues `h` coprime to `q` (every residue when `phi(q)` is small,
/// a seeded sample of 10^4 otherwise), with the prefix product taken inside
/// mirror width `2M`. The model `ratio = exp(-sigma * M / ln q)` has no
/// intercept, so the returned estimate is the through-origin least-squares
/// slope of `-ln(ratio) * ln(q)` against `M`.
pub fn fit_product_decay(base: u32, q: u64, k: i64, ms: &[u32]) -> Result<f64> {
    if q < 2 {
        return Err(Error::domain(format!("modulus must be >= 2, got {q}")));
    }
    let cfg = PalConfig::new(base, Filter::All)?;
    let star_mod = cfg.star_modulus();
    if num_integer::gcd(q, star_mod) != 1 {
        return Err(Error::domain(format!(
            "modulus {q} shares a factor with b^3 - b = {star_mod}"
        )));
    }
    if ms.is_empty() {
        return Err(Error::DegenerateFit("no sample lengths given".into()));
    }
    let shift = Angle::new(k, star_mod)?;
    let ln_q = (q as f64).ln();
    let ln_b = (base as f64).ln();

    let mut num = 0.0;
    let mut den = 0.0;
    for &m in ms {
        let spec = ProductSpec::prefix(base, m, m)?.with_shift(shift);
        let mut best: Option<f64> = None;
        let mut consider = |h: u64| -> Result<()> {
            if num_integer::gcd(h, q) != 1 {
                return Ok(());
            }
            if let LogValue::Ln(t) = log_product(&spec, Angle::new(h as i64, q)?)? {
                best = Some(best.map_or(t, |b: f64| b.max(t)));
            }
            Ok(())
        };
        if q <= FIT_ENUM_LIMIT {
            for h in 1..q {
                consider(h)?;
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(
                0x7061_6c69_6e73_0001,
                q ^ (base as u64) << 32 ^ m as u64,
            ));
            for _ in 0..FIT_ENUM_LIMIT {
                consider(rng.gen_range(1..q))?;
            }
        }
        let best = best.ok_or_else(|| {
            Error::DegenerateFit(format!("every sampled product vanished at M = {m}"))
        })?;
        // -ln(ratio) * ln q against M, slope through the origin
        let z = -(best - m as f64 * ln_b) * ln_q;
        num += m as f64 * z;
        den += (m as f64) * (m as f64);
    }
    if den == 0.0 {
        return Err(Error::DegenerateFit("sample lengths are all zero".into()));
    }
    ensure_finite(num / den, "decay fit slope")
}
