//! Enumeration and counting of digit palindromes in a fixed base.
//!
//! Palindromes are generated from half-digit counters: the left half runs
//! through ordinary integers and the right half mirrors it, so non-palindromes
//! are never visited and the stream is ascending. Digit sequences are kept
//! little-endian internally; rendering is most-significant first.

use num_bigint::BigUint;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::numeric::euler_phi;

/// Which palindromes a stream yields.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Filter {
    /// Every palindrome.
    All,
    /// Palindromes with an odd number of digits.
    OddDigits,
    /// Odd digit count and additionally coprime to `b^3 - b`.
    Star,
}

/// Base plus filter; the base must be at least 2.
#[derive(Clone, Copy, Debug)]
pub struct PalConfig {
    pub base: u32,
    pub filter: Filter,
}

impl PalConfig {
    pub fn new(base: u32, filter: Filter) -> Result<PalConfig> {
        if base < 2 {
            return Err(Error::domain(format!("base must be >= 2, got {base}")));
        }
        Ok(PalConfig { base, filter })
    }

    /// The coprimality modulus `b^3 - b` used by the [`Filter::Star`] filter.
    pub fn star_modulus(&self) -> u64 {
        let b = self.base as u64;
        b * b * b - b
    }
}

fn digits_le(mut n: u64, b: u64) -> Vec<u64> {
    debug_assert!(n >= 1);
    let mut ds = Vec::new();
    while n > 0 {
        ds.push(n % b);
        n /= b;
    }
    ds
}

/// Assemble the palindrome whose left half (most significant digits) is
/// `half`. With `odd_len` the middle digit is shared, so the mirror skips the
/// lowest digit of the half.
fn mirror_value(half: u64, b: u64, odd_len: bool) -> u128 {
    let ds = digits_le(half, b);
    let mut v = half as u128;
    let skip = usize::from(odd_len);
    for &d in ds.iter().skip(skip) {
        v = v * b as u128 + d as u128;
    }
    v
}

/// Ascending iterator over palindromes, one digit-length block at a time.
pub struct PalindromeStream {
    base: u64,
    filter: Filter,
    star_mod: u64,
    max: u64,
    len: u32,
    half: u64,
    half_end: u64,
    single_block: bool,
    exhausted: bool,
}

impl PalindromeStream {
    /// All palindromes `<= max` passing the filter, ascending.
    pub fn new(cfg: PalConfig, max: u64) -> PalindromeStream {
        PalindromeStream {
            base: cfg.base as u64,
            filter: cfg.filter,
            star_mod: cfg.star_modulus(),
            max,
            len: 0,
            half: 0,
            half_end: 0,
            single_block: false,
            exhausted: false,
        }
    }

    /// Only the palindromes with exactly `digits` digits. Fails if that block
    /// does not fit in 64 bits.
    pub fn block(cfg: PalConfig, digits: u32) -> Result<PalindromeStream> {
        if digits == 0 {
            return Err(Error::domain("digit count must be >= 1"));
        }
        let b = cfg.base as u128;
        let top = b.checked_pow(digits).ok_or(Error::Overflow("palindrome block"))?;
        if top > u64::MAX as u128 + 1 {
            return Err(Error::Overflow("palindrome block"));
        }
        let mut s = PalindromeStream::new(cfg, u64::MAX);
        s.single_block = true;
        s.enter_block(digits);
        Ok(s)
    }

    fn enter_block(&mut self, len: u32) {
        self.len = len;
        let h = (len + 1) / 2;
        self.half = self.base.pow(h - 1);
        self.half_end = self.base.pow(h);
    }

    fn advance_block(&mut self) {
        if self.single_block && self.len > 0 {
            self.exhausted = true;
            return;
        }
        let next_len = match (self.len, self.filter) {
            (0, Filter::All) => 1,
            (0, _) => 1,
            (l, Filter::All) => l + 1,
            (l, _) => l + 2,
        };
        // The smallest palindrome with next_len digits is b^(next_len-1) + 1
        // (or 1 for a single digit); once that exceeds max we are done.
        let block_min = (self.base as u128).pow(next_len - 1);
        if block_min > self.max as u128 {
            self.exhausted = true;
            return;
        }
        self.enter_block(next_len);
    }
}

impl Iterator for PalindromeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if self.exhausted {
                return None;
            }
            if self.len == 0 || self.half == self.half_end {
                self.advance_block();
                continue;
            }
            let odd = self.len % 2 == 1;
            let v = mirror_value(self.half, self.base, odd);
            self.half += 1;
            if v > self.max as u128 {
                // within a block values ascend with the half counter
                self.half = self.half_end;
                continue;
            }
            let n = v as u64;
            if self.filter == Filter::Star && n.gcd(&self.star_mod) != 1 {
                continue;
            }
            return Some(n);
        }
    }
}

/// Whether `n` reads the same forwards and backwards in base `b`.
pub fn is_palindrome(n: u64, base: u32) -> Result<bool> {
    if n == 0 {
        return Err(Error::domain("palindromes are positive"));
    }
    if base < 2 {
        return Err(Error::domain(format!("base must be >= 2, got {base}")));
    }
    let ds = digits_le(n, base as u64);
    Ok(ds.iter().eq(ds.iter().rev()))
}

/// Big-integer variant of [`is_palindrome`].
pub fn is_palindrome_big(n: &BigUint, base: u32) -> Result<bool> {
    use num_traits::Zero;
    if n.is_zero() {
        return Err(Error::domain("palindromes are positive"));
    }
    if base < 2 {
        return Err(Error::domain(format!("base must be >= 2, got {base}")));
    }
    let ds = n.to_radix_le(base);
    Ok(ds.iter().eq(ds.iter().rev()))
}

/// Number of palindromes with exactly `2n + 1` digits: `(b - 1) * b^n`.
/// Closed form; the enumeration stream is the independent cross-check.
pub fn block_count(base: u32, n: u32) -> BigUint {
    BigUint::from(base - 1) * BigUint::from(base).pow(n)
}

/// Exact and predicted counts of coprime palindromes in one odd block.
#[derive(Clone, Copy, Debug)]
pub struct BlockCoprimeCount {
    /// `#{(2n+1)-digit palindromes coprime to b^3 - b}` by enumeration.
    pub exact: u64,
    /// `gamma_2(b) * phi(b^3 - b)/(b^3 - b) * (b - 1) b^n`, where
    /// `gamma_2(b) = b/(b-1)` for even bases and 1 for odd bases.
    pub main_term: f64,
    /// `exact - main_term`.
    pub residual: f64,
}

/// Count palindromes with `2n + 1` digits that are coprime to `b^3 - b`,
/// together with the density prediction for that block.
pub fn block_count_coprime(base: u32, n: u32) -> Result<BlockCoprimeCount> {
    let cfg = PalConfig::new(base, Filter::Star)?;
    let exact = PalindromeStream::block(cfg, 2 * n + 1)?.count() as u64;
    let m = cfg.star_modulus();
    let gamma2 = if base % 2 == 0 { base as f64 / (base as f64 - 1.0) } else { 1.0 };
    let block = (base as f64 - 1.0) * (base as f64).powi(n as i32);
    let main_term = gamma2 * (euler_phi(m) as f64 / m as f64) * block;
    Ok(BlockCoprimeCount { exact, main_term, residual: exact as f64 - main_term })
}

/// Residue-class histogram `counts[a] = #{palindrome n <= x : n = a mod q}`.
pub fn class_counts(cfg: PalConfig, x: u64, q: u64) -> Result<Vec<u64>> {
    if q == 0 {
        return Err(Error::domain("modulus must be >= 1"));
    }
    let mut counts = vec![0u64; q as usize];
    for n in PalindromeStream::new(cfg, x) {
        counts[(n % q) as usize] += 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collect(base: u32, filter: Filter, max: u64) -> Vec<u64> {
        PalindromeStream::new(PalConfig::new(base, filter).unwrap(), max).collect()
    }

    #[test]
    fn recognizer_examples() {
        assert!(is_palindrome(5, 2).unwrap()); // 101
        assert!(!is_palindrome(6, 2).unwrap()); // 110
        assert!(is_palindrome(121, 10).unwrap());
        assert!(!is_palindrome(10, 10).unwrap());
        assert!(is_palindrome(1, 7).unwrap());
        assert!(is_palindrome(0, 10).is_err());
        assert!(is_palindrome(5, 1).is_err());
        assert!(is_palindrome_big(&BigUint::from(5u8), 2).unwrap());
    }

    #[test]
    fn decimal_palindromes_up_to_100() {
        let got = collect(10, Filter::All, 100);
        let want: Vec<u64> =
            (1..=9).chain((1..=9).map(|d| 11 * d)).collect::<Vec<_>>();
        let mut want_sorted = want;
        want_sorted.sort_unstable();
        assert_eq!(got, want_sorted);
        assert_eq!(got.len(), 18);
    }

    #[test]
    fn binary_odd_and_star_blocks() {
        assert_eq!(collect(2, Filter::OddDigits, 8), vec![1, 5, 7]);
        assert_eq!(collect(2, Filter::Star, 8), vec![1, 5, 7]);
        // 27 = 11011 is divisible by 3, so the star filter drops it
        let star = collect(2, Filter::Star, 31);
        assert!(!star.contains(&27));
        assert!(star.contains(&31));
        let odd = collect(2, Filter::OddDigits, 31);
        assert!(odd.contains(&27));
    }

    #[test]
    fn stream_matches_brute_force() {
        for &b in &[2u32, 3, 5, 10] {
            for (filter, check) in [
                (Filter::All, None),
                (Filter::OddDigits, Some(false)),
                (Filter::Star, Some(true)),
            ] {
                let cfg = PalConfig::new(b, filter).unwrap();
                let m = cfg.star_modulus();
                let brute: Vec<u64> = (1..=5000u64)
                    .filter(|&n| is_palindrome(n, b).unwrap())
                    .filter(|&n| match check {
                        None => true,
                        Some(star) => {
                            let odd = digits_le(n, b as u64).len() % 2 == 1;
                            odd && (!star || n.gcd(&m) == 1)
                        }
                    })
                    .collect();
                assert_eq!(collect(b, filter, 5000), brute, "base {b} {filter:?}");
            }
        }
    }

    #[test]
    fn stream_is_strictly_ascending() {
        for &b in &[2u32, 3, 7] {
            let v = collect(b, Filter::All, 200_000);
            assert!(v.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn block_counts_match_enumeration() {
        for &b in &[2u32, 3, 5] {
            for n in 0..=3u32 {
                let cfg = PalConfig::new(b, Filter::OddDigits).unwrap();
                let got = PalindromeStream::block(cfg, 2 * n + 1).unwrap().count();
                assert_eq!(BigUint::from(got), block_count(b, n), "b={b} n={n}");
            }
        }
        assert_eq!(block_count(2, 1), BigUint::from(2u32));
        assert_eq!(block_count(10, 0), BigUint::from(9u32));
        assert_eq!(block_count(3, 2), BigUint::from(18u32));
    }

    #[test]
    fn coprime_block_counts() {
        // 3-digit binary palindromes coprime to 6: 101 and 111.
        let c = block_count_coprime(2, 1).unwrap();
        assert_eq!(c.exact, 2);
        assert!((c.main_term - 4.0 / 3.0).abs() < 1e-12);

        // the single palindrome 1
        assert_eq!(block_count_coprime(2, 0).unwrap().exact, 1);

        // decimal aba, checked against an exhaustive scan of the 90 values
        let brute = (1..=9u64)
            .flat_map(|a| (0..=9u64).map(move |b| 101 * a + 10 * b))
            .filter(|n| n.gcd(&990) == 1)
            .count() as u64;
        assert_eq!(block_count_coprime(10, 1).unwrap().exact, brute);
    }

    #[test]
    fn class_count_histograms() {
        // binary star palindromes <= 8 are {1, 5, 7} = {1, 2, 1} mod 3
        assert_eq!(
            class_counts(PalConfig::new(2, Filter::Star).unwrap(), 8, 3).unwrap(),
            vec![0, 2, 1]
        );
        // frozen from the brute-force scan of the 18 decimal palindromes
        // up to 100: the even ones are 2, 4, 6, 8, 22, 44, 66, 88.
        assert_eq!(
            class_counts(PalConfig::new(10, Filter::All).unwrap(), 100, 2).unwrap(),
            vec![8, 10]
        );
        assert!(class_counts(PalConfig::new(2, Filter::All).unwrap(), 10, 0).is_err());
    }

    #[test]
    fn coprime_density_stays_in_band() {
        // #star-palindromes(x) / sqrt(x) over four decades; the band is wide
        // but bounded away from zero and infinity.
        for &b in &[2u32, 10] {
            let cfg = PalConfig::new(b, Filter::Star).unwrap();
            let mut lo = f64::INFINITY;
            let mut hi = 0.0f64;
            for e in 3..=7u32 {
                let x = 10u64.pow(e);
                let count = PalindromeStream::new(cfg, x).count() as f64;
                let ratio = count / (x as f64).sqrt();
                lo = lo.min(ratio);
                hi = hi.max(ratio);
            }
            assert!(lo > 0.05, "base {b}: lower ratio {lo}");
            assert!(hi < 4.0, "base {b}: upper ratio {hi}");
            assert!(hi / lo < 8.0, "base {b}: band too wide ({lo}, {hi})");
        }
    }
}
