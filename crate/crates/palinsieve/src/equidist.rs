//! Residue-class equidistribution of the coprime-filtered palindromes: exact
//! per-modulus discrepancy of class counts against the uniform share, the sum
//! of those errors over all admissible moduli up to x^(theta - eps), and an
//! empirical decay exponent fitted across a sweep of thresholds.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::numeric::sum_deterministic;
use crate::palindromes::{Filter, PalConfig, PalindromeStream};

/// Above this modulus the per-event class rescan is replaced by a count
/// multiset, which finds the extreme classes in logarithmic time.
const SCAN_LIMIT: u64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Strategy {
    /// Rescan all q classes after every insertion.
    Scan,
    /// Maintain a multiset of class counts keyed by count value.
    Multiset,
}

/// Running per-modulus state: class counts and the worst deviation numerator
/// seen so far. Deviations are tracked as the exact integer
/// max(q * c_max - total, total - q * c_min), a common-denominator form of
/// max_a |count_a - total / q|, so no rounding enters the sup.
struct ClassTracker {
    q: u64,
    counts: Vec<u64>,
    total: u64,
    histo: BTreeMap<u64, u64>,
    strategy: Strategy,
    worst_num: u64,
}

impl ClassTracker {
    fn new(q: u64, strategy: Strategy) -> ClassTracker {
        let mut histo = BTreeMap::new();
        if strategy == Strategy::Multiset {
            histo.insert(0u64, q);
        }
        ClassTracker {
            q,
            counts: vec![0; q as usize],
            total: 0,
            histo,
            strategy,
            worst_num: 0,
        }
    }

    fn auto(q: u64) -> ClassTracker {
        let strategy = if q <= SCAN_LIMIT {
            Strategy::Scan
        } else {
            Strategy::Multiset
        };
        ClassTracker::new(q, strategy)
    }

    fn insert(&mut self, n: u64) {
        let class = (n % self.q) as usize;
        let old = self.counts[class];
        self.counts[class] = old + 1;
        self.total += 1;
        let (c_max, c_min) = match self.strategy {
            Strategy::Scan => {
                let mut hi = 0;
                let mut lo = u64::MAX;
                for &c in &self.counts {
                    hi = hi.max(c);
                    lo = lo.min(c);
                }
                (hi, lo)
            }
            Strategy::Multiset => {
                let stale = self.histo.get_mut(&old).expect("old count present");
                *stale -= 1;
                if *stale == 0 {
                    self.histo.remove(&old);
                }
                *self.histo.entry(old + 1).or_insert(0) += 1;
                let hi = *self.histo.keys().next_back().expect("nonempty");
                let lo = *self.histo.keys().next().expect("nonempty");
                (hi, lo)
            }
        };
        let above = self.q * c_max - self.total;
        let below = self.total - self.q * c_min;
        self.worst_num = self.worst_num.max(above).max(below);
    }

    /// The exact sup as a float; numerators stay far below 2^53 at desk
    /// scale, so the division is the only rounding step.
    fn error(&self) -> f64 {
        self.worst_num as f64 / self.q as f64
    }
}

fn star_stream(base: u32, x: u64) -> Result<PalindromeStream> {
    let cfg = PalConfig::new(base, Filter::Star)?;
    Ok(PalindromeStream::new(cfg, x))
}

/// Number of coprime-filtered palindromes with an odd digit count up to x.
pub fn star_count(base: u32, x: u64) -> Result<u64> {
    Ok(star_stream(base, x)?.count() as u64)
}

/// Exact sup over y <= x of the worst class-count deviation
/// max_a |#{p <= y, p = a mod q} - #{p <= y} / q| for the coprime-filtered
/// palindromes. Counts change only when a palindrome is inserted and the
/// deviation is constant in between, so scanning the state after every
/// insertion realizes the continuous sup exactly.
pub fn equidist_error(base: u32, x: u64, q: u64) -> Result<f64> {
    if q == 0 {
        return Err(Error::domain("modulus q must be positive"));
    }
    let mut tracker = ClassTracker::auto(q);
    for p in star_stream(base, x)? {
        tracker.insert(p);
    }
    Ok(tracker.error())
}

/// Per-modulus error rows for every q <= floor(x^(theta - eps)) with
/// gcd(q, b^3 - b) = 1, all fed by a single palindrome pass.
#[derive(Clone, Debug)]
pub struct ErrorTable {
    pub base: u32,
    pub x: u64,
    pub rows: Vec<(u64, f64)>,
}

impl ErrorTable {
    /// Sum of all per-modulus errors, accumulated order-independently.
    pub fn aggregate(&self) -> f64 {
        let errs: Vec<f64> = self.rows.iter().map(|&(_, e)| e).collect();
        sum_deterministic(&errs)
    }
}

/// Largest admissible modulus for a threshold x and exponent theta - eps.
pub fn modulus_cap(x: u64, theta: f64, eps: f64) -> Result<u64> {
    if !theta.is_finite() || !eps.is_finite() {
        return Err(Error::NotFinite("modulus exponent"));
    }
    if x == 0 {
        return Err(Error::domain("threshold x must be positive"));
    }
    let exponent = theta - eps;
    Ok(((x as f64).ln() * exponent).exp().floor() as u64)
}

/// Build the error table for all admissible moduli at once.
pub fn error_table(base: u32, x: u64, theta: f64, eps: f64) -> Result<ErrorTable> {
    let cap = modulus_cap(x, theta, eps)?;
    let star_mod = PalConfig::new(base, Filter::Star)?.star_modulus();
    let moduli: Vec<u64> = (1..=cap)
        .filter(|&q| num_integer::gcd(q, star_mod) == 1)
        .collect();
    let mut trackers: Vec<ClassTracker> = moduli.iter().map(|&q| ClassTracker::auto(q)).collect();
    for p in star_stream(base, x)? {
        for t in trackers.iter_mut() {
            t.insert(p);
        }
    }
    let rows = moduli
        .into_iter()
        .zip(trackers.iter().map(|t| t.error()))
        .collect();
    Ok(ErrorTable { base, x, rows })
}

/// Aggregated equidistribution error
/// sum_{q <= x^(theta-eps), gcd(q, b^3-b) = 1} equidist_error(b, x, q).
pub fn aggregate_error(base: u32, x: u64, theta: f64, eps: f64) -> Result<f64> {
    Ok(error_table(base, x, theta, eps)?.aggregate())
}

/// Least-squares decay exponent: slope of -ln(aggregate / #palindromes)
/// against sqrt(ln x) across the sweep. Thresholds whose aggregate is exactly
/// zero carry no information about the decay rate (their logarithm is
/// infinite) and are dropped from the fit.
pub fn fit_decay(base: u32, xs: &[u64], theta: f64, eps: f64) -> Result<f64> {
    if xs.len() < 3 {
        return Err(Error::domain("decay fit needs at least three thresholds"));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("thresholds must be strictly increasing"));
    }
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for &x in xs {
        let a = aggregate_error(base, x, theta, eps)?;
        if a == 0.0 {
            continue;
        }
        let t = star_count(base, x)? as f64;
        pts.push(((x as f64).ln().sqrt(), -(a / t).ln()));
    }
    if pts.len() < 2 {
        return Err(Error::DegenerateFit(
            "fewer than two thresholds with nonzero aggregate".into(),
        ));
    }
    let n = pts.len() as f64;
    let mean_u = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for &(u, y) in &pts {
        cov += (u - mean_u) * (y - mean_y);
        var += (u - mean_u) * (u - mean_u);
    }
    if var == 0.0 {
        return Err(Error::DegenerateFit("no spread in sqrt(ln x)".into()));
    }
    Ok(cov / var)
}
