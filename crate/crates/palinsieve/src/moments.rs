//! Even moments of the mirrored digit products and the combinatorics behind
//! them: digit-sum composition counts, the sparse coefficient vector of the
//! product expanded as a trigonometric polynomial, and two independent moment
//! routes (exact integer arithmetic and uniform-grid quadrature) that must
//! agree to near machine precision.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{check_memory, Error, Result};
use crate::expsums::{mirror_product_log, LogValue};
use crate::numeric::{ln_big, mod_inverse, Angle};

/// Hard cap on K * b^(2N); above this the dense coefficient range is no
/// longer a desk-scale object.
pub const SIZE_CAP: u128 = 100_000_000;

fn size_guard(base: u32, n_cap: u32, k: u32) -> Result<u128> {
    if base < 2 {
        return Err(Error::domain("base must be at least 2"));
    }
    if k < 1 {
        return Err(Error::domain("moment order K must be at least 1"));
    }
    let span = (base as u128)
        .checked_pow(2 * n_cap)
        .and_then(|p| p.checked_mul(k as u128));
    match span {
        Some(s) if s <= SIZE_CAP => Ok(s),
        other => Err(Error::SizeGuard {
            requested: other.unwrap_or(u128::MAX),
            limit: SIZE_CAP,
        }),
    }
}

/// Exponent weights b^m + b^(2N-m) attached to the mirrored digit positions
/// m = 1 .. N-1 of a palindrome with 2N+1 digits.
fn mirror_positions(base: u32, n_cap: u32) -> Vec<u128> {
    let b = base as u128;
    (1..n_cap)
        .map(|m| b.pow(m) + b.pow(2 * n_cap - m))
        .collect()
}

/// Number of ways to write n as an ordered sum of K digits in 0..b, for every
/// n at once. Built by convolving the all-ones digit polynomial with itself
/// K - 1 times using a sliding window sum, so the whole row costs O(K^2 b)
/// big-integer additions.
#[derive(Debug, Clone)]
pub struct CompositionTable {
    base: u32,
    k: u32,
    values: Vec<BigUint>,
}

impl CompositionTable {
    pub fn new(base: u32, k: u32) -> Result<CompositionTable> {
        if base < 2 {
            return Err(Error::domain("base must be at least 2"));
        }
        if k < 1 {
            return Err(Error::domain("composition order K must be at least 1"));
        }
        let step = (base - 1) as usize;
        let final_len = step * k as usize + 1;
        // entries are bounded by b^K, at most 4K bytes each for a u32 base
        let entry_bytes = k as u128 * 4 + 48;
        check_memory(final_len as u128 * entry_bytes)?;

        let mut values = vec![BigUint::one(); step + 1];
        for _ in 1..k {
            let old = values;
            let mut next = Vec::with_capacity(old.len() + step);
            let mut window = BigUint::zero();
            for i in 0..old.len() + step {
                if i < old.len() {
                    window += &old[i];
                }
                if i > step {
                    window -= &old[i - step - 1];
                }
                next.push(window.clone());
            }
            values = next;
        }
        Ok(CompositionTable { base, k, values })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Largest representable digit sum, (b-1)K.
    pub fn degree(&self) -> u64 {
        (self.base as u64 - 1) * self.k as u64
    }

    /// Count for digit sum n; zero outside 0 ..= (b-1)K.
    pub fn value(&self, n: i64) -> BigUint {
        if n < 0 || n as usize >= self.values.len() {
            BigUint::zero()
        } else {
            self.values[n as usize].clone()
        }
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }
}

/// Binomial coefficient by the multiplicative formula; every intermediate
/// division is exact.
pub(crate) fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut c = BigUint::one();
    for i in 1..=r {
        c = c * (n - r + i) / i;
    }
    c
}

/// Composition count r(n; K, b) through the table route.
pub fn r_exact(n: i64, k: u32, base: u32) -> Result<BigUint> {
    Ok(CompositionTable::new(base, k)?.value(n))
}

/// The same count through the alternating binomial sum
/// sum_j (-1)^j C(K, j) C(n - jb + K - 1, K - 1), kept as an independent
/// cross-check of the convolution route.
pub fn r_inclusion_exclusion(n: i64, k: u32, base: u32) -> Result<BigUint> {
    if base < 2 || k < 1 {
        return Err(Error::domain("need base >= 2 and K >= 1"));
    }
    if n < 0 || n as u128 > (base as u128 - 1) * k as u128 {
        return Ok(BigUint::zero());
    }
    let n = n as u64;
    let mut acc = BigInt::zero();
    for j in 0..=(n / base as u64).min(k as u64) {
        let inner = binomial(n - j * base as u64 + k as u64 - 1, k as u64 - 1);
        let term = BigInt::from(binomial(k as u64, j) * inner);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.to_biguint()
        .ok_or_else(|| Error::domain("alternating sum collapsed below zero"))
}

/// Central-limit profile for the normalized composition counts:
/// sqrt(6 / (pi (b^2-1) K)) * exp(-6 (n - (b-1)K/2)^2 / ((b^2-1) K)).
pub fn r_gauss(n: i64, k: u32, base: u32) -> f64 {
    let v = ((base as f64).powi(2) - 1.0) * k as f64;
    let x = n as f64 - (base as f64 - 1.0) * k as f64 / 2.0;
    (6.0 / (PI * v)).sqrt() * (-6.0 * x * x / v).exp()
}

/// Selected entries of the order-K row, evaluated through the three-term
/// recurrence the counts satisfy (differentiate ((1-z^b)/(1-z))^K and compare
/// coefficients). Linear in the largest wanted index, so it beats the full
/// convolution when only a handful of entries are needed at large K.
fn recurrence_values(base: u32, k: u32, wanted: &BTreeSet<u64>) -> BTreeMap<u64, BigUint> {
    let mut out = BTreeMap::new();
    let top = match wanted.iter().next_back() {
        Some(&t) => t,
        None => return out,
    };
    let b = base as i64;
    let kk = k as i64;
    let width = base as usize + 1;
    let slot = |n: u64| (n as usize) % width;
    let mut ring: Vec<BigInt> = vec![BigInt::zero(); width];
    ring[0] = BigInt::one();
    if wanted.contains(&0) {
        out.insert(0, BigUint::one());
    }
    for next in 1..=top {
        let n = (next - 1) as i64;
        let mut acc = &ring[slot(next - 1)] * (n + kk);
        if n + 1 - b >= 0 {
            acc += &ring[slot((n + 1 - b) as u64)] * (n + 1 - b - b * kk);
        }
        if n - b >= 0 {
            acc += &ring[slot((n - b) as u64)] * ((b - 1) * kk + b - n);
        }
        let (q, rem) = acc.div_rem(&BigInt::from(n + 1));
        assert!(rem.is_zero(), "recurrence division must be exact");
        if wanted.contains(&next) {
            out.insert(next, q.to_biguint().expect("counts are nonnegative"));
        }
        ring[slot(next)] = q;
    }
    out
}

/// Autocorrelations A(d) = sum_u r(u; K, b) r(u - d; K, b) for the requested
/// offsets, via the identity A(d) = r((b-1)K - |d|; 2K, b).
fn autocorr_values(base: u32, k: u32, needed: &BTreeSet<u64>) -> BTreeMap<u64, BigUint> {
    let center = (base as u64 - 1) * k as u64;
    if base == 2 {
        // A(d) = C(2K, K + d), stepped outward from the middle
        let k64 = k as u64;
        let mut out = BTreeMap::new();
        let top = needed.iter().next_back().copied().unwrap_or(0);
        let mut cur = binomial(2 * k64, k64);
        for d in 0..=top.min(center) {
            if needed.contains(&d) {
                out.insert(d, cur.clone());
            }
            if d < center {
                cur = cur * (k64 - d) / (k64 + d + 1);
            }
        }
        for &d in needed.range(center + 1..) {
            out.insert(d, BigUint::zero());
        }
        return out;
    }
    let indices: BTreeSet<u64> = needed
        .iter()
        .filter(|&&d| d <= center)
        .map(|&d| center - d)
        .collect();
    let row = recurrence_values(base, 2 * k, &indices);
    needed
        .iter()
        .map(|&d| {
            let v = if d <= center {
                row[&(center - d)].clone()
            } else {
                BigUint::zero()
            };
            (d, v)
        })
        .collect()
}

/// All integer vectors (d_1, .., d_{N-1}) with |d_m| <= radius and
/// sum d_m p_m = 0. Positions are assigned smallest weight first and branches
/// whose partial sum can no longer be cancelled are pruned; the heaviest
/// position is solved by division rather than searched.
fn enumerate_solutions(positions: &[u128], radius: i64) -> Vec<Vec<i64>> {
    fn descend(
        positions: &[u128],
        radius: i64,
        reach: &[i128],
        idx: usize,
        partial: i128,
        d: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        if idx == 0 {
            let p0 = positions[0] as i128;
            if partial.rem_euclid(p0) == 0 {
                let d0 = -partial / p0;
                if d0.unsigned_abs() <= radius as u128 {
                    d[0] = d0 as i64;
                    out.push(d.clone());
                }
            }
            return;
        }
        let p = positions[idx] as i128;
        for v in -radius..=radius {
            let next = partial + v as i128 * p;
            if next.abs() > reach[idx - 1] {
                continue;
            }
            d[idx] = v;
            descend(positions, radius, reach, idx - 1, next, d, out);
        }
    }

    let mut reach = Vec::with_capacity(positions.len());
    let mut acc: i128 = 0;
    for &p in positions {
        acc += radius as i128 * p as i128;
        reach.push(acc);
    }
    let mut out = Vec::new();
    let mut d = vec![0i64; positions.len()];
    descend(
        positions,
        radius,
        &reach,
        positions.len() - 1,
        0,
        &mut d,
        &mut out,
    );
    out
}

/// Sparse coefficient vector of the expanded mirrored product: a_l counts the
/// weighted digit assignments with sum_m v_m (b^m + b^(2N-m)) = l, each
/// assignment contributing the product of its composition counts.
#[derive(Debug, Clone)]
pub struct CoeffVector {
    base: u32,
    n_cap: u32,
    k: u32,
    coeffs: BTreeMap<u64, BigUint>,
}

impl CoeffVector {
    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn n_cap(&self) -> u32 {
        self.n_cap
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Coefficient at exponent l, zero when absent.
    pub fn get(&self, ell: u64) -> BigUint {
        self.coeffs.get(&ell).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u64, &BigUint)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Sum of all coefficients; equals b^(K(N-1)).
    pub fn total(&self) -> BigUint {
        self.coeffs.values().sum()
    }

    /// Sum of squared coefficients, the exact 2K-th moment.
    pub fn sum_squares(&self) -> BigUint {
        self.coeffs.values().map(|a| a * a).sum()
    }
}

/// Expand the mirrored product for (base, N, K) into its coefficient vector.
pub fn coeff_vector(base: u32, n_cap: u32, k: u32) -> Result<CoeffVector> {
    let span = size_guard(base, n_cap, k)?;
    let entry_bytes = k as u128 * 4 + 64;
    check_memory(span.saturating_add(1).saturating_mul(entry_bytes))?;

    let row = CompositionTable::new(base, k)?;
    let mut coeffs = BTreeMap::new();
    coeffs.insert(0u64, BigUint::one());
    for &p in &mirror_positions(base, n_cap) {
        let p = p as u64;
        let mut next: BTreeMap<u64, BigUint> = BTreeMap::new();
        for (&ell, a) in &coeffs {
            for (v, rv) in row.values().iter().enumerate() {
                let key = ell + v as u64 * p;
                let term = a * rv;
                next.entry(key)
                    .and_modify(|e| *e += &term)
                    .or_insert(term);
            }
        }
        coeffs = next;
    }
    Ok(CoeffVector {
        base,
        n_cap,
        k,
        coeffs,
    })
}

/// Exact 2K-th moment sum_l a_l^2 as an integer. Rather than materializing
/// the coefficient vector, the square is expanded: pairs of digit assignments
/// contribute through their difference vector d, which must satisfy
/// sum d_m p_m = 0, and each solution is weighted by the product of digit-sum
/// autocorrelations A(d_m).
pub fn moment_exact(base: u32, n_cap: u32, k: u32) -> Result<BigUint> {
    size_guard(base, n_cap, k)?;
    if n_cap <= 1 {
        return Ok(BigUint::one());
    }
    let positions = mirror_positions(base, n_cap);
    let radius = (base as i64 - 1) * k as i64;
    let sols = enumerate_solutions(&positions, radius);
    let needed: BTreeSet<u64> = sols
        .iter()
        .flat_map(|s| s.iter().map(|d| d.unsigned_abs()))
        .collect();
    let ac = autocorr_values(base, k, &needed);
    let mut total = BigUint::zero();
    for sol in &sols {
        let mut term = BigUint::one();
        for d in sol {
            term *= &ac[&d.unsigned_abs()];
        }
        total += term;
    }
    Ok(total)
}

/// Relative tail cutoff for quadrature terms: anything smaller than
/// exp(-(46 + ln grid)) times the peak is dropped, which keeps the total
/// omitted mass below exp(-46) of the result.
fn tail_cutoff(grid: u64) -> f64 {
    46.0 + (grid as f64).ln()
}

/// ln of the factor |sin(pi b r / g)| / |sin(pi r / g)| at the grid residue
/// r, with the two exact branches resolved in integer arithmetic.
fn ln_phi_at(base: u32, r: u64, g: u64) -> f64 {
    if r == 0 {
        return (base as f64).ln();
    }
    let br = ((base as u128 * r as u128) % g as u128) as u64;
    if br == 0 {
        return f64::NEG_INFINITY;
    }
    let xn = br.min(g - br) as f64 / g as f64;
    let xd = r.min(g - r) as f64 / g as f64;
    ((PI * xn).sin() / (PI * xd).sin()).ln()
}

/// ln of the uniform-grid average of the 2K-th power of the mirrored product.
/// The grid must satisfy grid >= 4 K b^(2N); the integrand is then a
/// trigonometric polynomial of degree below the grid size, so the average
/// equals the exact moment normalized by b^(2(K-1)N + 2) up to rounding.
///
/// Returned in log scale because the peak alone is b^(2K(N-1)), far outside
/// f64 range at the K this routine is meant for.
pub fn moment_quadrature_log(base: u32, n_cap: u32, k: u32, grid: u64) -> Result<f64> {
    if base < 2 {
        return Err(Error::domain("base must be at least 2"));
    }
    if k < 1 {
        return Err(Error::domain("moment order K must be at least 1"));
    }
    let required = (base as u128)
        .checked_pow(2 * n_cap)
        .and_then(|p| p.checked_mul(4 * k as u128));
    match required {
        Some(r) if (grid as u128) >= r => {}
        other => {
            return Err(Error::GridTooCoarse {
                grid,
                required: other
                    .map(|r| r.min(u64::MAX as u128) as u64)
                    .unwrap_or(u64::MAX),
            })
        }
    }
    if n_cap <= 1 {
        return Ok(0.0);
    }

    let g = grid;
    let gf = g as f64;
    let ln_b = (base as f64).ln();
    let two_k = 2.0 * k as f64;
    let factors = (n_cap - 1) as usize;
    let shift = two_k * factors as f64 * ln_b;
    let tail = tail_cutoff(g);
    let positions: Vec<u64> = mirror_positions(base, n_cap)
        .iter()
        .map(|&p| (p % g as u128) as u64)
        .collect();

    // Every term is at most the j = 0 peak, and the peak factor b has a
    // Gaussian envelope b exp(-pi^2 (b^2-1) ||a||^2 / 6) valid out to
    // ||a|| <= 1/b. When the envelope alone pushes terms below the tail
    // cutoff inside a window narrower than that validity range (for base 2
    // the range is the whole circle), only grid points whose first-position
    // residue lands in the window can matter, and those are enumerated
    // directly from the stride instead of scanning the full grid.
    let bsq = (base as f64).powi(2);
    let window = (tail * 3.0 / (k as f64 * PI * PI * (bsq - 1.0))).sqrt();
    let cap = if base == 2 { 0.5 } else { 1.0 / base as f64 };
    let windowed =
        window < cap && (base == 2 || two_k * std::f64::consts::LN_2 >= tail);

    // bail thresholds: after `done` factors, a partial log sum below
    // done * ln b - tail / 2K can no longer climb back above the cutoff
    let cuts: Vec<f64> = (1..=factors)
        .map(|done| done as f64 * ln_b - tail / two_k)
        .collect();

    let mut acc = 0.0f64;
    if !windowed {
        let mut res = vec![0u64; factors];
        let half = g / 2;
        for j in 0..=half {
            if j > 0 {
                for (r, &p) in res.iter_mut().zip(&positions) {
                    *r += p;
                    if *r >= g {
                        *r -= g;
                    }
                }
            }
            let mut t = 0.0;
            let mut dead = false;
            for (i, &r) in res.iter().enumerate() {
                t += ln_phi_at(base, r, g);
                if t < cuts[i] {
                    dead = true;
                    break;
                }
            }
            if dead {
                continue;
            }
            let s = two_k * t - shift;
            if s >= -tail {
                let w = if j == 0 || (g % 2 == 0 && j == half) {
                    1.0
                } else {
                    2.0
                };
                acc += w * s.exp();
            }
        }
    } else {
        let p1 = positions[0];
        let g1 = num_integer::gcd(p1, g);
        let q1 = g / g1;
        let inv = mod_inverse((p1 / g1) % q1, q1).expect("reduced stride is invertible");
        let r_window = (window * gf).floor() as u64;
        let mut visit = |r: u64| {
            let j0 = ((r / g1) as u128 * inv as u128 % q1 as u128) as u64;
            for t_idx in 0..g1 {
                let j = j0 + t_idx * q1;
                let mut t = ln_phi_at(base, r, g);
                let mut dead = t < cuts[0];
                if !dead {
                    for (i, &p) in positions.iter().enumerate().skip(1) {
                        let rm = (j as u128 * p as u128 % g as u128) as u64;
                        t += ln_phi_at(base, rm, g);
                        if t < cuts[i] {
                            dead = true;
                            break;
                        }
                    }
                }
                if dead {
                    continue;
                }
                let s = two_k * t - shift;
                if s >= -tail {
                    acc += s.exp();
                }
            }
        };
        let cmax = r_window / g1;
        for c in 0..=cmax {
            visit(c * g1);
        }
        for c in 1..=cmax {
            let r = g - c * g1;
            if r.min(g - r) <= r_window && r > r_window {
                visit(r);
            }
        }
    }
    Ok(shift + (acc / gf).ln())
}

/// Linear-scale companion of [`moment_quadrature_log`]; errors out instead of
/// returning infinity when the moment exceeds the double range.
pub fn moment_quadrature(base: u32, n_cap: u32, k: u32, grid: u64) -> Result<f64> {
    let v = moment_quadrature_log(base, n_cap, k, grid)?.exp();
    if !v.is_finite() {
        return Err(Error::Overflow(
            "moment exceeds f64 range, use moment_quadrature_log",
        ));
    }
    Ok(v)
}

/// Normalized moment growth rate
/// (moment / b^(2(K-1)N + 2))^(1 / 2N) - 1, negative when the moment sits
/// below the trivial envelope.
pub fn moment_ratio(base: u32, n_cap: u32, k: u32) -> Result<f64> {
    if n_cap < 2 {
        return Err(Error::domain("moment ratio needs N >= 2"));
    }
    let m = moment_exact(base, n_cap, k)?;
    let ln_m = ln_big(&m);
    let ln_envelope = (2 * (k as u64 - 1) * n_cap as u64 + 2) as f64 * (base as f64).ln();
    Ok(((ln_m - ln_envelope) / (2 * n_cap) as f64).exp() - 1.0)
}

/// Sum of the 2K-th product power over all reduced fractions h/q with
/// q <= q_max, each shifted by beta. Accumulated with log-sum-exp so large
/// bases and orders cannot overflow intermediate terms.
pub fn farey_moment_sum(base: u32, n_cap: u32, k: u32, q_max: u64, beta: Angle) -> Result<f64> {
    if base < 2 || k < 1 {
        return Err(Error::domain("need base >= 2 and K >= 1"));
    }
    if q_max < 1 {
        return Err(Error::domain("Farey order must be at least 1"));
    }
    let two_k = 2.0 * k as f64;
    let mut terms = Vec::new();
    for q in 1..=q_max {
        for h in 0..q.max(1) {
            if num_integer::gcd(h, q) != 1 {
                continue;
            }
            let arg = Angle::new(h as i64, q)?.try_add(&beta)?;
            if let LogValue::Ln(v) = mirror_product_log(base, n_cap, arg)? {
                terms.push(two_k * v);
            }
        }
    }
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Ok(0.0);
    }
    let sum: f64 = terms.iter().map(|t| (t - max).exp()).sum();
    let v = (max + sum.ln()).exp();
    if !v.is_finite() {
        return Err(Error::Overflow("Farey moment sum exceeds f64 range"));
    }
    Ok(v)
}

/// Closed-form envelope for the Farey moment sum:
/// (Q^2 + K b^(2N)) * b^(2(K-1)N + 2) * (1 + c/sqrt(K) + c b^2/K)^(2N)
/// with an empirically calibrated constant c.
pub fn farey_moment_bound(base: u32, n_cap: u32, k: u32, q_max: u64, c: f64) -> f64 {
    let b = base as f64;
    let kf = k as f64;
    let lead = (q_max as f64).powi(2) + kf * b.powi(2 * n_cap as i32);
    let envelope = b.powi((2 * (k - 1) * n_cap + 2) as i32);
    let inflation = (1.0 + c / kf.sqrt() + c * b * b / kf).powi(2 * n_cap as i32);
    lead * envelope * inflation
}
