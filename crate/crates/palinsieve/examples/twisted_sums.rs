//! Kloosterman-style twisted sums `sum e_q(a b^n + k b^{-n})` against the
//! standard divisor-and-order bound, plus the empirical decay rate of
//! prefix mirror products along rationals with a fixed twist.
//!
//!     cargo run --release --example twisted_sums

use palinsieve::expsums::{fit_product_decay, twisted_sum, twisted_sum_bound};
use palinsieve::Result;

fn main() -> Result<()> {
    println!("twisted sums at base 10 over M = 500 terms:");
    for q in [7u64, 13, 97, 101, 997] {
        let m = 500;
        let bound = twisted_sum_bound(10, q, m)?;
        let mut worst: f64 = 0.0;
        for (aa, k) in [(1u64, 1u64), (2, 3), (5, 1), (1, 11)] {
            worst = worst.max(twisted_sum(10, q, m, aa, k)?);
        }
        println!("  q={q:>4}: worst |sum| = {worst:>8.2}, bound = {bound:>9.2}");
        assert!(worst <= bound);
    }

    println!("\nprefix-product decay exponents, slope of -ln(sup ratio) * ln q / M:");
    let ms = [4u32, 6, 8, 10, 12];
    for (base, q) in [(2u32, 5u64), (2, 17), (10, 7), (10, 101)] {
        let sigma = fit_product_decay(base, q, 0, &ms)?;
        println!("  b={base:>2}, q={q:>4}: sigma = {sigma:.4}");
        assert!(sigma > 0.0);
    }
    Ok(())
}
