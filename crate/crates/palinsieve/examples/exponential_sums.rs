//! Evaluates the palindrome exponential sum at a few rational angles and
//! compares it with the mirror-product decomposition bound, then shows the
//! single-digit factor `phi_b` and a full mirror product on their own.
//!
//!     cargo run --example exponential_sums

use palinsieve::expsums::{decomposition_bound, mirror_product_log, pal_exp_sum, phi};
use palinsieve::numeric::Angle;
use palinsieve::Result;

fn main() -> Result<()> {
    println!("phi_10 at small rationals (the |sin| ratio, b exactly at integers):");
    for den in [1u64, 2, 3, 4, 10, 11] {
        let a = Angle::new(1, den)?;
        println!("  phi_10(1/{den}) = {:.6}", phi(10, a));
    }

    println!("\nexponential sum over odd-length palindromes vs its bound:");
    for (base, den) in [(2u32, 5u64), (3, 7), (5, 11), (10, 7)] {
        let a = Angle::new(1, den)?;
        let x = 1_000_000;
        let s = pal_exp_sum(base, x, a)?;
        let bound = decomposition_bound(base, x, a)?;
        println!(
            "  b={base:>2}, angle 1/{den:>2}, x=10^6: |sum| = {:>10.3}, bound = {:>12.3}",
            s.norm(),
            bound
        );
        assert!(s.norm() <= bound);
    }

    println!("\nmirror products of width 2N along 1/7, base 10:");
    for n in [1u32, 2, 4, 8, 16] {
        let lp = mirror_product_log(10, n, Angle::new(1, 7)?)?;
        match lp.ln() {
            Some(v) => println!("  N={n:>2}: ln product = {v:>9.4}"),
            None => println!("  N={n:>2}: product is exactly zero"),
        }
    }
    Ok(())
}
