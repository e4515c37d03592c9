//! Residue-class equidistribution of coprime palindromes: the worst-case
//! deviation per admissible modulus, the aggregate across all moduli up to
//! `x^(theta-eps)`, and the fitted decay exponent over a geometric sweep.
//!
//!     cargo run --release --example equidistribution

use palinsieve::equidist::{aggregate_error, error_table, fit_decay, star_count};
use palinsieve::Result;

fn main() -> Result<()> {
    let (theta, eps) = (0.2, 0.01);

    let x = 1 << 22;
    let table = error_table(2, x, theta, eps)?;
    println!("base 2, x = 2^22, moduli up to x^{:.2}:", theta - eps);
    for &(q, err) in &table.rows {
        println!("  q={q:>3}: worst class deviation = {err:.3}");
    }
    println!(
        "  aggregate = {:.3} over {} coprime palindromes",
        table.aggregate(),
        star_count(2, x)?
    );

    println!("\nsweep x = 2^10 .. 2^24 and the decay fit:");
    let xs: Vec<u64> = (10..=24).map(|e| 1u64 << e).collect();
    for &x in &xs {
        let agg = aggregate_error(2, x, theta, eps)?;
        let stars = star_count(2, x)?;
        println!(
            "  x=2^{:>2}: aggregate/stars = {:.5}",
            x.trailing_zeros(),
            agg / stars as f64
        );
    }
    let sigma = fit_decay(2, &xs, theta, eps)?;
    println!("  fitted decay exponent sigma_hat = {sigma:.4}");
    assert!(sigma > 0.0);
    Ok(())
}
