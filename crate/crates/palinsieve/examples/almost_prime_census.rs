//! Counts palindromes that are products of at most r primes, all of them
//! large, then evaluates the two hypotheses the sieve argument rests on:
//! the remainder sum over admissible levels and the Mertens grid constant.
//!
//!     cargo run --release --example almost_prime_census

use palinsieve::sieve::{census, delta_r, hypothesis_check, remainder_level};
use palinsieve::Result;

fn main() -> Result<()> {
    println!("admissible exponents Delta_r = r + ln(3(1 + 3^-r)/4)/ln 3:");
    for r in [2u32, 3, 6] {
        println!("  Delta_{r} = {:.5}", delta_r(r)?);
    }

    println!("\ndecimal census, at most 6 factors and none below x^(1/21):");
    for exp in [5u32, 6, 7] {
        let report = census(10, 10u64.pow(exp), 6, 21)?;
        println!(
            "  x=10^{exp}: {:>5} of {:>5} palindromes qualify, ratio = {:.3}, margin = {:+.4}",
            report.qualifying,
            report.total_pal,
            report.ratio,
            report.delta6_margin.unwrap()
        );
        assert!(report.qualifying > 0);
    }

    let x = 1u64 << 17;
    println!("\nhypothesis check at base 2, x = 2^17:");
    println!("  remainder level floor(x^(4/21)) = {}", remainder_level(x));
    let (remainder, mertens) = hypothesis_check(2, x)?;
    println!("  remainder sum over admissible levels = {remainder:.4}");
    println!("  Mertens grid constant K = {mertens:.4}");
    Ok(())
}
