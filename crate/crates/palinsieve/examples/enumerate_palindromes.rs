//! Walks the palindrome enumerators: raw listings, the exact block count
//! `(b - 1) b^n` for palindromes with `2n + 1` digits, and the coprime
//! filter with its density prediction.
//!
//!     cargo run --example enumerate_palindromes

use palinsieve::palindromes::{
    block_count, block_count_coprime, class_counts, Filter, PalConfig, PalindromeStream,
};
use palinsieve::Result;

fn main() -> Result<()> {
    let cfg = PalConfig::new(10, Filter::All)?;
    let small: Vec<u64> = PalindromeStream::new(cfg, 200).collect();
    println!("decimal palindromes up to 200: {small:?}");

    let star = PalConfig::new(10, Filter::Star)?;
    let coprime: Vec<u64> = PalindromeStream::new(star, 200).collect();
    println!("  of those, coprime to 990:    {coprime:?}");

    println!("\nodd-digit block sizes, closed form vs enumeration:");
    for base in [2u32, 3, 10] {
        let cfg = PalConfig::new(base, Filter::OddDigits)?;
        for n in 0..4 {
            let streamed = PalindromeStream::block(cfg, 2 * n + 1)?.count();
            let formula = block_count(base, n);
            assert_eq!(formula, streamed.into());
            println!("  base {base:>2}, {} digits: {formula}", 2 * n + 1);
        }
    }

    println!("\ncoprime block counts against the density prediction:");
    for n in 1..5 {
        let c = block_count_coprime(10, n)?;
        println!(
            "  base 10, {} digits: exact {:>6}, predicted {:>9.1}, residual {:+.1}",
            2 * n + 1,
            c.exact,
            c.main_term,
            c.residual
        );
    }

    let counts = class_counts(PalConfig::new(10, Filter::Star)?, 1_000_000, 7)?;
    println!("\ncoprime palindromes up to 10^6 by residue mod 7: {counts:?}");
    Ok(())
}
