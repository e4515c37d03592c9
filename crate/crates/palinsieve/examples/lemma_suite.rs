//! Runs the seeded inequality suite and summarizes each family: instance
//! count, the tightest left/right gap seen, and for the two ratio families
//! the observed maximum against the frozen threshold.
//!
//!     cargo run --release --example lemma_suite

use palinsieve::lemmas::{run_suite, EXPLICIT_FAMILIES, RATIO_FAMILIES};
use palinsieve::Result;

fn main() -> Result<()> {
    let reports = run_suite(7, 50, None)?;

    println!("explicit-constant families (every instance must pass):");
    for family in EXPLICIT_FAMILIES {
        let mut n = 0u32;
        let mut tightest = f64::INFINITY;
        let mut all_pass = true;
        for r in reports.iter().filter(|r| r.lemma == family) {
            n += 1;
            all_pass &= r.passed;
            if r.rhs > 0.0 {
                tightest = tightest.min(1.0 - r.lhs / r.rhs);
            }
        }
        println!(
            "  {family:<18} {n:>3} instances, all pass: {all_pass}, smallest slack: {:.4}",
            tightest
        );
        assert!(all_pass);
    }

    println!("\nratio families (reported against frozen empirical ceilings):");
    for family in RATIO_FAMILIES {
        let mut worst = f64::NEG_INFINITY;
        let mut threshold = 0.0;
        for r in reports.iter().filter(|r| r.lemma == family) {
            worst = worst.max(r.ratio.unwrap());
            threshold = r.threshold.unwrap();
        }
        println!("  {family:<18} observed max ratio {worst:.4}, frozen ceiling {threshold}");
    }
    Ok(())
}
