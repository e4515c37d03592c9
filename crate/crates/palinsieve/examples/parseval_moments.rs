//! The 2K-th moment of the mirror product three ways: the exact convolution
//! count, circle quadrature (equal by Parseval), and the Farey-fraction sum
//! against its calibrated envelope.
//!
//!     cargo run --release --example parseval_moments

use palinsieve::calibration::FAREY_C;
use palinsieve::moments::{
    farey_moment_bound, farey_moment_sum, moment_exact, moment_quadrature, moment_ratio, r_exact,
    r_gauss,
};
use palinsieve::numeric::Angle;
use palinsieve::Result;

fn main() -> Result<()> {
    println!("exact moment vs circle quadrature:");
    for (base, n, k) in [(2u32, 3u32, 2u32), (3, 2, 3), (10, 2, 2)] {
        let exact = moment_exact(base, n, k)?;
        let grid = 4 * k as u64 * (base as u64).pow(2 * n) + 1;
        let quad = moment_quadrature(base, n, k, grid)?;
        let exact_f = exact.to_string().parse::<f64>().unwrap();
        let rel = (quad - exact_f).abs() / exact_f;
        println!("  b={base:>2} N={n} K={k}: exact {exact}, quadrature {quad:.6} (rel err {rel:.2e})");
        assert!(rel < 1e-6);
    }

    println!("\nnormalized growth rho against the envelope b^(2(K-1)N+2):");
    for n in [2u32, 3, 4, 5, 6] {
        println!("  b=3 N={n} K=2: rho = {:+.5}", moment_ratio(3, n, 2)?);
    }

    println!("\ncentral composition counts vs the local Gaussian profile:");
    for k in [8u32, 32, 128] {
        let center = (9 * k / 2) as i64;
        let exact = r_exact(center, k, 10)?.to_string().parse::<f64>().unwrap();
        let scaled = exact / 10f64.powi(k as i32);
        let gauss = r_gauss(center, k, 10);
        println!("  K={k:>3}: r({center})/b^K = {scaled:.6}, gauss = {gauss:.6}");
    }

    println!("\nFarey moment sums against the calibrated envelope (c = {FAREY_C}):");
    for (n, k, q) in [(2u32, 2u32, 8u64), (3, 2, 16), (4, 3, 32)] {
        let sum = farey_moment_sum(2, n, k, q, Angle::ZERO)?;
        let bound = farey_moment_bound(2, n, k, q, FAREY_C);
        println!("  b=2 N={n} K={k} Q={q:>2}: sum = {sum:>12.1}, bound = {bound:>14.1}");
        assert!(sum <= bound);
    }
    Ok(())
}
