//! Desk-scale experiments around palindromic integers with few prime
//! factors: exact palindrome enumeration and counting, the trigonometric
//! products controlling their exponential sums, even moments of those
//! products, residue-class equidistribution, an almost-prime census with
//! sieve diagnostics, and a harness of numeric inequality checks.

pub mod calibration;
pub mod cli;
pub mod equidist;
pub mod error;
pub mod expsums;
pub mod lemmas;
pub mod moments;
pub mod numeric;
pub mod palindromes;
pub mod sieve;

pub use error::{Error, Result};
