//! Frozen empirical constants.
//!
//! Several of the inequalities exercised by this crate are qualitative: they
//! assert that *some* constant closes the bound without naming it. The
//! constants below were measured by the seeded sweeps reproduced in
//! `examples/calibrate.rs`, then committed with headroom. They are
//! measurements, not theorems; regenerating the sweep and tightening them is
//! always legitimate.

/// Ceiling for the normalized Weyl-product exponent reported by
/// `lemmas::check_weyl_product`. The sweep runs the suite's own generator
/// (uniform point sets, N up to 200, bases 2 through 10) under three root
/// seeds plus the all-zeros configuration, whose exponent is exactly
/// ln(b)/(b ln 2). Observed maximum 0.5283, attained by the all-zeros case
/// at base 3; every random instance came in lower. Frozen with headroom.
pub const WEYL_A_MAX: f64 = 0.70;

/// Erdos-Turan ratio ceiling. Explicit classical versions of the inequality
/// hold with constants below 4, and the sweep over the suite generator never
/// exceeded 1.1, so 4 is generous. Kept at the classical figure rather than
/// the measured one because the inequality is the point, not the constant.
pub const ERDOS_TURAN_RATIO_MAX: f64 = 4.0;

/// Local-limit error constant for digit compositions: the sweep measures
/// max_n |r(n;K,b)/b^K - gauss(n;K,b)| * b * K^(3/2) over b in {2,3,5,10}
/// and K from 4 to 128. Observed maximum 0.3986, from small K where the
/// lattice correction is largest; frozen with headroom.
pub const COMPOSITION_ERROR_MAX: f64 = 0.50;

/// Constant c in the Farey moment bound
/// (Q^2 + K b^(2N)) * b^(2(K-1)N+2) * (1 + c/sqrt(K) + c b^2/K)^(2N).
/// The sweep solves for the smallest admissible c on the grid b <= 3,
/// N in 2..=4, K <= 3, Q in {1,2,4,8,16,32}: no instance needs c > 0, the
/// Q^2 + K b^(2N) envelope already dominates at desk scale. Frozen at a
/// small positive value anyway so the committed inequality keeps the
/// correction-term shape of the statement without sitting on the boundary
/// of the measured set.
pub const FAREY_C: f64 = 0.15;
