//! Shared inputs for the benchmarks.

use archipelago::verify::lemniscate::boundary_pairs;
use archipelago::{EnsembleParams, VerifyConfig};
use num_complex::Complex64;

pub fn induced(n: usize) -> EnsembleParams {
    EnsembleParams::induced(n, 1.0, 2.0).expect("valid parameters")
}

pub fn lemniscate(n: usize) -> EnsembleParams {
    EnsembleParams::new(n, 1.0, 1.1, 2).expect("valid parameters")
}

/// Off-diagonal pair outside the droplet.
pub fn outer_pair() -> (Complex64, Complex64) {
    (Complex64::new(2.0, 1.0), Complex64::new(-1.0, 2.0))
}

/// Pair on the lemniscate boundary.
pub fn boundary_pair() -> (Complex64, Complex64) {
    boundary_pairs(&VerifyConfig::default())[0]
}
