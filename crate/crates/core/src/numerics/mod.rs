//! Log-domain complex arithmetic and special functions.

pub mod erfc;
pub mod gamma;
pub mod incgamma;
pub mod logc;

pub use erfc::erfc_complex;
pub use gamma::{ln_factorial, log_gamma};
pub use incgamma::{reg_inc_gamma_q, reg_inc_gamma_q_upto};
pub use logc::{logc_add, logc_mul, logc_sub, logc_sum, normalize_phase, LogComplex, LogSum, Summed};
