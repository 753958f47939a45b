//! Correlation kernels: exact finite-N sums, kernel transforms, the
//! Christoffel–Darboux identity, large-N asymptotics, edge limits and observables.

pub mod asymptotic;
pub mod cd;
pub mod edge;
pub mod exact;
pub mod field;
pub mod observables;

pub use asymptotic::{
    asym_kernel_ginibre, asym_kernel_thm11, asym_kernel_thm13, asym_kernel_thm13_multifold, boundary_modulus,
    TypoReading,
};
pub use cd::{cd_rhs, fd_dbar, fd_dbar_richardson, fd_dbar_tilde, fd_step};
pub use edge::{edge_kernel_limit, rescaled_kernel, EdgeBase};
pub use exact::{
    fractional_charges, kernel_fullq_exact, kernel_hat_direct, kernel_hat_exact, kernel_lemniscate_exact,
    kernel_tilde_exact, LemniscateKernel, LemniscateSource,
};
pub use field::{grid, BerezinField, KernelField, KernelMode, KernelSample};
pub use observables::{berezin, correlation_fn, R1Mode};
