//! Exact finite-N and asymptotic correlation kernels for the induced Ginibre
//! ensemble and the lemniscate ensemble, with verification suites.

pub mod error;
pub mod format;
pub mod geometry;
pub mod kernels;
pub mod numerics;
pub mod orthopoly;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{CurveSample, EnsembleParams};
pub use kernels::{KernelField, KernelMode};
pub use numerics::LogComplex;
pub use orthopoly::{PolySystem, Provenance};
pub use verify::{ConvergenceReport, SuiteId, SuiteReport, Verdict, VerifyConfig};
