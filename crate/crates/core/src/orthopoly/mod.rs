//! Monic planar orthogonal polynomials and their norms: closed form for a unit
//! charge, exact Gram matrices for integer charges, quadrature for real charges,
//! and the large-N expansions.

pub mod asymptotics;
pub mod closed_form;
pub mod gram;
pub mod polysystem;
pub mod quadrature;

pub use asymptotics::{asym_h, asym_h_combos, asym_psi, asym_psi_diff, asym_q, h_correction, ratio_p_at_a};
pub use closed_form::{exact_h_c1, exact_p_c1, PolyValues};
pub use gram::{
    default_precision, gram_inner_products_induced, gram_inner_products_lemniscate, gram_lemniscate_polysystem,
    gram_polysystem, monic_from_gram, GramMatrix,
};
pub use polysystem::{HypothesisRow, PolySystem, Provenance};
pub use quadrature::{gauss_jacobi, gauss_legendre, integrate_disk, quad_gram, quad_polysystem, QuadSpec};

use crate::error::Result;
use crate::geometry::EnsembleParams;

/// The `c = 1` system from its closed form, degrees `0..=max_degree`.
pub fn closed_form_polysystem(p: &EnsembleParams, max_degree: usize) -> Result<PolySystem> {
    let cf = closed_form::ClosedFormC1::new(p, max_degree)?;
    Ok(PolySystem::from_closed_form(*p, cf))
}
