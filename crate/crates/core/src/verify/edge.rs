//! Edge suite: unfolded exact kernels against the Ginibre edge limit.

use super::config::VerifyConfig;
use super::exact_system;
use super::report::ConvergenceReport;
use crate::error::Result;
use crate::kernels::{edge_kernel_limit, rescaled_kernel, EdgeBase, LemniscateKernel, LemniscateSource};
use crate::orthopoly::QuadSpec;
use num_complex::Complex64;
use rayon::prelude::*;

const ID: &str = "edge";
pub const INDUCED_CEILING: f64 = 0.05;
pub const LEMNISCATE_CEILING: f64 = 0.15;

/// Every `(z, w)` pair from the real offsets.
pub fn grid_pairs(offsets: &[f64]) -> Vec<(Complex64, Complex64)> {
    offsets
        .iter()
        .flat_map(|&x| offsets.iter().map(move |&y| (Complex64::new(x, 0.0), Complex64::new(y, 0.0))))
        .collect()
}

fn sup_error(base: &EdgeBase, pairs: &[(Complex64, Complex64)]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &(z, w) in pairs {
        let v = rescaled_kernel(base, z, w)?;
        worst = worst.max((v.norm() - edge_kernel_limit(z, w).norm()).abs());
    }
    Ok(worst)
}

/// Sup-grid modulus errors at `p = 1` for the induced sizes in `ns`, plus `|K|/N` at the origin.
pub fn induced_edge_errors(cfg: &VerifyConfig, ns: &[usize]) -> Result<Vec<(usize, f64, f64)>> {
    let pairs = grid_pairs(&cfg.edge_grid);
    ns.par_iter()
        .map(|&n| {
            let p = cfg.induced(n)?;
            let sys = exact_system(&p, n - 1, cfg.precision_bits)?;
            let base = EdgeBase::InducedUnitCircle { p: Complex64::new(1.0, 0.0), sys: &sys };
            let origin = rescaled_kernel(&base, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))?.norm();
            Ok((n, sup_error(&base, &pairs)?, origin))
        })
        .collect()
}

pub fn suite_edge(cfg: &VerifyConfig) -> Result<Vec<ConvergenceReport>> {
    let mut out = Vec::new();
    let family = cfg.edge_n.iter().map(|&n| cfg.induced(n)).collect::<Result<Vec<_>>>()?;
    let rows = induced_edge_errors(cfg, &cfg.edge_n)?;
    let origin = rows.iter().map(|r| format!("N={}: {:.4}", r.0, r.2)).collect::<Vec<_>>().join(", ");
    out.push(
        ConvergenceReport::new(ID, "induced_unit_circle", family, rows.iter().map(|r| (r.0, r.1)).collect())
            .expect_slope(-0.5, 0.2)
            .ceiling(INDUCED_CEILING)
            .note(format!("{}x{} real grid at p = 1; |K|/N at the origin {origin} (limit 1/2)", cfg.edge_grid.len(), cfg.edge_grid.len()))
            .finish(),
    );

    let lem = cfg.edge_lem_n.iter().map(|&n| cfg.lemniscate(n)).collect::<Result<Vec<_>>>()?;
    if lem.is_empty() {
        return Ok(out);
    }
    let pairs = grid_pairs(&cfg.edge_grid);
    let pt = Complex64::new(cfg.lem_a + 1.0, 0.0).powf(1.0 / cfg.lem_d as f64);
    let errs = lem
        .par_iter()
        .map(|p| {
            let k = LemniscateKernel::with_options(p, LemniscateSource::GramLemniscate, &QuadSpec::default(), cfg.precision_bits)?;
            let base = EdgeBase::LemniscateBoundary { p: pt, kernel: &k };
            Ok((p.d as usize * p.n, sup_error(&base, &pairs)?))
        })
        .collect::<Result<Vec<_>>>()?;
    out.push(
        ConvergenceReport::new(ID, "lemniscate_boundary", lem, errs)
            .indexed_by("dN")
            .ceiling(LEMNISCATE_CEILING)
            .note(format!("base point (a+1)^(1/d) = {pt:.6}; qualitative check at small dN, no rate asserted"))
            .finish(),
    );
    Ok(out)
}
