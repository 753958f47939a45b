//! Lemniscate suite: exact small-dN cross-checks, the multifold route and boundary growth.

use super::config::VerifyConfig;
use super::report::ConvergenceReport;
use crate::error::Result;
use crate::geometry::EnsembleParams;
use crate::kernels::{
    asym_kernel_thm13, asym_kernel_thm13_multifold, boundary_modulus, LemniscateKernel, LemniscateSource, TypoReading,
};
use crate::orthopoly::QuadSpec;
use num_complex::Complex64;
use rayon::prelude::*;

const ID: &str = "lemniscate_thm13";
pub const CROSS_CHECK_CEILING: f64 = 0.1;
pub const IDENTITY_CEILING: f64 = 1e-10;
pub const GROWTH_TOLERANCE: f64 = 0.2;

/// Distinct boundary pairs from the configured angles.
pub fn boundary_pairs(cfg: &VerifyConfig) -> Vec<(Complex64, Complex64)> {
    let pts: Vec<Complex64> = cfg.lem_thetas.iter().map(|&t| cfg.boundary_point(t)).collect();
    let mut out = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            out.push((pts[i], pts[j]));
        }
    }
    out
}

/// Worst `| |asymptotic| / |exact| - 1 |` over `pairs` at each size, exact side from the lemniscate Gram matrix.
pub fn exact_modulus_errors(
    family: &[EnsembleParams],
    pairs: &[(Complex64, Complex64)],
    bits: Option<u32>,
) -> Result<Vec<(usize, f64)>> {
    family
        .par_iter()
        .map(|p| {
            let k = LemniscateKernel::with_options(p, LemniscateSource::GramLemniscate, &QuadSpec::default(), bits)?;
            let mut worst: f64 = 0.0;
            for &(z, w) in pairs {
                let exact = k.eval(z, w)?.value;
                let asym = asym_kernel_thm13(z, w, p, TypoReading::Corrected)?;
                worst = worst.max((asym.modulus() / exact.modulus() - 1.0).abs());
            }
            Ok((p.d as usize * p.n, worst))
        })
        .collect()
}

fn family(cfg: &VerifyConfig, ns: &[usize]) -> Result<Vec<EnsembleParams>> {
    ns.iter().map(|&n| cfg.lemniscate(n)).collect()
}

pub fn suite_lemniscate_thm13(cfg: &VerifyConfig) -> Result<Vec<ConvergenceReport>> {
    let pairs = boundary_pairs(cfg);
    let mut out = Vec::new();

    let small = family(cfg, &cfg.lem_exact_n)?;
    if !small.is_empty() {
        let errs = exact_modulus_errors(&small, &pairs, cfg.precision_bits)?;
        out.push(
            ConvergenceReport::new(ID, "exact_cross_check_small_dN", small, errs)
                .indexed_by("dN")
                .ceiling(CROSS_CHECK_CEILING)
                .note(format!("boundary points at angles {:?}, moduli compared", cfg.lem_thetas))
                .finish(),
        );
    }

    let larger = family(cfg, &cfg.lem_rate_n)?;
    if larger.len() >= 3 {
        let errs = exact_modulus_errors(&larger, &pairs, cfg.precision_bits)?;
        out.push(
            ConvergenceReport::new(ID, "exact_rate", larger, errs)
                .indexed_by("dN")
                .expect_slope(-1.0, 0.3)
                .ceiling(CROSS_CHECK_CEILING)
                .finish(),
        );
    } else {
        out.push(ConvergenceReport::degenerate(ID, "exact_rate", larger, "skipped: needs three exact sizes"));
    }

    let mid = family(cfg, &cfg.lem_consistency_n)?;
    let mut route = Vec::new();
    let mut special = Vec::new();
    for p in &mid {
        let (mut worst_route, mut worst_special): (f64, f64) = (0.0, 0.0);
        for &(z, w) in &pairs {
            let prod = asym_kernel_thm13(z, w, p, TypoReading::Corrected)?.modulus();
            let multi = asym_kernel_thm13_multifold(z, w, p)?.modulus();
            let bm = boundary_modulus(z, w, p, TypoReading::Corrected)?;
            worst_route = worst_route.max((prod / multi - 1.0).abs());
            worst_special = worst_special.max((bm / prod - 1.0).abs());
        }
        route.push((p.n, worst_route));
        special.push((p.n, worst_special));
    }
    out.push(
        ConvergenceReport::new(ID, "product_form_vs_multifold_route", mid.clone(), route)
            .ceiling(IDENTITY_CEILING)
            .note("both asymptotic; moduli agree identically")
            .finish(),
    );
    out.push(
        ConvergenceReport::new(ID, "boundary_modulus_specialization", mid, special)
            .ceiling(IDENTITY_CEILING)
            .finish(),
    );

    let base = family(cfg, &cfg.lem_growth_n)?;
    let mut growth = Vec::new();
    let mut ratios = Vec::new();
    for p in &base {
        let big = p.with_n(4 * p.n);
        let mut worst: f64 = 0.0;
        for &(z, w) in &pairs {
            let r = boundary_modulus(z, w, &big, TypoReading::Corrected)? / boundary_modulus(z, w, p, TypoReading::Corrected)?;
            ratios.push(format!("{:.4}", r));
            worst = worst.max((r - 2.0).abs());
        }
        growth.push((p.n, worst));
    }
    out.push(
        ConvergenceReport::new(ID, "sqrt_n_growth", base, growth)
            .ceiling(GROWTH_TOLERANCE)
            .note(format!("|K| ratios under N -> 4N: {}; error is |ratio - 2|", ratios.join(", ")))
            .finish(),
    );
    Ok(out)
}
