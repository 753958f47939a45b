//! Structural identities of the exact kernels.

use super::config::VerifyConfig;
use super::{exact_system, rel};
use super::report::ConvergenceReport;
use crate::error::{Error, Result};
use crate::geometry::EnsembleParams;
use crate::kernels::{
    berezin, correlation_fn, kernel_fullq_exact, kernel_tilde_exact, KernelField, KernelMode, LemniscateKernel,
    LemniscateSource, R1Mode,
};
use crate::numerics::{ln_factorial, reg_inc_gamma_q, LogComplex};
use crate::orthopoly::{gram_polysystem, integrate_disk, QuadSpec};
use num_complex::Complex64;

const ID: &str = "structurals";
pub const MULTIFOLD_CEILING: f64 = 1e-8;
pub const COCYCLE_CEILING: f64 = 1e-12;
pub const MASS_CEILING: f64 = 1e-5;
pub const REPRODUCING_CEILING: f64 = 1e-6;
pub const HERMITIAN_CEILING: f64 = 1e-10;
pub const NEUTRAL_CEILING: f64 = 1e-12;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Multifold quadrature route against the lemniscate Gram route, worst relative difference.
pub fn multifold_error(p: &EnsembleParams, pairs: &[(Complex64, Complex64)], bits: Option<u32>) -> Result<f64> {
    let spec = QuadSpec::default();
    let multi = LemniscateKernel::with_options(p, LemniscateSource::MultifoldQuadrature, &spec, bits)?;
    let gram = LemniscateKernel::with_options(p, LemniscateSource::GramLemniscate, &spec, bits)?;
    let mut worst: f64 = 0.0;
    for &(z, w) in pairs {
        worst = worst.max(rel(multi.eval(z, w)?.value, gram.eval(z, w)?.value));
    }
    Ok(worst)
}

/// Radius of the disk carrying the kernel mass for the reproducing-type integrals.
fn mass_radius(p: &EnsembleParams) -> f64 {
    (1.0 + p.a).max(4.0)
}

pub fn suite_structurals(cfg: &VerifyConfig) -> Result<Vec<ConvergenceReport>> {
    let mut out = Vec::new();

    let lp = cfg.lemniscate(cfg.multifold_n)?;
    match multifold_error(&lp, &cfg.multifold_pairs, cfg.precision_bits) {
        Ok(e) => out.push(
            ConvergenceReport::new(ID, "multifold_vs_gram", vec![lp], vec![(lp.d as usize * lp.n, e)])
                .indexed_by("dN")
                .ceiling(MULTIFOLD_CEILING)
                .note(format!("{} pairs", cfg.multifold_pairs.len()))
                .finish(),
        ),
        Err(Error::InvalidParams(why)) => out.push(ConvergenceReport::degenerate(ID, "multifold_vs_gram", vec![lp], &why)),
        Err(e) => return Err(e),
    }

    let p = cfg.induced(cfg.struct_n)?;
    let sys = exact_system(&p, p.n, cfg.precision_bits)?;
    let k = |z: Complex64, w: Complex64| kernel_fullq_exact(z, w, &sys).map(|s| s.value);

    let g = |z: Complex64| LogComplex::from_complex(z / z.norm());
    let kg = |z: Complex64, w: Complex64| Ok(k(z, w)? * g(z) * g(w).conj());
    let pts = [cx(0.3, 0.4), cx(-0.5, 0.2), cx(0.9, -0.6)];
    let mut worst: f64 = 0.0;
    for m in 1..=pts.len() {
        let x = correlation_fn(&pts[..m], k)?;
        let y = correlation_fn(&pts[..m], kg)?;
        worst = worst.max((x - y).abs() / x);
    }
    out.push(
        ConvergenceReport::new(ID, "cocycle_invariance", vec![p], vec![(p.n, worst)])
            .ceiling(COCYCLE_CEILING)
            .note("g(z) = z/|z|, R_{N,k} for k = 1, 2, 3")
            .finish(),
    );

    let radius = mass_radius(&p);
    let z = cx(-0.2, 0.7);
    let mass = integrate_disk(
        |w| berezin(z, w, k, R1Mode::Exact, &p).unwrap_or(f64::NAN),
        cx(0.0, 0.0),
        radius,
        16,
        512,
    );
    out.push(
        ConvergenceReport::new(ID, "berezin_mass", vec![p], vec![(p.n, (mass - 1.0).abs())])
            .ceiling(MASS_CEILING)
            .note(format!("z = {z}, disk radius {radius}"))
            .finish(),
    );

    let z = cx(0.6, 0.4);
    let kzz = k(z, z)?.to_complex().re;
    let integral = integrate_disk(
        |w| k(w, z).map(|v| v.to_complex().norm_sqr()).unwrap_or(f64::NAN),
        cx(0.0, 0.0),
        radius,
        16,
        512,
    );
    out.push(
        ConvergenceReport::new(ID, "reproducing_property", vec![p], vec![(p.n, (integral / kzz - 1.0).abs())])
            .ceiling(REPRODUCING_CEILING)
            .note(format!("int |K(w, z)|^2 dA(w) = K(z, z) at z = {z}"))
            .finish(),
    );

    let grid = [cx(-0.8, 0.3), cx(0.2, -0.5), cx(0.9, 0.9), cx(1.6, 0.1), cx(0.0, 0.0)];
    let pairs: Vec<_> = grid.iter().flat_map(|&z| grid.iter().map(move |&w| (z, w))).collect();
    let field = KernelField::sample(p, KernelMode::ExactFullQ, &pairs, |z, w| kernel_fullq_exact(z, w, &sys))?;
    let mut r = ConvergenceReport::new(ID, "hermitian_symmetry", vec![p], vec![(p.n, field.hermitian_defect())])
        .ceiling(HERMITIAN_CEILING);
    if !field.diagonal_nonnegative(1e-12) {
        r = r.note("diagonal not real nonnegative");
        r.errors[0].1 = f64::INFINITY;
    }
    out.push(r.finish());

    let mut sets: Vec<Vec<Complex64>> = Vec::new();
    for i in 0..grid.len() {
        for j in i + 1..grid.len() {
            sets.push(vec![grid[i], grid[j]]);
            for l in j + 1..grid.len() {
                sets.push(vec![grid[i], grid[j], grid[l]]);
            }
        }
    }
    let mut negative = 0usize;
    for set in &sets {
        match correlation_fn(set, k) {
            Ok(v) if v >= 0.0 => {}
            Ok(_) | Err(Error::Precision(_)) => negative += 1,
            Err(e) => return Err(e),
        }
    }
    out.push(
        ConvergenceReport::new(ID, "positive_semidefinite", vec![p], vec![(p.n, negative as f64)])
            .ceiling(0.0)
            .note(format!("{} two- and three-point determinants, error counts negative ones", sets.len()))
            .finish(),
    );

    let p0 = p.with_c(0.0);
    out.push(neutral_reductions(&p0, cfg.precision_bits)?);
    Ok(out)
}

/// At `c = 0`: `K~ = N Q(N, N z conj w)`, `h_j = j!/N^{j+1}` and `psi_j = z^j`.
pub fn neutral_reductions(p: &EnsembleParams, bits: Option<u32>) -> Result<ConvergenceReport> {
    let sys = gram_polysystem(p, p.n, bits)?;
    let nf = p.nf();
    let mut worst: f64 = 0.0;
    for (z, w) in [(cx(0.3, 0.4), cx(-0.5, 0.2)), (cx(1.2, -0.7), cx(0.4, 0.9)), (cx(0.6, 0.1), cx(0.6, 0.1))] {
        let want = LogComplex::from_real(nf) * reg_inc_gamma_q(p.n as u32, nf * z * w.conj());
        worst = worst.max(rel(kernel_tilde_exact(z, w, &sys)?.value, want));
        let psi = sys.psi_upto(z, p.n)?;
        for (j, v) in psi.values.iter().enumerate() {
            worst = worst.max(rel(*v, LogComplex::from_complex(z).powi(j as i64)));
        }
    }
    for j in 0..=p.n {
        let want = ln_factorial(j as u64) - (j as f64 + 1.0) * nf.ln();
        worst = worst.max((sys.log_norm(j) - want).exp_m1().abs());
    }
    Ok(ConvergenceReport::new(ID, "neutral_reductions", vec![*p], vec![(p.n, worst)])
        .ceiling(NEUTRAL_CEILING)
        .note("partial exponential kernel, factorial norms, monomial polynomials")
        .finish())
}
