//! Suites for the induced Ginibre ensemble: the Christoffel–Darboux identity,
//! the large-N expansions and the macroscopic kernel asymptotic.

use super::report::ConvergenceReport;
use super::{exact_system, rel};
use crate::error::{Error, Result};
use crate::geometry::{outside_sa, EnsembleParams};
use crate::kernels::{asym_kernel_thm11, cd_rhs, fd_dbar_tilde, fd_step, kernel_fullq_exact};
use crate::numerics::{reg_inc_gamma_q, LogComplex, LogSum};
use crate::orthopoly::{asym_h, asym_h_combos, asym_psi, asym_psi_diff, asym_q, ratio_p_at_a, PolySystem};
use num_complex::Complex64;
use rayon::prelude::*;

pub const CD_CEILING: f64 = 1e-4;
/// Points this close to the charge are dropped from the identity check.
pub const NEAR_CHARGE_RADIUS: f64 = 0.05;
pub const THM11_CEILING: f64 = 1e-2;
pub const NORM_CEILING: f64 = 2e-4;
/// Pairs with `|z conj w - 1|` below this are dropped as too close to the pole.
pub const POLE_RADIUS: f64 = 1e-3;

/// FD `dbar_w` of the exact kernel against the three-term right-hand side, worst pair.
pub fn suite_cd_identity(
    p: &EnsembleParams,
    points: &[(Complex64, Complex64)],
    precision_bits: Option<u32>,
) -> Result<ConvergenceReport> {
    const ID: &str = "cd";
    let check = "fd_dbar_vs_three_term";
    let sys = exact_system(p, p.n + 1, precision_bits)?;
    let probe = Complex64::new(p.a + 1.0, 1.0);
    if let Err(Error::Degenerate(why)) = cd_rhs(probe, probe, &sys) {
        return Ok(ConvergenceReport::degenerate(ID, check, vec![*p], &format!("both sides vanish identically: {why}")));
    }
    let broken: Vec<usize> = sys.hypothesis()?.iter().filter(|r| !r.holds()).map(|r| r.j).collect();
    if !broken.is_empty() {
        return Ok(ConvergenceReport::degenerate(
            ID,
            check,
            vec![*p],
            &format!("nondegeneracy hypothesis fails at degrees {broken:?}"),
        ));
    }
    let near = |x: Complex64| (x - p.a).norm() < NEAR_CHARGE_RADIUS;
    let kept: Vec<_> = points.iter().copied().filter(|&(z, w)| !near(z) && !near(w)).collect();
    let excluded = points.len() - kept.len();
    if kept.is_empty() {
        return Ok(ConvergenceReport::failed(ID, check, vec![*p], "no test points left after the charge filter"));
    }
    let errs = kept
        .par_iter()
        .map(|&(z, w)| {
            let rhs = cd_rhs(z, w, &sys)?.value;
            let lhs = fd_dbar_tilde(z, w, &sys, fd_step(w))?;
            Ok(rel(lhs, rhs))
        })
        .collect::<Result<Vec<f64>>>()?;
    let worst = errs.iter().copied().fold(0.0, f64::max);
    let mut r = ConvergenceReport::new(ID, check, vec![*p], vec![(p.n, worst)])
        .ceiling(CD_CEILING)
        .note(format!("max over {} pairs, FD step 1e-5(1+|w|), no rate expected", kept.len()));
    if excluded > 0 {
        r = r.note(format!("{excluded} pair(s) within {NEAR_CHARGE_RADIUS} of the charge excluded"));
    }
    Ok(r.finish())
}

fn diff(x: LogComplex, z: Complex64, y: LogComplex) -> LogComplex {
    let mut acc = LogSum::new();
    acc.add(x);
    acc.add(-(LogComplex::from_complex(z) * y));
    acc.value().value
}

// one value per family member, in family order
type Column = Vec<Result<f64>>;

struct Measured {
    h: [Column; 3],
    psi: [Column; 3],
    diffs: [Column; 2],
    combos: [Column; 2],
    ratio_a: Column,
    q: [Column; 3],
}

fn measure_one(p: &EnsembleParams, sys: &PolySystem, z: Complex64, zeta: Complex64) -> Result<[Result<f64>; 14]> {
    let n = p.n;
    let nf = p.nf();
    let h = |j: usize| LogComplex::new(sys.log_norm(j), 0.0);
    let psi = sys.psi_upto(z, n + 1)?;
    let hres = |off: i32| Ok(rel(h((n as i32 + off) as usize), asym_h(off, p)?));
    let pres = |off: i32| Ok(rel(psi.values[(n as i32 + off) as usize], asym_psi(off, z, p)?));
    let d0 = diff(psi.values[n], z, psi.values[n - 1]);
    let d1 = diff(psi.values[n + 1], z, psi.values[n]);
    let dres = |off: i32, exact: LogComplex| -> Result<f64> {
        let a = asym_psi_diff(off, z, p)?;
        if a.is_zero() && exact.modulus() <= 1e-13 * psi.values[n].modulus() {
            return Ok(0.0);
        }
        Ok(rel(exact, a))
    };
    let combos = asym_h_combos(p).map(|(x, y)| {
        let den1 = LogComplex::from_real((nf + p.c) / nf * (sys.log_norm(n - 1) - sys.log_norm(n)).exp() - 1.0) * h(n);
        let den2 = LogComplex::from_real((nf + p.c + 1.0) / nf * (sys.log_norm(n) - sys.log_norm(n + 1)).exp() - 1.0)
            * h(n + 1);
        let e1 = den1.recip();
        let e2 = LogComplex::new(sys.log_norm(n) - sys.log_norm(n - 1), 0.0).scale(nf) / den2;
        (rel(e1, x), rel(e2, y))
    });
    let ratio = (|| {
        let exact = sys.p_at_a(n + 1)? / sys.p_at_a(n)?;
        Ok(rel(exact, LogComplex::from_real(ratio_p_at_a(p)?)))
    })();
    let qres = |off: i32| Ok(rel(reg_inc_gamma_q((n as i32 + off) as u32, zeta * nf), asym_q(off, n, zeta)?));
    Ok([
        hres(-1),
        hres(0),
        hres(1),
        pres(-1),
        pres(0),
        pres(1),
        dres(0, d0),
        dres(1, d1),
        combos.clone().map(|c| c.0),
        combos.map(|c| c.1),
        ratio,
        qres(0),
        qres(1),
        qres(2),
    ])
}

fn measure(family: &[EnsembleParams], z: Complex64, zeta: Complex64, bits: Option<u32>) -> Result<Measured> {
    let rows = family
        .par_iter()
        .map(|p| {
            let sys = exact_system(p, p.n + 1, bits)?;
            measure_one(p, &sys, z, zeta)
        })
        .collect::<Result<Vec<_>>>()?;
    let col = |k: usize| rows.iter().map(|r| r[k].clone()).collect::<Column>();
    Ok(Measured {
        h: [col(0), col(1), col(2)],
        psi: [col(3), col(4), col(5)],
        diffs: [col(6), col(7)],
        combos: [col(8), col(9)],
        ratio_a: col(10),
        q: [col(11), col(12), col(13)],
    })
}

fn column_report(
    check: &str,
    family: &[EnsembleParams],
    col: &Column,
    slope: f64,
    ceiling: Option<f64>,
) -> Result<ConvergenceReport> {
    let mut errors = Vec::with_capacity(col.len());
    for (p, v) in family.iter().zip(col) {
        match v {
            Ok(e) => errors.push((p.n, *e)),
            Err(Error::Degenerate(why)) => {
                return Ok(ConvergenceReport::degenerate("expansions", check, family.to_vec(), why));
            }
            Err(e) => return Err(e.clone()),
        }
    }
    let mut r = ConvergenceReport::new("expansions", check, family.to_vec(), errors).expect_slope(slope, 0.3);
    if let Some(c) = ceiling {
        r = r.ceiling(c);
    }
    Ok(r.finish())
}

/// Residuals of the two-term and one-term expansions over a family of `N`.
///
/// Two-term forms (`h`, `psi`, `Q`) are expected at slope -2, one-term forms at -1.
pub fn suite_expansions(
    family: &[EnsembleParams],
    z: Complex64,
    zeta: Complex64,
    precision_bits: Option<u32>,
) -> Result<Vec<ConvergenceReport>> {
    if family.is_empty() {
        return Err(Error::InvalidParams("the expansion family is empty".into()));
    }
    if !outside_sa(z, family[0].a) {
        return Err(Error::Region(format!("{z} is not outside S_a")));
    }
    let m = measure(family, z, zeta, precision_bits)?;
    let names = ["n_minus_1", "n", "n_plus_1"];
    let mut out = Vec::new();
    for (k, name) in names.iter().enumerate() {
        let ceiling = (k == 1).then_some(NORM_CEILING);
        out.push(column_report(&format!("h_{name}"), family, &m.h[k], -2.0, ceiling)?);
    }
    for (k, name) in names.iter().enumerate() {
        out.push(column_report(&format!("psi_{name}"), family, &m.psi[k], -2.0, None)?);
    }
    out.push(column_report("psi_n_minus_z_psi_n_minus_1", family, &m.diffs[0], -1.0, None)?);
    out.push(column_report("psi_n_plus_1_minus_z_psi_n", family, &m.diffs[1], -1.0, None)?);
    out.push(column_report("h_combo_first", family, &m.combos[0], -1.0, None)?);
    out.push(column_report("h_combo_second", family, &m.combos[1], -1.0, None)?);
    out.push(column_report("p_ratio_at_a", family, &m.ratio_a, -1.0, None)?);
    for (k, name) in ["q_n", "q_n_plus_1", "q_n_plus_2"].iter().enumerate() {
        out.push(column_report(name, family, &m.q[k], -2.0, None)?.note(format!("zeta = {zeta}")));
    }
    Ok(out)
}

/// Relative error of the macroscopic asymptotic against the exact kernel, worst pair per `N`.
pub fn suite_szego_thm11(
    family: &[EnsembleParams],
    pairs: &[(Complex64, Complex64)],
    separation: f64,
) -> Result<ConvergenceReport> {
    const ID: &str = "szego_thm11";
    let check = "asymptotic_vs_exact";
    let Some(first) = family.first() else {
        return Err(Error::InvalidParams("the family is empty".into()));
    };
    if first.c == 0.0 {
        return Ok(ConvergenceReport::degenerate(ID, check, family.to_vec(), "the formula needs c != 0"));
    }
    let mut notes = Vec::new();
    let mut kept = Vec::new();
    for &(z, w) in pairs {
        if (z * w.conj() - 1.0).norm() < POLE_RADIUS {
            notes.push(format!("({z}, {w}) excluded: pole of 1/(z conj w - 1)"));
        } else if (z - w).norm() < separation {
            notes.push(format!("({z}, {w}) excluded: separation below {separation}"));
        } else if !outside_sa(z, first.a) || !outside_sa(w, first.a) {
            notes.push(format!("({z}, {w}) excluded: not outside S_a"));
        } else {
            kept.push((z, w));
        }
    }
    if kept.is_empty() {
        return Ok(ConvergenceReport::failed(ID, check, family.to_vec(), &notes.join("; ")));
    }
    let errors = family
        .par_iter()
        .map(|p| {
            let sys = exact_system(p, p.n, None)?;
            let mut worst: f64 = 0.0;
            for &(z, w) in &kept {
                let exact = kernel_fullq_exact(z, w, &sys)?.value;
                worst = worst.max(rel(exact, asym_kernel_thm11(z, w, p)?));
            }
            Ok((p.n, worst))
        })
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<String> = errors.windows(2).map(|e| format!("{:.3}", e[0].1 / e[1].1)).collect();
    let mut r = ConvergenceReport::new(ID, check, family.to_vec(), errors)
        .expect_slope(-1.0, 0.3)
        .ceiling(THM11_CEILING)
        .note(format!("{} pair(s); successive error ratios {}", kept.len(), ratios.join(", ")));
    for n in notes {
        r = r.note(n);
    }
    Ok(r.finish())
}
