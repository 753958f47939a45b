//! Verification suites turning each identity and asymptotic statement into a
//! report with measured errors, fitted rates and a verdict.

pub mod config;
pub mod edge;
pub mod geometry;
pub mod induced;
pub mod lemniscate;
pub mod report;
pub mod structural;

pub use config::VerifyConfig;
pub use edge::suite_edge;
pub use geometry::suite_geometry;
pub use induced::{suite_cd_identity, suite_expansions, suite_szego_thm11};
pub use lemniscate::suite_lemniscate_thm13;
pub use report::{fit_slope, render_text, ConvergenceReport, SuiteReport, Verdict};
pub use structural::suite_structurals;

use crate::error::{Error, Result};
use crate::geometry::EnsembleParams;
use crate::numerics::LogComplex;
use crate::orthopoly::{closed_form_polysystem, gram_polysystem, PolySystem};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;

/// `|x/y - 1|`, infinite when `y` vanishes.
pub fn rel(x: LogComplex, y: LogComplex) -> f64 {
    if y.is_zero() {
        return if x.is_zero() { 0.0 } else { f64::INFINITY };
    }
    ((x / y).to_complex() - 1.0).norm()
}

/// Exact induced system: closed form at `c = 1`, exact Gram matrix for other integer `c`.
pub fn exact_system(p: &EnsembleParams, max_degree: usize, precision_bits: Option<u32>) -> Result<PolySystem> {
    if p.c == 1.0 {
        closed_form_polysystem(p, max_degree)
    } else if p.integer_c().is_some() {
        gram_polysystem(p, max_degree, precision_bits)
    } else {
        Err(Error::InvalidParams(format!("an exact oracle needs an integer charge, got c = {}", p.c)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteId {
    Cd,
    Expansions,
    SzegoThm11,
    LemniscateThm13,
    Edge,
    Structurals,
    Geometry,
}

impl SuiteId {
    pub const ALL: [SuiteId; 7] = [
        SuiteId::Cd,
        SuiteId::Expansions,
        SuiteId::SzegoThm11,
        SuiteId::LemniscateThm13,
        SuiteId::Edge,
        SuiteId::Structurals,
        SuiteId::Geometry,
    ];

    pub fn id(self) -> &'static str {
        match self {
            SuiteId::Cd => "cd",
            SuiteId::Expansions => "expansions",
            SuiteId::SzegoThm11 => "szego_thm11",
            SuiteId::LemniscateThm13 => "lemniscate_thm13",
            SuiteId::Edge => "edge",
            SuiteId::Structurals => "structurals",
            SuiteId::Geometry => "geometry",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.id() == s)
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

fn family(cfg: &VerifyConfig, ns: &[usize]) -> Result<Vec<EnsembleParams>> {
    ns.iter().map(|&n| cfg.induced(n)).collect()
}

pub fn run_suite(id: SuiteId, cfg: &VerifyConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let reports = match id {
        SuiteId::Cd => vec![suite_cd_identity(&cfg.induced(cfg.cd_n)?, &cfg.cd_points(), cfg.precision_bits)?],
        SuiteId::Expansions => {
            suite_expansions(&family(cfg, &cfg.expansion_n)?, cfg.expansion_z, cfg.q_zeta, cfg.precision_bits)?
        }
        SuiteId::SzegoThm11 => {
            vec![suite_szego_thm11(&family(cfg, &cfg.thm11_n)?, &cfg.thm11_points(), cfg.separation)?]
        }
        SuiteId::LemniscateThm13 => suite_lemniscate_thm13(cfg)?,
        SuiteId::Edge => suite_edge(cfg)?,
        SuiteId::Structurals => suite_structurals(cfg)?,
        SuiteId::Geometry => suite_geometry(cfg)?,
    };
    Ok(SuiteReport { suite: id.id().into(), reports })
}

/// Runs the suites in parallel; reports come back in the order of `ids`.
pub fn run_suites(ids: &[SuiteId], cfg: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    ids.par_iter().map(|&id| run_suite(id, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn suite_ids_round_trip() {
        for id in SuiteId::ALL {
            assert_eq!(SuiteId::parse(id.id()), Some(id));
        }
        assert_eq!(SuiteId::parse("nope"), None);
    }

    #[test]
    fn cheap_suites_pass_on_defaults() {
        let cfg = VerifyConfig::default();
        for id in [SuiteId::Cd, SuiteId::Expansions, SuiteId::SzegoThm11, SuiteId::Geometry] {
            let s = run_suite(id, &cfg).unwrap();
            assert_eq!(s.verdict(), Verdict::Pass, "{}", render_text(&[s]));
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let cfg = VerifyConfig { seed: Some(3), extra_points: 2, ..VerifyConfig::default() };
        let ids = [SuiteId::Cd, SuiteId::SzegoThm11];
        let a = serde_json::to_string(&run_suites(&ids, &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suites(&ids, &cfg).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"suite\":\"cd\"") && a.find("\"cd\"").unwrap() < a.find("szego_thm11").unwrap());
    }

    #[test]
    fn neutral_charge_identity_is_degenerate() {
        let p = EnsembleParams::induced(8, 0.0, 2.0).unwrap();
        let r = suite_cd_identity(&p, &[(cx(1.0, 1.0), cx(0.5, -0.2))], None).unwrap();
        assert_eq!(r.verdict, Verdict::Degenerate);
    }

    #[test]
    fn near_charge_points_are_filtered() {
        let p = EnsembleParams::induced(12, 1.0, 2.0).unwrap();
        let pts = [(cx(2.0, 0.01), cx(0.5, 0.5)), (cx(1.5, -0.5), cx(0.8, 0.4))];
        let r = suite_cd_identity(&p, &pts, None).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.notes.contains("1 pair(s) within"));
    }

    #[test]
    fn neutral_expansions_degenerate_where_exact() {
        let fam: Vec<_> = [20usize, 40, 80].iter().map(|&n| EnsembleParams::induced(n, 0.0, 2.0).unwrap()).collect();
        let reports = suite_expansions(&fam, cx(2.0, 1.0), cx(2.0, 0.0), None).unwrap();
        let verdict = |name: &str| reports.iter().find(|r| r.check == name).unwrap().verdict;
        assert_eq!(verdict("psi_n"), Verdict::Degenerate);
        assert_eq!(verdict("psi_n_minus_z_psi_n_minus_1"), Verdict::Degenerate);
        assert_eq!(verdict("h_combo_first"), Verdict::Degenerate);
        assert_eq!(verdict("h_n"), Verdict::Pass);
    }

    #[test]
    fn pole_pairs_are_excluded() {
        let fam: Vec<_> = [50usize, 100, 200].iter().map(|&n| EnsembleParams::induced(n, 1.0, 2.0).unwrap()).collect();
        let pairs = [(cx(1.25, 0.0), cx(0.8, 0.0)), (cx(2.0, 1.0), cx(-1.0, 2.0))];
        let r = suite_szego_thm11(&fam, &pairs, 0.3).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.notes.contains("pole"));
    }

    #[test]
    fn non_integer_charge_has_no_exact_oracle() {
        let p = EnsembleParams::induced(5, 0.5, 2.0).unwrap();
        assert!(matches!(exact_system(&p, 5, None), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn relative_error_edge_cases() {
        assert_eq!(rel(LogComplex::ZERO, LogComplex::ZERO), 0.0);
        assert!(rel(LogComplex::ONE, LogComplex::ZERO).is_infinite());
        assert!(rel(LogComplex::from_real(2.0), LogComplex::ONE) - 1.0 < 1e-15);
    }
}
