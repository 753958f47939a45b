//! Parameters and fixed point lists of the verification suites.

use crate::error::{Error, Result};
use crate::geometry::{outside_sa, EnsembleParams};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// Charge of the induced family.
    pub c: f64,
    /// Charge location of the induced family.
    pub a: f64,
    /// Reduced sizes and point lists.
    pub quick: bool,
    /// Seed for extra randomly placed test points; `None` keeps only the fixed lists.
    pub seed: Option<u64>,
    pub extra_points: usize,
    pub precision_bits: Option<u32>,

    pub cd_n: usize,
    pub cd_pairs: Vec<(Complex64, Complex64)>,

    pub expansion_n: Vec<usize>,
    pub expansion_z: Complex64,
    pub q_zeta: Complex64,

    pub thm11_n: Vec<usize>,
    pub thm11_pairs: Vec<(Complex64, Complex64)>,
    pub separation: f64,

    pub lem_d: u32,
    pub lem_a: f64,
    pub lem_c: f64,
    /// Boundary points `(a + e^{i theta})^{1/d}`.
    pub lem_thetas: Vec<f64>,
    /// `N` values for the exact cross-check, `dN <= 8`.
    pub lem_exact_n: Vec<usize>,
    /// `N` values for the exact rate at larger `dN`; skipped in quick mode.
    pub lem_rate_n: Vec<usize>,
    pub lem_consistency_n: Vec<usize>,
    /// Base sizes of the `N -> 4N` growth check.
    pub lem_growth_n: Vec<usize>,

    pub edge_n: Vec<usize>,
    /// Real offsets; the grid is every `(z, w)` pair from this list.
    pub edge_grid: Vec<f64>,
    pub edge_lem_n: Vec<usize>,

    pub struct_n: usize,
    pub multifold_n: usize,
    pub multifold_pairs: Vec<(Complex64, Complex64)>,

    pub geometry_a: f64,
    pub droplet_ds: Vec<u32>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            c: 1.0,
            a: 2.0,
            quick: false,
            seed: None,
            extra_points: 0,
            precision_bits: None,
            cd_n: 20,
            cd_pairs: vec![
                (cx(2.0, 1.0), cx(1.0, -1.0)),
                (cx(0.9, 0.2), cx(-0.5, 0.9)),
                (cx(1.5, -0.5), cx(0.8, 0.4)),
                (cx(-1.0, 0.5), cx(0.3, -1.2)),
                (cx(2.5, 0.3), cx(1.7, -0.8)),
            ],
            expansion_n: vec![50, 100, 200, 400],
            expansion_z: cx(2.0, 1.0),
            q_zeta: cx(2.0, 0.0),
            thm11_n: vec![50, 100, 200],
            thm11_pairs: vec![(cx(2.0, 1.0), cx(-1.0, 2.0))],
            separation: 0.3,
            lem_d: 2,
            lem_a: 1.1,
            lem_c: 1.0,
            lem_thetas: vec![0.0, 1.5],
            lem_exact_n: vec![2, 3, 4],
            lem_rate_n: vec![8, 16, 32],
            lem_consistency_n: vec![50, 100, 200],
            lem_growth_n: vec![25, 100],
            edge_n: vec![100, 200, 400],
            edge_grid: vec![-1.0, -0.5, 0.0, 0.5, 1.0],
            edge_lem_n: vec![2, 4, 8],
            struct_n: 10,
            multifold_n: 3,
            multifold_pairs: vec![
                (cx(1.2, 0.0), cx(0.9, 0.3)),
                (cx(0.1, -0.2), cx(1.0, 0.5)),
                (cx(-1.1, 0.4), cx(0.7, -0.9)),
            ],
            geometry_a: 2.0,
            droplet_ds: vec![2, 3, 4],
        }
    }
}

impl VerifyConfig {
    /// The reduced configuration of `--quick`.
    pub fn quick() -> Self {
        VerifyConfig { quick: true, ..Self::default() }.reduced()
    }

    /// Applies the quick-mode reductions to the current lists.
    pub fn reduced(mut self) -> Self {
        if self.quick {
            self.lem_rate_n.clear();
            self.lem_exact_n.retain(|&n| n * self.lem_d as usize <= 8);
        }
        self
    }

    pub fn induced(&self, n: usize) -> Result<EnsembleParams> {
        EnsembleParams::induced(n, self.c, self.a)
    }

    pub fn lemniscate(&self, n: usize) -> Result<EnsembleParams> {
        EnsembleParams::new(n, self.lem_c, self.lem_a, self.lem_d)
    }

    /// Boundary point `(a + e^{i theta})^{1/d}` of the lemniscate droplet.
    pub fn boundary_point(&self, theta: f64) -> Complex64 {
        (self.lem_a + Complex64::from_polar(1.0, theta)).powf(1.0 / self.lem_d as f64)
    }

    pub fn validate(&self) -> Result<()> {
        self.induced(1)?;
        self.lemniscate(1)?;
        let lists: [(&str, &[usize]); 3] =
            [("expansion_n", &self.expansion_n), ("thm11_n", &self.thm11_n), ("edge_n", &self.edge_n)];
        for (name, l) in lists {
            if l.is_empty() || l.contains(&0) {
                return Err(Error::InvalidParams(format!("{name} must list positive sizes")));
            }
        }
        if self.edge_grid.is_empty() || self.lem_thetas.len() < 2 {
            return Err(Error::InvalidParams("edge_grid needs a point and lem_thetas two angles".into()));
        }
        if self.cd_n < 2 {
            return Err(Error::InvalidParams("cd_n must be at least 2".into()));
        }
        Ok(())
    }

    fn rng(&self, salt: u64) -> Option<ChaCha8Rng> {
        self.seed.map(|s| ChaCha8Rng::seed_from_u64(s ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
    }

    /// Fixed pairs of the identity check plus seeded extras in `[-2, 3] x [-2, 2]`.
    pub fn cd_points(&self) -> Vec<(Complex64, Complex64)> {
        let mut out = self.cd_pairs.clone();
        if let Some(mut rng) = self.rng(1) {
            for _ in 0..self.extra_points {
                let mut pt = || cx(rng.random_range(-2.0..3.0), rng.random_range(-2.0..2.0));
                out.push((pt(), pt()));
            }
        }
        out
    }

    /// Fixed pairs of the macroscopic check plus seeded extras outside `S_a` in `[-3, 3]^2`.
    pub fn thm11_points(&self) -> Vec<(Complex64, Complex64)> {
        let mut out = self.thm11_pairs.clone();
        if let Some(mut rng) = self.rng(2) {
            let mut added = 0;
            while added < self.extra_points {
                let mut pt = || cx(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
                let (z, w) = (pt(), pt());
                if outside_sa(z, self.a) && outside_sa(w, self.a) && (z - w).norm() >= self.separation {
                    out.push((z, w));
                    added += 1;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_round_trip() {
        let c = VerifyConfig::default();
        c.validate().unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<VerifyConfig>(&json).unwrap(), c);
        let partial: VerifyConfig = serde_json::from_str(r#"{"c": 2, "cd_n": 12}"#).unwrap();
        assert_eq!((partial.c, partial.cd_n, partial.a), (2.0, 12, 2.0));
        assert!(serde_json::from_str::<VerifyConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn seeded_points_are_reproducible() {
        let c = VerifyConfig { seed: Some(7), extra_points: 3, ..VerifyConfig::default() };
        assert_eq!(c.cd_points(), c.cd_points());
        assert_eq!(c.cd_points().len(), 8);
        let extra = &c.thm11_points()[1..];
        assert_eq!(extra.len(), 3);
        assert!(extra.iter().all(|&(z, w)| outside_sa(z, 2.0) && outside_sa(w, 2.0)));
        let other = VerifyConfig { seed: Some(8), ..c.clone() };
        assert_ne!(other.cd_points(), c.cd_points());
        assert_eq!(VerifyConfig::default().cd_points().len(), 5);
    }

    #[test]
    fn quick_mode_trims_lemniscate_sizes() {
        let q = VerifyConfig::quick();
        assert!(q.lem_rate_n.is_empty());
        assert_eq!(q.edge_lem_n, VerifyConfig::default().edge_lem_n);
        assert!((q.boundary_point(0.0) - 2.1f64.sqrt()).norm() < 1e-15);
    }
}
