//! Macroscopic large-N kernel formulas outside the limiting skeletons.

use super::exact::abs_power;
use crate::error::{Error, Result};
use crate::geometry::{outside_s1, outside_sa, outside_sad, potential_v, EnsembleParams};
use crate::numerics::{LogComplex, LogSum};
use crate::orthopoly::polysystem::power;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Reading of the last denominator factor `(conj(w)^d - ?)^{1/d}` of the lemniscate formula.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TypoReading {
    /// `(conj(w)^d - a)^{1/d}`, symmetric with the `z` factor.
    #[default]
    Corrected,
    /// `(conj(w)^d - 1)^{1/d}` as printed.
    Literal,
}

fn lc(z: Complex64) -> LogComplex {
    LogComplex::from_complex(z)
}

fn sqrt_n_over_2pi(n: f64) -> LogComplex {
    LogComplex::new(0.5 * (n / (2.0 * PI)).ln(), 0.0)
}

fn check_pair(z: Complex64, w: Complex64) -> Result<()> {
    if (z - w).norm() < 1e-12 {
        return Err(Error::Region("the formula needs z != w".into()));
    }
    Ok(())
}

// sqrt(N/2pi) (u v - 1)^{-1} a^{-2c} (u/(u - 1/a))^c (v/(v - 1/a))^c (u v)^N |(z-a)(w-a)|^c e^{N - N(|z|^2+|w|^2)/2}
// with u = z, v = conj w; the per-variable powers put the cuts on [0, 1/a]
fn thm11_value(z: Complex64, w: Complex64, p: &EnsembleParams) -> Result<LogComplex> {
    let (n, a, c) = (p.nf(), p.a, p.c);
    let (u, v) = (z, w.conj());
    let uv = u * v;
    if (uv - 1.0).norm() < 1e-12 {
        return Err(Error::Singular("pole of 1/(z conj w - 1)".into()));
    }
    let fz = power(lc(u / (u - 1.0 / a)), c);
    let fw = power(lc(v / (v - 1.0 / a)), c);
    let charge = LogComplex::new(-2.0 * c * a.ln(), 0.0) * fz * fw * abs_power(((z - a) * (w - a)).norm(), c)?;
    let expo = LogComplex::new(n - n / 2.0 * (z.norm_sqr() + w.norm_sqr()), 0.0);
    Ok(sqrt_n_over_2pi(n) / lc(uv - 1.0) * lc(uv).powi(p.n as i64) * charge * expo)
}

/// Macroscopic asymptotic of `K_N(z, w)` for the induced Ginibre ensemble.
///
/// Requires `a > 1`, `c > -1`, `c != 0`, and `z`, `w` outside `S_a`.
pub fn asym_kernel_thm11(z: Complex64, w: Complex64, p: &EnsembleParams) -> Result<LogComplex> {
    p.validate()?;
    p.require_a_above_one("the macroscopic kernel asymptotic")?;
    if p.c == 0.0 {
        return Err(Error::InvalidParams("the induced formula assumes c != 0".into()));
    }
    for x in [z, w] {
        if !outside_sa(x, p.a) {
            return Err(Error::Region(format!("{x} is not outside S_a for a = {}", p.a)));
        }
    }
    check_pair(z, w)?;
    thm11_value(z, w, p)
}

/// Ginibre Szegő-type asymptotic `sqrt(N/2pi) (z conj w)^N e^{N - N(|z|^2+|w|^2)/2} / (z conj w - 1)`.
pub fn asym_kernel_ginibre(z: Complex64, w: Complex64, n: usize) -> Result<LogComplex> {
    let uv = z * w.conj();
    if !outside_s1(uv) {
        return Err(Error::Region(format!("z conj w = {uv} is not outside S_1")));
    }
    check_pair(z, w)?;
    let nf = n as f64;
    let expo = LogComplex::new(nf - nf / 2.0 * (z.norm_sqr() + w.norm_sqr()), 0.0);
    Ok(sqrt_n_over_2pi(nf) / lc(uv - 1.0) * lc(uv).powi(n as i64) * expo)
}

fn check_lemniscate(z: Complex64, w: Complex64, p: &EnsembleParams) -> Result<()> {
    p.validate()?;
    p.require_a_above_one("the lemniscate asymptotic")?;
    if p.d < 2 {
        return Err(Error::InvalidParams("the lemniscate formula needs d > 1".into()));
    }
    for x in [z, w] {
        if !outside_sad(x, p.a, p.d) {
            return Err(Error::Region(format!("{x} is not outside S_a^d for a = {}, d = {}", p.a, p.d)));
        }
    }
    if let Some(ci) = p.integer_c() {
        if ci < p.d {
            let x = (z.powu(p.d) - p.a) * (w.conj().powu(p.d) - p.a);
            if !outside_s1(x) {
                return Err(Error::Region(format!("(z^d - a)(conj w^d - a) = {x} is not outside S_1")));
            }
        }
    }
    check_pair(z, w)
}

struct LemTerms {
    zd: Complex64,
    wd: Complex64,
    bz: Complex64,
    bw: Complex64,
}

impl LemTerms {
    fn new(z: Complex64, w: Complex64, a: f64, d: u32) -> Self {
        let zd = z.powu(d);
        let wd = w.conj().powu(d);
        LemTerms { zd, wd, bz: a * zd + 1.0 - a * a, bw: a * wd + 1.0 - a * a }
    }

    // (num / den) of the last fraction
    fn fraction(&self, z: Complex64, w: Complex64, a: f64, d: u32, typo: TypoReading) -> Result<LogComplex> {
        let inv = 1.0 / d as f64;
        let num = self.bz * self.bw - self.zd * (self.zd - a) * self.wd * (self.wd - a);
        let shift = match typo {
            TypoReading::Corrected => a,
            TypoReading::Literal => 1.0,
        };
        let mut den = LogSum::new();
        den.add(lc(self.bz).powf(inv) * lc(self.bw).powf(inv));
        den.add(-(lc(z) * lc(self.zd - a).powf(inv) * lc(w.conj()) * lc(self.wd - shift).powf(inv)));
        let den = den.value();
        if den.value.is_zero() {
            return Err(Error::Singular("vanishing denominator in the lemniscate formula".into()));
        }
        Ok(lc(num) / den.value)
    }
}

/// Macroscopic asymptotic of `K_{dN}^c(z, w)` for the lemniscate potential, product form.
pub fn asym_kernel_thm13(z: Complex64, w: Complex64, p: &EnsembleParams, typo: TypoReading) -> Result<LogComplex> {
    check_lemniscate(z, w, p)?;
    let (n, a, c, d) = (p.nf(), p.a, p.c, p.d as f64);
    let t = LemTerms::new(z, w, a, p.d);
    let x = (t.zd - a) * (t.wd - a);
    if (x - 1.0).norm() < 1e-12 {
        return Err(Error::Singular("pole of 1/((z^d - a)(conj w^d - a) - 1)".into()));
    }
    let expo = LogComplex::new(n - d * n / 2.0 * (potential_v(z, p) + potential_v(w, p)), 0.0);
    let pre = LogComplex::from_real(d) * sqrt_n_over_2pi(n) * lc(x).powi(p.n as i64) / lc(x - 1.0)
        * abs_power((z * w.conj()).norm(), c)?
        * expo;
    let charge = lc((t.zd - a) / t.bz * ((t.wd - a) / t.bw)).powf(c / d) * lc(x).powf(1.0 / d - 1.0);
    Ok(pre * charge * t.fraction(z, w, a, p.d, typo)?)
}

/// Multifold sum of induced-kernel asymptotics for `K_{dN}^c(z, w)`:
/// `d sqrt(N/2pi) X^N/(X - 1) |zw|^c e^{N - dN(V(z)+V(w))/2} sum_l (...)^{c_l} (z conj w)^l`.
pub fn asym_kernel_thm13_multifold(z: Complex64, w: Complex64, p: &EnsembleParams) -> Result<LogComplex> {
    check_lemniscate(z, w, p)?;
    let (n, a, c, d) = (p.nf(), p.a, p.c, p.d as f64);
    let t = LemTerms::new(z, w, a, p.d);
    let x = (t.zd - a) * (t.wd - a);
    if (x - 1.0).norm() < 1e-12 {
        return Err(Error::Singular("pole of 1/((z^d - a)(conj w^d - a) - 1)".into()));
    }
    let expo = LogComplex::new(n - d * n / 2.0 * (potential_v(z, p) + potential_v(w, p)), 0.0);
    let pre = LogComplex::from_real(d) * sqrt_n_over_2pi(n) * lc(x).powi(p.n as i64) / lc(x - 1.0)
        * abs_power((z * w.conj()).norm(), c)?
        * expo;
    let base = lc((t.zd - a) / t.bz * ((t.wd - a) / t.bw));
    let zw = lc(z * w.conj());
    let mut acc = LogSum::new();
    for l in 0..p.d {
        let cl = (c + l as f64 + 1.0) / d - 1.0;
        acc.add(base.powf(cl) * zw.powi(l as i64));
    }
    Ok(pre * acc.value().value)
}

/// Modulus of `K_{dN}^c(z, w)` for `z`, `w` on the droplet boundary `|z^d - a| = 1`.
pub fn boundary_modulus(z: Complex64, w: Complex64, p: &EnsembleParams, typo: TypoReading) -> Result<f64> {
    p.validate()?;
    p.require_a_above_one("the boundary modulus")?;
    if p.d < 2 {
        return Err(Error::InvalidParams("the lemniscate formula needs d > 1".into()));
    }
    for x in [z, w] {
        let r = (x.powu(p.d) - p.a).norm();
        if (r - 1.0).abs() > 1e-8 {
            return Err(Error::Region(format!("{x} is not on the droplet boundary (|z^d - a| = {r})")));
        }
    }
    check_pair(z, w)?;
    let (n, a, c, d) = (p.nf(), p.a, p.c, p.d as f64);
    let t = LemTerms::new(z, w, a, p.d);
    let x = (t.zd - a) * (t.wd - a);
    if (x - 1.0).norm() < 1e-12 {
        return Err(Error::Singular("pole of 1/((z^d - a)(conj w^d - a) - 1)".into()));
    }
    let first = abs_power((z * w.conj()).norm(), c)? / lc(x - 1.0) * lc(t.bz * t.bw).powf(-c / d);
    let v = LogComplex::from_real(d) * sqrt_n_over_2pi(n) * first * t.fraction(z, w, a, p.d, typo)?;
    Ok(v.modulus())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::exact::kernel_fullq_exact;
    use crate::orthopoly::closed_form_polysystem;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(x: Complex64, y: Complex64) -> f64 {
        (x - y).norm() / y.norm()
    }

    #[test]
    fn induced_error_matches_oracle_and_halves() {
        let (z, w) = (cx(2.0, 1.0), cx(-1.0, 2.0));
        let frozen = [0.010085814255680689, 0.005084041579584955, 0.0025525875016693167];
        for (i, n) in [50usize, 100, 200].into_iter().enumerate() {
            let p = EnsembleParams::induced(n, 1.0, 2.0).unwrap();
            let sys = closed_form_polysystem(&p, n).unwrap();
            let exact = kernel_fullq_exact(z, w, &sys).unwrap().value;
            let asym = asym_kernel_thm11(z, w, &p).unwrap();
            let err = ((exact / asym).to_complex() - 1.0).norm();
            assert!((err / frozen[i] - 1.0).abs() < 1e-6, "N={n}: {err}");
            assert!(err <= 5.0 / n as f64);
        }
    }

    #[test]
    fn formal_neutral_limit() {
        let (z, w) = (cx(1.5, 0.5), cx(-0.3, 1.4));
        let p = EnsembleParams::induced(40, 1e-9, 2.0).unwrap();
        let x = asym_kernel_thm11(z, w, &p).unwrap();
        let y = asym_kernel_ginibre(z, w, 40).unwrap();
        assert!(((x / y).to_complex() - 1.0).norm() < 1e-8);
    }

    #[test]
    fn unit_circle_modulus_is_order_sqrt_n() {
        let (z, w) = (Complex64::from_polar(1.0, 2.0), Complex64::from_polar(1.0, -2.5));
        let p = EnsembleParams::induced(100, 1.0, 2.0).unwrap();
        let m1 = asym_kernel_thm11(z, w, &p).unwrap().modulus();
        let m4 = asym_kernel_thm11(z, w, &p.with_n(400)).unwrap().modulus();
        assert!((m4 / m1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn induced_preconditions() {
        let p = EnsembleParams::induced(10, 1.0, 2.0).unwrap();
        assert!(matches!(asym_kernel_thm11(cx(0.1, 0.0), cx(2.0, 1.0), &p), Err(Error::Region(_))));
        assert!(asym_kernel_thm11(cx(2.0, 1.0), cx(2.0, 1.0), &p).is_err());
        assert!(asym_kernel_thm11(cx(2.0, 1.0), cx(1.0, 0.0), &p.with_c(0.0)).is_err());
        let pole = asym_kernel_thm11(cx(1.25, 0.0), cx(0.8, 0.0), &p);
        assert!(matches!(pole, Err(Error::Singular(_))));
    }

    fn lem() -> EnsembleParams {
        EnsembleParams::new(10, 1.0, 1.1, 2).unwrap()
    }

    fn bpt(theta: f64) -> Complex64 {
        (1.1 + Complex64::from_polar(1.0, theta)).sqrt()
    }

    #[test]
    fn lemniscate_frozen_values() {
        let p = lem();
        let (z, w) = (bpt(0.0), bpt(1.5));
        let v2 = asym_kernel_thm13(z, w, &p, TypoReading::Corrected).unwrap().to_complex();
        assert!(rel(v2, cx(5.5779413707595238, -2.8030630627860828)) < 1e-12);
        let v1 = asym_kernel_thm13_multifold(z, w, &p).unwrap().to_complex();
        assert!(rel(v1, v2) < 1e-12);
        let lit = asym_kernel_thm13(z, w, &p, TypoReading::Literal).unwrap().to_complex();
        assert!(rel(lit, cx(5.8589901180303309, -3.1940023311740041)) < 1e-12);
        let (z, w) = (cx(1.5, 0.3), cx(1.4, -0.5));
        let v2 = asym_kernel_thm13(z, w, &p, TypoReading::Corrected).unwrap().to_complex();
        assert!(rel(v2, cx(-0.03801508797277428, -0.10211252377922903)) < 1e-11);
    }

    #[test]
    fn product_and_sum_forms_agree() {
        for d in [2u32, 3, 4] {
            for c in [0.0, 0.5, 1.0, 2.0] {
                let p = EnsembleParams::new(20, c, 1.1, d).unwrap();
                let z = (1.1 + Complex64::from_polar(1.0, 0.3)).powf(1.0 / d as f64);
                let w = (1.1 + Complex64::from_polar(1.0, -1.1)).powf(1.0 / d as f64);
                let x = asym_kernel_thm13(z, w, &p, TypoReading::Corrected).unwrap().to_complex();
                let y = asym_kernel_thm13_multifold(z, w, &p).unwrap().to_complex();
                assert!(rel(x, y) < 1e-10, "d={d} c={c}");
            }
        }
    }

    #[test]
    fn boundary_modulus_specialises_product_form() {
        let p = lem();
        for (t1, t2) in [(0.0, 1.5), (0.5, -1.0), (0.3, 2.0)] {
            let (z, w) = (bpt(t1), bpt(t2));
            let full = asym_kernel_thm13(z, w, &p, TypoReading::Corrected).unwrap().modulus();
            let bm = boundary_modulus(z, w, &p, TypoReading::Corrected).unwrap();
            assert!((full / bm - 1.0).abs() < 1e-12);
            let full = asym_kernel_thm13(z, w, &p, TypoReading::Literal).unwrap().modulus();
            let bm = boundary_modulus(z, w, &p, TypoReading::Literal).unwrap();
            assert!((full / bm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_growth_is_sqrt_n() {
        let p = lem();
        let (z, w) = (bpt(0.2), bpt(1.9));
        let r = boundary_modulus(z, w, &p.with_n(160), TypoReading::Corrected).unwrap()
            / boundary_modulus(z, w, &p.with_n(40), TypoReading::Corrected).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
        assert!(boundary_modulus(cx(2.0, 0.0), w, &p, TypoReading::Corrected).is_err());
    }

    #[test]
    fn lemniscate_preconditions() {
        let p = lem();
        let inner = (1.1f64 - 0.5).sqrt();
        assert!(matches!(
            asym_kernel_thm13(cx(inner, 0.0), bpt(1.0), &p, TypoReading::Corrected),
            Err(Error::Region(_))
        ));
        let p1 = EnsembleParams::new(10, 1.0, 1.1, 1).unwrap();
        assert!(asym_kernel_thm13(bpt(0.0), bpt(1.0), &p1, TypoReading::Corrected).is_err());
    }
}
