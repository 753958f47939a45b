//! Large-N expansions of `psi_N`, `h_N` and `Q(N, N zeta)`.

use crate::error::{Error, Result};
use crate::geometry::{outside_s1, outside_sa, EnsembleParams};
use crate::numerics::LogComplex;
use num_complex::Complex64;
use std::f64::consts::PI;

fn check_offset(offset: i32, allowed: &[i32]) -> Result<()> {
    if allowed.contains(&offset) {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("offset {offset} not in {allowed:?}")))
    }
}

fn check_exterior(z: Complex64, p: &EnsembleParams) -> Result<()> {
    p.validate()?;
    p.require_a_above_one("the expansion")?;
    if !outside_sa(z, p.a) {
        return Err(Error::Region(format!("{z} is not outside S_a for a = {}", p.a)));
    }
    Ok(())
}

/// `z^{N+c+offset} ((z - a)/(z - 1/a))^c`, principal powers factor by factor.
fn psi_lead(z: Complex64, p: &EnsembleParams, offset: i32) -> LogComplex {
    let c = p.c;
    let lz = LogComplex::from_complex(z);
    let ratio = LogComplex::from_complex((z - p.a) / (z - 1.0 / p.a));
    lz.powf(p.nf() + c + offset as f64) * ratio.powf(c)
}

/// Two-term expansion of `psi_{N+offset}(z)`, `offset` in `{-1, 0, 1}`, `z` outside `S_a`.
pub fn asym_psi(offset: i32, z: Complex64, p: &EnsembleParams) -> Result<LogComplex> {
    check_offset(offset, &[-1, 0, 1])?;
    check_exterior(z, p)?;
    let c = p.c;
    let u = Complex64::new(1.0, 0.0) - p.a * z;
    let inner = (1.0 + c) / 2.0 / u + c / (1.0 - p.a * p.a) + offset as f64;
    let corr = Complex64::new(1.0, 0.0) - c / u * inner / p.nf();
    Ok(psi_lead(z, p, offset) * LogComplex::from_complex(corr))
}

/// Leading term of `psi_N - z psi_{N-1}` (`offset = 0`) or `psi_{N+1} - z psi_N` (`offset = 1`).
pub fn asym_psi_diff(offset: i32, z: Complex64, p: &EnsembleParams) -> Result<LogComplex> {
    check_offset(offset, &[0, 1])?;
    check_exterior(z, p)?;
    if p.c == 0.0 {
        return Ok(LogComplex::ZERO);
    }
    let tail = LogComplex::from_complex(p.c / ((p.a * z - 1.0) * p.nf()));
    Ok(psi_lead(z, p, offset) * tail)
}

/// Correction coefficient of `h_{N+offset}`.
pub fn h_correction(offset: i32, p: &EnsembleParams) -> f64 {
    let c = p.c;
    let kappa = if offset == 1 { 13.0 / 12.0 } else { 1.0 / 12.0 };
    c / (p.a * p.a - 1.0) + c * (c - 1.0) / 2.0 + kappa
}

/// Two-term expansion `e^{-N} sqrt(2 pi/N) a^{2c} [1 + (...)/N]` of `h_{N+offset}`.
pub fn asym_h(offset: i32, p: &EnsembleParams) -> Result<LogComplex> {
    check_offset(offset, &[-1, 0, 1])?;
    p.validate()?;
    p.require_a_above_one("the norm expansion")?;
    let n = p.nf();
    let lead = -n + 0.5 * (2.0 * PI / n).ln() + 2.0 * p.c * p.a.ln();
    Ok(LogComplex::new(lead, 0.0) * LogComplex::from_real(1.0 + h_correction(offset, p) / n))
}

/// Leading forms of `1/((N+c)/N h_{N-1} - h_N)` and `N (h_N/h_{N-1}) / ((N+c+1)/N h_N - h_{N+1})`.
pub fn asym_h_combos(p: &EnsembleParams) -> Result<(LogComplex, LogComplex)> {
    p.validate()?;
    p.require_a_above_one("the norm combinations")?;
    if p.c == 0.0 {
        return Err(Error::Degenerate("the norm combinations have vanishing denominators at c = 0".into()));
    }
    let n = p.nf();
    let base = LogComplex::from_real(1.0 / p.c)
        * LogComplex::new(-2.0 * p.c * p.a.ln() - 0.5 * (2.0 * PI).ln() + n, 0.0);
    Ok((base * LogComplex::new(1.5 * n.ln(), 0.0), base * LogComplex::new(2.5 * n.ln(), 0.0)))
}

/// Leading value of `P_{N+1}(a) / P_N(a)`.
pub fn ratio_p_at_a(p: &EnsembleParams) -> Result<f64> {
    p.validate()?;
    p.require_a_above_one("the ratio P_{N+1}(a)/P_N(a)")?;
    Ok(p.a)
}

/// Two-term expansion of `Q(N + offset, N zeta)`, `offset` in `{0, 1, 2}`, `zeta` outside `S_1`.
pub fn asym_q(offset: i32, n: usize, zeta: Complex64) -> Result<LogComplex> {
    check_offset(offset, &[0, 1, 2])?;
    if n == 0 {
        return Err(Error::InvalidParams("N must be positive".into()));
    }
    if !outside_s1(zeta) {
        return Err(Error::Region(format!("{zeta} is not outside S_1")));
    }
    let nf = n as f64;
    let one = Complex64::new(1.0, 0.0);
    let u = one - zeta;
    let corr = match offset {
        0 => one - (1.0 / 12.0 + zeta / (u * u)) / nf,
        1 => one + (5.0 / 12.0 - one / (u * u)) / nf,
        _ => one - (2.0 / u + 1.0 / 12.0 + zeta / (u * u)) / nf,
    };
    let m = nf + offset as f64;
    let lz = LogComplex::from_complex(zeta);
    let front = LogComplex::exp(Complex64::new(nf, 0.0) - zeta * nf) * lz.powf(m)
        / LogComplex::from_complex(zeta - 1.0)
        * LogComplex::new(-0.5 * (2.0 * PI * m).ln(), 0.0);
    Ok(front * LogComplex::from_complex(corr))
}
