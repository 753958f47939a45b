//! Closed form of the monic polynomials and norms for a unit charge (`c = 1`).

use crate::error::{Error, Result};
use crate::geometry::EnsembleParams;
use crate::numerics::{ln_factorial, logc_sub, reg_inc_gamma_q_upto, LogComplex, LogSum, Summed};
use num_complex::Complex64;

/// Radius below which `P_k` is replaced by its first-order expansion at `a`.
pub const NEAR_CHARGE: f64 = 1e-6;

/// Precomputed `Q(m, N a^2)` for a `c = 1` system.
#[derive(Clone, Debug)]
pub(crate) struct ClosedFormC1 {
    n: f64,
    a: f64,
    max_degree: usize,
    /// `Q(m, N a^2)` for `m = 0..=max_degree + 2`.
    qa: Vec<LogComplex>,
}

/// Values of several polynomials at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyValues {
    pub values: Vec<LogComplex>,
    /// Set when some value lost 12 or more digits to cancellation.
    pub cancelled: bool,
}

fn require_c1(p: &EnsembleParams) -> Result<()> {
    p.validate()?;
    if p.c != 1.0 || p.d != 1 {
        return Err(Error::InvalidParams(format!(
            "the closed form needs c = 1 and d = 1, got c = {}, d = {}",
            p.c, p.d
        )));
    }
    Ok(())
}

impl ClosedFormC1 {
    pub(crate) fn new(p: &EnsembleParams, max_degree: usize) -> Result<Self> {
        require_c1(p)?;
        let n = p.nf();
        let qa = reg_inc_gamma_q_upto(max_degree + 2, Complex64::new(n * p.a * p.a, 0.0));
        Ok(ClosedFormC1 { n, a: p.a, max_degree, qa })
    }

    pub(crate) fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// `ln h_k`.
    pub(crate) fn log_norm(&self, k: usize) -> f64 {
        ln_factorial(k as u64 + 1) - (k as f64 + 2.0) * self.n.ln() + self.qa[k + 2].log_mod - self.qa[k + 1].log_mod
    }

    fn check_degree(&self, k: usize) -> Result<()> {
        if k > self.max_degree {
            return Err(Error::InvalidParams(format!("degree {k} exceeds the system's maximum {}", self.max_degree)));
        }
        Ok(())
    }

    /// `F_k(z) = e^{aN(z-a)} Q(k+1, Naz) / Q(k+1, Na^2) a^{k+1}` for `k <= kmax`,
    /// and the second part of `F_k'`, `N a^{k+2} e^{-Na^2} (Naz)^k / (k! Q(k+1, Na^2))`.
    fn f_terms(&self, z: Complex64, kmax: usize) -> (Vec<LogComplex>, Vec<LogComplex>) {
        let (n, a) = (self.n, self.a);
        let qz = reg_inc_gamma_q_upto(kmax + 1, z * (n * a));
        let la = a.ln();
        let lz = LogComplex::from_complex(z);
        let shift = z * (a * n) - a * a * n;
        let mut f = Vec::with_capacity(kmax + 1);
        let mut g = Vec::with_capacity(kmax + 1);
        for k in 0..=kmax {
            let kf = k as f64;
            let base = LogComplex::exp(shift + (kf + 1.0) * la) * qz[k + 1] / self.qa[k + 1];
            f.push(if a == 0.0 { LogComplex::ZERO } else { base });
            let lead = n.ln() + (kf + 2.0) * la - n * a * a + kf * (n * a).ln() - ln_factorial(k as u64);
            let t = LogComplex::new(lead, 0.0) * lz.powi(k as i64) / self.qa[k + 1];
            g.push(if a == 0.0 { LogComplex::ZERO } else { t });
        }
        (f, g)
    }

    /// `psi_k(z) = (z - a) P_k(z) = z^{k+1} - F_k(z)` for `k <= kmax`.
    pub(crate) fn psi_all(&self, z: Complex64, kmax: usize) -> Result<PolyValues> {
        self.check_degree(kmax)?;
        let (f, _) = self.f_terms(z, kmax);
        let lz = LogComplex::from_complex(z);
        let mut cancelled = false;
        let values = (0..=kmax)
            .map(|k| {
                let s = logc_sub(lz.powi(k as i64 + 1), f[k]);
                cancelled |= s.cancelled;
                s.value
            })
            .collect();
        Ok(PolyValues { values, cancelled })
    }

    /// `psi_k'(z) = (k+1) z^k - aN F_k(z) + N a^{k+2} e^{-Na^2} (Naz)^k / (k! Q(k+1, Na^2))`.
    pub(crate) fn psi_deriv_all(&self, z: Complex64, kmax: usize) -> Result<PolyValues> {
        self.check_degree(kmax)?;
        let (f, g) = self.f_terms(z, kmax);
        let lz = LogComplex::from_complex(z);
        let an = LogComplex::from_real(self.a * self.n);
        let mut cancelled = false;
        let values = (0..=kmax)
            .map(|k| {
                let mut acc = LogSum::new();
                acc.add(lz.powi(k as i64).scale(k as f64 + 1.0));
                acc.add(-(an * f[k]));
                acc.add(g[k]);
                let s = acc.value();
                cancelled |= s.cancelled;
                s.value
            })
            .collect();
        Ok(PolyValues { values, cancelled })
    }

    /// `Q(k, Na^2) / Q(k+1, Na^2)`.
    fn ratio_r(&self, k: usize) -> f64 {
        (self.qa[k] / self.qa[k + 1]).to_complex().re
    }

    /// `P_k(a) = a^k [(k+1) - N a^2 Q(k, Na^2)/Q(k+1, Na^2)]`.
    pub(crate) fn p_at_a(&self, k: usize) -> LogComplex {
        let (n, a) = (self.n, self.a);
        if a == 0.0 {
            return if k == 0 { LogComplex::ONE } else { LogComplex::ZERO };
        }
        let bracket = (k as f64 + 1.0) - n * a * a * self.ratio_r(k);
        LogComplex::from_real(bracket) * LogComplex::from_real(a).powi(k as i64)
    }

    /// `P_k'(a) = a^{k-1} [k(k+1) - N^2 a^4 R_k + N k a^2 (1 - R_k)] / 2`, `R_k = Q(k)/Q(k+1)`.
    pub(crate) fn p_deriv_at_a(&self, k: usize) -> LogComplex {
        let (n, a) = (self.n, self.a);
        if a == 0.0 {
            return if k == 1 { LogComplex::ONE } else { LogComplex::ZERO };
        }
        let kf = k as f64;
        let r = self.ratio_r(k);
        let bracket = kf * (kf + 1.0) - n * n * a.powi(4) * r + n * kf * a * a * (1.0 - r);
        LogComplex::from_real(bracket / 2.0) * LogComplex::from_real(a).powi(k as i64 - 1)
    }

    fn near_charge(&self, z: Complex64) -> bool {
        (z - self.a).norm() < NEAR_CHARGE * (1.0 + self.a.abs())
    }

    /// `P_k(z)` for `k <= kmax`.
    pub(crate) fn p_all(&self, z: Complex64, kmax: usize) -> Result<PolyValues> {
        self.check_degree(kmax)?;
        let dz = z - self.a;
        if self.near_charge(z) {
            let mut cancelled = false;
            let values = (0..=kmax)
                .map(|k| {
                    let s = first_order(self.p_at_a(k), self.p_deriv_at_a(k), dz);
                    cancelled |= s.cancelled;
                    s.value
                })
                .collect();
            return Ok(PolyValues { values, cancelled });
        }
        let psi = self.psi_all(z, kmax)?;
        let inv = LogComplex::from_complex(dz).recip();
        Ok(PolyValues { values: psi.values.into_iter().map(|v| v * inv).collect(), cancelled: psi.cancelled })
    }

    /// `P_k'(z)` for `k <= kmax`.
    pub(crate) fn p_deriv_all(&self, z: Complex64, kmax: usize) -> Result<PolyValues> {
        self.check_degree(kmax)?;
        if self.near_charge(z) {
            let values = (0..=kmax).map(|k| self.p_deriv_at_a(k)).collect();
            return Ok(PolyValues { values, cancelled: false });
        }
        let p = self.p_all(z, kmax)?;
        let dpsi = self.psi_deriv_all(z, kmax)?;
        let inv = LogComplex::from_complex(z - self.a).recip();
        let mut cancelled = p.cancelled || dpsi.cancelled;
        let values = (0..=kmax)
            .map(|k| {
                let s = logc_sub(dpsi.values[k], p.values[k]);
                cancelled |= s.cancelled;
                s.value * inv
            })
            .collect();
        Ok(PolyValues { values, cancelled })
    }
}

fn first_order(v: LogComplex, dv: LogComplex, dz: Complex64) -> Summed {
    let mut acc = LogSum::new();
    acc.add(v);
    acc.add(dv * LogComplex::from_complex(dz));
    acc.value()
}

/// Monic `P_k(z)` for `c = 1`, from the incomplete-gamma closed form.
pub fn exact_p_c1(k: usize, z: Complex64, p: &EnsembleParams) -> Result<Summed> {
    let sys = ClosedFormC1::new(p, k)?;
    let v = sys.p_all(z, k)?;
    Ok(Summed { value: v.values[k], cancelled: v.cancelled })
}

/// `ln h_k` for `c = 1`.
pub fn exact_h_c1(k: usize, p: &EnsembleParams) -> Result<f64> {
    Ok(ClosedFormC1::new(p, k)?.log_norm(k))
}
