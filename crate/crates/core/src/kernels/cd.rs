//! Christoffel–Darboux form of `dbar_w K~` and its finite-difference counterpart.

use super::exact::kernel_tilde_exact;
use crate::error::{Error, Result};
use crate::numerics::{LogComplex, LogSum, Summed};
use crate::orthopoly::PolySystem;
use num_complex::Complex64;

/// Relative size below which an h-combination counts as vanishing.
pub const DEGENERATE_RATIO: f64 = 1e-12;

/// `scale * h_{k-1} - h_k` in log form, with its degeneracy test.
fn h_combo(sys: &PolySystem, k: usize, scale: f64) -> Result<LogComplex> {
    let r = (sys.log_norm(k) - sys.log_norm(k - 1)).exp();
    let diff = scale - r;
    if diff.abs() <= DEGENERATE_RATIO * scale.max(r) {
        return Err(Error::Degenerate(format!(
            "({scale}) h_{} - h_{k} vanishes to 12 digits",
            k - 1
        )));
    }
    Ok(LogComplex::new(sys.log_norm(k - 1), 0.0) * LogComplex::from_real(diff))
}

fn diff_term(x: LogComplex, z: Complex64, y: LogComplex, flag: &mut bool) -> LogComplex {
    let mut acc = LogSum::new();
    acc.add(x);
    acc.add(-(LogComplex::from_complex(z) * y));
    let s = acc.value();
    *flag |= s.cancelled;
    s.value
}

/// Right-hand side of the Christoffel–Darboux identity for `dbar_w K~_N(z, w)`.
///
/// Uses `psi_{N-1}, psi_N, psi_{N+1}`, the exact `psi_N'`, the norms `h_{N-1}, h_N, h_{N+1}`
/// and `P_{N+1}(a)/P_N(a)`, so the system must reach degree `N + 1`.
pub fn cd_rhs(z: Complex64, w: Complex64, sys: &PolySystem) -> Result<Summed> {
    let p = *sys.params();
    if sys.provenance().is_lemniscate() {
        return Err(Error::InvalidParams("the identity is stated for induced Ginibre systems".into()));
    }
    let n = p.n;
    if sys.max_degree() < n + 1 {
        return Err(Error::InvalidParams(format!("the identity needs degrees up to N + 1 = {}", n + 1)));
    }
    let nf = p.nf();
    let den1 = h_combo(sys, n, (nf + p.c) / nf)?;
    let den2 = h_combo(sys, n + 1, (nf + p.c + 1.0) / nf)?;
    let pa_n = sys.p_at_a(n)?;
    if pa_n.is_zero() {
        return Err(Error::Degenerate(format!("P_{n}(a) vanishes")));
    }
    let ratio_a = sys.p_at_a(n + 1)? / pa_n;
    let psi_z = sys.psi_upto(z, n + 1)?;
    let psi_w = sys.psi_upto(w, n)?;
    let dpsi_w = sys.psi_deriv_upto(w, n)?;
    let mut cancelled = psi_z.cancelled || psi_w.cancelled || dpsi_w.cancelled;
    let d0 = diff_term(psi_z.values[n], z, psi_z.values[n - 1], &mut cancelled);
    let d1 = diff_term(psi_z.values[n + 1], z, psi_z.values[n], &mut cancelled);
    let hr = LogComplex::new(sys.log_norm(n) - sys.log_norm(n - 1), 0.0).scale(nf);
    let t1 = dpsi_w.values[n].conj() * d0 / den1;
    let t2 = ratio_a * hr / den2 * psi_w.values[n - 1].conj() * d1;
    let mut acc = LogSum::new();
    acc.add(t1);
    acc.add(-t2);
    let s = acc.value();
    let e = LogComplex::exp(-nf * z * w.conj());
    Ok(Summed { value: s.value * e, cancelled: cancelled || s.cancelled })
}

/// Central-difference `dbar = (d_x + i d_y)/2` of `f` at `w` with step `h`.
pub fn fd_dbar<F>(f: F, w: Complex64, h: f64) -> Result<LogComplex>
where
    F: Fn(Complex64) -> Result<LogComplex>,
{
    let base = f(w)?;
    let rel = |x: Complex64| -> Result<Complex64> {
        let v = f(x)?;
        Ok(if base.is_zero() { v.to_complex() } else { (v / base).to_complex() })
    };
    let dx = (rel(w + h)? - rel(w - h)?) / (2.0 * h);
    let dy = (rel(w + Complex64::new(0.0, h))? - rel(w - Complex64::new(0.0, h))?) / (2.0 * h);
    let d = (dx + Complex64::i() * dy) / 2.0;
    Ok(if base.is_zero() { LogComplex::from_complex(d) } else { LogComplex::from_complex(d) * base })
}

/// Default finite-difference step `1e-5 (1 + |w|)`.
pub fn fd_step(w: Complex64) -> f64 {
    1e-5 * (1.0 + w.norm())
}

/// Richardson-extrapolated [`fd_dbar`]: `(4 D(h/2) - D(h))/3`.
pub fn fd_dbar_richardson<F>(f: F, w: Complex64, h: f64) -> Result<LogComplex>
where
    F: Fn(Complex64) -> Result<LogComplex>,
{
    let coarse = fd_dbar(&f, w, h)?.to_complex();
    let fine = fd_dbar(&f, w, h / 2.0)?.to_complex();
    Ok(LogComplex::from_complex((4.0 * fine - coarse) / 3.0))
}

/// Finite-difference `dbar_w K~_N(z, w)`.
pub fn fd_dbar_tilde(z: Complex64, w: Complex64, sys: &PolySystem, h: f64) -> Result<LogComplex> {
    fd_dbar(|x| kernel_tilde_exact(z, x, sys).map(|s| s.value), w, h)
}
