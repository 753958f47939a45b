//! Regularized upper incomplete gamma `Q(n, w) = Gamma(n, w) / Gamma(n)` for
//! integer `n` and complex `w`, returned in the log domain.

use super::gamma::log_gamma_pos;
use super::logc::{LogComplex, LogSum};
use num_complex::Complex64;

const CF_MAX_ITER: usize = 10_000;
const SERIES_MAX_ITER: usize = 100_000;

/// `Q(n, w)`. `Q(0, w)` is taken as 0.
pub fn reg_inc_gamma_q(n: u32, w: Complex64) -> LogComplex {
    if n == 0 {
        return LogComplex::ZERO;
    }
    if w.re == 0.0 && w.im == 0.0 {
        return LogComplex::ONE;
    }
    let nf = n as f64;
    let r = w.norm();
    if r <= nf {
        one_minus(series_p(n, w))
    } else if w.re > nf {
        continued_fraction(n, w).unwrap_or_else(|| direct_sum(n, w))
    } else {
        direct_sum(n, w)
    }
}

/// `Q(n, w)` for every `n` in `0..=n_max` (index = `n`).
///
/// Cheaper than repeated calls: partial exponential sums below `|w|`,
/// downward recurrence of the complement above it.
pub fn reg_inc_gamma_q_upto(n_max: usize, w: Complex64) -> Vec<LogComplex> {
    let mut out = vec![LogComplex::ZERO; n_max + 1];
    if n_max == 0 {
        return out;
    }
    if w.re == 0.0 && w.im == 0.0 {
        for q in out.iter_mut().skip(1) {
            *q = LogComplex::ONE;
        }
        return out;
    }
    let r = w.norm();
    let split = (r.ceil() as usize).max(1).min(n_max + 1);
    let lw = LogComplex::from_complex(w).ln();

    if split > 1 {
        let mut acc = LogSum::new();
        for n in 1..split {
            let k = n - 1;
            acc.add(exp_term(k, w, lw));
            out[n] = acc.value().value;
        }
    }
    if split <= n_max {
        let mut p = series_p(n_max as u32, w);
        out[n_max] = one_minus(p);
        for n in (split..n_max).rev() {
            let mut acc = LogSum::new();
            acc.add(p);
            acc.add(exp_term(n, w, lw));
            p = acc.value().value;
            out[n] = one_minus(p);
        }
    }
    out
}

/// `e^{-w} w^k / k!` in the log domain, `lw = Log w`.
fn exp_term(k: usize, w: Complex64, lw: Complex64) -> LogComplex {
    let kf = k as f64;
    LogComplex::new(-w.re + kf * lw.re - log_gamma_pos(kf + 1.0), -w.im + kf * lw.im)
}

/// Lower regularized function `P(n, w)` via its power series, for `|w| <= n`.
fn series_p(n: u32, w: Complex64) -> LogComplex {
    let nf = n as f64;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for j in 1..SERIES_MAX_ITER {
        term = term * w / (nf + j as f64);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    let lw = LogComplex::from_complex(w).ln();
    let pre = LogComplex::new(-w.re + nf * lw.re - log_gamma_pos(nf + 1.0), -w.im + nf * lw.im);
    pre * LogComplex::from_complex(sum)
}

/// `1 - p` without overflow when `|p|` is huge.
fn one_minus(p: LogComplex) -> LogComplex {
    if p.is_zero() {
        return LogComplex::ONE;
    }
    if p.log_mod <= 0.0 {
        LogComplex::from_complex(Complex64::new(1.0, 0.0) - p.to_complex())
    } else {
        let inv = p.recip().to_complex();
        -p * LogComplex::from_complex(Complex64::new(1.0, 0.0) - inv)
    }
}

/// Legendre continued fraction for `Gamma(n, w)`, evaluated by modified Lentz.
fn continued_fraction(n: u32, w: Complex64) -> Option<LogComplex> {
    let a = n as f64;
    let tiny = 1e-300;
    let mut b = w + 1.0 - a;
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = Complex64::new(1.0, 0.0) / b;
    let mut h = d;
    for i in 1..=CF_MAX_ITER {
        let fi = i as f64;
        let an = -fi * (fi - a);
        b += 2.0;
        d = d * an + b;
        if d.norm() < tiny {
            d = Complex64::new(tiny, 0.0);
        }
        c = b + an / c;
        if c.norm() < tiny {
            c = Complex64::new(tiny, 0.0);
        }
        d = Complex64::new(1.0, 0.0) / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            let lw = LogComplex::from_complex(w).ln();
            let pre = LogComplex::new(-w.re + a * lw.re - log_gamma_pos(a), -w.im + a * lw.im);
            return Some(pre * LogComplex::from_complex(h));
        }
    }
    None
}

/// `e^{-w} sum_{k<n} w^k / k!`.
fn direct_sum(n: u32, w: Complex64) -> LogComplex {
    let lw = LogComplex::from_complex(w).ln();
    let mut acc = LogSum::new();
    for k in 0..n as usize {
        acc.add(exp_term(k, w, lw));
    }
    acc.value().value
}
