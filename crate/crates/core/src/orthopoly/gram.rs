//! Exact Gram matrices of monomials and the monic systems they define.

use super::polysystem::{PolySystem, Provenance};
use crate::error::{Error, Result};
use crate::geometry::EnsembleParams;
use rug::ops::Pow;
use rug::Float;

const MAX_SERIES_TERMS: usize = 1_000_000;

/// Real symmetric Gram matrix `M_jk = <z^j, z^k>` in extended precision.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    pub params: EnsembleParams,
    pub provenance: Provenance,
    pub precision_bits: u32,
    pub entries: Vec<Vec<Float>>,
    /// Relative accuracy of the entries, normalized by `sqrt(M_jj M_kk)`.
    pub entry_tolerance: f64,
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.entries[j][k].to_f64()
    }
}

/// Default working precision for degree `n_max`.
pub fn default_precision(n_max: usize) -> u32 {
    (8 * n_max as u32).max(128)
}

fn integer_charge(p: &EnsembleParams) -> Result<u32> {
    p.validate()?;
    p.integer_c()
        .ok_or_else(|| Error::InvalidParams(format!("the exact Gram path needs a nonnegative integer c, got {}", p.c)))
}

fn binomial(n: u32, k: u32, prec: u32) -> Float {
    let mut b = Float::with_val(prec, 1);
    for i in 0..k {
        b *= n - i;
        b /= i + 1;
    }
    b
}

/// Gram matrix of `z^0..z^{n_max}` for the weight `|z - a|^{2c} e^{-N|z|^2}`, integer `c >= 0`.
pub fn gram_inner_products_induced(p: &EnsembleParams, n_max: usize, precision_bits: u32) -> Result<GramMatrix> {
    let c = integer_charge(p)?;
    if p.d != 1 {
        return Err(Error::InvalidParams("the induced Gram matrix needs d = 1".into()));
    }
    let prec = precision_bits;
    let n = Float::with_val(prec, p.n);
    let size = n_max + 1;
    let top = n_max + c as usize;
    // <z^m, z^m> = m! / N^{m+1}
    let mut gauss = Vec::with_capacity(top + 1);
    let mut g = Float::with_val(prec, 1) / &n;
    for m in 0..=top {
        if m > 0 {
            g *= m as u32;
            g /= &n;
        }
        gauss.push(g.clone());
    }
    // coefficients of (z - a)^c in z^p
    let minus_a = Float::with_val(prec, -p.a);
    let w: Vec<Float> = (0..=c)
        .map(|q| {
            let pw = Float::with_val(prec, (&minus_a).pow(c - q));
            binomial(c, q, prec) * pw
        })
        .collect();
    let mut entries = vec![vec![Float::with_val(prec, 0); size]; size];
    for j in 0..size {
        for k in 0..=j {
            let mut s = Float::with_val(prec, 0);
            for (pp, wp) in w.iter().enumerate() {
                // j + pp = k + q
                let Some(q) = (j + pp).checked_sub(k) else { continue };
                if q > c as usize {
                    continue;
                }
                s += Float::with_val(prec, wp * &w[q]) * &gauss[j + pp];
            }
            entries[j][k] = s.clone();
            entries[k][j] = s;
        }
    }
    Ok(GramMatrix { params: *p, provenance: Provenance::GramIntegerC, precision_bits: prec, entries, entry_tolerance: 0.0 })
}

/// Gram matrix of `z^0..z^{n_max}` for the weight `|z|^{2c} e^{-N|z^d - a|^2}`, integer `c >= 0`.
pub fn gram_inner_products_lemniscate(p: &EnsembleParams, n_max: usize, precision_bits: u32) -> Result<GramMatrix> {
    let c = integer_charge(p)? as usize;
    let prec = precision_bits;
    let d = p.d as usize;
    let size = n_max + 1;
    let nf = Float::with_val(prec, p.n);
    let a = Float::with_val(prec, p.a);
    let na = Float::with_val(prec, &nf * &a);
    let na2 = Float::with_val(prec, &na * &a);
    let ln_n = Float::with_val(prec, nf.ln_ref());
    let ln_na = Float::with_val(prec, na.ln_ref());
    let ln_d = Float::with_val(prec, Float::ln_u(p.d));
    let tail = Float::with_val(prec, Float::i_exp(1, -(prec as i32) - 8)).min(&Float::with_val(prec, 1e-30));
    let half = Float::with_val(prec, 0.5);

    let mut entries = vec![vec![Float::with_val(prec, 0); size]; size];
    for j in 0..size {
        for k in (0..=j).rev() {
            if (j - k) % d != 0 {
                continue;
            }
            let delta = (j - k) / d;
            if p.a == 0.0 && delta != 0 {
                continue;
            }
            // m-th term: e^{-Na^2} (Na)^{m+n} / (m! n!) Gamma(x) / (d N^x), n = m + delta,
            // x = (j + k + d(m+n) + 2c + 2) / (2d)
            let x_of = |m: usize| {
                let q = j + k + d * (2 * m + delta) + 2 * c + 2;
                Float::with_val(prec, q) / (2 * d) as u32
            };
            let mut x = x_of(0);
            let mut ln_t = Float::with_val(prec, -&na2);
            if delta > 0 {
                ln_t += Float::with_val(prec, &ln_na * delta as u32);
            }
            ln_t -= Float::with_val(prec, Float::with_val(prec, delta + 1).ln_gamma());
            ln_t += Float::with_val(prec, x.ln_gamma_ref());
            ln_t -= &ln_d;
            ln_t -= Float::with_val(prec, &x * &ln_n);
            let mut t = ln_t.exp();
            let mut sum = t.clone();
            if p.a != 0.0 {
                let mut m = 0usize;
                loop {
                    let ratio = Float::with_val(prec, &na2 * &x) / ((m + 1) * (m + delta + 1)) as u32;
                    t *= &ratio;
                    sum += &t;
                    m += 1;
                    x = x_of(m);
                    if ratio < half && t < Float::with_val(prec, &sum * &tail) {
                        break;
                    }
                    if m > MAX_SERIES_TERMS {
                        return Err(Error::Truncation(format!(
                            "lemniscate moment ({j},{k}) did not converge after {MAX_SERIES_TERMS} terms"
                        )));
                    }
                }
            }
            entries[j][k] = sum.clone();
            entries[k][j] = sum;
        }
    }
    Ok(GramMatrix {
        params: *p,
        provenance: Provenance::GramLemniscateIntegerC,
        precision_bits: prec,
        entries,
        entry_tolerance: 0.0,
    })
}

/// Monic orthogonal polynomials and norms from `M = L D L^T`: the rows of `L^{-1}`
/// are the coefficient vectors and `h_j = D_jj`.
pub fn monic_from_gram(m: &GramMatrix) -> Result<PolySystem> {
    let n = m.size();
    if n == 0 {
        return Err(Error::InvalidParams("empty Gram matrix".into()));
    }
    let prec = m.precision_bits;
    let zero = || Float::with_val(prec, 0);
    let mut l = vec![vec![zero(); n]; n];
    let mut dg: Vec<Float> = Vec::with_capacity(n);
    for j in 0..n {
        let mut dj = m.entries[j][j].clone();
        for k in 0..j {
            let t = Float::with_val(prec, &l[j][k] * &l[j][k]) * &dg[k];
            dj -= t;
        }
        if dj <= 0 {
            return Err(Error::Precision(format!(
                "Gram matrix lost positivity at pivot {j} with {prec} bits; raise precision_bits"
            )));
        }
        l[j][j] = Float::with_val(prec, 1);
        for i in j + 1..n {
            let mut s = m.entries[i][j].clone();
            for k in 0..j {
                let t = Float::with_val(prec, &l[i][k] * &l[j][k]) * &dg[k];
                s -= t;
            }
            l[i][j] = s / &dj;
        }
        dg.push(dj);
    }
    // C = L^{-1}, unit lower triangular
    let mut coeffs: Vec<Vec<Float>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut row = vec![zero(); j + 1];
        row[j] = Float::with_val(prec, 1);
        for i in (0..j).rev() {
            let mut s = zero();
            for k in i..j {
                s += Float::with_val(prec, &l[j][k] * &coeffs[k][i]);
            }
            row[i] = -s;
        }
        coeffs.push(row);
    }

    // residual orthogonality |(C M C^T)_jk| / sqrt(h_j h_k)
    let cm: Vec<Vec<Float>> = coeffs
        .iter()
        .map(|row| {
            (0..n)
                .map(|col| {
                    let mut s = zero();
                    for (i, ci) in row.iter().enumerate() {
                        s += Float::with_val(prec, ci * &m.entries[i][col]);
                    }
                    s
                })
                .collect()
        })
        .collect();
    let mut residual: f64 = 0.0;
    for j in 0..n {
        for k in 0..j {
            let mut s = zero();
            for (i, ci) in coeffs[k].iter().enumerate() {
                s += Float::with_val(prec, ci * &cm[j][i]);
            }
            let scale = Float::with_val(prec, &dg[j] * &dg[k]).sqrt();
            residual = residual.max(Float::with_val(prec, s / scale).abs().to_f64());
        }
    }
    let allowed = 10f64.powf(-0.2 * prec as f64);
    if residual > allowed.max(1e-300) {
        return Err(Error::Precision(format!(
            "orthogonality residual {residual:.3e} exceeds {allowed:.3e} at {prec} bits; raise precision_bits"
        )));
    }

    // amplification of entry errors into cross inner products
    let mut tolerance = residual.max(f64::MIN_POSITIVE);
    if m.entry_tolerance > 0.0 {
        let sq: Vec<f64> = (0..n).map(|i| m.get(i, i).sqrt()).collect();
        let spread: Vec<f64> = coeffs
            .iter()
            .enumerate()
            .map(|(j, row)| {
                let s: f64 = row.iter().enumerate().map(|(i, ci)| ci.to_f64().abs() * sq[i]).sum();
                s / dg[j].to_f64().sqrt()
            })
            .collect();
        let amp = spread.iter().cloned().fold(0.0f64, f64::max);
        tolerance = tolerance.max(m.entry_tolerance * amp * amp);
    }

    let first_moments = (0..n).map(|i| m.entries[i][0].clone()).collect();
    Ok(PolySystem::from_coefficients(m.params, m.provenance, prec, tolerance, coeffs, &dg, first_moments))
}

/// Induced system for integer `c` via its exact Gram matrix, degrees `0..=max_degree`.
pub fn gram_polysystem(p: &EnsembleParams, max_degree: usize, precision_bits: Option<u32>) -> Result<PolySystem> {
    let bits = precision_bits.unwrap_or_else(|| default_precision(max_degree + 1));
    let m = gram_inner_products_induced(p, max_degree + 1, bits)?;
    Ok(monic_from_gram(&m)?.truncated(max_degree))
}

/// Lemniscate system for integer `c` via its exact Gram matrix, degrees `0..=max_degree`.
pub fn gram_lemniscate_polysystem(
    p: &EnsembleParams,
    max_degree: usize,
    precision_bits: Option<u32>,
) -> Result<PolySystem> {
    let bits = precision_bits.unwrap_or_else(|| default_precision(max_degree + 1));
    let m = gram_inner_products_lemniscate(p, max_degree + 1, bits)?;
    Ok(monic_from_gram(&m)?.truncated(max_degree))
}
