//! Polar quadrature for planar Gram matrices with a power singularity at the charge.

use super::gram::{default_precision, monic_from_gram, GramMatrix};
use super::polysystem::{PolySystem, Provenance};
use crate::error::{Error, Result};
use crate::geometry::EnsembleParams;
use crate::numerics::log_gamma;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use rug::Float;
use std::f64::consts::PI;

/// Points per radial panel.
pub const GL_POINTS: usize = 64;

/// Grid and stopping rule for [`quad_polysystem`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadSpec {
    /// Radial panels at the first level.
    pub panels: usize,
    /// Minimum number of angular nodes.
    pub angular: usize,
    /// Self-convergence target between successive levels.
    pub target: f64,
    /// Largest acceptable self-convergence error.
    pub accept: f64,
    /// Number of doublings after the first level.
    pub max_refinements: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec { panels: 8, angular: 512, target: 1e-13, accept: 1e-9, max_refinements: 3 }
    }
}

/// Nodes and weights of a Gauss rule from its Jacobi matrix (Golub–Welsch).
fn golub_welsch(diag: &[f64], off: &[f64], mu0: f64) -> (Vec<f64>, Vec<f64>) {
    let n = diag.len();
    let mut j = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        j[(i, i)] = diag[i];
        if i + 1 < n {
            j[(i, i + 1)] = off[i];
            j[(i + 1, i)] = off[i];
        }
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> =
        (0..n).map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2))).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    pairs.into_iter().unzip()
}

/// Gauss–Legendre rule on `[-1, 1]`, polished by Newton steps on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let diag = vec![0.0; n];
    let off: Vec<f64> = (1..n).map(|k| k as f64 / ((4 * k * k - 1) as f64).sqrt()).collect();
    let (mut x, _) = golub_welsch(&diag, &off, 2.0);
    let mut w = vec![0.0; n];
    for (xi, wi) in x.iter_mut().zip(w.iter_mut()) {
        for _ in 0..3 {
            let (p, dp) = legendre(n, *xi);
            *xi -= p / dp;
        }
        let (_, dp) = legendre(n, *xi);
        *wi = 2.0 / ((1.0 - *xi * *xi) * dp * dp);
    }
    (x, w)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss–Jacobi rule for the weight `(1 - x)^alpha (1 + x)^beta` on `[-1, 1]`.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(Error::InvalidParams(format!("Gauss-Jacobi needs alpha, beta > -1, got {alpha}, {beta}")));
    }
    let ab = alpha + beta;
    let diag: Vec<f64> = (0..n)
        .map(|k| {
            let k = k as f64;
            if k == 0.0 {
                (beta - alpha) / (ab + 2.0)
            } else {
                (beta * beta - alpha * alpha) / ((2.0 * k + ab) * (2.0 * k + ab + 2.0))
            }
        })
        .collect();
    let off: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            let s = 2.0 * k + ab;
            (4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0))).sqrt()
        })
        .collect();
    let ln_mu0 = (ab + 1.0) * 2f64.ln() + log_gamma(alpha + 1.0)? + log_gamma(beta + 1.0)? - log_gamma(ab + 2.0)?;
    Ok(golub_welsch(&diag, &off, ln_mu0.exp()))
}

/// Radial nodes and weights for `int_0^R rho^beta f(rho) drho`, Gauss–Jacobi on the first panel.
fn radial_rule(r_max: f64, panels: usize, beta: f64) -> Result<Vec<(f64, f64)>> {
    let width = r_max / panels as f64;
    let (xj, wj) = gauss_jacobi(GL_POINTS, 0.0, beta)?;
    let (xl, wl) = gauss_legendre(GL_POINTS);
    let mut out = Vec::with_capacity(panels * GL_POINTS);
    let half = width / 2.0;
    let scale = half.powf(beta + 1.0);
    for (x, w) in xj.iter().zip(&wj) {
        out.push((half * (1.0 + x), w * scale));
    }
    for p in 1..panels {
        let mid = (p as f64 + 0.5) * width;
        for (x, w) in xl.iter().zip(&wl) {
            let r = mid + half * x;
            out.push((r, w * half * r.powf(beta)));
        }
    }
    Ok(out)
}

fn angular_nodes(min: usize, n: f64, a: f64, r_max: f64, n_max: usize) -> usize {
    let need = (2.0 * n * a * r_max + 2.0 * n_max as f64 + 64.0).ceil() as usize;
    min.max(need.next_power_of_two())
}

/// `<z^i, z^l>` for `i, l <= n_max` under `|z - a|^{2c} e^{-N|z|^2} dA`, on one grid.
fn assemble(p: &EnsembleParams, n_max: usize, panels: usize, angular: usize, r_max: f64) -> Result<Vec<Vec<f64>>> {
    let size = n_max + 1;
    let rule = radial_rule(r_max, panels, 2.0 * p.c + 1.0)?;
    let nf = p.nf();
    let trig: Vec<Complex64> = (0..angular).map(|m| Complex64::from_polar(1.0, 2.0 * PI * m as f64 / angular as f64)).collect();
    let partial: Vec<Vec<Complex64>> = rule
        .par_iter()
        .map(|&(r, w)| {
            let mut acc = vec![Complex64::new(0.0, 0.0); size * size];
            let mut zp = vec![Complex64::new(0.0, 0.0); size];
            for e in &trig {
                let z = p.a + r * e;
                let g = (-nf * z.norm_sqr()).exp();
                zp[0] = Complex64::new(g, 0.0);
                for i in 1..size {
                    zp[i] = zp[i - 1] * z;
                }
                let mut zb = Complex64::new(1.0, 0.0);
                for l in 0..size {
                    for i in l..size {
                        acc[i * size + l] += zp[i] * zb;
                    }
                    zb *= z.conj();
                }
            }
            let f = w * 2.0 / angular as f64;
            acc.iter().map(|v| v * f).collect()
        })
        .collect();
    let mut m = vec![vec![0.0; size]; size];
    for block in &partial {
        for i in 0..size {
            for l in 0..=i {
                m[i][l] += block[i * size + l].re;
            }
        }
    }
    for i in 0..size {
        for l in 0..i {
            m[l][i] = m[i][l];
        }
    }
    Ok(m)
}

fn self_convergence(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut e: f64 = 0.0;
    for i in 0..n {
        for l in 0..n {
            let s = (b[i][i] * b[l][l]).sqrt();
            e = e.max((a[i][l] - b[i][l]).abs() / s);
        }
    }
    e
}

/// Gram matrix of `z^0..z^{n_max}` for `|z - a|^{2c} e^{-N|z|^2}`, real `c > -1`, by refined quadrature.
pub fn quad_gram(p: &EnsembleParams, n_max: usize, spec: &QuadSpec) -> Result<GramMatrix> {
    p.validate()?;
    if p.d != 1 {
        return Err(Error::InvalidParams("the quadrature path builds induced systems (d = 1)".into()));
    }
    let nf = p.nf();
    let r_max = p.a + ((n_max as f64 + p.c.max(0.0)) / nf).sqrt() + 7.0 / nf.sqrt();
    let mut panels = spec.panels.max(1);
    let mut angular = angular_nodes(spec.angular, nf, p.a, r_max, n_max);
    let mut prev = assemble(p, n_max, panels, angular, r_max)?;
    let mut err = f64::INFINITY;
    for _ in 0..spec.max_refinements.max(1) {
        panels *= 2;
        angular *= 2;
        let next = assemble(p, n_max, panels, angular, r_max)?;
        err = self_convergence(&prev, &next);
        prev = next;
        if err <= spec.target {
            break;
        }
    }
    if !(err <= spec.accept) {
        return Err(Error::Quadrature(format!(
            "Gram quadrature self-convergence {err:.3e} above {:.1e} after {} refinements",
            spec.accept, spec.max_refinements
        )));
    }
    let bits = default_precision(n_max);
    let entries = prev.iter().map(|row| row.iter().map(|&x| Float::with_val(bits, x)).collect()).collect();
    Ok(GramMatrix {
        params: *p,
        provenance: Provenance::QuadratureGeneralC,
        precision_bits: bits,
        entries,
        entry_tolerance: err.max(f64::EPSILON),
    })
}

/// Monic system for real `c > -1` from the quadrature Gram matrix, degrees `0..=n_max`.
pub fn quad_polysystem(p: &EnsembleParams, n_max: usize, spec: &QuadSpec) -> Result<PolySystem> {
    let m = quad_gram(p, n_max + 1, spec)?;
    Ok(monic_from_gram(&m)?.truncated(n_max))
}

/// `int f dA` over the disk `|z - center| <= r_max`, `dA = d^2 z / pi`, with `panels`
/// Gauss–Legendre panels in the radius and `angular` trapezoid nodes.
pub fn integrate_disk<F>(f: F, center: Complex64, r_max: f64, panels: usize, angular: usize) -> f64
where
    F: Fn(Complex64) -> f64 + Sync,
{
    let (xl, wl) = gauss_legendre(GL_POINTS);
    let width = r_max / panels as f64;
    let half = width / 2.0;
    let nodes: Vec<(f64, f64)> = (0..panels)
        .flat_map(|p| {
            let mid = (p as f64 + 0.5) * width;
            xl.iter().zip(&wl).map(move |(x, w)| (mid + half * x, w * half)).collect::<Vec<_>>()
        })
        .collect();
    let rows: Vec<f64> = nodes
        .par_iter()
        .map(|&(r, w)| {
            let mut s = 0.0;
            for m in 0..angular {
                s += f(center + Complex64::from_polar(r, 2.0 * PI * m as f64 / angular as f64));
            }
            s * w * r * 2.0 / angular as f64
        })
        .collect();
    rows.iter().sum()
}
