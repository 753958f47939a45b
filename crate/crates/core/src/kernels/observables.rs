//! Correlation functions and the Berezin kernel.

use crate::error::{Error, Result};
use crate::geometry::{laplacian_v, EnsembleParams};
use crate::numerics::LogComplex;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Tolerance on the imaginary part and on negativity of normalized determinants.
pub const DET_TOL: f64 = 1e-10;

/// `R_{N,k}(z_1, ..., z_k) = det[K(z_i, z_j)]`.
///
/// The matrix is normalized by its diagonal before the determinant is taken.
pub fn correlation_fn<F>(points: &[Complex64], kernel: F) -> Result<f64>
where
    F: Fn(Complex64, Complex64) -> Result<LogComplex>,
{
    let k = points.len();
    if k == 0 {
        return Ok(1.0);
    }
    let mut diag = Vec::with_capacity(k);
    for &z in points {
        let v = kernel(z, z)?;
        if v.is_zero() {
            return Ok(0.0);
        }
        let c = v.to_complex();
        if c.re < 0.0 || c.im.abs() > DET_TOL * c.re.abs() {
            return Err(Error::Precision(format!("kernel diagonal {c} at {z} is not real and nonnegative")));
        }
        diag.push(v.log_mod);
    }
    let mut m = DMatrix::<Complex64>::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            m[(i, j)] = if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                let v = kernel(points[i], points[j])?;
                LogComplex::new(v.log_mod - (diag[i] + diag[j]) / 2.0, v.phase).to_complex()
            };
        }
    }
    let det = m.determinant();
    if det.im.abs() > DET_TOL || det.re < -DET_TOL {
        return Err(Error::Precision(format!("correlation determinant {det} is not real and nonnegative")));
    }
    Ok(det.re.max(0.0) * diag.iter().sum::<f64>().exp())
}

/// Choice of `R_{N,1}(z)` in the Berezin kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum R1Mode {
    /// `K(z, z)`.
    Exact,
    /// `n Delta V(z)/2` with `n = dN` particles.
    DensityApprox,
}

/// `B_N(z, w) = |K(z, w)|^2 / R_{N,1}(z)`.
pub fn berezin<F>(z: Complex64, w: Complex64, kernel: F, mode: R1Mode, p: &EnsembleParams) -> Result<f64>
where
    F: Fn(Complex64, Complex64) -> Result<LogComplex>,
{
    let log_r1 = match mode {
        R1Mode::Exact => {
            let v = kernel(z, z)?;
            if v.is_zero() || v.to_complex().re <= 0.0 {
                return Err(Error::Degenerate(format!("R_1({z}) is not positive")));
            }
            v.log_mod
        }
        R1Mode::DensityApprox => {
            let r1 = p.d as f64 * p.nf() * laplacian_v(z, p) / 2.0;
            if r1 <= 0.0 {
                return Err(Error::Degenerate(format!("the density approximation vanishes at {z}")));
            }
            r1.ln()
        }
    };
    let k = kernel(z, w)?;
    Ok((2.0 * k.log_mod - log_r1).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::exact::kernel_fullq_exact;
    use crate::orthopoly::{closed_form_polysystem, integrate_disk, PolySystem};

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sys10() -> PolySystem {
        closed_form_polysystem(&EnsembleParams::induced(10, 1.0, 2.0).unwrap(), 10).unwrap()
    }

    #[test]
    fn one_and_two_point_functions() {
        let sys = sys10();
        let k = |z, w| kernel_fullq_exact(z, w, &sys).map(|s| s.value);
        let z = cx(0.3, 0.4);
        let r1 = correlation_fn(&[z], k).unwrap();
        assert!((r1 / k(z, z).unwrap().modulus() - 1.0).abs() < 1e-15);
        for w in [cx(0.31, 0.4), cx(-0.5, 0.2), cx(1.2, -0.9)] {
            let r2 = correlation_fn(&[z, w], k).unwrap();
            let bound = k(z, z).unwrap().modulus() * k(w, w).unwrap().modulus();
            let off = k(z, w).unwrap().modulus().powi(2);
            assert!(r2 >= 0.0);
            assert!((r2 - (bound - off)).abs() <= 1e-9 * bound);
        }
        assert_eq!(correlation_fn(&[z, z], k).unwrap(), 0.0);
    }

    #[test]
    fn cocycle_invariance() {
        let sys = sys10();
        let k = |z, w| kernel_fullq_exact(z, w, &sys).map(|s| s.value);
        let g = |z: Complex64| LogComplex::from_complex(z / z.norm());
        let kg = |z: Complex64, w: Complex64| Ok(k(z, w)? * g(z) * g(w).conj());
        let pts = [cx(0.3, 0.4), cx(-0.5, 0.2), cx(0.9, -0.6)];
        for m in 1..=3 {
            let x = correlation_fn(&pts[..m], k).unwrap();
            let y = correlation_fn(&pts[..m], kg).unwrap();
            assert!((x - y).abs() <= 1e-12 * x, "k={m}");
        }
    }

    #[test]
    fn berezin_mass_is_one() {
        let sys = sys10();
        let p = *sys.params();
        let k = |z, w| kernel_fullq_exact(z, w, &sys).map(|s| s.value);
        let z = cx(-0.2, 0.7);
        let mass = integrate_disk(|w| berezin(z, w, k, R1Mode::Exact, &p).unwrap(), cx(0.0, 0.0), 4.0, 16, 512);
        assert!((mass - 1.0).abs() < 1e-5, "{mass}");
    }

    #[test]
    fn density_approximation() {
        let p = EnsembleParams::new(600, 0.0, 1.1, 2).unwrap();
        let z = cx(0.1f64.sqrt(), 0.0);
        let b = berezin(z, z, |_, _| Ok(LogComplex::from_real(600.0)), R1Mode::DensityApprox, &p).unwrap();
        assert!((b - 600.0 * 600.0 / (2.0 * 600.0 * 2.0 * 0.1 / 2.0)).abs() < 1e-9 * b);
        assert!(berezin(cx(0.0, 0.0), z, |_, _| Ok(LogComplex::ONE), R1Mode::DensityApprox, &p).is_err());
    }
}
