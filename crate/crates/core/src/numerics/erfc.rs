//! Complementary error function for complex arguments.
//!
//! Accuracy on `|z| <= 10`: error below `1e-12 * max(1, |erfc z|)`.

use num_complex::Complex64;
use std::f64::consts::PI;

const MAX_ITER: usize = 5000;

/// `erfc(z)` for complex `z`.
pub fn erfc_complex(z: Complex64) -> Complex64 {
    if z.re < 0.0 {
        return Complex64::new(2.0, 0.0) - erfc_complex(-z);
    }
    if z.norm() <= 2.0 || z.re <= 1.0 {
        Complex64::new(1.0, 0.0) - erf_series(z)
    } else {
        erfc_continued_fraction(z)
    }
}

/// Maclaurin series of erf.
fn erf_series(z: Complex64) -> Complex64 {
    let z2 = z * z;
    let mut t = z;
    let mut s = z;
    for k in 1..MAX_ITER {
        t = -t * z2 / k as f64;
        let term = t / (2 * k + 1) as f64;
        s += term;
        if k > 5 && term.norm() < 1e-17 * s.norm() {
            break;
        }
    }
    s * (2.0 / PI.sqrt())
}

/// Laplace continued fraction `z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))`, for `Re z > 0`.
fn erfc_continued_fraction(z: Complex64) -> Complex64 {
    let tiny = Complex64::new(1e-300, 0.0);
    let mut f = z;
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for k in 1..MAX_ITER {
        let a = k as f64 / 2.0;
        d = z + d * a;
        if d.norm() == 0.0 {
            d = tiny;
        }
        c = z + a / c;
        if c.norm() == 0.0 {
            c = tiny;
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    (-z * z).exp() / PI.sqrt() / f
}
