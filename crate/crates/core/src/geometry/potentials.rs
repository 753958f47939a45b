use super::params::EnsembleParams;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Slack for boundary membership of the closed droplet.
pub const BOUNDARY_SLACK: f64 = 1e-12;

/// Induced Ginibre potential `|z|^2 - (2c/N) log|z - a|`.
pub fn potential_qc(z: Complex64, p: &EnsembleParams) -> Result<f64> {
    if p.c == 0.0 {
        return Ok(z.norm_sqr());
    }
    let r = (z - p.a).norm();
    if r == 0.0 {
        return Err(Error::Singular(format!("Q_c has a logarithmic pole at z = a = {}", p.a)));
    }
    Ok(z.norm_sqr() - 2.0 * p.c / p.nf() * r.ln())
}

/// Lemniscate potential `|z^d - a|^2 / d`.
pub fn potential_v(z: Complex64, p: &EnsembleParams) -> f64 {
    (z.powu(p.d) - p.a).norm_sqr() / p.d as f64
}

/// `V(z) - (2c/N) log|z|`.
pub fn potential_vc(z: Complex64, p: &EnsembleParams) -> Result<f64> {
    if p.c == 0.0 {
        return Ok(potential_v(z, p));
    }
    let r = z.norm();
    if r == 0.0 {
        return Err(Error::Singular("V_c has a logarithmic pole at z = 0".into()));
    }
    Ok(potential_v(z, p) - 2.0 * p.c / p.nf() * r.ln())
}

/// Density of the equilibrium measure, `d |z|^{2d-2}`.
pub fn laplacian_v(z: Complex64, p: &EnsembleParams) -> f64 {
    p.d as f64 * z.norm().powi(2 * p.d as i32 - 2)
}

/// Membership in the closed droplet `|z^d - a| <= 1`.
pub fn in_droplet(z: Complex64, p: &EnsembleParams) -> bool {
    (z.powu(p.d) - p.a).norm() <= 1.0 + BOUNDARY_SLACK
}

/// Outward unit normal of the droplet boundary at `pt`.
pub fn boundary_normal(pt: Complex64, p: &EnsembleParams) -> Result<Complex64> {
    let u = pt.powu(p.d) - p.a;
    if (u.norm() - 1.0).abs() > 1e-8 {
        return Err(Error::Region(format!("{pt} is not on the droplet boundary (|z^d - a| = {})", u.norm())));
    }
    let g = u * pt.conj().powu(p.d - 1);
    let m = g.norm();
    if m == 0.0 {
        return Err(Error::Degenerate("vanishing gradient of V at the boundary point".into()));
    }
    Ok(g / m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(n: usize, c: f64, a: f64, d: u32) -> EnsembleParams {
        EnsembleParams::new(n, c, a, d).unwrap()
    }

    #[test]
    fn qc_examples() {
        let p = params(10, 1.0, 2.0, 1);
        let v = potential_qc(Complex64::new(0.0, 0.0), &p).unwrap();
        assert!((v - (-0.2 * 2f64.ln())).abs() < 1e-15);
        assert!((v + 0.138629).abs() < 1e-6);
        assert!(potential_qc(Complex64::new(2.0, 0.0), &p).is_err());
        let z = Complex64::new(1.0 + p.a, 0.0);
        assert!((potential_qc(z, &p).unwrap() - z.norm_sqr()).abs() < 1e-14);
        let p0 = params(10, 0.0, 2.0, 1);
        let z = Complex64::new(-0.3, 0.8);
        assert_eq!(potential_qc(z, &p0).unwrap(), z.norm_sqr());
        assert_eq!(potential_qc(Complex64::new(2.0, 0.0), &p0).unwrap(), 4.0);
    }

    #[test]
    fn v_examples() {
        let p = params(5, 1.0, 1.1, 2);
        let z = Complex64::new((p.a + 1.0f64).sqrt(), 0.0);
        assert!((potential_v(z, &p) - 0.5).abs() < 1e-15);
        assert!((potential_v(Complex64::new(0.0, 0.0), &p) - 1.21 / 2.0).abs() < 1e-15);
        let p1 = params(5, 1.0, 2.0, 1);
        let z = Complex64::new(0.4, -1.3);
        assert!((potential_v(z, &p1) - (z - 2.0).norm_sqr()).abs() < 1e-15);
        assert!(potential_vc(Complex64::new(0.0, 0.0), &p).is_err());
        let vc = potential_vc(Complex64::new(2.0, 0.0), &p).unwrap();
        assert!((vc - (potential_v(Complex64::new(2.0, 0.0), &p) - 0.4 * 2f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn laplacian_examples() {
        for d in 1..5 {
            let p = params(1, 0.0, 1.1, d);
            assert!((laplacian_v(Complex64::from_polar(1.0, 0.7), &p) - d as f64).abs() < 1e-14);
        }
        let p = params(1, 0.0, 2.0, 1);
        assert_eq!(laplacian_v(Complex64::new(5.0, 3.0), &p), 1.0);
        let p3 = params(1, 0.0, 1.1, 3);
        assert!((laplacian_v(Complex64::new(0.0, 2.0), &p3) - 48.0).abs() < 1e-12);
    }

    #[test]
    fn laplacian_matches_finite_difference() {
        // Delta V = (1/4)(d_xx + d_yy) V in the dA = d^2z/pi normalization
        let p = params(1, 0.0, 1.1, 3);
        let z = Complex64::new(1.3, 0.4);
        let h = 1e-3;
        let f = |dz: Complex64| potential_v(z + dz, &p);
        let lap = (f(Complex64::new(h, 0.0)) + f(Complex64::new(-h, 0.0)) + f(Complex64::new(0.0, h))
            + f(Complex64::new(0.0, -h))
            - 4.0 * f(Complex64::new(0.0, 0.0)))
            / (h * h);
        assert!((lap / 4.0 - laplacian_v(z, &p)).abs() < 1e-5 * laplacian_v(z, &p));
    }

    #[test]
    fn droplet_membership() {
        let p = params(1, 0.0, 1.1, 2);
        assert!(in_droplet(Complex64::new((p.a + 1.0f64).sqrt(), 0.0), &p));
        assert!(!in_droplet(Complex64::new(0.0, 0.0), &p));
        let q = params(1, 0.0, 0.5, 1);
        assert!(in_droplet(Complex64::new(0.0, 0.0), &q));
    }

    #[test]
    fn normals() {
        let disk = params(1, 0.0, 0.0, 1);
        let n = boundary_normal(Complex64::new(1.0, 0.0), &disk).unwrap();
        assert!((n - 1.0).norm() < 1e-15);
        let p = params(1, 0.0, 1.1, 2);
        let pt = Complex64::new((p.a + 1.0f64).sqrt(), 0.0);
        let n = boundary_normal(pt, &p).unwrap();
        assert!((n - 1.0).norm() < 1e-15);
        let shifted = params(1, 0.0, 2.0, 1);
        let n = boundary_normal(Complex64::new(3.0, 0.0), &shifted).unwrap();
        assert!((n - 1.0).norm() < 1e-15);
        assert!(boundary_normal(Complex64::new(0.5, 0.0), &p).is_err());
    }

    proptest! {
        #[test]
        fn droplet_rotation_symmetry(x in -2.0f64..2.0, y in -2.0f64..2.0, d in 1u32..6, a in 0.0f64..2.0) {
            let p = params(1, 0.0, a, d);
            let z = Complex64::new(x, y);
            let u = (z.powu(d) - a).norm();
            prop_assume!((u - 1.0).abs() > 1e-9);
            let w = z * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / d as f64);
            prop_assert_eq!(in_droplet(z, &p), in_droplet(w, &p));
        }

        #[test]
        fn normal_matches_gradient(t in -3.1f64..3.1, d in 1u32..5, a in 1.05f64..2.5) {
            let p = params(1, 0.0, a, d);
            let pt = (Complex64::new(a, 0.0) + Complex64::from_polar(1.0, t)).powf(1.0 / d as f64);
            let n = boundary_normal(pt, &p).unwrap();
            let h = 1e-6;
            let gx = (potential_v(pt + h, &p) - potential_v(pt - h, &p)) / (2.0 * h);
            let gy = (potential_v(pt + Complex64::new(0.0, h), &p) - potential_v(pt - Complex64::new(0.0, h), &p)) / (2.0 * h);
            let g = Complex64::new(gx, gy);
            let angle = (n / (g / g.norm())).arg().abs();
            prop_assert!(angle < 1e-6);
        }
    }
}
