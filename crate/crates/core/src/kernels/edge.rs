//! Ginibre edge kernel and boundary-rescaled exact kernels.

use super::exact::{kernel_fullq_exact, LemniscateKernel};
use crate::error::{Error, Result};
use crate::geometry::{boundary_normal, laplacian_v};
use crate::numerics::erfc_complex;
use crate::orthopoly::PolySystem;
use num_complex::Complex64;
use std::f64::consts::SQRT_2;

/// `G(z, w) erfc((z + conj w)/sqrt 2)/2` with `G(z, w) = e^{z conj w - |z|^2/2 - |w|^2/2}`.
pub fn edge_kernel_limit(z: Complex64, w: Complex64) -> Complex64 {
    let g = (z * w.conj() - z.norm_sqr() / 2.0 - w.norm_sqr() / 2.0).exp();
    g * erfc_complex((z + w.conj()) / SQRT_2) / 2.0
}

/// Boundary point and kernel for the edge rescaling.
#[derive(Clone, Copy, Debug)]
pub enum EdgeBase<'a> {
    /// `p` on the unit circle, exact induced Ginibre system.
    InducedUnitCircle { p: Complex64, sys: &'a PolySystem },
    /// `p` on `|z^d - a| = 1`, exact lemniscate kernel.
    LemniscateBoundary { p: Complex64, kernel: &'a LemniscateKernel },
}

/// Boundary-unfolded exact kernel, to be compared in modulus with [`edge_kernel_limit`].
///
/// Induced case: `K_N(p + p z/sqrt N, p + p w/sqrt N)/N`. Lemniscate case:
/// `K_{dN}(p + n z/sqrt s, p + n w/sqrt s)/s` with `s = dN Delta V(p)` and `n` the outward normal.
pub fn rescaled_kernel(base: &EdgeBase, z: Complex64, w: Complex64) -> Result<Complex64> {
    match *base {
        EdgeBase::InducedUnitCircle { p, sys } => {
            if (p.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::Region(format!("{p} is not on the unit circle")));
            }
            let s = sys.params().nf();
            let r = s.sqrt();
            let k = kernel_fullq_exact(p + p * z / r, p + p * w / r, sys)?;
            Ok(k.value.scale(1.0 / s).to_complex())
        }
        EdgeBase::LemniscateBoundary { p, kernel } => {
            let params = kernel.params();
            let normal = boundary_normal(p, params)?;
            let s = params.d as f64 * params.nf() * laplacian_v(p, params);
            let r = s.sqrt();
            let k = kernel.eval(p + normal * z / r, p + normal * w / r)?;
            Ok(k.value.scale(1.0 / s).to_complex())
        }
    }
}
