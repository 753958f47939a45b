//! Exact finite-N kernels summed from a [`PolySystem`].

use crate::error::{Error, Result};
use crate::geometry::EnsembleParams;
use crate::numerics::{LogComplex, LogSum, Summed};
use crate::orthopoly::polysystem::power;
use crate::orthopoly::{gram_lemniscate_polysystem, quad_polysystem, PolySystem, QuadSpec};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

fn require_induced(sys: &PolySystem) -> Result<()> {
    if sys.provenance().is_lemniscate() {
        return Err(Error::InvalidParams("this kernel needs an induced Ginibre system (d = 1)".into()));
    }
    Ok(())
}

fn require_degree(sys: &PolySystem, kmax: usize) -> Result<()> {
    if sys.max_degree() < kmax {
        return Err(Error::InvalidParams(format!(
            "the polynomial system reaches degree {}, the kernel needs {kmax}",
            sys.max_degree()
        )));
    }
    Ok(())
}

/// `sum_{j<n} P_j(z) conj(P_j(w)) / h_j`.
pub(crate) fn poly_sum(sys: &PolySystem, z: Complex64, w: Complex64, n: usize) -> Result<Summed> {
    require_degree(sys, n - 1)?;
    let pz = sys.p_upto(z, n - 1)?;
    let pw = if z == w { pz.clone() } else { sys.p_upto(w, n - 1)? };
    let mut acc = LogSum::new();
    for j in 0..n {
        acc.add(pz.values[j] * pw.values[j].conj() * LogComplex::new(-sys.log_norm(j), 0.0));
    }
    let s = acc.value();
    Ok(Summed { value: s.value, cancelled: s.cancelled || pz.cancelled || pw.cancelled })
}

fn times(s: Summed, f: LogComplex) -> Summed {
    Summed { value: s.value * f, cancelled: s.cancelled }
}

/// `|x|^c` with `0^0 = 1`.
pub(crate) fn abs_power(x: f64, c: f64) -> Result<LogComplex> {
    if c == 0.0 {
        return Ok(LogComplex::ONE);
    }
    if x == 0.0 {
        if c < 0.0 {
            return Err(Error::Singular("negative power of zero".into()));
        }
        return Ok(LogComplex::ZERO);
    }
    Ok(LogComplex::new(c * x.abs().ln(), 0.0))
}

/// `K~(z, w) = ((z-a)(conj w - a))^c e^{-N z conj w} sum_{j<N} P_j(z) conj P_j(w) / h_j`.
pub fn kernel_tilde_exact(z: Complex64, w: Complex64, sys: &PolySystem) -> Result<Summed> {
    require_induced(sys)?;
    let p = sys.params();
    let nf = p.nf();
    let x = (z - p.a) * (w.conj() - p.a);
    let pre = power(LogComplex::from_complex(x), p.c) * LogComplex::exp(-nf * z * w.conj());
    Ok(times(poly_sum(sys, z, w, p.n)?, pre))
}

/// Reproducing kernel for `Q_c`, weights attached: `(|X|/X)^c e^{-N(|z|^2 + |w|^2 - 2 z conj w)/2} K~(z, w)`
/// with `X = (z - a)(conj w - a)`.
pub fn kernel_fullq_exact(z: Complex64, w: Complex64, sys: &PolySystem) -> Result<Summed> {
    require_induced(sys)?;
    let p = sys.params();
    let x = (z - p.a) * (w.conj() - p.a);
    let unit = if p.c == 0.0 {
        LogComplex::ONE
    } else if x.norm() == 0.0 {
        if p.integer_c().is_some() {
            return Ok(Summed { value: LogComplex::ZERO, cancelled: false });
        }
        return Err(Error::Singular(format!("the weight |z - a|^c has a branch point at z = a = {}", p.a)));
    } else {
        abs_power(x.norm(), p.c)? / power(LogComplex::from_complex(x), p.c)
    };
    let expo = LogComplex::exp(-p.nf() / 2.0 * (z.norm_sqr() + w.norm_sqr() - 2.0 * z * w.conj()));
    Ok(times(kernel_tilde_exact(z, w, sys)?, unit * expo))
}

/// `K^(z, w) = e^{-N(|z-a|^2 + |w-a|^2 - 2(z-a)(conj w - a))/2} K~(a - z, a - w)`.
pub fn kernel_hat_exact(z: Complex64, w: Complex64, sys: &PolySystem) -> Result<Summed> {
    let p = sys.params();
    let (za, wa) = (z - p.a, w - p.a);
    let expo = LogComplex::exp(-p.nf() / 2.0 * (za.norm_sqr() + wa.norm_sqr() - 2.0 * za * wa.conj()));
    let a = Complex64::new(p.a, 0.0);
    Ok(times(kernel_tilde_exact(a - z, a - w, sys)?, expo))
}

/// `e^{-N(|z-a|^2 + |w-a|^2)/2} sum_{j<N} p_j(z) conj p_j(w)`, `p_j(z) = P_j(a - z)/sqrt(h_j)`.
pub(crate) fn hat_sum(z: Complex64, w: Complex64, sys: &PolySystem) -> Result<Summed> {
    require_induced(sys)?;
    let p = sys.params();
    let a = Complex64::new(p.a, 0.0);
    let expo = LogComplex::new(-p.nf() / 2.0 * ((z - a).norm_sqr() + (w - a).norm_sqr()), 0.0);
    Ok(times(poly_sum(sys, a - z, a - w, p.n)?, expo))
}

/// `K^(z, w)` by direct summation, `(z conj w)^c e^{-N(|z-a|^2 + |w-a|^2)/2} sum_j p_j(z) conj p_j(w)`.
pub fn kernel_hat_direct(z: Complex64, w: Complex64, sys: &PolySystem) -> Result<Summed> {
    let c = sys.params().c;
    Ok(times(hat_sum(z, w, sys)?, power(LogComplex::from_complex(z * w.conj()), c)))
}

/// Construction route for the lemniscate kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemniscateSource {
    /// `d` induced kernels with charges `(c + l + 1)/d - 1`, polynomials by quadrature.
    MultifoldQuadrature,
    /// Exact Gram matrix of the lemniscate weight, integer `c`.
    GramLemniscate,
}

impl LemniscateSource {
    pub fn id(self) -> &'static str {
        match self {
            LemniscateSource::MultifoldQuadrature => "multifold_quadrature",
            LemniscateSource::GramLemniscate => "gram_lemniscate",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "multifold_quadrature" | "multifold" => Some(LemniscateSource::MultifoldQuadrature),
            "gram_lemniscate" | "gram" => Some(LemniscateSource::GramLemniscate),
            _ => None,
        }
    }
}

/// Charges `(c + l + 1)/d - 1`, `l = 0..d`.
pub fn fractional_charges(p: &EnsembleParams) -> Vec<f64> {
    (0..p.d).map(|l| (p.c + l as f64 + 1.0) / p.d as f64 - 1.0).collect()
}

/// `K_{dN}^c` for the lemniscate potential with its polynomial systems prebuilt.
#[derive(Clone, Debug)]
pub struct LemniscateKernel {
    params: EnsembleParams,
    source: LemniscateSource,
    systems: Vec<PolySystem>,
}

impl LemniscateKernel {
    pub fn new(p: &EnsembleParams, source: LemniscateSource) -> Result<Self> {
        Self::with_options(p, source, &QuadSpec::default(), None)
    }

    pub fn with_options(
        p: &EnsembleParams,
        source: LemniscateSource,
        spec: &QuadSpec,
        precision_bits: Option<u32>,
    ) -> Result<Self> {
        p.validate()?;
        let systems = match source {
            LemniscateSource::MultifoldQuadrature => fractional_charges(p)
                .into_iter()
                .map(|cl| quad_polysystem(&EnsembleParams::induced(p.n, cl, p.a)?, p.n - 1, spec))
                .collect::<Result<Vec<_>>>()?,
            LemniscateSource::GramLemniscate => {
                vec![gram_lemniscate_polysystem(p, p.d as usize * p.n - 1, precision_bits)?]
            }
        };
        Ok(LemniscateKernel { params: *p, source, systems })
    }

    pub fn params(&self) -> &EnsembleParams {
        &self.params
    }

    pub fn source(&self) -> LemniscateSource {
        self.source
    }

    pub fn systems(&self) -> &[PolySystem] {
        &self.systems
    }

    /// Largest certified orthogonality defect of the underlying systems.
    pub fn tolerance(&self) -> f64 {
        self.systems.iter().map(|s| s.tolerance()).fold(0.0, f64::max)
    }

    /// `K_{dN}^c(z, w)`.
    pub fn eval(&self, z: Complex64, w: Complex64) -> Result<Summed> {
        let p = &self.params;
        match self.source {
            LemniscateSource::GramLemniscate => {
                let sys = &self.systems[0];
                let expo = LogComplex::new(
                    -p.nf() / 2.0 * ((z.powu(p.d) - p.a).norm_sqr() + (w.powu(p.d) - p.a).norm_sqr()),
                    0.0,
                );
                let pre = abs_power(z.norm() * w.norm(), p.c)? * expo;
                Ok(times(poly_sum(sys, z, w, p.d as usize * p.n)?, pre))
            }
            LemniscateSource::MultifoldQuadrature => self.eval_multifold(z, w),
        }
    }

    // d (z conj w)^{d-1} (|zw|/(z conj w))^c sum_l K^_N^{c_l}(z^d, w^d), where the factor
    // (z^d conj w^d)^{c_l} of each term is exp(d c_l Log(z conj w))
    fn eval_multifold(&self, z: Complex64, w: Complex64) -> Result<Summed> {
        let p = &self.params;
        let d = p.d as f64;
        let (zd, wd) = (z.powu(p.d), w.powu(p.d));
        let zw = z * w.conj();
        let mut acc = LogSum::new();
        let mut cancelled = false;
        for (l, sys) in self.systems.iter().enumerate() {
            let s = hat_sum(zd, wd, sys)?;
            cancelled |= s.cancelled;
            let cl = sys.params().c;
            let factor = if zw.norm() == 0.0 {
                // limit of d |zw|^c (z conj w)^l
                if l == 0 { abs_power(0.0, p.c)?.scale(d) } else { LogComplex::ZERO }
            } else {
                let lg = LogComplex::from_complex(zw).ln();
                abs_power(zw.norm(), p.c)?
                    * LogComplex::exp((d - 1.0) * lg - p.c * lg + d * cl * lg)
                    * LogComplex::from_real(d)
            };
            acc.add(s.value * factor);
        }
        let s = acc.value();
        Ok(Summed { value: s.value, cancelled: cancelled || s.cancelled })
    }
}

/// `K_{dN}^c(z, w)` built from scratch by the given route.
pub fn kernel_lemniscate_exact(
    z: Complex64,
    w: Complex64,
    p: &EnsembleParams,
    source: LemniscateSource,
) -> Result<Summed> {
    LemniscateKernel::new(p, source)?.eval(z, w)
}
