use super::closed_form::{ClosedFormC1, PolyValues};
use crate::error::{Error, Result};
use crate::geometry::EnsembleParams;
use crate::numerics::{LogComplex, LogSum};
use num_complex::Complex64;
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::f64::consts::LN_10;

/// How a system was constructed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedFormC1,
    GramIntegerC,
    GramLemniscateIntegerC,
    QuadratureGeneralC,
}

impl Provenance {
    pub fn id(self) -> &'static str {
        match self {
            Provenance::ClosedFormC1 => "closed_form_c1",
            Provenance::GramIntegerC => "gram_integer_c",
            Provenance::GramLemniscateIntegerC => "gram_lemniscate_integer_c",
            Provenance::QuadratureGeneralC => "quadrature_general_c",
        }
    }

    /// Lemniscate systems use the weight `|z|^{2c} e^{-N|z^d - a|^2}`, the others `|z - a|^{2c} e^{-N|z|^2}`.
    pub fn is_lemniscate(self) -> bool {
        self == Provenance::GramLemniscateIntegerC
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Repr {
    ClosedForm(ClosedFormC1),
    Coefficients {
        /// `coeffs[j][i]` is the coefficient of `z^i` in `P_j`.
        coeffs: Vec<Vec<Float>>,
        /// First column `<z^i, 1>` of the Gram matrix the system came from.
        first_moments: Vec<Float>,
    },
}

/// Monic orthogonal polynomials `P_0..P_n` with squared norms `h_j`.
#[derive(Clone, Debug)]
pub struct PolySystem {
    params: EnsembleParams,
    max_degree: usize,
    provenance: Provenance,
    precision_bits: u32,
    tolerance: f64,
    log_norms: Vec<f64>,
    repr: Repr,
}

/// Numerical check of the Christoffel–Darboux hypotheses for one degree.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HypothesisRow {
    pub j: usize,
    /// `<z psi_j, phi_0>`, absent when the Gram data does not reach degree `j + 1`.
    pub z_psi_phi0: Option<LogComplex>,
    /// `P_j(a)`.
    pub p_at_a: LogComplex,
}

impl HypothesisRow {
    /// Both quantities are nonzero (to 1e-300 in modulus).
    pub fn holds(&self) -> bool {
        let nz = |v: LogComplex| v.is_finite() && v.log_mod > -690.0;
        nz(self.p_at_a) && self.z_psi_phi0.map(nz).unwrap_or(true)
    }
}

pub(crate) fn float_to_logc(re: &Float, im: &Float) -> LogComplex {
    if re.is_zero() && im.is_zero() {
        return LogComplex::ZERO;
    }
    let prec = re.prec().max(im.prec());
    let r = Float::with_val(prec, re.hypot_ref(im));
    let phase = Float::with_val(prec, im.atan2_ref(re));
    LogComplex::new(r.ln().to_f64(), phase.to_f64())
}

fn complex_to_logc(v: &Complex) -> LogComplex {
    float_to_logc(v.real(), v.imag())
}

fn horner(coeffs: &[Float], z: &Complex, prec: u32) -> Complex {
    let mut acc = Complex::with_val(prec, (0, 0));
    for c in coeffs.iter().rev() {
        acc *= z;
        acc += c;
    }
    acc
}

fn horner_deriv(coeffs: &[Float], z: &Complex, prec: u32) -> Complex {
    let mut acc = Complex::with_val(prec, (0, 0));
    for (i, c) in coeffs.iter().enumerate().skip(1).rev() {
        acc *= z;
        acc += Float::with_val(prec, c * i as u32);
    }
    acc
}

impl PolySystem {
    pub(crate) fn from_closed_form(params: EnsembleParams, cf: ClosedFormC1) -> Self {
        let max_degree = cf.max_degree();
        let log_norms = (0..=max_degree).map(|k| cf.log_norm(k)).collect();
        PolySystem {
            params,
            max_degree,
            provenance: Provenance::ClosedFormC1,
            precision_bits: 53,
            tolerance: 1e-10,
            log_norms,
            repr: Repr::ClosedForm(cf),
        }
    }

    pub(crate) fn from_coefficients(
        params: EnsembleParams,
        provenance: Provenance,
        precision_bits: u32,
        tolerance: f64,
        coeffs: Vec<Vec<Float>>,
        norms: &[Float],
        first_moments: Vec<Float>,
    ) -> Self {
        let log_norms = norms.iter().map(|h| Float::with_val(precision_bits, h.ln_ref()).to_f64()).collect();
        PolySystem {
            params,
            max_degree: coeffs.len() - 1,
            provenance,
            precision_bits,
            tolerance,
            log_norms,
            repr: Repr::Coefficients { coeffs, first_moments },
        }
    }

    /// Keeps degrees `0..=max_degree`.
    pub fn truncated(mut self, max_degree: usize) -> Self {
        if max_degree >= self.max_degree {
            return self;
        }
        self.max_degree = max_degree;
        self.log_norms.truncate(max_degree + 1);
        if let Repr::Coefficients { coeffs, .. } = &mut self.repr {
            coeffs.truncate(max_degree + 1);
        }
        self
    }

    pub fn params(&self) -> &EnsembleParams {
        &self.params
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    /// Certified bound on `|<P_j, P_k>| / sqrt(h_j h_k)`, `j != k`.
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// `ln h_j`.
    pub fn log_norm(&self, j: usize) -> f64 {
        self.log_norms[j]
    }

    pub fn log_norms(&self) -> &[f64] {
        &self.log_norms
    }

    /// Monomial coefficients of `P_j` (coefficient paths only).
    pub fn coefficients(&self, j: usize) -> Option<&[Float]> {
        match &self.repr {
            Repr::Coefficients { coeffs, .. } => coeffs.get(j).map(|c| c.as_slice()),
            Repr::ClosedForm(_) => None,
        }
    }

    fn check_degree(&self, kmax: usize) -> Result<()> {
        if kmax > self.max_degree {
            return Err(Error::InvalidParams(format!("degree {kmax} exceeds the system's maximum {}", self.max_degree)));
        }
        Ok(())
    }

    fn to_rug(&self, z: Complex64) -> Complex {
        Complex::with_val(self.precision_bits, (z.re, z.im))
    }

    /// `P_0(z), ..., P_kmax(z)`.
    pub fn p_upto(&self, z: Complex64, kmax: usize) -> Result<PolyValues> {
        self.check_degree(kmax)?;
        match &self.repr {
            Repr::ClosedForm(cf) => cf.p_all(z, kmax),
            Repr::Coefficients { coeffs, .. } => {
                let zr = self.to_rug(z);
                let values = coeffs[..=kmax].iter().map(|c| complex_to_logc(&horner(c, &zr, self.precision_bits))).collect();
                Ok(PolyValues { values, cancelled: false })
            }
        }
    }

    pub fn p_all(&self, z: Complex64) -> Result<PolyValues> {
        self.p_upto(z, self.max_degree)
    }

    /// `P_0'(z), ..., P_kmax'(z)`.
    pub fn p_deriv_upto(&self, z: Complex64, kmax: usize) -> Result<PolyValues> {
        self.check_degree(kmax)?;
        match &self.repr {
            Repr::ClosedForm(cf) => cf.p_deriv_all(z, kmax),
            Repr::Coefficients { coeffs, .. } => {
                let zr = self.to_rug(z);
                let values =
                    coeffs[..=kmax].iter().map(|c| complex_to_logc(&horner_deriv(c, &zr, self.precision_bits))).collect();
                Ok(PolyValues { values, cancelled: false })
            }
        }
    }

    /// `P_j(z)`.
    pub fn eval(&self, j: usize, z: Complex64) -> Result<LogComplex> {
        Ok(self.p_upto(z, j)?.values[j])
    }

    /// `W(z) = (z - a)^c` (`z^c` for lemniscate systems), principal branch for non-integer `c`.
    pub fn weight_root(&self, z: Complex64) -> LogComplex {
        let base = if self.provenance.is_lemniscate() { z } else { z - self.params.a };
        power(LogComplex::from_complex(base), self.params.c)
    }

    /// `W'(z)`.
    fn weight_root_deriv(&self, z: Complex64) -> LogComplex {
        let c = self.params.c;
        if c == 0.0 {
            return LogComplex::ZERO;
        }
        let base = if self.provenance.is_lemniscate() { z } else { z - self.params.a };
        power(LogComplex::from_complex(base), c - 1.0).scale(c)
    }

    /// True when `z - a` is within `1e-9` of the principal cut of a non-integer power.
    pub fn near_branch_cut(&self, z: Complex64) -> bool {
        let u = if self.provenance.is_lemniscate() { z } else { z - self.params.a };
        self.params.c.fract() != 0.0 && u.re < 0.0 && u.im.abs() < 1e-9
    }

    /// `psi_j(z) = W(z) P_j(z)` for `j <= kmax`.
    pub fn psi_upto(&self, z: Complex64, kmax: usize) -> Result<PolyValues> {
        if let Repr::ClosedForm(cf) = &self.repr {
            self.check_degree(kmax)?;
            return cf.psi_all(z, kmax);
        }
        let w = self.weight_root(z);
        let mut p = self.p_upto(z, kmax)?;
        for v in p.values.iter_mut() {
            *v = *v * w;
        }
        Ok(p)
    }

    /// `psi_j'(z)` for `j <= kmax`.
    pub fn psi_deriv_upto(&self, z: Complex64, kmax: usize) -> Result<PolyValues> {
        if let Repr::ClosedForm(cf) = &self.repr {
            self.check_degree(kmax)?;
            return cf.psi_deriv_all(z, kmax);
        }
        let w = self.weight_root(z);
        let dw = self.weight_root_deriv(z);
        let p = self.p_upto(z, kmax)?;
        let dp = self.p_deriv_upto(z, kmax)?;
        let mut cancelled = false;
        let values = (0..=kmax)
            .map(|j| {
                let mut acc = LogSum::new();
                acc.add(dw * p.values[j]);
                acc.add(w * dp.values[j]);
                let s = acc.value();
                cancelled |= s.cancelled;
                s.value
            })
            .collect();
        Ok(PolyValues { values, cancelled })
    }

    /// `P_j(a)`.
    pub fn p_at_a(&self, j: usize) -> Result<LogComplex> {
        self.check_degree(j)?;
        match &self.repr {
            Repr::ClosedForm(cf) => Ok(cf.p_at_a(j)),
            Repr::Coefficients { .. } => self.eval(j, Complex64::new(self.params.a, 0.0)),
        }
    }

    /// The quantities `<z psi_j, phi_0>` and `P_j(a)` for every degree.
    pub fn hypothesis(&self) -> Result<Vec<HypothesisRow>> {
        let n = self.params.nf();
        let h0 = self.log_norms[0];
        let zpsi: Vec<Option<LogComplex>> = match &self.repr {
            Repr::ClosedForm(_) => {
                // <z psi_j, phi_0> = -a P_j(0) / (N^2 h_0)
                let p0 = self.p_all(Complex64::new(0.0, 0.0))?;
                p0.values
                    .iter()
                    .map(|v| Some(*v * LogComplex::new(-2.0 * n.ln() - h0, 0.0) * LogComplex::from_real(-self.params.a)))
                    .collect()
            }
            Repr::Coefficients { coeffs, first_moments } => coeffs
                .iter()
                .map(|c| {
                    if c.len() >= first_moments.len() {
                        return None;
                    }
                    let prec = self.precision_bits;
                    let mut s = Float::with_val(prec, 0);
                    for (i, ci) in c.iter().enumerate() {
                        s += Float::with_val(prec, ci * &first_moments[i + 1]);
                    }
                    Some(float_to_logc(&s, &Float::with_val(prec, 0)) * LogComplex::new(-h0, 0.0))
                })
                .collect(),
        };
        (0..=self.max_degree)
            .map(|j| Ok(HypothesisRow { j, z_psi_phi0: zpsi[j], p_at_a: self.p_at_a(j)? }))
            .collect()
    }

    /// JSON form: coefficients as decimal strings, norms as `log10 h_j`.
    pub fn to_json(&self) -> serde_json::Value {
        let coefficients = match &self.repr {
            Repr::Coefficients { coeffs, .. } => {
                let digits = (self.precision_bits as f64 * std::f64::consts::LOG10_2).ceil() as usize;
                json!(coeffs
                    .iter()
                    .map(|c| c.iter().map(|x| x.to_string_radix(10, Some(digits))).collect::<Vec<_>>())
                    .collect::<Vec<_>>())
            }
            Repr::ClosedForm(_) => json!({
                "closed_form": "P_k(z) = (z^(k+1) - exp(aN(z-a)) Q(k+1,Naz)/Q(k+1,Na^2) a^(k+1)) / (z-a)"
            }),
        };
        json!({
            "params": self.params,
            "provenance": self.provenance.id(),
            "precision_bits": self.precision_bits,
            "max_degree": self.max_degree,
            "tolerance": self.tolerance,
            "coefficients": coefficients,
            "log10_norms": self.log_norms.iter().map(|l| l / LN_10).collect::<Vec<_>>(),
        })
    }
}

/// `base^c`, exact integer powers for integer `c`.
pub(crate) fn power(base: LogComplex, c: f64) -> LogComplex {
    if c.fract() == 0.0 && c.abs() < i64::MAX as f64 {
        base.powi(c as i64)
    } else {
        base.powf(c)
    }
}
