//! Sampled kernel and Berezin fields with CSV output.

use crate::error::{Error, Result};
use crate::format::fmt17;
use crate::geometry::EnsembleParams;
use crate::numerics::{LogComplex, Summed};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::{self, Write};

/// Evaluation mode of a kernel sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelMode {
    #[serde(rename = "exact_tilde")]
    ExactTilde,
    #[serde(rename = "exact_hat")]
    ExactHat,
    #[serde(rename = "exact_full_Q")]
    ExactFullQ,
    #[serde(rename = "exact_lemniscate")]
    ExactLemniscate,
    #[serde(rename = "asym_thm11")]
    AsymThm11,
    #[serde(rename = "asym_thm13")]
    AsymThm13,
    #[serde(rename = "limit_edge")]
    LimitEdge,
}

impl KernelMode {
    pub const ALL: [KernelMode; 7] = [
        KernelMode::ExactTilde,
        KernelMode::ExactHat,
        KernelMode::ExactFullQ,
        KernelMode::ExactLemniscate,
        KernelMode::AsymThm11,
        KernelMode::AsymThm13,
        KernelMode::LimitEdge,
    ];

    pub fn id(self) -> &'static str {
        match self {
            KernelMode::ExactTilde => "exact_tilde",
            KernelMode::ExactHat => "exact_hat",
            KernelMode::ExactFullQ => "exact_full_Q",
            KernelMode::ExactLemniscate => "exact_lemniscate",
            KernelMode::AsymThm11 => "asym_thm11",
            KernelMode::AsymThm13 => "asym_thm13",
            KernelMode::LimitEdge => "limit_edge",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.id() == s)
    }

    pub fn is_exact(self) -> bool {
        matches!(self, KernelMode::ExactTilde | KernelMode::ExactHat | KernelMode::ExactFullQ | KernelMode::ExactLemniscate)
    }
}

/// Region violations and formula poles mask a cell; anything else is a failure.
fn maskable(e: &Error) -> bool {
    matches!(e, Error::Region(_) | Error::Singular(_))
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelSample {
    pub z: Complex64,
    pub w: Complex64,
    /// `None` for a masked cell.
    pub value: Option<LogComplex>,
    pub cancelled: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelField {
    pub params: EnsembleParams,
    pub mode: KernelMode,
    pub samples: Vec<KernelSample>,
}

impl KernelField {
    /// Evaluates `f` at every pair in parallel; output order follows `pairs`.
    pub fn sample<F>(params: EnsembleParams, mode: KernelMode, pairs: &[(Complex64, Complex64)], f: F) -> Result<Self>
    where
        F: Fn(Complex64, Complex64) -> Result<Summed> + Sync,
    {
        let samples = pairs
            .par_iter()
            .map(|&(z, w)| match f(z, w) {
                Ok(s) => Ok(KernelSample { z, w, value: Some(s.value), cancelled: s.cancelled }),
                Err(e) if maskable(&e) => Ok(KernelSample { z, w, value: None, cancelled: false }),
                Err(e) => Err(e),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(KernelField { params, mode, samples })
    }

    pub fn masked(&self) -> usize {
        self.samples.iter().filter(|s| s.value.is_none()).count()
    }

    /// Largest `|K(z,w) - conj K(w,z)| / max(|K(z,w)|, |K(w,z)|)` over sampled swapped pairs.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for s in &self.samples {
            let Some(x) = s.value else { continue };
            for t in &self.samples {
                if t.z == s.w && t.w == s.z {
                    if let Some(y) = t.value {
                        let scale = x.log_mod.max(y.log_mod);
                        let (u, v) = (x.scale_log(-scale), y.scale_log(-scale));
                        worst = worst.max((u - v.conj()).norm());
                    }
                }
            }
        }
        worst
    }

    /// Every sampled diagonal value is real and nonnegative to `tol` relative.
    pub fn diagonal_nonnegative(&self, tol: f64) -> bool {
        self.samples.iter().filter(|s| s.z == s.w).all(|s| match s.value {
            None => true,
            Some(v) => {
                let c = v.scale_log(-v.log_mod.max(0.0));
                v.is_zero() || (c.re >= 0.0 && c.im.abs() <= tol * c.norm())
            }
        })
    }

    /// CSV rows `re_z,im_z,re_w,im_w,log10_mod,phase,mode`; masked cells leave the value columns empty.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "re_z,im_z,re_w,im_w,log10_mod,phase,mode")?;
        for s in &self.samples {
            let (m, ph) = match s.value {
                Some(v) => (fmt17(v.log10_mod()), fmt17(if v.is_zero() { 0.0 } else { v.phase })),
                None => (String::new(), String::new()),
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                fmt17(s.z.re),
                fmt17(s.z.im),
                fmt17(s.w.re),
                fmt17(s.w.im),
                m,
                ph,
                self.mode.id()
            )?;
        }
        Ok(())
    }
}

trait ScaleLog {
    fn scale_log(self, shift: f64) -> Complex64;
}

impl ScaleLog for LogComplex {
    // e^{shift} times the value, as an ordinary complex number
    fn scale_log(self, shift: f64) -> Complex64 {
        LogComplex::new(self.log_mod + shift, self.phase).to_complex()
    }
}

/// Berezin kernel `w -> B_N(z, w)` sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct BerezinField {
    pub params: EnsembleParams,
    pub z: Complex64,
    pub samples: Vec<(Complex64, Option<f64>)>,
}

impl BerezinField {
    pub fn sample<F>(params: EnsembleParams, z: Complex64, ws: &[Complex64], f: F) -> Result<Self>
    where
        F: Fn(Complex64) -> Result<f64> + Sync,
    {
        let samples = ws
            .par_iter()
            .map(|&w| match f(w) {
                Ok(v) => Ok((w, Some(v))),
                Err(e) if maskable(&e) => Ok((w, None)),
                Err(e) => Err(e),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BerezinField { params, z, samples })
    }

    /// CSV rows `re_w,im_w,value`; masked cells leave `value` empty.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "re_w,im_w,value")?;
        for (w, v) in &self.samples {
            writeln!(out, "{},{},{}", fmt17(w.re), fmt17(w.im), v.map(fmt17).unwrap_or_default())?;
        }
        Ok(())
    }
}

/// Row-major `n x n` grid of points covering `[lo.re, hi.re] x [lo.im, hi.im]`.
pub fn grid(lo: Complex64, hi: Complex64, n: usize) -> Vec<Complex64> {
    let step = |a: f64, b: f64, i: usize| if n == 1 { (a + b) / 2.0 } else { a + (b - a) * i as f64 / (n - 1) as f64 };
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(Complex64::new(step(lo.re, hi.re, j), step(lo.im, hi.im, i)));
        }
    }
    out
}
