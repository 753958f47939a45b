use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// The parameters `(N, c, a, d)` shared by every formula.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    #[serde(rename = "N")]
    pub n: usize,
    pub c: f64,
    pub a: f64,
    pub d: u32,
}

impl EnsembleParams {
    pub fn new(n: usize, c: f64, a: f64, d: u32) -> Result<Self> {
        let p = EnsembleParams { n, c, a, d };
        p.validate()?;
        Ok(p)
    }

    /// Induced Ginibre parameters (`d = 1`).
    pub fn induced(n: usize, c: f64, a: f64) -> Result<Self> {
        Self::new(n, c, a, 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParams("N must be a positive integer".into()));
        }
        if !(self.c > -1.0) || !self.c.is_finite() {
            return Err(Error::InvalidParams(format!("c must satisfy c > -1, got {}", self.c)));
        }
        if !(self.a >= 0.0) || !self.a.is_finite() {
            return Err(Error::InvalidParams(format!("a must satisfy a >= 0, got {}", self.a)));
        }
        if self.d == 0 {
            return Err(Error::InvalidParams("d must be at least 1".into()));
        }
        Ok(())
    }

    /// Rejects `a <= 1`, which the asymptotic results exclude.
    pub fn require_a_above_one(&self, what: &str) -> Result<()> {
        if self.a > 1.0 {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!("{what} requires a > 1, got a = {}", self.a)))
        }
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    /// Integer value of `c`, if it is one.
    pub fn integer_c(&self) -> Option<u32> {
        if self.c >= 0.0 && self.c.fract() == 0.0 && self.c <= u32::MAX as f64 {
            Some(self.c as u32)
        } else {
            None
        }
    }

    pub fn with_n(&self, n: usize) -> Self {
        EnsembleParams { n, ..*self }
    }

    pub fn with_c(&self, c: f64) -> Self {
        EnsembleParams { c, ..*self }
    }
}
