//! Complex numbers stored as (log-modulus, phase).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::ops::{Div, Mul, Neg};

/// Nonzero complex value `exp(log_mod + i phase)`. Zero is `log_mod = -inf`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogComplex {
    pub log_mod: f64,
    pub phase: f64,
}

/// Wraps an angle into (-pi, pi].
pub fn normalize_phase(phase: f64) -> f64 {
    if !phase.is_finite() {
        return phase;
    }
    if phase > -PI && phase <= PI {
        return phase;
    }
    let two_pi = 2.0 * PI;
    let mut p = phase - two_pi * (phase / two_pi).round();
    if p <= -PI {
        p += two_pi;
    } else if p > PI {
        p -= two_pi;
    }
    p
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex { log_mod: f64::NEG_INFINITY, phase: 0.0 };
    pub const ONE: LogComplex = LogComplex { log_mod: 0.0, phase: 0.0 };

    pub fn new(log_mod: f64, phase: f64) -> Self {
        if log_mod == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        LogComplex { log_mod, phase: normalize_phase(phase) }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return Self::ZERO;
        }
        LogComplex { log_mod: z.norm().ln(), phase: z.im.atan2(z.re) }
    }

    pub fn from_real(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else if x > 0.0 {
            LogComplex { log_mod: x.ln(), phase: 0.0 }
        } else {
            LogComplex { log_mod: (-x).ln(), phase: PI }
        }
    }

    /// `exp(w)` without overflow.
    pub fn exp(w: Complex64) -> Self {
        Self::new(w.re, w.im)
    }

    /// Principal logarithm as an ordinary complex number.
    pub fn ln(self) -> Complex64 {
        Complex64::new(self.log_mod, self.phase)
    }

    pub fn is_zero(self) -> bool {
        self.log_mod == f64::NEG_INFINITY
    }

    pub fn is_finite(self) -> bool {
        self.log_mod.is_finite() && self.phase.is_finite()
    }

    pub fn to_complex(self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let r = self.log_mod.exp();
        Complex64::new(r * self.phase.cos(), r * self.phase.sin())
    }

    pub fn modulus(self) -> f64 {
        self.log_mod.exp()
    }

    pub fn log10_mod(self) -> f64 {
        self.log_mod / std::f64::consts::LN_10
    }

    pub fn conj(self) -> Self {
        if self.is_zero() {
            return self;
        }
        Self::new(self.log_mod, -self.phase)
    }

    pub fn recip(self) -> Self {
        Self::new(-self.log_mod, -self.phase)
    }

    /// Principal power `exp(c Log self)`.
    pub fn powf(self, c: f64) -> Self {
        if self.is_zero() {
            return if c == 0.0 { Self::ONE } else { Self::ZERO };
        }
        Self::new(c * self.log_mod, c * self.phase)
    }

    pub fn powi(self, n: i64) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::new(n as f64 * self.log_mod, n as f64 * self.phase)
    }

    pub fn scale(self, x: f64) -> Self {
        self * LogComplex::from_real(x)
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;
    fn mul(self, rhs: LogComplex) -> LogComplex {
        if self.is_zero() || rhs.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.log_mod + rhs.log_mod, self.phase + rhs.phase)
    }
}

impl Div for LogComplex {
    type Output = LogComplex;
    fn div(self, rhs: LogComplex) -> LogComplex {
        self * rhs.recip()
    }
}

impl Neg for LogComplex {
    type Output = LogComplex;
    fn neg(self) -> LogComplex {
        if self.is_zero() {
            return self;
        }
        LogComplex::new(self.log_mod, self.phase + PI)
    }
}

impl From<Complex64> for LogComplex {
    fn from(z: Complex64) -> Self {
        LogComplex::from_complex(z)
    }
}

/// Multiplies two log-domain values.
pub fn logc_mul(x: LogComplex, y: LogComplex) -> LogComplex {
    x * y
}

/// Result of a log-domain summation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summed {
    pub value: LogComplex,
    /// Set when the result is below `1e-12` times the largest term.
    pub cancelled: bool,
}

pub const CANCELLATION_RATIO: f64 = 1e-12;

/// Streaming compensated sum rescaled to the running maximum term.
#[derive(Clone, Debug)]
pub struct LogSum {
    scale: f64,
    re: f64,
    im: f64,
    re_c: f64,
    im_c: f64,
    count: usize,
}

impl Default for LogSum {
    fn default() -> Self {
        Self::new()
    }
}

fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl LogSum {
    pub fn new() -> Self {
        LogSum { scale: f64::NEG_INFINITY, re: 0.0, im: 0.0, re_c: 0.0, im_c: 0.0, count: 0 }
    }

    pub fn add(&mut self, term: LogComplex) {
        if term.is_zero() {
            return;
        }
        self.count += 1;
        if term.log_mod > self.scale {
            if self.scale.is_finite() {
                let f = (self.scale - term.log_mod).exp();
                self.re *= f;
                self.im *= f;
                self.re_c *= f;
                self.im_c *= f;
            }
            self.scale = term.log_mod;
        }
        let r = (term.log_mod - self.scale).exp();
        neumaier(&mut self.re, &mut self.re_c, r * term.phase.cos());
        neumaier(&mut self.im, &mut self.im_c, r * term.phase.sin());
    }

    /// Largest term log-modulus seen so far.
    pub fn max_log_mod(&self) -> f64 {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn value(&self) -> Summed {
        if !self.scale.is_finite() {
            return Summed { value: LogComplex::ZERO, cancelled: false };
        }
        let z = Complex64::new(self.re + self.re_c, self.im + self.im_c);
        let n = z.norm();
        let cancelled = n < CANCELLATION_RATIO;
        let v = LogComplex::from_complex(z);
        let value = if v.is_zero() { v } else { LogComplex::new(v.log_mod + self.scale, v.phase) };
        Summed { value, cancelled }
    }
}

/// Sums log-domain terms with cancellation detection.
pub fn logc_sum(terms: &[LogComplex]) -> Summed {
    let mut acc = LogSum::new();
    for &t in terms {
        acc.add(t);
    }
    acc.value()
}

/// `x + y` in the log domain.
pub fn logc_add(x: LogComplex, y: LogComplex) -> Summed {
    logc_sum(&[x, y])
}

/// `x - y` in the log domain.
pub fn logc_sub(x: LogComplex, y: LogComplex) -> Summed {
    logc_sum(&[x, -y])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn unit_values_multiply() {
        let p = logc_mul(LogComplex::new(0.0, 0.0), LogComplex::new(0.0, PI / 2.0));
        assert_eq!(p.log_mod, 0.0);
        assert!((p.phase - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn zero_absorbs() {
        let p = LogComplex::ZERO * LogComplex::new(3.0, 1.0);
        assert!(p.is_zero());
        assert!((LogComplex::new(3.0, 1.0) * LogComplex::ZERO).is_zero());
    }

    #[test]
    fn product_matches_direct_multiply() {
        let p = LogComplex::new(2f64.ln(), 0.3) * LogComplex::new(3f64.ln(), -0.1);
        let x = Complex64::from_polar(2.0, 0.3) * Complex64::from_polar(3.0, -0.1);
        assert!(close(p.to_complex(), x, 1e-15));
        assert!((p.log_mod - 6f64.ln()).abs() < 1e-15);
        assert!((p.phase - 0.2).abs() < 1e-15);
    }

    #[test]
    fn phase_wraps_to_half_open_interval() {
        assert_eq!(normalize_phase(PI), PI);
        assert!((normalize_phase(-PI) - PI).abs() < 1e-15);
        assert!((normalize_phase(3.0 * PI) - PI).abs() < 1e-12);
        assert!((normalize_phase(7.0) - (7.0 - 2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn opposite_terms_flag_cancellation() {
        let s = logc_sum(&[LogComplex::ONE, -LogComplex::ONE]);
        assert!(s.cancelled);
        assert!(s.value.is_zero() || s.value.log_mod < -30.0);
    }

    #[test]
    fn huge_equal_terms() {
        let t = LogComplex::new(500.0, 0.0);
        let s = logc_sum(&[t, t]);
        assert!(!s.cancelled);
        assert!((s.value.log_mod - (500.0 + 2f64.ln())).abs() < 1e-13);
        assert_eq!(s.value.phase, 0.0);
    }

    #[test]
    fn geometric_series() {
        let terms: Vec<_> = (0..10).map(|j| LogComplex::from_real(0.5f64.powi(j))).collect();
        let s = logc_sum(&terms);
        let expect = 2.0 * (1.0 - 2f64.powi(-10));
        assert!((s.value.modulus() - expect).abs() < 1e-15 * expect);
    }

    #[test]
    fn complex_round_trip() {
        for &z in &[
            Complex64::new(1e-300, 3e-301),
            Complex64::new(-7.5, 2.0),
            Complex64::new(0.0, -1e300),
            Complex64::new(-1.0, 0.0),
        ] {
            let back = LogComplex::from_complex(z).to_complex();
            let tol = 1e-15 * (4.0 + z.norm().ln().abs());
            assert!(close(back, z, tol), "{z} -> {back}");
        }
    }

    #[test]
    fn negative_real_has_phase_pi() {
        assert_eq!(LogComplex::from_real(-2.0).phase, PI);
        assert_eq!(LogComplex::from_complex(Complex64::new(-2.0, 0.0)).phase, PI);
    }

    proptest! {
        #[test]
        fn sum_is_permutation_invariant(
            raw in proptest::collection::vec((-50.0f64..50.0, -3.1f64..3.1), 2..40),
            seed in 0u64..1000,
        ) {
            let terms: Vec<_> = raw.iter().map(|&(l, p)| LogComplex::new(l, p)).collect();
            let mut shuffled = terms.clone();
            let n = shuffled.len();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                shuffled.swap(i, (s >> 33) as usize % (i + 1));
            }
            let a = logc_sum(&terms);
            let b = logc_sum(&shuffled);
            prop_assume!(!a.cancelled);
            let big = terms.iter().map(|t| t.log_mod).fold(f64::NEG_INFINITY, f64::max);
            let scale = (-big).exp();
            let da = a.value.scale(scale).to_complex();
            let db = b.value.scale(scale).to_complex();
            prop_assert!((da - db).norm() <= 1e-13 * da.norm().max(1e-300) + 1e-15);
        }

        #[test]
        fn mul_matches_complex(
            r1 in 1e-5f64..1e5, p1 in -3.0f64..3.0, r2 in 1e-5f64..1e5, p2 in -3.0f64..3.0,
        ) {
            let x = Complex64::from_polar(r1, p1);
            let y = Complex64::from_polar(r2, p2);
            let prod = (LogComplex::from(x) * LogComplex::from(y)).to_complex();
            prop_assert!(close(prod, x * y, 1e-13));
        }
    }
}
