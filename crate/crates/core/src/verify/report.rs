//! Convergence reports, slope fits and their text rendering.

use crate::format::fmt17;
use crate::geometry::EnsembleParams;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Errors at or below this level are rounding noise, not a measurable rate.
pub const ROUNDING_FLOOR: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Degenerate,
}

impl Verdict {
    pub fn id(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Degenerate => "degenerate",
        }
    }
}

/// One measured check: errors against a size parameter, an optional rate and a ceiling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub suite_id: String,
    pub check: String,
    pub params_list: Vec<EnsembleParams>,
    /// What the first entry of each error pair counts (`N`, `dN` or `d`).
    pub index: String,
    pub errors: Vec<(usize, f64)>,
    pub fitted_slope: Option<f64>,
    pub expected_slope: Option<f64>,
    pub slope_tolerance: f64,
    pub error_ceiling: Option<f64>,
    pub verdict: Verdict,
    pub notes: String,
}

/// Least-squares slope of `log err` against `log n`.
///
/// Needs at least 3 positive errors whose `n` values span a factor of 4 or more.
pub fn fit_slope(errors: &[(usize, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = errors
        .iter()
        .filter(|(n, e)| *n > 0 && *e > 0.0 && e.is_finite())
        .map(|&(n, e)| ((n as f64).ln(), e.ln()))
        .collect();
    if pts.len() < 3 || pts.len() < errors.len() {
        return None;
    }
    let lo = errors.iter().map(|e| e.0).min()?;
    let hi = errors.iter().map(|e| e.0).max()?;
    if hi < 4 * lo {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

impl ConvergenceReport {
    pub fn new(suite_id: &str, check: &str, params_list: Vec<EnsembleParams>, errors: Vec<(usize, f64)>) -> Self {
        ConvergenceReport {
            suite_id: suite_id.into(),
            check: check.into(),
            params_list,
            index: "N".into(),
            errors,
            fitted_slope: None,
            expected_slope: None,
            slope_tolerance: 0.0,
            error_ceiling: None,
            verdict: Verdict::Fail,
            notes: String::new(),
        }
    }

    /// A check that does not apply to the configuration, with the reason.
    pub fn degenerate(suite_id: &str, check: &str, params_list: Vec<EnsembleParams>, why: &str) -> Self {
        let mut r = Self::new(suite_id, check, params_list, Vec::new());
        r.verdict = Verdict::Degenerate;
        r.notes = why.into();
        r
    }

    /// A check that could not be evaluated.
    pub fn failed(suite_id: &str, check: &str, params_list: Vec<EnsembleParams>, why: &str) -> Self {
        let mut r = Self::new(suite_id, check, params_list, Vec::new());
        r.notes = why.into();
        r
    }

    pub fn indexed_by(mut self, index: &str) -> Self {
        self.index = index.into();
        self
    }

    pub fn expect_slope(mut self, slope: f64, tolerance: f64) -> Self {
        self.expected_slope = Some(slope);
        self.slope_tolerance = tolerance;
        self
    }

    pub fn ceiling(mut self, ceiling: f64) -> Self {
        self.error_ceiling = Some(ceiling);
        self
    }

    pub fn note(mut self, note: impl AsRef<str>) -> Self {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(note.as_ref());
        self
    }

    pub fn final_error(&self) -> Option<f64> {
        self.errors.last().map(|e| e.1)
    }

    /// Fits the slope and settles the verdict.
    pub fn finish(mut self) -> Self {
        self.fitted_slope = fit_slope(&self.errors);
        self.verdict = self.judge();
        self
    }

    fn judge(&mut self) -> Verdict {
        let Some(last) = self.final_error() else {
            return Verdict::Fail;
        };
        if self.errors.iter().any(|e| !e.1.is_finite()) {
            return Verdict::Fail;
        }
        if let Some(expected) = self.expected_slope {
            if self.errors.iter().all(|e| e.1 <= ROUNDING_FLOOR) {
                self.notes_push("residuals at rounding level, no rate to fit");
                return Verdict::Degenerate;
            }
            match self.fitted_slope {
                Some(s) if (s - expected).abs() <= self.slope_tolerance => {}
                Some(_) => return Verdict::Fail,
                None => {
                    self.notes_push("slope fit needs 3 positive errors spanning a factor of 4");
                    return Verdict::Fail;
                }
            }
        }
        match self.error_ceiling {
            Some(c) if last > c => Verdict::Fail,
            _ => Verdict::Pass,
        }
    }

    fn notes_push(&mut self, s: &str) {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(s);
    }
}

/// Reports of one suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub reports: Vec<ConvergenceReport>,
}

impl SuiteReport {
    pub fn failed(&self) -> bool {
        self.reports.iter().any(|r| r.verdict == Verdict::Fail)
    }

    pub fn verdict(&self) -> Verdict {
        if self.failed() {
            Verdict::Fail
        } else if !self.reports.is_empty() && self.reports.iter().all(|r| r.verdict == Verdict::Degenerate) {
            Verdict::Degenerate
        } else {
            Verdict::Pass
        }
    }
}

fn short(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x:.3e}")
    }
}

/// Aligned plain-text table, one row per check and notes underneath.
pub fn render_text(suites: &[SuiteReport]) -> String {
    let head = ["suite", "check", "errors", "slope", "expected", "ceiling", "verdict"];
    let mut rows: Vec<([String; 7], String)> = Vec::new();
    for s in suites {
        for r in &s.reports {
            let errs = r.errors.iter().map(|(n, e)| format!("{}={}:{}", r.index, n, short(*e))).collect::<Vec<_>>();
            let cells = [
                s.suite.clone(),
                r.check.clone(),
                if errs.is_empty() { "-".into() } else { errs.join(" ") },
                r.fitted_slope.map(|x| format!("{x:.3}")).unwrap_or_else(|| "-".into()),
                r.expected_slope.map(|x| format!("{x}±{}", r.slope_tolerance)).unwrap_or_else(|| "-".into()),
                r.error_ceiling.map(short).unwrap_or_else(|| "-".into()),
                r.verdict.id().to_uppercase(),
            ];
            rows.push((cells, r.notes.clone()));
        }
    }
    let mut width = head.map(|h| h.chars().count());
    for (cells, _) in &rows {
        for (w, c) in width.iter_mut().zip(cells) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let mut s = String::new();
        for (i, c) in cells.iter().enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            let pad = width[i] - c.chars().count();
            s.push_str(c);
            if i + 1 < cells.len() {
                s.push_str(&" ".repeat(pad));
            }
        }
        s
    };
    let mut out = String::new();
    let _ = writeln!(out, "{}", line(&head.map(String::from)));
    let _ = writeln!(out, "{}", line(&width.map(|w| "-".repeat(w))));
    for (cells, notes) in &rows {
        let _ = writeln!(out, "{}", line(cells));
        if !notes.is_empty() {
            let _ = writeln!(out, "    note: {notes}");
        }
    }
    out
}

/// Full-precision error column for CSV-like dumps.
pub fn error_table(r: &ConvergenceReport) -> String {
    let mut out = String::new();
    for (n, e) in &r.errors {
        let _ = writeln!(out, "{n},{}", fmt17(*e));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Vec<EnsembleParams> {
        vec![EnsembleParams::induced(10, 1.0, 2.0).unwrap()]
    }

    #[test]
    fn slope_of_exact_power_law() {
        let errs: Vec<_> = [50usize, 100, 200, 400].iter().map(|&n| (n, 3.0 / (n * n) as f64)).collect();
        assert!((fit_slope(&errs).unwrap() + 2.0).abs() < 1e-12);
    }

    #[test]
    fn slope_needs_span_and_count() {
        assert!(fit_slope(&[(50, 1e-3), (100, 5e-4)]).is_none());
        assert!(fit_slope(&[(50, 1e-3), (70, 7e-4), (100, 5e-4)]).is_none());
        assert!(fit_slope(&[(50, 1e-3), (100, 0.0), (200, 2e-4)]).is_none());
    }

    #[test]
    fn verdicts() {
        let errs = vec![(50, 4e-4), (100, 1e-4), (200, 2.5e-5)];
        let r = ConvergenceReport::new("x", "y", p(), errs.clone()).expect_slope(-2.0, 0.3).ceiling(1e-4).finish();
        assert_eq!(r.verdict, Verdict::Pass);
        let r = ConvergenceReport::new("x", "y", p(), errs.clone()).expect_slope(-1.0, 0.3).finish();
        assert_eq!(r.verdict, Verdict::Fail);
        let r = ConvergenceReport::new("x", "y", p(), errs).ceiling(1e-5).finish();
        assert_eq!(r.verdict, Verdict::Fail);
        let r = ConvergenceReport::new("x", "y", p(), vec![(50, 1e-16), (100, 0.0), (200, 2e-16)])
            .expect_slope(-2.0, 0.3)
            .finish();
        assert_eq!(r.verdict, Verdict::Degenerate);
        let r = ConvergenceReport::new("x", "y", p(), vec![(20, f64::NAN)]).finish();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(ConvergenceReport::new("x", "y", p(), vec![]).finish().verdict, Verdict::Fail);
    }

    #[test]
    fn suite_verdict_and_text() {
        let ok = ConvergenceReport::new("cd", "identity", p(), vec![(20, 3e-7)]).ceiling(1e-4).finish();
        let deg = ConvergenceReport::degenerate("cd", "neutral", p(), "both sides vanish");
        let s = SuiteReport { suite: "cd".into(), reports: vec![ok.clone(), deg.clone()] };
        assert_eq!(s.verdict(), Verdict::Pass);
        let text = render_text(&[s]);
        assert!(text.contains("PASS") && text.contains("DEGENERATE") && text.contains("note: both sides vanish"));
        let col = text.lines().next().unwrap().find("check").unwrap();
        assert_eq!(text.lines().nth(2).unwrap().find("identity").unwrap(), col);
        let json = serde_json::to_string(&ok).unwrap();
        assert!(json.contains("\"verdict\":\"pass\"") && json.contains("\"errors\":[[20,"));
        let row = error_table(&ok);
        let (n, e) = row.trim().split_once(',').unwrap();
        assert_eq!((n, e.parse::<f64>().unwrap()), ("20", 3e-7));
    }
}
