//! Skeleton curves, droplet boundaries and their tracing.

use super::params::EnsembleParams;
use crate::error::{Error, Result};
use crate::format::fmt17;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};

/// Residual target for traced vertices.
pub const VERTEX_TOL: f64 = 1e-13;
/// Gradient magnitude at which tracing is abandoned.
pub const GRADIENT_BLOWUP: f64 = 1e6;
const SIDE_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Curve {
    #[serde(rename = "S1")]
    S1,
    #[serde(rename = "Sa")]
    Sa,
    #[serde(rename = "Sa_d")]
    SaD,
    #[serde(rename = "droplet_boundary")]
    DropletBoundary,
}

impl Curve {
    pub fn id(self) -> &'static str {
        match self {
            Curve::S1 => "S1",
            Curve::Sa => "Sa",
            Curve::SaD => "Sa_d",
            Curve::DropletBoundary => "droplet_boundary",
        }
    }

    pub fn parse(s: &str) -> Option<Curve> {
        match s {
            "S1" | "s1" => Some(Curve::S1),
            "Sa" | "sa" => Some(Curve::Sa),
            "Sa_d" | "sa_d" | "Sad" | "sad" => Some(Curve::SaD),
            "droplet" | "droplet_boundary" => Some(Curve::DropletBoundary),
            _ => None,
        }
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// One connected polyline of a traced curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveComponent {
    pub points: Vec<Complex64>,
    /// The last point connects back to the first.
    pub closed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub curve_id: Curve,
    pub params: EnsembleParams,
    pub step: f64,
    pub components: Vec<CurveComponent>,
}

impl CurveSample {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn closed(&self) -> bool {
        self.components.iter().all(|c| c.closed)
    }

    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.components.iter().flat_map(|c| c.points.iter().copied())
    }

    /// Largest |residual| over all vertices.
    pub fn max_residual(&self) -> f64 {
        self.points()
            .map(|z| curve_function(z, &self.params, self.curve_id).map(|(f, _)| f.abs()).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }

    /// Largest distance between consecutive vertices, closing segments included.
    pub fn max_gap(&self) -> f64 {
        let mut gap: f64 = 0.0;
        for c in &self.components {
            for w in c.points.windows(2) {
                gap = gap.max((w[1] - w[0]).norm());
            }
            if c.closed && c.points.len() > 1 {
                gap = gap.max((c.points[0] - c.points[c.points.len() - 1]).norm());
            }
        }
        gap
    }

    /// CSV rows `re,im,curve_id,component`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "re,im,curve_id,component")?;
        for (k, c) in self.components.iter().enumerate() {
            for z in &c.points {
                writeln!(out, "{},{},{},{}", fmt17(z.re), fmt17(z.im), self.curve_id.id(), k)?;
            }
        }
        Ok(())
    }
}

/// Residual of the defining equation (LHS - RHS) and whether the side condition holds.
pub fn skeleton_residual(z: Complex64, p: &EnsembleParams, which: Curve) -> Result<(f64, bool)> {
    let (f, _) = curve_function(z, p, which)?;
    let ok = match which {
        Curve::S1 => z.norm() <= 1.0 + SIDE_SLACK,
        Curve::Sa => z.re <= 1.0 / p.a + SIDE_SLACK,
        Curve::SaD => z.powu(p.d).re >= p.a - 1.0 / p.a - SIDE_SLACK,
        Curve::DropletBoundary => true,
    };
    Ok((f, ok))
}

/// Defining function `F` (harmonic) and its gradient `F_x + i F_y`.
fn curve_function(z: Complex64, p: &EnsembleParams, which: Curve) -> Result<(f64, Complex64)> {
    match which {
        Curve::S1 => sa_function(z, 1.0),
        Curve::Sa => {
            if !(p.a > 0.0) {
                return Err(Error::InvalidParams("S_a needs a > 0".into()));
            }
            sa_function(z, p.a)
        }
        Curve::SaD => {
            if !(p.a > 0.0) {
                return Err(Error::InvalidParams("S_a^d needs a > 0".into()));
            }
            let zd = z.powu(p.d);
            let u = zd - p.a;
            if u.norm() == 0.0 {
                return Err(Error::Singular(format!("log|z^d - a| diverges at z = {z}")));
            }
            let a = p.a;
            let f = u.norm().ln() + a * zd.re - ((1.0 / a).ln() - 1.0 + a * a);
            let dz = if p.d == 1 { Complex64::new(1.0, 0.0) } else { z.powu(p.d - 1) * p.d as f64 };
            Ok((f, (dz * (u.inv() + a)).conj()))
        }
        Curve::DropletBoundary => {
            let u = z.powu(p.d) - p.a;
            if u.norm() == 0.0 {
                return Err(Error::Singular(format!("log|z^d - a| diverges at z = {z}")));
            }
            let dz = if p.d == 1 { Complex64::new(1.0, 0.0) } else { z.powu(p.d - 1) * p.d as f64 };
            Ok((u.norm().ln(), (dz / u).conj()))
        }
    }
}

fn sa_function(z: Complex64, a: f64) -> Result<(f64, Complex64)> {
    let r = z.norm();
    if r == 0.0 {
        return Err(Error::Singular("log|z| diverges at z = 0".into()));
    }
    let f = r.ln() - a * z.re - ((1.0 / a).ln() - 1.0);
    Ok((f, (z.inv() - a).conj()))
}

/// Closed interior of `S_a` (the region it encloses, curve included).
///
/// `S_a = S_1 / a`, and inside the closed unit disk the zero set of
/// `log|w| + 1 - Re w` is exactly `S_1`, negative inside it.
pub fn inside_sa(z: Complex64, a: f64) -> bool {
    let w = z * a;
    let r = w.norm();
    if r == 0.0 {
        return true;
    }
    r <= 1.0 && r.ln() + 1.0 - w.re <= 0.0
}

/// Strict exterior of `S_a`.
pub fn outside_sa(z: Complex64, a: f64) -> bool {
    !inside_sa(z, a)
}

/// Strict exterior of the Szegő curve `S_1`.
pub fn outside_s1(z: Complex64) -> bool {
    !inside_sa(z, 1.0)
}

/// Strict exterior of `S_a^d`, the preimage of `S_a` under `z -> a - z^d`.
pub fn outside_sad(z: Complex64, a: f64, d: u32) -> bool {
    outside_sa(a - z.powu(d), a)
}

/// Even-odd rule point-in-polygon test.
pub fn point_in_polygon(z: Complex64, poly: &[Complex64]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (pi, pj) = (poly[i], poly[j]);
        if (pi.im > z.im) != (pj.im > z.im) {
            let x = pj.re + (z.im - pj.im) * (pi.re - pj.re) / (pi.im - pj.im);
            if z.re < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Traces the requested curve with vertices at most `step` apart.
pub fn trace_curve(p: &EnsembleParams, which: Curve, step: f64) -> Result<CurveSample> {
    p.validate()?;
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidParams(format!("step must be positive, got {step}")));
    }
    let components = match which {
        Curve::S1 => vec![trace_sa_like(p, Curve::S1, 1.0, step)?],
        Curve::Sa => {
            p.require_a_above_one("S_a")?;
            vec![trace_sa_like(p, Curve::Sa, p.a, step)?]
        }
        Curve::SaD => {
            p.require_a_above_one("S_a^d")?;
            trace_sad(p, step)?
        }
        Curve::DropletBoundary => trace_droplet(p, step)?,
    };
    Ok(CurveSample { curve_id: which, params: *p, step, components })
}

fn newton(z0: Complex64, p: &EnsembleParams, which: Curve) -> Option<Complex64> {
    let mut z = z0;
    for _ in 0..40 {
        let (f, g) = curve_function(z, p, which).ok()?;
        if f.abs() <= VERTEX_TOL {
            return Some(z);
        }
        let g2 = g.norm_sqr();
        if g2 == 0.0 || !g2.is_finite() {
            return None;
        }
        z -= g * (f / g2);
    }
    let (f, _) = curve_function(z, p, which).ok()?;
    (f.abs() <= VERTEX_TOL).then_some(z)
}

/// Real root of `log|x| - a x - log(1/a) + 1` on `(-1/a, 0)`.
fn sa_left_crossing(a: f64) -> f64 {
    let g = |x: f64| (-x).ln() - a * x - ((1.0 / a).ln() - 1.0);
    let (mut lo, mut hi) = (-1.0 / a, -1e-300);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-17 * lo.abs() {
            break;
        }
    }
    0.5 * (lo + hi)
}

enum Stop {
    AtCorner(Complex64),
    BackAtStart,
}

/// Predictor-corrector march along `F = 0` in direction `sign * i * grad F`.
fn march(p: &EnsembleParams, which: Curve, start: Complex64, sign: f64, step: f64, stop: Stop) -> Result<Vec<Complex64>> {
    let mut pts = vec![start];
    let mut z = start;
    let h_max = 0.9 * step;
    let mut h = h_max;
    let mut travelled = 0.0;
    let max_vertices = 10_000_000usize;
    loop {
        if let Stop::AtCorner(c) = stop {
            if (z - c).norm() <= step {
                pts.push(c);
                return Ok(pts);
            }
        }
        let (_, g) = curve_function(z, p, which)?;
        let gn = g.norm();
        if gn > GRADIENT_BLOWUP {
            return Err(Error::Tracing(format!("gradient blow-up near {z} on {which}")));
        }
        if gn == 0.0 {
            return Err(Error::Tracing(format!("vanishing gradient at {z} on {which}")));
        }
        let t = Complex64::i() * g / gn * sign;
        let mut accepted = None;
        while h >= step * 1e-9 {
            let pred = z + t * h;
            if let Some(zn) = newton(pred, p, which) {
                let chord = (zn - z).norm();
                let turn_ok = curve_function(zn, p, which)
                    .map(|(_, gn2)| {
                        let tn = Complex64::i() * gn2 / gn2.norm() * sign;
                        (tn * t.conj()).re > 0.9
                    })
                    .unwrap_or(false);
                if chord <= step && chord > 0.05 * h && turn_ok {
                    accepted = Some(zn);
                    break;
                }
            }
            h *= 0.5;
        }
        let zn = accepted.ok_or_else(|| Error::Tracing(format!("corrector stalled near {z} on {which}")))?;
        travelled += (zn - z).norm();
        z = zn;
        if let Stop::BackAtStart = stop {
            if travelled > 3.0 * step && (z - start).norm() <= step {
                let prev = pts[pts.len() - 1];
                if (z - start).norm() >= 0.25 * step || (prev - start).norm() > step {
                    pts.push(z);
                }
                return Ok(pts);
            }
        }
        pts.push(z);
        h = (h * 2.0).min(h_max);
        if pts.len() > max_vertices {
            return Err(Error::Tracing(format!("no termination after {} vertices on {which}", pts.len())));
        }
    }
}

/// Closes a curve symmetric under conjugation from its traced half.
/// `half` runs from a real seed to a real corner.
fn mirror_close(half: &[Complex64]) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = half.to_vec();
    let n = half.len();
    for z in half[1..n - 1].iter().rev() {
        pts.push(z.conj());
    }
    pts
}

fn trace_sa_like(p: &EnsembleParams, which: Curve, a: f64, step: f64) -> Result<CurveComponent> {
    let seed = Complex64::new(sa_left_crossing(a), 0.0);
    let seed = newton(seed, p, which).ok_or_else(|| Error::Tracing("seed correction failed".into()))?;
    let seed = Complex64::new(seed.re, 0.0);
    let corner = Complex64::new(1.0 / a, 0.0);
    // the gradient at the leftmost point faces -x, so +i*grad heads down: counterclockwise
    let lower = march(p, which, seed, 1.0, step, Stop::AtCorner(corner))?;
    Ok(CurveComponent { points: mirror_close(&lower), closed: true })
}

fn trace_sad(p: &EnsembleParams, step: f64) -> Result<Vec<CurveComponent>> {
    let a = p.a;
    let d = p.d;
    let df = d as f64;
    let u_left = sa_left_crossing(a);
    let seed = Complex64::new((a - u_left).powf(1.0 / df), 0.0);
    let seed = newton(seed, p, Curve::SaD).ok_or_else(|| Error::Tracing("seed correction failed".into()))?;
    let seed = Complex64::new(seed.re, 0.0);
    let corner = Complex64::new((a - 1.0 / a).powf(1.0 / df), 0.0);
    // rightmost point of the k = 0 loop; +i*grad heads up: counterclockwise
    let upper = march(p, Curve::SaD, seed, 1.0, step, Stop::AtCorner(corner))?;
    let base = mirror_close(&upper);
    let mut comps = Vec::with_capacity(d as usize);
    for k in 0..d {
        let w = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / df);
        let mut pts = Vec::with_capacity(base.len());
        for (i, z) in base.iter().enumerate() {
            let r = if k == 0 { *z } else { z * w };
            let is_corner = i == upper.len() - 1;
            let r = if k == 0 || is_corner { r } else { newton(r, p, Curve::SaD).unwrap_or(r) };
            pts.push(r);
        }
        comps.push(CurveComponent { points: pts, closed: true });
    }
    Ok(comps)
}

fn distance_to_polyline(z: Complex64, pts: &[Complex64]) -> f64 {
    pts.iter().map(|q| (z - q).norm()).fold(f64::INFINITY, f64::min)
}

fn trace_droplet(p: &EnsembleParams, step: f64) -> Result<Vec<CurveComponent>> {
    let df = p.d as f64;
    let root = (p.a + 1.0).powf(1.0 / df);
    let mut comps: Vec<CurveComponent> = Vec::new();
    for k in 0..p.d {
        let w = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / df);
        let seed = if k == 0 { Complex64::new(root, 0.0) } else { newton(w * root, p, Curve::DropletBoundary).unwrap_or(w * root) };
        if comps.iter().any(|c| distance_to_polyline(seed, &c.points) <= 2.0 * step) {
            continue;
        }
        // the outward gradient at the outermost point faces away from 0, so +i*grad is counterclockwise
        let pts = march(p, Curve::DropletBoundary, seed, 1.0, step, Stop::BackAtStart)?;
        comps.push(CurveComponent { points: pts, closed: true });
    }
    Ok(comps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: f64, d: u32) -> EnsembleParams {
        EnsembleParams::new(1, 0.0, a, d).unwrap()
    }

    fn signed_area(pts: &[Complex64]) -> f64 {
        let n = pts.len();
        (0..n).map(|i| {
            let (u, v) = (pts[i], pts[(i + 1) % n]);
            u.re * v.im - v.re * u.im
        }).sum::<f64>() / 2.0
    }

    #[test]
    fn residual_examples() {
        let p = params(2.0, 1);
        let (r, ok) = skeleton_residual(Complex64::new(0.5, 0.0), &p, Curve::Sa).unwrap();
        assert!(r.abs() < 1e-15 && ok);
        let (r, ok) = skeleton_residual(Complex64::new(1.0, 0.0), &p, Curve::S1).unwrap();
        assert!(r.abs() < 1e-15 && ok);
        let q = params(1.1, 2);
        let tip = Complex64::new(1.1f64.sqrt(), 0.0);
        // z^d rounds to a exactly or nearly; either way the log is singular or hugely negative
        match skeleton_residual(tip, &q, Curve::SaD) {
            Err(Error::Singular(_)) => {}
            Ok((r, _)) => assert!(r < -30.0),
            Err(e) => panic!("{e}"),
        }
        let exact_tip = Complex64::new(1.0, 0.0);
        let r = params(1.0, 2);
        assert!(matches!(skeleton_residual(exact_tip, &r, Curve::SaD), Err(Error::Singular(_))));
        assert!(skeleton_residual(Complex64::new(0.0, 0.0), &p, Curve::Sa).is_err());
    }

    #[test]
    fn sa_passes_through_corner() {
        let p = params(2.0, 1);
        let c = trace_curve(&p, Curve::Sa, 0.01).unwrap();
        assert_eq!(c.component_count(), 1);
        assert!(c.closed());
        assert!(c.points().any(|z| (z - 0.5).norm() == 0.0));
        assert!(c.max_residual() <= 1e-10);
        assert!(c.max_gap() <= 0.01);
        for z in c.points() {
            assert!(skeleton_residual(z, &p, Curve::Sa).unwrap().1);
        }
        assert!(signed_area(&c.components[0].points) > 0.0);
    }

    #[test]
    fn s1_trace() {
        let p = params(3.0, 1);
        let c = trace_curve(&p, Curve::S1, 0.005).unwrap();
        assert!(c.max_residual() <= 1e-10);
        assert!(c.max_gap() <= 0.005);
        assert!(c.points().all(|z| z.norm() <= 1.0 + 1e-12));
        let left = c.points().map(|z| z.re).fold(f64::INFINITY, f64::min);
        assert!((left + 0.278_464_542_761_074).abs() < 1e-9, "{left}");
    }

    #[test]
    fn exterior_test_matches_polygon() {
        for &a in &[1.2, 2.0, 3.5] {
            let p = params(a, 1);
            let poly = trace_curve(&p, Curve::Sa, 1e-3).unwrap().components[0].points.clone();
            for i in -30..=30 {
                for j in -30..=30 {
                    let z = Complex64::new(i as f64 * 0.04 / a, j as f64 * 0.04 / a);
                    if (z.norm() * a - 1.0).abs() < 1e-3 || distance_to_polyline(z, &poly) < 2e-3 {
                        continue;
                    }
                    assert_eq!(inside_sa(z, a), point_in_polygon(z, &poly), "a={a} z={z}");
                }
            }
        }
    }

    #[test]
    fn sad_loops() {
        for d in 2..5 {
            let p = params(1.1, d);
            let c = trace_curve(&p, Curve::SaD, 0.01).unwrap();
            assert_eq!(c.component_count(), d as usize);
            assert!(c.max_residual() <= 1e-10);
            assert!(c.max_gap() <= 0.01 * (1.0 + 1e-9));
            for z in c.points() {
                assert!(skeleton_residual(z, &p, Curve::SaD).unwrap().1, "{z}");
            }
            for comp in &c.components {
                assert!(signed_area(&comp.points) > 0.0);
            }
            // each loop encloses its branch tip a^{1/d} w^k but not the origin
            for k in 0..d {
                let tip = Complex64::from_polar(1.1f64.powf(1.0 / d as f64), 2.0 * PI * k as f64 / d as f64);
                assert!(point_in_polygon(tip, &c.components[k as usize].points));
                assert!(!point_in_polygon(Complex64::new(0.0, 0.0), &c.components[k as usize].points));
            }
        }
    }

    #[test]
    fn droplet_components() {
        for d in 2..5 {
            let p = params(1.1, d);
            let c = trace_curve(&p, Curve::DropletBoundary, 0.01).unwrap();
            assert_eq!(c.component_count(), d as usize, "d={d}");
            for z in c.points() {
                let v = super::super::potentials::potential_v(z, &p);
                assert!((v - 1.0 / d as f64).abs() <= 1e-10);
            }
            assert!(c.max_gap() <= 0.01, "d={d} gap={}", c.max_gap());
        }
    }

    #[test]
    fn droplet_circle_and_connected_case() {
        let p = params(0.0, 1);
        let c = trace_curve(&p, Curve::DropletBoundary, 0.01).unwrap();
        assert_eq!(c.component_count(), 1);
        assert!(c.points().all(|z| (z.norm() - 1.0).abs() < 1e-12));
        let area = signed_area(&c.components[0].points);
        assert!((area - PI).abs() < 1e-3);
        let q = params(0.5, 3);
        assert_eq!(trace_curve(&q, Curve::DropletBoundary, 0.01).unwrap().component_count(), 1);
    }

    #[test]
    fn rejects_bad_requests() {
        let p = params(0.5, 1);
        assert!(matches!(trace_curve(&p, Curve::Sa, 0.01), Err(Error::InvalidParams(_))));
        let q = params(2.0, 1);
        assert!(trace_curve(&q, Curve::Sa, 0.0).is_err());
    }

    #[test]
    fn csv_layout() {
        let p = params(2.0, 1);
        let c = trace_curve(&p, Curve::Sa, 0.1).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("re,im,curve_id,component"));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), 4);
        assert_eq!(row[2], "Sa");
        let re: f64 = row[0].parse().unwrap();
        assert_eq!(re, c.components[0].points[0].re);
    }
}
