//! Geometry suite: traced skeletons and droplet boundaries.

use super::config::VerifyConfig;
use super::report::ConvergenceReport;
use crate::error::Result;
use crate::geometry::{skeleton_residual, trace_curve, Curve, EnsembleParams};
use num_complex::Complex64;

const ID: &str = "geometry";
pub const RESIDUAL_CEILING: f64 = 1e-10;
pub const TRACE_STEP: f64 = 0.01;

pub fn suite_geometry(cfg: &VerifyConfig) -> Result<Vec<ConvergenceReport>> {
    let mut out = Vec::new();
    let p = EnsembleParams::induced(1, 0.0, cfg.geometry_a)?;
    let sa = trace_curve(&p, Curve::Sa, TRACE_STEP)?;
    let corner = Complex64::new(1.0 / p.a, 0.0);
    let dist = sa.points().map(|z| (z - corner).norm()).fold(f64::INFINITY, f64::min);
    let (res, _) = skeleton_residual(corner, &p, Curve::Sa)?;
    out.push(
        ConvergenceReport::new(ID, "sa_through_inverse_a", vec![p], vec![(1, dist.max(res.abs()))])
            .indexed_by("-")
            .ceiling(RESIDUAL_CEILING)
            .note(format!("a = {}, distance of 1/a to the trace and residual there", p.a))
            .finish(),
    );
    out.push(
        ConvergenceReport::new(ID, "sa_residual", vec![p], vec![(1, sa.max_residual())])
            .indexed_by("-")
            .ceiling(RESIDUAL_CEILING)
            .note(format!("{} vertices", sa.points().count()))
            .finish(),
    );
    for &d in &cfg.droplet_ds {
        let q = EnsembleParams::new(1, 0.0, cfg.lem_a, d)?;
        let curve = trace_curve(&q, Curve::DropletBoundary, TRACE_STEP)?;
        out.push(
            ConvergenceReport::new(ID, &format!("droplet_residual_d{d}"), vec![q], vec![(d as usize, curve.max_residual())])
                .indexed_by("d")
                .ceiling(RESIDUAL_CEILING)
                .note("V = 1/d on the traced boundary")
                .finish(),
        );
        let count = curve.component_count();
        out.push(
            ConvergenceReport::new(
                ID,
                &format!("droplet_components_d{d}"),
                vec![q],
                vec![(d as usize, (count as f64 - d as f64).abs())],
            )
            .indexed_by("d")
            .ceiling(0.0)
            .note(format!("{count} closed component(s) at a = {}", q.a))
            .finish(),
        );
    }
    Ok(out)
}
