use archipelago::geometry::{skeleton_residual, trace_curve, Curve};
use archipelago::kernels::{kernel_fullq_exact, KernelField, KernelMode};
use archipelago::orthopoly::{closed_form_polysystem, gram_polysystem, quad_polysystem, QuadSpec};
use archipelago::verify::{rel, run_suite, SuiteId};
use archipelago::{EnsembleParams, Error, Verdict, VerifyConfig};
use num_complex::Complex64;
use proptest::prelude::*;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn three_routes_to_the_induced_kernel_agree() {
    let p = EnsembleParams::induced(12, 1.0, 2.0).unwrap();
    let closed = closed_form_polysystem(&p, 12).unwrap();
    let gram = gram_polysystem(&p, 12, None).unwrap();
    let quad = quad_polysystem(&p, 12, &QuadSpec::default()).unwrap();
    for (z, w) in [(cx(0.3, 0.4), cx(-0.5, 0.2)), (cx(1.1, -0.7), cx(0.9, 0.1)), (cx(2.5, 1.0), cx(-1.0, 2.0))] {
        let k = kernel_fullq_exact(z, w, &closed).unwrap().value;
        assert!(rel(kernel_fullq_exact(z, w, &gram).unwrap().value, k) < 1e-10, "{z} {w}");
        assert!(rel(kernel_fullq_exact(z, w, &quad).unwrap().value, k) < 1e-8, "{z} {w}");
    }
}

#[test]
fn field_over_a_grid_is_hermitian() {
    let p = EnsembleParams::induced(15, 2.0, 1.5).unwrap();
    let sys = gram_polysystem(&p, 15, None).unwrap();
    let pts = [cx(-0.5, 0.5), cx(0.0, 0.0), cx(0.7, -0.2), cx(1.4, 0.3)];
    let pairs: Vec<_> = pts.iter().flat_map(|&z| pts.iter().map(move |&w| (z, w))).collect();
    let f = KernelField::sample(p, KernelMode::ExactFullQ, &pairs, |z, w| kernel_fullq_exact(z, w, &sys)).unwrap();
    assert!(f.hermitian_defect() < 1e-12);
    assert!(f.diagonal_nonnegative(1e-12));
}

#[test]
fn droplet_loops_close_on_the_level_set() {
    for d in [2u32, 5] {
        let p = EnsembleParams::new(1, 0.0, 1.1, d).unwrap();
        let s = trace_curve(&p, Curve::DropletBoundary, 0.02).unwrap();
        assert_eq!(s.component_count(), d as usize);
        for comp in &s.components {
            assert!(comp.closed);
            for &z in &comp.points {
                assert!(skeleton_residual(z, &p, Curve::DropletBoundary).unwrap().0.abs() < 1e-10, "d={d} {z}");
            }
        }
    }
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(matches!(EnsembleParams::induced(10, -1.0, 2.0), Err(Error::InvalidParams(_))));
    assert!(matches!(EnsembleParams::induced(0, 1.0, 2.0), Err(Error::InvalidParams(_))));
    assert!(matches!(EnsembleParams::new(10, 1.0, 1.1, 0), Err(Error::InvalidParams(_))));
}

#[test]
fn suite_configuration_round_trips_and_rejects_unknown_fields() {
    let cfg = VerifyConfig { seed: Some(9), extra_points: 3, ..VerifyConfig::default() };
    let text = serde_json::to_string(&cfg).unwrap();
    assert_eq!(serde_json::from_str::<VerifyConfig>(&text).unwrap(), cfg);
    assert_eq!(serde_json::from_str::<VerifyConfig>("{}").unwrap(), VerifyConfig::default());
    assert!(serde_json::from_str::<VerifyConfig>(r#"{"no_such_field": 1}"#).is_err());
}

#[test]
fn geometry_suite_passes_for_other_shifts() {
    let cfg = VerifyConfig { a: 3.0, lem_a: 1.5, ..VerifyConfig::default() };
    assert_eq!(run_suite(SuiteId::Geometry, &cfg).unwrap().verdict(), Verdict::Pass);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_is_conjugate_symmetric(zr in -1.5f64..1.5, zi in -1.5f64..1.5, wr in -1.5f64..1.5, wi in -1.5f64..1.5) {
        let p = EnsembleParams::induced(10, 1.0, 2.0).unwrap();
        let sys = closed_form_polysystem(&p, 10).unwrap();
        let (z, w) = (cx(zr, zi), cx(wr, wi));
        let kzw = kernel_fullq_exact(z, w, &sys).unwrap().value.to_complex();
        let kwz = kernel_fullq_exact(w, z, &sys).unwrap().value.to_complex();
        prop_assert!((kzw - kwz.conj()).norm() <= 1e-12 * kzw.norm().max(1e-300));
    }

    #[test]
    fn cauchy_schwarz_holds(zr in -1.5f64..1.5, zi in -1.5f64..1.5, wr in -1.5f64..1.5, wi in -1.5f64..1.5) {
        let p = EnsembleParams::induced(10, 1.0, 2.0).unwrap();
        let sys = closed_form_polysystem(&p, 10).unwrap();
        let (z, w) = (cx(zr, zi), cx(wr, wi));
        let k = |a, b| kernel_fullq_exact(a, b, &sys).unwrap().value.modulus();
        prop_assert!(k(z, w).powi(2) <= k(z, z) * k(w, w) * (1.0 + 1e-10));
    }
}
