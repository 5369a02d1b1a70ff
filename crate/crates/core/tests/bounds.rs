mod common;

use common::*;
use hyperdirac::bounds::*;
use hyperdirac::conformal::conformal_context;
use hyperdirac::connections::HypothesisStatus;
use hyperdirac::error::Error;
use hyperdirac::geometry::{FourierTerm, ModelKind, ScalarFieldSpec};
use hyperdirac::operators::OperatorKind;

#[test]
fn registry_lists_every_theorem() {
    let ids: Vec<&str> = BoundRegistry::global().iter().map(|s| s.id()).collect();
    for id in [
        "thm1_1",
        "thm1_2",
        "zhang4_1",
        "hijazi_zhang6_1",
        "friedrich",
        "hijazi_em",
        "df_prop1",
        "df_prop2",
        "df_prop3",
    ] {
        assert!(ids.contains(&id), "{id}");
    }
    assert_eq!(ids.len(), 9);
}

#[test]
fn operator_mismatch_is_a_config_error() {
    let m = model(ModelKind::Circle { r: 1.0 }, 16);
    let e = Eigen::near(m.as_ref(), &OperatorKind::Dirac, 4, 0.5);
    assert!(matches!(evaluate_bound("thm1_1", &e.input(m.as_ref())), Err(Error::Config(_))));
    assert!(matches!(evaluate_bound("nope", &e.input(m.as_ref())), Err(Error::Config(_))));
}

#[test]
fn negative_circle_mode_is_strictly_above_the_bound() {
    let m = model(ModelKind::Circle { r: 1.0 }, 64);
    let e = Eigen::near(m.as_ref(), &OperatorKind::Hypersurface, 12, -2.0);
    let r = evaluate_bound("thm1_1", &e.input(m.as_ref())).unwrap();
    // μ = −3/2: rhs = ¼(2|μ| − 1)² = 1, margin 3
    assert!((r.rhs.unwrap() - 1.0).abs() < 1e-10);
    assert!((r.margin.unwrap() - 3.0).abs() < 1e-10);
    assert!(!r.equality);
    assert!(r.residual.unwrap() > 1e-2);
    assert!(r.sound() && r.equality_consistent());
    assert_eq!(r.sign, SignCheck::NotApplicable);
}

#[test]
fn circle_equality_modes() {
    let m = model(ModelKind::Circle { r: 1.0 }, 64);
    for mu in [1.5, 2.5, 3.5] {
        let e = Eigen::near(m.as_ref(), &OperatorKind::Hypersurface, 12, mu - 0.5);
        let r = evaluate_bound("thm1_1", &e.input(m.as_ref())).unwrap();
        assert_eq!(r.status, HypothesisStatus::Strict);
        assert!(r.equality);
        assert!((r.lambda_sq - 0.25 * (2.0 * mu - 1.0).powi(2)).abs() < 1e-8);
        assert_eq!(r.sign, SignCheck::Pass);
        assert_eq!(r.background_sign, Some(1));
        assert!(r.note.as_deref().is_some_and(|n| n.starts_with("n = 1")));
    }
}

#[test]
fn sphere_kernel_is_boundary_not_violated() {
    let m = model(ModelKind::Sphere2 { r: 1.0 }, 12);
    let e = Eigen::near(m.as_ref(), &OperatorKind::Hypersurface, 2, 0.0);
    for id in ["thm1_1", "zhang4_1"] {
        let r = evaluate_bound(id, &e.input(m.as_ref())).unwrap();
        assert_eq!(r.status, HypothesisStatus::Boundary, "{id}");
        assert_eq!(r.rhs, Some(0.0));
        assert!(r.lambda_sq < 1e-20);
        assert!(r.equality && r.parallel());
    }
}

#[test]
fn friedrich_equality_on_geodesic_spheres() {
    for rho in [PI / 4.0, PI / 3.0, 2.0] {
        let m = model(ModelKind::GeodesicSphereS3 { rho }, 8);
        let e = Eigen::near(m.as_ref(), &OperatorKind::Dirac, 8, 1.0 / rho.sin());
        let r = evaluate_bound("friedrich", &e.input(m.as_ref())).unwrap();
        // λ² = n/(4(n−1))·R = 1/sin²ρ, attained by Killing spinors
        assert!((r.rhs.unwrap() - 1.0 / rho.sin().powi(2)).abs() < 1e-10);
        assert!(r.equality && r.parallel(), "{r:?}");
    }
}

#[test]
fn friedrich_needs_positive_curvature() {
    let m = model(square_torus(), 7);
    let e = Eigen::near(m.as_ref(), &OperatorKind::Dirac, 8, 1.0);
    let r = evaluate_bound("friedrich", &e.input(m.as_ref())).unwrap();
    assert_eq!(r.status, HypothesisStatus::NotApplicable);
    assert!(r.margin.is_none());
    assert!(r.sound());
}

#[test]
fn hijazi_on_flat_torus_is_sharp() {
    let m = model(square_torus(), 9);
    for mu in [1.0, 2f64.sqrt()] {
        let e = Eigen::near(m.as_ref(), &OperatorKind::Dirac, 18, mu);
        let r = evaluate_bound("hijazi_em", &e.input(m.as_ref())).unwrap();
        assert_eq!(r.status, HypothesisStatus::Strict);
        assert!((r.rhs.unwrap() - mu * mu).abs() < 1e-10);
        assert!(r.equality && r.parallel());
    }
}

#[test]
fn df_prop1_is_violated_on_flat_torus() {
    // nR/(n−1) = 0 < f² = 1
    let m = model(square_torus(), 7);
    let e = Eigen::near(m.as_ref(), &f_const(1.0), 8, 0.5);
    let r = evaluate_bound("df_prop1", &e.input(m.as_ref())).unwrap();
    assert_eq!(r.status, HypothesisStatus::Violated);
    assert!(r.rhs.is_none() && r.sound());
}

#[test]
fn zhang_is_not_applicable_on_curves() {
    let m = model(ModelKind::Ellipse { a: 2.0, b: 1.0 }, 64);
    let e = Eigen::near(m.as_ref(), &OperatorKind::Hypersurface, 8, 1.0);
    let r = evaluate_bound("zhang4_1", &e.input(m.as_ref())).unwrap();
    assert_eq!(r.status, HypothesisStatus::NotApplicable);
}

#[test]
fn conformal_bound_needs_a_factor() {
    let m = model(ModelKind::Circle { r: 1.0 }, 32);
    let e = Eigen::near(m.as_ref(), &OperatorKind::Hypersurface, 8, 1.0);
    assert!(matches!(evaluate_bound("thm1_2", &e.input(m.as_ref())), Err(Error::Config(_))));
}

#[test]
fn thm1_2_reduces_to_thm1_1_at_zero_factor() {
    for (kind, res) in [(ModelKind::Circle { r: 1.0 }, 64), (ModelKind::Sphere2 { r: 1.0 }, 8)] {
        let m = model(kind, res);
        for target in [1.0, 2.0] {
            let e = Eigen::near(m.as_ref(), &OperatorKind::Hypersurface, 12, target);
            let ctx = conformal_context(m.as_ref(), &e.sample, &ScalarFieldSpec::Zero).unwrap();
            let mut input = e.input(m.as_ref());
            let plain = evaluate_bound("thm1_1", &input).unwrap();
            input.conformal = Some(&ctx);
            let conf = evaluate_bound("thm1_2", &input).unwrap();
            assert_eq!(plain.rhs.map(f64::to_bits), conf.rhs.map(f64::to_bits));
            assert_eq!(plain.status, conf.status);
        }
    }
}

#[test]
fn thm1_2_with_a_factor_stays_sound() {
    let m = model(ModelKind::Ellipse { a: 1.5, b: 1.0 }, 64);
    let u = ScalarFieldSpec::Fourier {
        terms: vec![FourierTerm { k: [2, 0], cos: 0.1, sin: 0.0 }],
    };
    let s = spectrum(m.as_ref(), &OperatorKind::Hypersurface, 8);
    for i in 0..s.len() {
        let e = Eigen::new(m.as_ref(), &OperatorKind::Hypersurface, s.values[i], &s.vector(i));
        let ctx = conformal_context(m.as_ref(), &e.sample, &u).unwrap();
        let mut input = e.input(m.as_ref());
        input.conformal = Some(&ctx);
        let r = evaluate_bound("thm1_2", &input).unwrap();
        assert!(r.sound() && r.equality_consistent(), "{r:?}");
    }
}

#[test]
fn improvement_record_on_geodesic_sphere() {
    let rho = PI / 4.0;
    let m = model(ModelKind::GeodesicSphereS3 { rho }, 8);
    let t = (rho / 2.0).tan();
    let e = Eigen::near(m.as_ref(), &OperatorKind::Hypersurface, 8, t);
    let rec = improvement_comparison(&e.input(m.as_ref())).unwrap();
    assert!((rec.rhs_thm1.unwrap() - t * t).abs() < 1e-7);
    assert!((rec.rhs_zhang.unwrap() - t * t).abs() < 1e-7);
    assert_eq!(rec.consistent, Some(true));
}

#[test]
fn report_round_trips_through_json() {
    let m = model(ModelKind::Circle { r: 1.0 }, 32);
    let e = Eigen::near(m.as_ref(), &OperatorKind::Hypersurface, 8, 2.0);
    let r = evaluate_bound("thm1_1", &e.input(m.as_ref())).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    let back: BoundReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    assert!(text.contains("\"status\":\"strict\""));
}
