mod common;

use common::*;
use hyperdirac::connections::*;
use hyperdirac::energy_momentum::{compute_q, SpinorSample};
use hyperdirac::geometry::{Model, ModelKind};
use hyperdirac::linalg::{CVec, C64};
use hyperdirac::operators::OperatorKind;
use proptest::prelude::*;

fn mean_curvature(m: &dyn Model) -> Vec<f64> {
    m.mean_curvature().unwrap().to_vec()
}

#[test]
fn circle_em_parameters_match_closed_form() {
    let m = model(ModelKind::Circle { r: 1.0 }, 64);
    let h = mean_curvature(m.as_ref());
    for mu in [1.5, 2.5, 3.5] {
        let e = Eigen::near(m.as_ref(), &OperatorKind::Hypersurface, 12, mu - 0.5);
        let out = pq_thm1(&e.sample, &e.field, &h, e.lambda);
        assert_eq!(out.status, HypothesisStatus::Strict);
        let p = out.params.unwrap();
        // n q² = H/(2|μ| − H) with H = 1, and the shift vanishes
        let q2 = 1.0 / (2.0 * mu - 1.0);
        for node in 0..h.len() {
            let q = p.q[node].unwrap();
            assert!((q * q - q2).abs() < 1e-10);
            assert!((p.p[node].unwrap() + 1.0 / q).abs() < 1e-10);
            assert!(p.shift[node].unwrap().abs() < 1e-8);
        }
        let d = nabla_q_apply(&e.sample, &p, &e.field).unwrap();
        assert!(d.norm < 1e-8);
        assert!(integral_identity_residual(&e.sample, &p, &e.field).unwrap() < 1e-8);
    }
}

#[test]
fn zhang_parameters_on_geodesic_sphere() {
    let rho = std::f64::consts::FRAC_PI_3;
    let m = model(ModelKind::GeodesicSphereS3 { rho }, 8);
    let h = mean_curvature(m.as_ref());
    let t = (rho / 2.0).tan();
    let e = Eigen::near(m.as_ref(), &OperatorKind::Hypersurface, 8, t);
    let out = pq_zhang(&e.sample, &e.field, &h, e.lambda);
    assert_eq!(out.status, HypothesisStatus::Strict);
    let p = out.params.unwrap();
    // (1 − 2q)² = 1 picks q = 0, p = 1, s = H/2 = cot ρ
    for node in 0..h.len() {
        assert!(p.q[node].unwrap().abs() < 1e-12);
        assert!((p.p[node].unwrap() - 1.0).abs() < 1e-12);
        assert!((p.shift[node].unwrap() - 1.0 / rho.tan()).abs() < 1e-10);
    }
    assert!(nabla_lambda_apply(&e.sample, &p, &e.field).unwrap().norm < 1e-7);
}

#[test]
fn boundary_kernel_limits() {
    let m = model(ModelKind::Sphere2 { r: 1.0 }, 8);
    let h = mean_curvature(m.as_ref());
    let e = Eigen::near(m.as_ref(), &OperatorKind::Hypersurface, 4, 0.0);
    assert!(e.lambda.abs() < 1e-10);
    let x = em_curvature(&e.sample.scalar_curvature, &e.field);
    let em = params_with_limits(ParamFamily::EnergyMomentum, 2, &x, &h, e.lambda);
    assert_eq!(em.status, HypothesisStatus::Boundary);
    assert!(em.shift.iter().all(|s| s.unwrap().abs() < 1e-12));
    let y = zhang_curvature(2, &e.sample.scalar_curvature, &e.field);
    let z = params_with_limits(ParamFamily::Zhang, 2, &y, &h, e.lambda);
    assert_eq!(z.status, HypothesisStatus::Boundary);
    // p → 1/n, so s → H/(2n)
    assert!(z.shift.iter().all(|s| (s.unwrap() - 0.5).abs() < 1e-12));
    // the typed outcome refuses to hand out parameters at the boundary
    assert!(pq_thm1(&e.sample, &e.field, &h, e.lambda).params.is_none());
}

#[test]
fn boundary_with_nonzero_eigenvalue_has_no_limit() {
    let m = model(ModelKind::Sphere2 { r: 1.0 }, 8);
    let h = mean_curvature(m.as_ref());
    let e = Eigen::near(m.as_ref(), &OperatorKind::Hypersurface, 16, -2.0);
    assert!((e.lambda + 2.0).abs() < 1e-10);
    let x = em_curvature(&e.sample.scalar_curvature, &e.field);
    let em = params_with_limits(ParamFamily::EnergyMomentum, 2, &x, &h, e.lambda);
    assert_eq!(em.status, HypothesisStatus::Boundary);
    assert!(nabla_q_apply(&e.sample, &em, &e.field).is_none());
}

#[test]
fn violated_hypothesis_is_reported() {
    // the D kernel on the torus has Q = 0, so R + 4|Q|² = 0 < f² = 1
    let m = model(square_torus(), 7);
    let e = Eigen::near(m.as_ref(), &f_const(1.0), 8, -0.5);
    let out = pq_thm1(&e.sample, &e.field, e.potential.as_ref().unwrap(), e.lambda);
    assert_eq!(out.status, HypothesisStatus::Violated);
    assert!(out.params.is_none());
}

#[test]
fn zhang_needs_two_dimensions() {
    let m = model(ModelKind::Circle { r: 1.0 }, 16);
    let h = mean_curvature(m.as_ref());
    let e = Eigen::near(m.as_ref(), &OperatorKind::Hypersurface, 8, 1.0);
    assert_eq!(pq_zhang(&e.sample, &e.field, &h, e.lambda).status, HypothesisStatus::NotApplicable);
}

#[test]
fn flat_background_uses_q_zero_branch() {
    let m = model(square_torus(), 7);
    let e = Eigen::near(m.as_ref(), &OperatorKind::Dirac, 16, 1.0);
    let zero = vec![0.0; e.sample.nodes()];
    let out = pq_thm1(&e.sample, &e.field, &zero, e.lambda);
    assert_eq!(out.status, HypothesisStatus::Strict);
    let p = out.params.unwrap();
    assert!(p.q.iter().all(|q| *q == Some(0.0)));
    assert!(p.shift.iter().all(|s| *s == Some(0.0)));
}

#[test]
fn ellipse_integral_identity() {
    let m = model(ModelKind::Ellipse { a: 2.0, b: 1.0 }, 256);
    let s = spectrum(m.as_ref(), &OperatorKind::Hypersurface, 8);
    let i = (0..s.len()).find(|&i| s.values[i] > 1e-8).unwrap();
    let e = Eigen::new(m.as_ref(), &OperatorKind::Hypersurface, s.values[i], &s.vector(i));
    let h = mean_curvature(m.as_ref());
    let out = pq_thm1(&e.sample, &e.field, &h, e.lambda);
    let p = out.params.expect("hypothesis holds strictly on the ellipse");
    assert!(integral_identity_residual(&e.sample, &p, &e.field).unwrap() < 1e-6);
}

fn coeffs(m: &dyn Model, seed: u64) -> CVec {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    CVec::from_fn(m.ndof(), |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn qformula_holds_for_arbitrary_parameters(
        seed in any::<u64>(),
        p0 in -3.0f64..3.0,
        q0 in -3.0f64..3.0,
        lambda in -4.0f64..4.0,
        which in 0usize..3,
    ) {
        let (kind, res) = [
            (ModelKind::Ellipse { a: 1.5, b: 1.0 }, 16),
            (ModelKind::Sphere2 { r: 1.0 }, 5),
            (ModelKind::GeodesicSphereS3 { rho: 1.1 }, 5),
        ][which].clone();
        let m = model(kind, res);
        let s = SpinorSample::from_model(m.as_ref(), &coeffs(m.as_ref(), seed));
        let f = compute_q(&s).unwrap();
        let nodes = s.nodes();
        // vary p and q across nodes
        let p: Vec<f64> = (0..nodes).map(|j| p0 + (j as f64 * 0.37).sin()).collect();
        let q: Vec<f64> = (0..nodes).map(|j| q0 * (j as f64 * 0.11).cos()).collect();
        let params = ConnectionParams::custom(s.n, lambda, &mean_curvature(m.as_ref()), &p, &q);
        let scale = (0..nodes)
            .map(|j| s.nabla[j].iter().flatten().map(|z| z.norm_sqr()).sum::<f64>() + s.norm_sqr(j))
            .fold(0.0, f64::max);
        prop_assert!(qformula_residual(&s, &params, &f) < 1e-9 * scale * (1.0 + p0.abs() + q0.abs() + lambda.abs()).powi(2));
    }
}
