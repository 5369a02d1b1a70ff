//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach stdout.

mod common;

use std::time::Instant;

use common::*;
use hyperdirac::bounds::{evaluate_bound, BoundReport, SignCheck};
use hyperdirac::clifford::{
    alpha_embed, build_gamma, chirality_split, find_intertwiner, negated, restrict, volume_element, GammaSet,
};
use hyperdirac::conformal::{
    assemble_conformal_dirac, conformal_context, conformal_covariance_residual, q_scaling_residual,
    rbar_oracle_residual,
};
use hyperdirac::connections::{
    integral_identity_residual, nabla_lambda_apply, pq_thm1, pq_zhang, qformula_residual, ConnectionParams,
    HypothesisStatus,
};
use hyperdirac::energy_momentum::{compute_q, qtr_identity_residual, trace_identity_residual, SpinorSample};
use hyperdirac::error::Error;
use hyperdirac::geometry::{
    gauss_formula_residual, make_model, Discretization, FourierTerm, Model, ModelKind, ScalarFieldSpec,
};
use hyperdirac::linalg::{CMat, CVec, C64};
use hyperdirac::operators::{eigensolve, lichnerowicz_residual, witten_identity_residual, OperatorKind};
use hyperdirac::verify::{soundness_sweep, Fault};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Collects the individual measurements behind one criterion.
struct Criterion {
    failures: Vec<String>,
    checks: usize,
}

impl Criterion {
    fn new() -> Self {
        Criterion {
            failures: Vec::new(),
            checks: 0,
        }
    }

    fn below(&mut self, what: impl Into<String>, value: f64, tol: f64) {
        self.checks += 1;
        if value.is_nan() || value >= tol {
            self.failures.push(format!("{}: {value:e} >= {tol:e}", what.into()));
        }
    }

    fn at_least(&mut self, what: impl Into<String>, value: f64, tol: f64) {
        self.checks += 1;
        if value.is_nan() || value < tol {
            self.failures.push(format!("{}: {value:e} < {tol:e}", what.into()));
        }
    }

    fn holds(&mut self, what: impl Into<String>, ok: bool) {
        self.checks += 1;
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn error(&mut self, e: impl std::fmt::Display) {
        self.checks += 1;
        self.failures.push(format!("error: {e}"));
    }
}

fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn default_model(kind: ModelKind) -> Box<dyn Model> {
    make_model(&kind, &Discretization::default()).unwrap()
}

fn nearest(values: &[f64], target: f64) -> usize {
    (0..values.len())
        .min_by(|&a, &b| (values[a] - target).abs().total_cmp(&(values[b] - target).abs()))
        .unwrap()
}

/// Largest distance between two equally long sorted lists.
fn sorted_gap(mut got: Vec<f64>, mut want: Vec<f64>) -> f64 {
    if got.len() != want.len() {
        return f64::INFINITY;
    }
    got.sort_by(f64::total_cmp);
    want.sort_by(f64::total_cmp);
    got.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

fn report(m: &dyn Model, e: &Eigen, id: &str) -> BoundReport {
    evaluate_bound(id, &e.input(m)).unwrap()
}

fn clifford_relations(c: &mut Criterion, g: &GammaSet) {
    let d = g.dim_spinor;
    let id = CMat::identity(d, d);
    for (i, gi) in g.generators.iter().enumerate() {
        c.below(format!("n={} g_{i} unitary", g.n), max_abs(&(gi.adjoint() * gi - &id)), 1e-12);
        for (j, gj) in g.generators.iter().enumerate() {
            let delta = if i == j { -2.0 } else { 0.0 };
            c.below(
                format!("n={} anticommutator ({i},{j})", g.n),
                max_abs(&(gi * gj + gj * gi - id.scale(delta))),
                1e-12,
            );
        }
    }
    // ω = i^{⌊(n+1)/2⌋} g_1⋯g_n squares to one and is central-scalar in odd n
    let mut w = id.clone();
    for gi in &g.generators {
        w *= gi;
    }
    w *= C64::i().powi(g.n.div_ceil(2) as i32);
    c.below(format!("n={} volume element squares to 1", g.n), max_abs(&(&w * &w - &id)), 1e-12);
    c.below(format!("n={} volume element matches", g.n), max_abs(&(&w - volume_element(g))), 1e-12);
    if g.n % 2 == 1 {
        let scalar = w[(0, 0)];
        c.below(format!("n={} volume element is scalar", g.n), max_abs(&(&w - id.scale(scalar.re))), 1e-12);
    }
}

fn criterion_1(c: &mut Criterion) {
    let start = Instant::now();
    for n in 1..=5 {
        match build_gamma(n) {
            Ok(g) => clifford_relations(c, &g),
            Err(e) => c.error(e),
        }
    }
    for n in [2usize, 3] {
        let intrinsic = build_gamma(n).unwrap();
        let ambient = build_gamma(n + 1).unwrap();
        let mut embedded = alpha_embed(&ambient).unwrap();
        if n % 2 == 1 {
            let split = chirality_split(&ambient).unwrap();
            embedded = restrict(&embedded, &split.plus_basis);
        }
        match find_intertwiner(&intrinsic, &embedded) {
            Ok(u) => {
                let worst = intrinsic
                    .generators
                    .iter()
                    .zip(&embedded.generators)
                    .map(|(a, b)| max_abs(&(&u * a * u.adjoint() - b)))
                    .fold(0.0, f64::max);
                c.below(format!("n={n} intertwiner residual"), worst, 1e-10);
                let d = u.nrows();
                c.below(format!("n={n} intertwiner unitary"), max_abs(&(u.adjoint() * &u - CMat::identity(d, d))), 1e-10);
            }
            Err(e) => c.error(e),
        }
    }
    let g = build_gamma(3).unwrap();
    c.holds(
        "n=3 negated irrep reported inequivalent",
        matches!(find_intertwiner(&g, &negated(&g)), Err(Error::Inequivalent(_))),
    );
    c.below("runtime seconds", start.elapsed().as_secs_f64(), 5.0);
}

fn criterion_2(c: &mut Criterion) {
    let start = Instant::now();
    let m = model(ModelKind::Circle { r: 1.0 }, 64);
    let d = spectrum(m.as_ref(), &OperatorKind::Dirac, 12);
    let want: Vec<f64> = (0..6).flat_map(|k| [k as f64 + 0.5, -(k as f64) - 0.5]).collect();
    c.below("spec(D) = ±(k+1/2)", sorted_gap(d.values.clone(), want), 1e-10);
    // D − 1/2 sends ±(k+1/2) to k and −(k+1)
    let dh = spectrum(m.as_ref(), &OperatorKind::Hypersurface, 11);
    let want: Vec<f64> = (-5..=5).map(f64::from).collect();
    c.below("spec(D_H) = spec(D) - 1/2", sorted_gap(dh.values.clone(), want), 1e-10);
    c.below("runtime seconds", start.elapsed().as_secs_f64(), 1.0);
}

fn criterion_3(c: &mut Criterion) {
    let m = model(ModelKind::Circle { r: 1.0 }, 64);
    for mu in [1.5, 2.5, 3.5] {
        let e = Eigen::near(m.as_ref(), &OperatorKind::Hypersurface, 8, mu - 0.5);
        let expect = 0.25 * (2.0 * mu - 1.0) * (2.0 * mu - 1.0);
        c.below(format!("mu={mu} |λ² - ¼(2μ-1)²|"), (e.lambda * e.lambda - expect).abs(), 1e-8);
        let r = report(m.as_ref(), &e, "thm1_1");
        c.holds(format!("mu={mu} equality flagged"), r.equality);
        c.below(format!("mu={mu} ∇^Q residual"), r.residual.unwrap_or(f64::INFINITY), 1e-8);
        match pq_thm1(&e.sample, &e.field, m.mean_curvature().unwrap(), e.lambda).params {
            Some(p) => {
                let worst = p.shift.iter().map(|s| s.map_or(f64::INFINITY, f64::abs)).fold(0.0, f64::max);
                c.below(format!("mu={mu} shift s ≡ 0"), worst, 1e-8);
            }
            None => c.holds(format!("mu={mu} parameters exist"), false),
        }
        // H = 1/r > 0
        c.holds(format!("mu={mu} sign(λ) = sign(H)"), e.lambda > 0.0 && r.sign == SignCheck::Pass);
    }
}

fn criterion_4(c: &mut Criterion) {
    let m = model(ModelKind::Sphere2 { r: 1.0 }, 12);
    let s = spectrum(m.as_ref(), &OperatorKind::Dirac, 84);
    for k in 0..=5usize {
        for sign in [1.0, -1.0] {
            let target = sign * (k as f64 + 1.0);
            let near: Vec<f64> = s.values.iter().copied().filter(|v| (v - target).abs() < 1e-3).collect();
            let err = near.iter().map(|v| (v - target).abs()).fold(0.0, f64::max);
            c.below(format!("eigenvalue {target}"), err, 1e-8);
            c.holds(format!("eigenvalue {target} multiplicity {} = {}", near.len(), 2 * (k + 1)), near.len() == 2 * (k + 1));
        }
    }
    let e = Eigen::near(m.as_ref(), &OperatorKind::Dirac, 4, 1.0);
    c.below("|λ₁² - 1|", (e.lambda * e.lambda - 1.0).abs(), 1e-8);
    let r = report(m.as_ref(), &e, "friedrich");
    c.below("friedrich rhs = 1", (r.rhs.unwrap_or(f64::INFINITY) - 1.0).abs(), 1e-12);
    c.holds("friedrich equality flagged", r.equality);
}

fn criterion_5(c: &mut Criterion) {
    let m = model(ModelKind::Sphere2 { r: 1.0 }, 12);
    let e = Eigen::near(m.as_ref(), &OperatorKind::Dirac, 4, 1.0);
    let half = nalgebra::DMatrix::<f64>::identity(2, 2) * 0.5;
    let worst = e.field.unmasked().map(|(_, q)| (q - &half).norm()).fold(0.0, f64::max);
    c.below("max ‖Q - ½δ‖", worst, 1e-6);
    match qtr_identity_residual(&e.sample, &e.field) {
        Ok(v) => c.below("Qtr residual", v, 1e-8),
        Err(err) => c.error(err),
    }
    // n = 2, R = 2: nR/(n−1) − R = 2
    let worst = e
        .field
        .unmasked()
        .map(|(q, mat)| {
            let r = e.sample.scalar_curvature[q];
            (4.0 * mat.norm_squared() - (2.0 * r - r)).abs()
        })
        .fold(0.0, f64::max);
    c.below("|4|Q|² - (nR/(n-1) - R)|", worst, 1e-7);
}

fn criterion_6(c: &mut Criterion) {
    let m = model(ModelKind::Sphere2 { r: 1.0 }, 12);
    let s = spectrum(m.as_ref(), &OperatorKind::Hypersurface, 2);
    for i in 0..s.len() {
        let e = Eigen::new(m.as_ref(), &OperatorKind::Hypersurface, s.values[i], &s.vector(i));
        for id in ["thm1_1", "zhang4_1"] {
            let r = report(m.as_ref(), &e, id);
            c.holds(format!("kernel mode {i} {id} status {:?}", r.status), r.status == HypothesisStatus::Boundary);
            c.holds(format!("kernel mode {i} {id} rhs {:?}", r.rhs), r.rhs == Some(0.0));
            c.below(format!("kernel mode {i} {id} λ²"), r.lambda_sq, 1e-16);
        }
    }
}

fn criterion_7(c: &mut Criterion) {
    for rho in [PI / 4.0, PI / 3.0] {
        let label = format!("rho={rho:.4}");
        let m = default_model(ModelKind::GeodesicSphereS3 { rho });
        let t = (rho / 2.0).tan();
        let s = spectrum(m.as_ref(), &OperatorKind::Hypersurface, 2);
        let i = (0..s.len()).min_by(|&a, &b| s.values[a].abs().total_cmp(&s.values[b].abs())).unwrap();
        c.below(format!("{label} |λ₁(D_H) - tan(ρ/2)|"), (s.values[i] - t).abs(), 1e-8);
        let e = Eigen::new(m.as_ref(), &OperatorKind::Hypersurface, s.values[i], &s.vector(i));
        let z = report(m.as_ref(), &e, "zhang4_1");
        let a = report(m.as_ref(), &e, "thm1_1");
        c.below(format!("{label} zhang rhs = tan²"), (z.rhs.unwrap_or(f64::INFINITY) - t * t).abs(), 1e-7);
        c.below(format!("{label} thm1 rhs = tan²"), (a.rhs.unwrap_or(f64::INFINITY) - t * t).abs(), 1e-7);
        // the geodesic sphere is round of radius sin ρ, so λ₁(D) = 1/sin ρ
        let target = 1.0 / rho.sin() / 2.0;
        match pq_zhang(&e.sample, &e.field, m.mean_curvature().unwrap(), e.lambda).params {
            Some(p) => {
                let worst = p.shift.iter().map(|s| s.map_or(f64::INFINITY, |s| (s - target).abs())).fold(0.0, f64::max);
                c.below(format!("{label} shift = λ₁(D)/n"), worst, 1e-8);
                let nabla = nabla_lambda_apply(&e.sample, &p, &e.field).map_or(f64::INFINITY, |d| d.norm);
                c.below(format!("{label} ∇^λ residual"), nabla, 1e-7);
            }
            None => c.holds(format!("{label} zhang parameters exist"), false),
        }
        c.below(format!("{label} reported ∇^λ residual"), z.residual.unwrap_or(f64::INFINITY), 1e-7);
    }
}

fn criterion_8(c: &mut Criterion) {
    for kind in [ModelKind::Circle { r: 1.0 }, ModelKind::Sphere2 { r: 1.0 }, square_torus()] {
        let m = default_model(kind);
        match lichnerowicz_residual(m.as_ref(), 4) {
            Ok(v) => c.below(format!("{} Lichnerowicz", m.name()), v, 1e-8),
            Err(e) => c.error(e),
        }
    }
    for kind in [
        ModelKind::Circle { r: 1.0 },
        ModelKind::Sphere2 { r: 1.0 },
        ModelKind::GeodesicSphereS3 { rho: PI / 4.0 },
        ModelKind::GeodesicSphereS3 { rho: PI / 3.0 },
    ] {
        let m = default_model(kind);
        match witten_identity_residual(m.as_ref(), 4) {
            Ok(v) => c.below(format!("{} Witten", m.name()), v, 1e-8),
            Err(e) => c.error(e),
        }
    }
}

/// Random coefficients scaled so that `max_q |φ|² + |∇φ|² = 1`; both
/// residuals are quadratic in φ.
fn random_sample(m: &dyn Model, rng: &mut ChaCha8Rng) -> SpinorSample {
    let coeffs = CVec::from_fn(m.ndof(), |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let raw = SpinorSample::from_model(m, &coeffs);
    let scale = (0..raw.nodes())
        .map(|q| raw.norm_sqr(q) + raw.nabla[q].iter().flatten().map(|z| z.norm_sqr()).sum::<f64>())
        .fold(0.0, f64::max);
    SpinorSample::from_model(m, &(coeffs / C64::from(scale.sqrt())))
}

fn criterion_9(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (kind, res) in [
        (ModelKind::Circle { r: 1.0 }, 16),
        (ModelKind::Ellipse { a: 2.0, b: 1.0 }, 16),
        (ModelKind::Sphere2 { r: 1.0 }, 6),
        (ModelKind::GeodesicSphereS3 { rho: PI / 3.0 }, 6),
        (square_torus(), 7),
        (ModelKind::ConformalTorus2 { w: 0.3 }, 7),
    ] {
        let m = model(kind, res);
        let nodes = m.geometry().positions.len();
        let background: Vec<f64> = match m.mean_curvature() {
            Ok(h) => h.to_vec(),
            Err(_) => vec![1.0; nodes],
        };
        let mut worst_q = 0.0f64;
        let mut worst_t = 0.0f64;
        for _ in 0..100 {
            let s = random_sample(m.as_ref(), &mut rng);
            let f = compute_q(&s).unwrap();
            let p: Vec<f64> = (0..nodes).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let q: Vec<f64> = (0..nodes).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let lambda = rng.gen_range(-4.0..4.0);
            let params = ConnectionParams::custom(s.n, lambda, &background, &p, &q);
            worst_q = worst_q.max(qformula_residual(&s, &params, &f));
            worst_t = worst_t.max(trace_identity_residual(&s, &f));
        }
        c.below(format!("{} Qformula", m.name()), worst_q, 1e-9);
        c.below(format!("{} trace identity", m.name()), worst_t, 1e-10);
    }
}

fn criterion_10(c: &mut Criterion) {
    let m = model(ModelKind::Circle { r: 1.0 }, 64);
    let h = m.mean_curvature().unwrap().to_vec();
    let s = spectrum(m.as_ref(), &OperatorKind::Hypersurface, 7);
    let mut evaluated = 0;
    for i in 0..s.len() {
        let e = Eigen::new(m.as_ref(), &OperatorKind::Hypersurface, s.values[i], &s.vector(i));
        if let Some(p) = pq_thm1(&e.sample, &e.field, &h, e.lambda).params {
            evaluated += 1;
            let v = integral_identity_residual(&e.sample, &p, &e.field).unwrap_or(f64::INFINITY);
            c.below(format!("circle mode λ={:.3}", e.lambda), v, 1e-8);
        }
    }
    c.holds(format!("circle modes evaluated: {evaluated}"), evaluated >= 3);

    let m = model(ModelKind::Ellipse { a: 2.0, b: 1.0 }, 256);
    let h = m.mean_curvature().unwrap().to_vec();
    let s = spectrum(m.as_ref(), &OperatorKind::Hypersurface, 8);
    let Some(i) = (0..s.len()).filter(|&i| s.values[i] > 1e-8).min_by(|&a, &b| s.values[a].total_cmp(&s.values[b])) else {
        c.holds("ellipse has a positive mode", false);
        return;
    };
    let e = Eigen::new(m.as_ref(), &OperatorKind::Hypersurface, s.values[i], &s.vector(i));
    match pq_thm1(&e.sample, &e.field, &h, e.lambda).params {
        Some(p) => c.below(
            "ellipse(2,1) lowest mode N=256",
            integral_identity_residual(&e.sample, &p, &e.field).unwrap_or(f64::INFINITY),
            1e-6,
        ),
        None => c.holds("ellipse parameters exist", false),
    }
}

fn criterion_11(c: &mut Criterion) {
    let m = default_model(square_torus());
    let one = f_const(1.0);
    let zero = f_const(0.0);
    let s1 = spectrum(m.as_ref(), &one, 32);
    let s0 = spectrum(m.as_ref(), &zero, 32);
    let d = spectrum(m.as_ref(), &OperatorKind::Dirac, 32);
    for mu in [1.0, 2f64.sqrt(), 2.0] {
        let i = nearest(&s1.values, mu - 0.5);
        let e = Eigen::new(m.as_ref(), &one, s1.values[i], &s1.vector(i));
        let r = report(m.as_ref(), &e, "df_prop2");
        let expect = 0.25 * (2.0 * mu - 1.0) * (2.0 * mu - 1.0);
        c.below(format!("mu={mu:.4} |λ² - ¼(2μ-1)²|"), (r.lambda_sq - expect).abs(), 1e-8);
        c.below(format!("mu={mu:.4} margin"), r.margin.map_or(f64::INFINITY, f64::abs), 1e-8);
        c.below(format!("mu={mu:.4} EM residual"), r.em_residual.unwrap_or(f64::INFINITY), 1e-10);

        let j = nearest(&s0.values, mu);
        let e0 = Eigen::new(m.as_ref(), &zero, s0.values[j], &s0.vector(j));
        let a = report(m.as_ref(), &e0, "df_prop2");
        let k = nearest(&d.values, mu);
        let ed = Eigen::new(m.as_ref(), &OperatorKind::Dirac, d.values[k], &d.vector(k));
        let h = report(m.as_ref(), &ed, "hijazi_em");
        c.holds(format!("mu={mu:.4} f=0 rhs {:?} = hijazi_em rhs {:?}", a.rhs, h.rhs), a.rhs.is_some() && a.rhs == h.rhs);
        c.below(format!("mu={mu:.4} hijazi_em rhs = μ²"), (h.rhs.unwrap_or(f64::INFINITY) - mu * mu).abs(), 1e-8);
    }
}

/// `I_0(x)` by its power series.
fn bessel_i0(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..40 {
        term *= (x / 2.0) * (x / 2.0) / (k as f64 * k as f64);
        sum += term;
    }
    sum
}

fn criterion_12(c: &mut Criterion) {
    let u = ScalarFieldSpec::Fourier {
        terms: vec![FourierTerm { k: [1, 0], cos: 0.0, sin: 0.2 }],
    };
    match conformal_covariance_residual(model(ModelKind::Circle { r: 1.0 }, 64), &u, 8) {
        Ok(v) => c.below("circle covariance u = 0.2 sin θ", v, 1e-8),
        Err(e) => c.error(e),
    }
    // the rescaled circle has length 2π I₀(0.2)
    let op = assemble_conformal_dirac(model(ModelKind::Circle { r: 1.0 }, 64), &u).unwrap();
    let s = eigensolve(&op, 8, None).unwrap();
    let scale = 1.0 / bessel_i0(0.2);
    let want: Vec<f64> = (0..4).flat_map(|k| [(k as f64 + 0.5) * scale, -(k as f64 + 0.5) * scale]).collect();
    c.below("rescaled circle spectrum", sorted_gap(s.values.clone(), want), 1e-8);

    let ct = default_model(ModelKind::ConformalTorus2 { w: 0.3 });
    let ut = ScalarFieldSpec::Fourier {
        terms: vec![FourierTerm { k: [1, 1], cos: 0.2, sin: 0.0 }],
    };
    match rbar_oracle_residual(ct.as_ref(), &ut) {
        Ok(v) => c.below("conformal_torus2 R̄ oracle", v, 1e-6),
        Err(e) => c.error(e),
    }

    for (kind, res) in [(ModelKind::Circle { r: 1.0 }, 64), (ModelKind::Sphere2 { r: 1.0 }, 8)] {
        let m = model(kind, res);
        let uu = if m.n() == 1 {
            u.clone()
        } else {
            ScalarFieldSpec::Harmonic {
                terms: vec![hyperdirac::geometry::HarmonicTerm { l: 2, m: 1, coeff: 0.3 }],
            }
        };
        let s = spectrum(m.as_ref(), &OperatorKind::Hypersurface, 7);
        for i in 0..s.len() {
            let e = Eigen::new(m.as_ref(), &OperatorKind::Hypersurface, s.values[i], &s.vector(i));
            let ctx = conformal_context(m.as_ref(), &e.sample, &uu).unwrap();
            let (t, norm) = q_scaling_residual(&e.field, &ctx);
            c.below(format!("{} mode {i} Q̄ = e^(-u) Q", m.name()), t.max(norm), 1e-8);

            let zero = conformal_context(m.as_ref(), &e.sample, &ScalarFieldSpec::Zero).unwrap();
            let mut input = e.input(m.as_ref());
            let plain = evaluate_bound("thm1_1", &input).unwrap();
            input.conformal = Some(&zero);
            let conf = evaluate_bound("thm1_2", &input).unwrap();
            c.holds(
                format!("{} mode {i} thm1_2(u=0) rhs {:?} = thm1_1 rhs {:?}", m.name(), conf.rhs, plain.rhs),
                plain.rhs.map(f64::to_bits) == conf.rhs.map(f64::to_bits) && plain.status == conf.status,
            );
        }
    }
}

fn criterion_13(c: &mut Criterion) {
    let rows = match soundness_sweep(12, Fault::None) {
        Ok(rows) => rows,
        Err(e) => return c.error(e),
    };
    c.holds(format!("sweep produced {} records", rows.len()), !rows.is_empty());
    for row in &rows {
        let r = &row.report;
        let label = format!("{} mode {} {} on {:?}", row.model, row.mode, r.theorem, r.operator);
        if !r.status.evaluable() {
            continue;
        }
        if let Some(m) = r.margin {
            c.at_least(format!("{label} margin"), m, -1e-7);
        }
        let parallel = r.residual.is_some_and(|x| x < 1e-6);
        c.holds(format!("{label} equality {} vs residual {:?}", r.equality, r.residual), r.equality == parallel);
    }
}

fn criterion_14(c: &mut Criterion) {
    let kind = ModelKind::Ellipse { a: 2.0, b: 1.0 };
    match (gauss_formula_residual(&kind, 32), gauss_formula_residual(&kind, 64)) {
        (Ok(coarse), Ok(fine)) => c.at_least("ellipse(2,1) residual ratio 32 -> 64", coarse / fine, 3.5),
        (Err(e), _) | (_, Err(e)) => c.error(e),
    }
}

type Check = fn(&mut Criterion);

fn main() {
    let criteria: [(usize, &str, Check); 14] = [
        (1, "Clifford suite", criterion_1),
        (2, "circle exactness", criterion_2),
        (3, "D_H equality on the circle", criterion_3),
        (4, "sphere spectrum and Friedrich equality", criterion_4),
        (5, "Killing-spinor Q", criterion_5),
        (6, "boundary handling", criterion_6),
        (7, "Zhang equality off the boundary", criterion_7),
        (8, "operator identities", criterion_8),
        (9, "Qformula and trace identity on random draws", criterion_9),
        (10, "integral identity", criterion_10),
        (11, "Dirac-Schrodinger on the flat torus", criterion_11),
        (12, "conformal machinery", criterion_12),
        (13, "global soundness sweep", criterion_13),
        (14, "Gauss formula convergence order", criterion_14),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (id, title, run) in criteria {
        let start = Instant::now();
        let mut c = Criterion::new();
        run(&mut c);
        let ok = c.failures.is_empty() && c.checks > 0;
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {id}: {} {title} ({} checks, {:.2} s)",
            if ok { "PASS" } else { "FAIL" },
            c.checks,
            start.elapsed().as_secs_f64()
        );
        for f in c.failures.iter().take(10) {
            println!("    {f}");
        }
    }
    println!("acceptance: {} passed, {failed} failed in {:.1} s", 14 - failed, total.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
