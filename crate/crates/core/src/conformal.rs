//! Conformal changes `ḡ = e^{2u} g` with `u` defined on the hypersurface, so
//! `du(ν) = 0` holds automatically.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bounds::{evaluate_bound, BoundInput, BoundReport, OperatorFamily};
use crate::clifford::SpinorSpace;
use crate::connections::{em_curvature, params_with_limits, ParamFamily, DEGENERATE_BACKGROUND};
use crate::energy_momentum::{compute_q, re_inner, relative_l2, EmTensorField, SpinorSample};
use crate::error::{Error, Result};
use crate::geometry::{
    blockwise, brioschi_curvature, scale_nodes, FourierTerm, HarmonicTerm, Model, ModelKind, NodeGeometry,
    ScalarField, ScalarFieldSpec,
};
use crate::linalg::{CMat, CVec, C64};
use crate::operators::{assemble_intrinsic_dirac, DiscreteOperator};

/// Curvature data of `ḡ`.
#[derive(Debug, Clone)]
pub struct ConformalGeometry {
    pub u: ScalarField,
    pub rbar: Vec<f64>,
    /// `R̄ e^{2u}`, computed without the round trip through `e^{-2u}`.
    pub rbar_e2u: Vec<f64>,
    pub hbar: Option<Vec<f64>>,
}

/// `R̄ e^{2u}` from `R`, `u` and `Δu`: zero for curves, `R − 2Δu` for surfaces.
fn rescaled_curvature(n: usize, r: &[f64], u: &ScalarField) -> Result<Vec<f64>> {
    match n {
        1 => Ok(vec![0.0; r.len()]),
        2 => Ok(r.iter().zip(&u.laplacian).map(|(r, l)| r - 2.0 * l).collect()),
        _ => Err(Error::not_applicable(format!("transformed scalar curvature for n = {n}"))),
    }
}

pub fn transform_geometry(model: &dyn Model, u_spec: &ScalarFieldSpec) -> Result<ConformalGeometry> {
    let u = model.scalar_field(u_spec)?;
    let rbar_e2u = rescaled_curvature(model.n(), &model.geometry().scalar_curvature, &u)?;
    let rbar = rbar_e2u.iter().zip(&u.values).map(|(r, u)| r * (-2.0 * u).exp()).collect();
    let hbar = model
        .geometry()
        .mean_curvature
        .as_ref()
        .map(|h| h.iter().zip(&u.values).map(|(h, u)| h * (-u).exp()).collect());
    Ok(ConformalGeometry {
        u,
        rbar,
        rbar_e2u,
        hbar,
    })
}

/// The spinor `ψ̄ = e^{-(n-1)u/2} φ̄` and its derivatives along `ē_i = e^{-u} e_i`.
pub fn barred_sample(sample: &SpinorSample, u: &ScalarField, rbar: &[f64]) -> SpinorSample {
    let n = sample.n;
    let half_n = n as f64 / 2.0;
    let alpha = -(n as f64 - 1.0) / 2.0;
    let mut out = sample.clone();
    for q in 0..sample.nodes() {
        let uq = u.values[q];
        let a = (alpha * uq).exp();
        let du = &u.gradient[q];
        let phi = &sample.phi[q];
        // c(du) φ
        let mut cdu = vec![C64::new(0.0, 0.0); sample.k];
        for (j, g) in du.iter().enumerate() {
            for (o, v) in cdu.iter_mut().zip(sample.act(q, j, phi)) {
                *o += v * *g;
            }
        }
        for i in 0..n {
            let cc = sample.act(q, i, &cdu);
            out.nabla[q][i] = (0..sample.k)
                .map(|b| (sample.nabla[q][i][b] - cc[b] * 0.5 - phi[b] * (half_n * du[i])) * (a * (-uq).exp()))
                .collect();
        }
        out.phi[q] = phi.iter().map(|z| z * a).collect();
        out.weights[q] = sample.weights[q] * (n as f64 * uq).exp();
    }
    out.scalar_curvature = rbar.to_vec();
    out
}

/// Everything a conformal bound needs besides the eigenpair itself.
#[derive(Debug, Clone)]
pub struct ConformalContext {
    pub u: ScalarField,
    pub rbar_e2u: Vec<f64>,
    pub barred: SpinorSample,
    pub barred_field: EmTensorField,
}

pub fn conformal_context(model: &dyn Model, sample: &SpinorSample, u_spec: &ScalarFieldSpec) -> Result<ConformalContext> {
    let geo = transform_geometry(model, u_spec)?;
    let barred = barred_sample(sample, &geo.u, &geo.rbar);
    let barred_field = compute_q(&barred)?;
    Ok(ConformalContext {
        u: geo.u,
        rbar_e2u: geo.rbar_e2u,
        barred,
        barred_field,
    })
}

/// `(max |Q̄ − e^{-u}Q|, max ||Q̄|² − e^{-2u}|Q|²|)` over nodes unmasked in both.
pub fn q_scaling_residual(field: &EmTensorField, ctx: &ConformalContext) -> (f64, f64) {
    let mut tensor = 0.0f64;
    let mut norm = 0.0f64;
    for (q, m) in field.unmasked() {
        if let Some(mb) = ctx.barred_field.at(q) {
            let e = (-ctx.u.values[q]).exp();
            tensor = tensor.max((mb - m * e).abs().max());
            norm = norm.max((mb.norm_squared() - e * e * m.norm_squared()).abs());
        }
    }
    (tensor, norm)
}

/// A conformal bound (`thm1_2`, `hijazi_zhang6_1`, `df_prop3`) for an eigenpair
/// of the original operator.
#[allow(clippy::too_many_arguments)]
pub fn evaluate_conformal_bounds(
    theorem: &str,
    model: &dyn Model,
    operator: OperatorFamily,
    lambda: f64,
    sample: &SpinorSample,
    field: &EmTensorField,
    potential: Option<&[f64]>,
    u_spec: &ScalarFieldSpec,
) -> Result<BoundReport> {
    if !matches!(theorem, "thm1_2" | "hijazi_zhang6_1" | "df_prop3") {
        return Err(Error::config(format!("{theorem} is not a conformal bound")));
    }
    let ctx = conformal_context(model, sample, u_spec)?;
    let input = BoundInput {
        operator,
        lambda,
        sample,
        field,
        mean_curvature: model.geometry().mean_curvature.as_deref(),
        potential,
        conformal: Some(&ctx),
    };
    evaluate_bound(theorem, &input)
}

/// A nodal model seen through the metric `e^{2u} g`.
///
/// Spinors are identified with those of the base; derivatives follow the
/// conformal spin connection and `D̄ = e^{-(n+1)u/2} D e^{(n-1)u/2}`.
pub struct ConformalModel {
    base: Box<dyn Model>,
    u: ScalarField,
    geometry: NodeGeometry,
    nabla: Vec<CMat>,
}

impl ConformalModel {
    pub fn new(base: Box<dyn Model>, u_spec: &ScalarFieldSpec) -> Result<Self> {
        if !base.is_nodal() {
            return Err(Error::config(format!(
                "conformal operators need a nodal base model, {} is modal",
                base.name()
            )));
        }
        let geo = transform_geometry(base.as_ref(), u_spec)?;
        let u = geo.u;
        let n = base.n();
        let k = base.k();
        let nodes = base.node_count();
        let bg = base.geometry();
        let weights = bg
            .weights
            .iter()
            .zip(&u.values)
            .map(|(w, u)| w * (n as f64 * u).exp())
            .collect();
        let geometry = NodeGeometry {
            weights,
            positions: bg.positions.clone(),
            second_fundamental: None,
            mean_curvature: geo.hbar,
            scalar_curvature: geo.rbar,
        };
        let ik = CMat::identity(k, k);
        let id = CMat::identity(nodes * k, nodes * k);
        let scale: Vec<f64> = u.values.iter().map(|u| (-u).exp()).collect();
        let nabla = (0..n)
            .map(|i| {
                let blocks: Vec<CMat> = (0..nodes)
                    .map(|q| {
                        let c = base.clifford(q);
                        let mut cdu = CMat::zeros(k, k);
                        for (j, g) in u.gradient[q].iter().enumerate() {
                            cdu += &c[j] * C64::new(*g, 0.0);
                        }
                        (&c[i] * cdu) * C64::new(-0.5, 0.0) - &ik * C64::new(0.5 * u.gradient[q][i], 0.0)
                    })
                    .collect();
                let op = &base.nabla()[i] + blockwise(&blocks, &id);
                scale_nodes(&op, &scale, k)
            })
            .collect();
        Ok(ConformalModel {
            base,
            u,
            geometry,
            nabla,
        })
    }

    pub fn factor(&self) -> &ScalarField {
        &self.u
    }

    pub fn base(&self) -> &dyn Model {
        self.base.as_ref()
    }

    /// `Σ c_i ∇̄_i` from the conformal spin connection.
    pub fn connection_dirac(&self) -> CMat {
        let mut out = CMat::zeros(self.node_count() * self.k(), self.ndof());
        for (i, nab) in self.nabla.iter().enumerate() {
            let blocks: Vec<CMat> = (0..self.node_count()).map(|q| self.clifford(q)[i].clone()).collect();
            out += blockwise(&blocks, nab);
        }
        out
    }
}

impl Model for ConformalModel {
    fn kind(&self) -> &ModelKind {
        self.base.kind()
    }
    fn n(&self) -> usize {
        self.base.n()
    }
    fn space(&self) -> &SpinorSpace {
        self.base.space()
    }
    fn geometry(&self) -> &NodeGeometry {
        &self.geometry
    }
    fn ndof(&self) -> usize {
        self.base.ndof()
    }
    fn synthesis(&self) -> &CMat {
        self.base.synthesis()
    }
    fn nabla(&self) -> &[CMat] {
        &self.nabla
    }
    fn clifford(&self, node: usize) -> &[CMat] {
        self.base.clifford(node)
    }
    fn ambient_frame(&self, node: usize) -> (Vec<CMat>, CMat) {
        self.base.ambient_frame(node)
    }
    fn is_nodal(&self) -> bool {
        true
    }
    fn resolution(&self) -> usize {
        self.base.resolution()
    }

    fn dirac_pointwise(&self) -> CMat {
        let n = self.n() as f64;
        let k = self.k();
        let mut d = self.base.dirac_pointwise();
        for (q, u) in self.u.values.iter().enumerate() {
            let right = ((n - 1.0) / 2.0 * u).exp();
            for a in 0..k {
                d.column_mut(q * k + a).scale_mut(right);
            }
        }
        let left: Vec<f64> = self.u.values.iter().map(|u| (-(n + 1.0) / 2.0 * u).exp()).collect();
        scale_nodes(&d, &left, k)
    }

    fn scalar_field(&self, spec: &ScalarFieldSpec) -> Result<ScalarField> {
        let base = self.base.scalar_field(spec)?;
        let n = self.n() as f64;
        let mut out = base.clone();
        for q in 0..out.values.len() {
            let e = (-self.u.values[q]).exp();
            let cross: f64 = base.gradient[q].iter().zip(&self.u.gradient[q]).map(|(a, b)| a * b).sum();
            for g in out.gradient[q].iter_mut() {
                *g *= e;
            }
            out.laplacian[q] = e * e * (base.laplacian[q] + (n - 2.0) * cross);
        }
        Ok(out)
    }

    fn low_band(&self, band: usize) -> CMat {
        self.base.low_band(band)
    }
}

/// `D̄` for `e^{2u} g` on a nodal base, Hermitian in the `ḡ` inner product.
pub fn assemble_conformal_dirac(base: Box<dyn Model>, u_spec: &ScalarFieldSpec) -> Result<DiscreteOperator> {
    let model = ConformalModel::new(base, u_spec)?;
    assemble_intrinsic_dirac(&model)
}

/// Largest relative defect of `D̄(e^{-(n-1)u/2} φ) = e^{-(n+1)u/2} Dφ` over the
/// modes up to `band`, with `D̄` taken from the conformal spin connection.
pub fn conformal_covariance_residual(base: Box<dyn Model>, u_spec: &ScalarFieldSpec, band: usize) -> Result<f64> {
    let model = ConformalModel::new(base, u_spec)?;
    let n = model.n() as f64;
    let k = model.k();
    let dbar = model.connection_dirac();
    let d = model.base().dirac_pointwise();
    let u = &model.factor().values;
    let w = &model.geometry().weights;
    let test = model.low_band(band);
    let mut worst = 0.0f64;
    for j in 0..test.ncols() {
        let phi = test.column(j).into_owned();
        let mut psi = phi.clone();
        for (q, uq) in u.iter().enumerate() {
            for a in 0..k {
                psi[q * k + a] *= ((1.0 - n) / 2.0 * uq).exp();
            }
        }
        let lhs = &dbar * psi;
        let mut rhs = &d * &phi;
        for (q, uq) in u.iter().enumerate() {
            for a in 0..k {
                rhs[q * k + a] *= (-(n + 1.0) / 2.0 * uq).exp();
            }
        }
        let norm = |v: &CVec| -> f64 {
            (0..u.len())
                .map(|q| w[q] * (0..k).map(|a| v[q * k + a].norm_sqr()).sum::<f64>())
                .sum::<f64>()
                .sqrt()
        };
        let scale = norm(&rhs).max(norm(&phi));
        worst = worst.max(norm(&(lhs - &rhs)) / scale);
    }
    Ok(worst)
}

fn fourier_value(terms: &[FourierTerm], periods: [f64; 2], x: f64, y: f64) -> f64 {
    terms
        .iter()
        .map(|t| {
            let phase = 2.0 * PI * (t.k[0] as f64 * x / periods[0] + t.k[1] as f64 * y / periods[1]);
            t.cos * phase.cos() + t.sin * phase.sin()
        })
        .sum()
}

/// `max |R̄ − R_oracle|` at the nodes of a torus model, the oracle being the
/// Brioschi curvature of `e^{2(u0 + u)}(dx² + dy²)` by finite differences.
pub fn rbar_oracle_residual(model: &dyn Model, u_spec: &ScalarFieldSpec) -> Result<f64> {
    let (periods, w) = match *model.kind() {
        ModelKind::FlatTorus2 { l1, l2 } => ([l1, l2], 0.0),
        ModelKind::ConformalTorus2 { w } => ([2.0 * PI, 2.0 * PI], w),
        _ => return Err(Error::not_applicable("the curvature oracle covers torus charts only")),
    };
    let terms: Vec<FourierTerm> = match u_spec {
        ScalarFieldSpec::Zero => Vec::new(),
        ScalarFieldSpec::Constant { value } => vec![FourierTerm {
            k: [0, 0],
            cos: *value,
            sin: 0.0,
        }],
        ScalarFieldSpec::Fourier { terms } => terms.clone(),
        _ => return Err(Error::config("torus conformal factors are Fourier series")),
    };
    let geo = transform_geometry(model, u_spec)?;
    let metric = |x: f64, y: f64| {
        let e = (2.0 * (w * x.cos() + fourier_value(&terms, periods, x, y))).exp();
        (e, e)
    };
    Ok(model
        .geometry()
        .positions
        .iter()
        .zip(&geo.rbar)
        .map(|(p, r)| (brioschi_curvature(metric, p[0], p[1], 2e-3) - r).abs())
        .fold(0.0, f64::max))
}

/// Residuals of the WEM conditions for a spinor and a conformal factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WemCheck {
    /// `max |du − d|φ|²/((n−1)|φ|²)|`.
    pub du_residual: f64,
    /// Relative L² defect of `∇_i φ = ½ c_i c(du) φ + (n/2) e_i(u) φ − Σ_j Q_ij c_j φ`.
    pub field_residual: f64,
}

/// `u = ln|φ|²/(n−1)` with its exact frame derivatives; the Laplacian is not
/// available and left as NaN.
pub fn u_from_spinor(sample: &SpinorSample) -> Result<ScalarField> {
    if sample.n < 2 {
        return Err(Error::not_applicable("u = ln|φ|²/(n−1) needs n >= 2"));
    }
    let d = sample.n as f64 - 1.0;
    let mut values = Vec::with_capacity(sample.nodes());
    let mut gradient = Vec::with_capacity(sample.nodes());
    for q in 0..sample.nodes() {
        let r = sample.norm_sqr(q);
        values.push(r.ln() / d);
        gradient.push(
            (0..sample.n)
                .map(|i| 2.0 * re_inner(&sample.nabla[q][i], &sample.phi[q]) / (d * r))
                .collect(),
        );
    }
    Ok(ScalarField {
        values,
        gradient,
        laplacian: vec![f64::NAN; sample.nodes()],
    })
}

pub fn wem_equality_check(sample: &SpinorSample, field: &EmTensorField, u: &ScalarField) -> Result<WemCheck> {
    let n = sample.n;
    if n < 2 {
        return Err(Error::not_applicable("the WEM condition divides by n − 1"));
    }
    let d = n as f64 - 1.0;
    let mut du_residual = 0.0f64;
    for (q, _) in field.unmasked() {
        let r = sample.norm_sqr(q);
        for i in 0..n {
            let target = 2.0 * re_inner(&sample.nabla[q][i], &sample.phi[q]) / (d * r);
            du_residual = du_residual.max((u.gradient[q][i] - target).abs());
        }
    }
    let field_residual = relative_l2(sample, field, |q, i| {
        let phi = &sample.phi[q];
        let du = &u.gradient[q];
        let m = field.at(q).expect("unmasked");
        let mut cdu = vec![C64::new(0.0, 0.0); sample.k];
        for (j, g) in du.iter().enumerate() {
            for (o, v) in cdu.iter_mut().zip(sample.act(q, j, phi)) {
                *o += v * *g;
            }
        }
        let cc = sample.act(q, i, &cdu);
        let mut out: Vec<C64> = (0..sample.k)
            .map(|b| sample.nabla[q][i][b] - cc[b] * 0.5 - phi[b] * (n as f64 / 2.0 * du[i]))
            .collect();
        for j in 0..n {
            for (o, v) in out.iter_mut().zip(sample.act(q, j, phi)) {
                *o += v * m[(i, j)];
            }
        }
        out
    });
    Ok(WemCheck {
        du_residual,
        field_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerStatus {
    Converged,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerStep {
    pub evaluation: usize,
    pub coordinate: usize,
    pub step: f64,
    pub objective: f64,
}

/// A mean-zero band-limited conformal factor found by coordinate search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConformalFactor {
    pub spec: ScalarFieldSpec,
    pub coefficients: Vec<f64>,
    /// Right-hand side at `u = 0` and at the returned `u`.
    pub baseline: Option<f64>,
    pub objective: Option<f64>,
    pub evaluations: usize,
    pub status: OptimizerStatus,
    pub log: Vec<OptimizerStep>,
}

enum BasisItem {
    Fourier([i32; 2], bool),
    Harmonic(usize, i64),
}

fn basis(model: &dyn Model, band: usize) -> Vec<BasisItem> {
    let b = band as i32;
    let mut out = Vec::new();
    match model.kind() {
        ModelKind::Circle { .. } | ModelKind::Ellipse { .. } => {
            for k in 1..=b {
                out.push(BasisItem::Fourier([k, 0], false));
                out.push(BasisItem::Fourier([k, 0], true));
            }
        }
        ModelKind::Sphere2 { .. } | ModelKind::GeodesicSphereS3 { .. } => {
            for l in 1..=band {
                for m in -(l as i64)..=l as i64 {
                    out.push(BasisItem::Harmonic(l, m));
                }
            }
        }
        ModelKind::FlatTorus2 { .. } | ModelKind::ConformalTorus2 { .. } => {
            for kx in 0..=b {
                for ky in -b..=b {
                    if kx == 0 && ky <= 0 {
                        continue;
                    }
                    out.push(BasisItem::Fourier([kx, ky], false));
                    out.push(BasisItem::Fourier([kx, ky], true));
                }
            }
        }
    }
    out
}

fn spec_of(items: &[BasisItem], coeffs: &[f64]) -> ScalarFieldSpec {
    if coeffs.iter().all(|c| *c == 0.0) {
        return ScalarFieldSpec::Zero;
    }
    if matches!(items.first(), Some(BasisItem::Harmonic(..))) {
        let terms = items
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| **c != 0.0)
            .filter_map(|(it, c)| match it {
                BasisItem::Harmonic(l, m) => Some(HarmonicTerm { l: *l, m: *m, coeff: *c }),
                _ => None,
            })
            .collect();
        return ScalarFieldSpec::Harmonic { terms };
    }
    let terms = items
        .iter()
        .zip(coeffs)
        .filter(|(_, c)| **c != 0.0)
        .filter_map(|(it, c)| match it {
            BasisItem::Fourier(k, sin) => Some(FourierTerm {
                k: *k,
                cos: if *sin { 0.0 } else { *c },
                sin: if *sin { *c } else { 0.0 },
            }),
            _ => None,
        })
        .collect();
    ScalarFieldSpec::Fourier { terms }
}

/// Right-hand side of the conformal energy-momentum bound for `R̄ e^{2u}`, or
/// `None` when the hypothesis fails.
fn conformal_em_rhs(n: usize, rbar_e2u: &[f64], field: &EmTensorField, background: &[f64], lambda: f64) -> Option<f64> {
    let x = em_curvature(rbar_e2u, field);
    let params = params_with_limits(ParamFamily::EnergyMomentum, n, &x, background, lambda);
    if !params.status.evaluable() {
        return None;
    }
    Some(
        x.iter()
            .zip(background)
            .filter_map(|(x, b)| {
                x.map(|x| {
                    if b.abs() < DEGENERATE_BACKGROUND {
                        0.25 * x
                    } else {
                        0.25 * (x.max(0.0).sqrt() - b.abs()).powi(2)
                    }
                })
            })
            .fold(f64::INFINITY, f64::min),
    )
}

/// Maximizes the conformal energy-momentum right-hand side over mean-zero `u`
/// of band at most `band`, by a deterministic coordinate search of at most
/// `budget` evaluations.
pub fn optimize_u(
    model: &dyn Model,
    field: &EmTensorField,
    lambda: f64,
    background: &[f64],
    band: usize,
    budget: usize,
) -> Result<ConformalFactor> {
    let n = model.n();
    let r = &model.geometry().scalar_curvature;
    let items = basis(model, band);
    let singles: Vec<ScalarField> = (0..items.len())
        .map(|j| {
            let mut e = vec![0.0; items.len()];
            e[j] = 1.0;
            model.scalar_field(&spec_of(&items, &e))
        })
        .collect::<Result<_>>()?;
    let objective = |c: &[f64]| -> Result<Option<f64>> {
        let mut lap = vec![0.0; r.len()];
        for (cj, f) in c.iter().zip(&singles) {
            if *cj != 0.0 {
                for (l, v) in lap.iter_mut().zip(&f.laplacian) {
                    *l += cj * v;
                }
            }
        }
        let u = ScalarField {
            values: vec![0.0; r.len()],
            gradient: Vec::new(),
            laplacian: lap,
        };
        let k = rescaled_curvature(n, r, &u)?;
        Ok(conformal_em_rhs(n, &k, field, background, lambda))
    };
    let score = |v: Option<f64>| v.unwrap_or(f64::NEG_INFINITY);

    let mut coeffs = vec![0.0; items.len()];
    let baseline = objective(&coeffs)?;
    let mut best = score(baseline);
    let mut evaluations = 1;
    let mut log = vec![OptimizerStep {
        evaluation: 1,
        coordinate: usize::MAX,
        step: 0.0,
        objective: best,
    }];
    let mut step = 0.25;
    let status = 'search: loop {
        let mut improved = false;
        for j in 0..coeffs.len() {
            for dir in [1.0, -1.0] {
                if evaluations >= budget {
                    break 'search OptimizerStatus::BudgetExhausted;
                }
                let mut trial = coeffs.clone();
                trial[j] += dir * step;
                let value = score(objective(&trial)?);
                evaluations += 1;
                if value > best + 1e-12 {
                    best = value;
                    coeffs = trial;
                    improved = true;
                    log.push(OptimizerStep {
                        evaluation: evaluations,
                        coordinate: j,
                        step: dir * step,
                        objective: best,
                    });
                    break;
                }
            }
        }
        if !improved {
            step /= 2.0;
            if step < 1e-6 {
                break OptimizerStatus::Converged;
            }
        }
    };
    Ok(ConformalFactor {
        spec: spec_of(&items, &coeffs),
        coefficients: coeffs,
        baseline,
        objective: best.is_finite().then_some(best),
        evaluations,
        status,
        log,
    })
}
