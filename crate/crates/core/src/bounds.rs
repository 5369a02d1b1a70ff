//! Eigenvalue lower bounds, evaluated against computed eigenpairs.
//!
//! Each bound is a [`BoundStrategy`] registered by id in a [`BoundRegistry`];
//! callers pick them by name at runtime.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::conformal::ConformalContext;
use crate::connections::{
    em_curvature, nabla_lambda_apply, nabla_q_apply, params_with_limits, zhang_curvature, ConnectionParams,
    HypothesisStatus, ParamFamily, DEGENERATE_BACKGROUND, ZERO_EIGENVALUE,
};
use crate::energy_momentum::{em_spinor_residual, EmTensorField, SpinorSample};
use crate::error::{Error, Result};
use crate::operators::OperatorKind;

pub const EQUALITY_TOLERANCE: f64 = 1e-6;
pub const SOUNDNESS_TOLERANCE: f64 = 1e-7;
/// A modified-connection residual below this certifies parallelism.
pub const PARALLEL_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperatorFamily {
    #[serde(rename = "D")]
    Dirac,
    #[serde(rename = "D_H")]
    Hypersurface,
    #[serde(rename = "D_f")]
    Schrodinger,
}

impl OperatorFamily {
    pub fn label(self) -> &'static str {
        match self {
            OperatorFamily::Dirac => "D",
            OperatorFamily::Hypersurface => "D_H",
            OperatorFamily::Schrodinger => "D_f",
        }
    }
}

impl From<&OperatorKind> for OperatorFamily {
    fn from(kind: &OperatorKind) -> Self {
        match kind {
            OperatorKind::Dirac => OperatorFamily::Dirac,
            OperatorKind::Hypersurface => OperatorFamily::Hypersurface,
            OperatorKind::Schrodinger { .. } => OperatorFamily::Schrodinger,
        }
    }
}

/// An eigenpair together with the data a bound needs.
pub struct BoundInput<'a> {
    pub operator: OperatorFamily,
    pub lambda: f64,
    pub sample: &'a SpinorSample,
    pub field: &'a EmTensorField,
    pub mean_curvature: Option<&'a [f64]>,
    /// Node values of `f` for `D_f`.
    pub potential: Option<&'a [f64]>,
    pub conformal: Option<&'a ConformalContext>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignCheck {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem: String,
    pub operator: OperatorFamily,
    pub status: HypothesisStatus,
    pub lambda: f64,
    pub lambda_sq: f64,
    pub rhs: Option<f64>,
    pub margin: Option<f64>,
    pub equality: bool,
    /// Which modified connection the residual measures.
    pub residual_kind: String,
    pub residual: Option<f64>,
    pub em_residual: Option<f64>,
    /// Sign of the background when it has one sign everywhere.
    pub background_sign: Option<i8>,
    pub background_constant: Option<bool>,
    pub shift_range: Option<(f64, f64)>,
    pub sign: SignCheck,
    pub masked: usize,
    pub mask_fraction: f64,
    pub note: Option<String>,
}

impl BoundReport {
    /// A negative margin beyond tolerance on an evaluable hypothesis.
    pub fn sound(&self) -> bool {
        !self.status.evaluable() || self.margin.is_none_or(|m| m >= -SOUNDNESS_TOLERANCE)
    }

    /// Residual below the parallelism threshold.
    pub fn parallel(&self) -> bool {
        self.residual.is_some_and(|r| r < PARALLEL_TOLERANCE)
    }

    /// Equality holds exactly when the modified connection is parallel.
    pub fn equality_consistent(&self) -> bool {
        !self.status.evaluable() || self.equality == self.parallel()
    }

    fn skeleton(theorem: &str, input: &BoundInput, status: HypothesisStatus) -> Self {
        BoundReport {
            theorem: theorem.to_string(),
            operator: input.operator,
            status,
            lambda: input.lambda,
            lambda_sq: input.lambda * input.lambda,
            rhs: None,
            margin: None,
            equality: false,
            residual_kind: String::new(),
            residual: None,
            em_residual: None,
            background_sign: None,
            background_constant: None,
            shift_range: None,
            sign: SignCheck::NotApplicable,
            masked: input.field.masked,
            mask_fraction: input.field.mask_fraction(),
            note: None,
        }
    }

    fn with_rhs(mut self, rhs: f64) -> Self {
        let margin = self.lambda_sq - rhs;
        self.rhs = Some(rhs);
        self.margin = Some(margin);
        self.equality = margin.abs() < EQUALITY_TOLERANCE * self.lambda_sq.max(1.0);
        self
    }
}

/// `sign(λ) = sign(B)` at equality, when `B` keeps one sign and `λ ≠ 0`.
pub fn sign_diagnostics(report: &BoundReport) -> SignCheck {
    match report.background_sign {
        Some(s) if report.equality && report.lambda.abs() >= ZERO_EIGENVALUE => {
            if (report.lambda > 0.0) == (s > 0) {
                SignCheck::Pass
            } else {
                SignCheck::Fail
            }
        }
        _ => SignCheck::NotApplicable,
    }
}

fn background_facts(values: &[f64], field: &EmTensorField) -> (Option<i8>, bool) {
    let vals: Vec<f64> = field.unmasked().map(|(q, _)| values[q]).collect();
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sign = if lo > DEGENERATE_BACKGROUND {
        Some(1)
    } else if hi < -DEGENERATE_BACKGROUND {
        Some(-1)
    } else {
        None
    };
    (sign, hi - lo <= 1e-8 * hi.abs().max(lo.abs()).max(1.0))
}

/// One eigenvalue bound.
pub trait BoundStrategy: Send + Sync {
    fn id(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn operator(&self) -> OperatorFamily;
    fn conformal(&self) -> bool {
        false
    }
    fn evaluate(&self, input: &BoundInput) -> Result<BoundReport>;
}

fn background<'a>(input: &BoundInput<'a>) -> Result<&'a [f64]> {
    match input.operator {
        OperatorFamily::Hypersurface => input
            .mean_curvature
            .ok_or_else(|| Error::not_applicable("model has no mean curvature")),
        OperatorFamily::Schrodinger => input.potential.ok_or_else(|| Error::config("D_f bound needs the potential f")),
        OperatorFamily::Dirac => Ok(&[]),
    }
}

fn conformal_data<'a>(input: &BoundInput<'a>) -> Result<&'a ConformalContext> {
    input
        .conformal
        .ok_or_else(|| Error::config("conformal bound needs a conformal factor u"))
}

/// Bounds of the form `λ² ≥ ¼ inf (√K − |B|)²` with `K` built from curvature
/// (and `|Q|²` for the energy-momentum family).
struct ShiftedBound {
    id: &'static str,
    describe: &'static str,
    operator: OperatorFamily,
    family: ParamFamily,
    conformal: bool,
    em_diagnostic: bool,
}

impl ShiftedBound {
    fn curvature_term(&self, input: &BoundInput) -> Result<Vec<f64>> {
        if self.conformal {
            Ok(conformal_data(input)?.rbar_e2u.clone())
        } else {
            Ok(input.sample.scalar_curvature.clone())
        }
    }
}

impl BoundStrategy for ShiftedBound {
    fn id(&self) -> &'static str {
        self.id
    }
    fn describe(&self) -> &'static str {
        self.describe
    }
    fn operator(&self) -> OperatorFamily {
        self.operator
    }
    fn conformal(&self) -> bool {
        self.conformal
    }

    fn evaluate(&self, input: &BoundInput) -> Result<BoundReport> {
        let b = match background(input) {
            Ok(b) => b,
            Err(Error::NotApplicable(msg)) => {
                let mut r = BoundReport::skeleton(self.id, input, HypothesisStatus::NotApplicable);
                r.note = Some(msg);
                return Ok(r);
            }
            Err(e) => return Err(e),
        };
        let n = input.sample.n;
        if self.family == ParamFamily::Zhang && n < 2 {
            let mut r = BoundReport::skeleton(self.id, input, HypothesisStatus::NotApplicable);
            r.note = Some("requires n >= 2".into());
            return Ok(r);
        }
        let r_term = self.curvature_term(input)?;
        let k = match self.family {
            ParamFamily::Zhang => zhang_curvature(n, &r_term, input.field),
            _ => em_curvature(&r_term, input.field),
        };
        let params = params_with_limits(self.family, n, &k, b, input.lambda);
        let mut report = BoundReport::skeleton(self.id, input, params.status);
        let (sign, constant) = background_facts(b, input.field);
        report.background_sign = sign;
        report.background_constant = Some(constant);
        report.residual_kind = match self.family {
            ParamFamily::Zhang => "nabla_lambda",
            _ => "nabla_q",
        }
        .into();
        if self.em_diagnostic {
            report.em_residual = Some(em_spinor_residual(input.sample, input.field).residual);
        }
        if !params.status.evaluable() {
            return Ok(report);
        }
        let rhs = k
            .iter()
            .zip(b)
            .filter_map(|(k, b)| {
                k.map(|k| {
                    if b.abs() < DEGENERATE_BACKGROUND {
                        0.25 * k
                    } else {
                        let gap = k.max(0.0).sqrt() - b.abs();
                        0.25 * gap * gap
                    }
                })
            })
            .fold(f64::INFINITY, f64::min);
        report = report.with_rhs(rhs);
        report.shift_range = params.shift_range();
        report.residual = self.residual(input, &params)?;
        report.sign = sign_diagnostics(&report);
        if n == 1 {
            report.note = Some("n = 1: outside the dimension range of the zhang4_1 comparison".into());
        }
        Ok(report)
    }
}

impl ShiftedBound {
    fn residual(&self, input: &BoundInput, params: &ConnectionParams) -> Result<Option<f64>> {
        let with_q = self.family != ParamFamily::Zhang;
        let apply = |sample: &SpinorSample, params: &ConnectionParams, field: &EmTensorField| {
            let out = if with_q {
                nabla_q_apply(sample, params, field)
            } else {
                nabla_lambda_apply(sample, params, field)
            };
            out.map(|d| d.norm)
        };
        if !self.conformal {
            return Ok(apply(input.sample, params, input.field));
        }
        // the barred connection carries s̄ = e^{-u} s and Q̄ of the transported spinor
        let ctx = conformal_data(input)?;
        let mut barred = params.clone();
        for (s, u) in barred.shift.iter_mut().zip(&ctx.u.values) {
            *s = s.map(|s| s * (-u).exp());
        }
        Ok(apply(&ctx.barred, &barred, &ctx.barred_field))
    }
}

/// `λ² ≥ n/(4(n−1)) inf R` for eigenvalues of `D` when `R > 0`.
struct Friedrich;

impl BoundStrategy for Friedrich {
    fn id(&self) -> &'static str {
        "friedrich"
    }
    fn describe(&self) -> &'static str {
        "lambda^2 >= n/(4(n-1)) inf R for D, equality for Killing spinors"
    }
    fn operator(&self) -> OperatorFamily {
        OperatorFamily::Dirac
    }

    fn evaluate(&self, input: &BoundInput) -> Result<BoundReport> {
        let n = input.sample.n;
        let mut report = BoundReport::skeleton(self.id(), input, HypothesisStatus::NotApplicable);
        report.residual_kind = "killing".into();
        if n < 2 {
            report.note = Some("requires n >= 2".into());
            return Ok(report);
        }
        let inf_r = input
            .field
            .unmasked()
            .map(|(q, _)| input.sample.scalar_curvature[q])
            .fold(f64::INFINITY, f64::min);
        if inf_r <= 0.0 {
            report.note = Some(format!("inf R = {inf_r:.3e} is not positive"));
            return Ok(report);
        }
        report.status = HypothesisStatus::Strict;
        let nf = n as f64;
        report = report.with_rhs(nf / (4.0 * (nf - 1.0)) * inf_r);
        // Killing equation ∇_i φ = −(λ/n) c_i φ
        let nodes = input.sample.nodes();
        let zeros = vec![0.0; nodes];
        let shift = ConnectionParams::custom(n, input.lambda, &zeros, &zeros, &vec![1.0 / nf; nodes]);
        report.residual = nabla_lambda_apply(input.sample, &shift, input.field).map(|d| d.norm);
        Ok(report)
    }
}

/// `λ² ≥ ¼ inf (R + 4|Q|²)` for eigenvalues of `D`.
struct HijaziEm;

impl BoundStrategy for HijaziEm {
    fn id(&self) -> &'static str {
        "hijazi_em"
    }
    fn describe(&self) -> &'static str {
        "lambda^2 >= 1/4 inf (R + 4|Q|^2) for D, equality for EM-spinors"
    }
    fn operator(&self) -> OperatorFamily {
        OperatorFamily::Dirac
    }

    fn evaluate(&self, input: &BoundInput) -> Result<BoundReport> {
        let x = em_curvature(&input.sample.scalar_curvature, input.field);
        let rhs = x.iter().flatten().map(|x| 0.25 * x).fold(f64::INFINITY, f64::min);
        let mut report = BoundReport::skeleton(self.id(), input, HypothesisStatus::Strict).with_rhs(rhs);
        report.residual_kind = "em".into();
        let em = em_spinor_residual(input.sample, input.field).residual;
        report.residual = Some(em);
        report.em_residual = Some(em);
        Ok(report)
    }
}

/// Bound strategies keyed by theorem id.
pub struct BoundRegistry {
    strategies: BTreeMap<&'static str, Box<dyn BoundStrategy>>,
}

impl BoundRegistry {
    pub fn empty() -> Self {
        BoundRegistry {
            strategies: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, s: Box<dyn BoundStrategy>) {
        self.strategies.insert(s.id(), s);
    }

    pub fn get(&self, id: &str) -> Option<&dyn BoundStrategy> {
        self.strategies.get(id).map(|s| s.as_ref())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn BoundStrategy> {
        self.strategies.values().map(|s| s.as_ref())
    }

    pub fn global() -> &'static BoundRegistry {
        static REGISTRY: OnceLock<BoundRegistry> = OnceLock::new();
        REGISTRY.get_or_init(BoundRegistry::default)
    }
}

impl Default for BoundRegistry {
    fn default() -> Self {
        use OperatorFamily::*;
        use ParamFamily::*;
        let mut r = BoundRegistry::empty();
        let shifted = [
            ("thm1_1", "lambda^2 >= 1/4 inf (sqrt(R + 4|Q|^2) - |H|)^2 for D_H", Hypersurface, EnergyMomentum, false, false),
            ("thm1_2", "conformal version of thm1_1 with Rbar e^{2u}", Hypersurface, EnergyMomentum, true, false),
            ("zhang4_1", "lambda^2 >= 1/4 inf (sqrt(n R/(n-1)) - |H|)^2 for D_H", Hypersurface, Zhang, false, false),
            ("hijazi_zhang6_1", "conformal version of zhang4_1 with Rbar e^{2u}", Hypersurface, Zhang, true, false),
            ("df_prop1", "zhang4_1 for D_f with H replaced by f", Schrodinger, Zhang, false, false),
            ("df_prop2", "thm1_1 for D_f with H replaced by f", Schrodinger, EnergyMomentum, false, true),
            ("df_prop3", "thm1_2 for D_f with H replaced by f", Schrodinger, EnergyMomentum, true, false),
        ];
        for (id, describe, operator, family, conformal, em_diagnostic) in shifted {
            r.register(Box::new(ShiftedBound {
                id,
                describe,
                operator,
                family,
                conformal,
                em_diagnostic,
            }));
        }
        r.register(Box::new(Friedrich));
        r.register(Box::new(HijaziEm));
        r
    }
}

/// Evaluates the theorem `id` on one eigenpair.
pub fn evaluate_bound(id: &str, input: &BoundInput) -> Result<BoundReport> {
    let strategy = BoundRegistry::global()
        .get(id)
        .ok_or_else(|| Error::config(format!("checks: unknown theorem '{id}'")))?;
    if strategy.operator() != input.operator {
        return Err(Error::config(format!(
            "{id} applies to eigenpairs of {}, not {}",
            strategy.operator().label(),
            input.operator.label()
        )));
    }
    strategy.evaluate(input)
}

/// Side-by-side right-hand sides of the energy-momentum and Zhang bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImprovementRecord {
    pub rhs_thm1: Option<f64>,
    pub rhs_zhang: Option<f64>,
    /// Relative L² residual of `∇_i φ + (tr Q/n) c_i φ`.
    pub killing_residual: f64,
    /// `max |4|Q|² − (nR/(n−1) − R)|`.
    pub killing_identity_residual: f64,
    pub killing: bool,
    /// Whether the two right-hand sides agree; only asserted for Killing spinors.
    pub consistent: Option<bool>,
}

pub fn improvement_comparison(input: &BoundInput) -> Result<ImprovementRecord> {
    let thm1 = evaluate_bound("thm1_1", input)?;
    let zhang = evaluate_bound("zhang4_1", input)?;
    let n = input.sample.n;
    let nf = n as f64;
    let killing_residual = crate::energy_momentum::relative_l2(input.sample, input.field, |q, i| {
        let t = input.field.trace(q).unwrap_or(0.0) / nf;
        crate::energy_momentum::shifted_derivative(input.sample, q, i, None, t)
    });
    let killing_identity_residual = if n >= 2 {
        input
            .field
            .unmasked()
            .map(|(q, m)| {
                let r = input.sample.scalar_curvature[q];
                (4.0 * m.norm_squared() - (nf * r / (nf - 1.0) - r)).abs()
            })
            .fold(0.0, f64::max)
    } else {
        f64::NAN
    };
    let killing = killing_residual < PARALLEL_TOLERANCE
        && crate::energy_momentum::em_spinor_residual(input.sample, input.field).trace_constant;
    let consistent = match (killing, thm1.rhs, zhang.rhs) {
        (true, Some(a), Some(b)) => Some((a - b).abs() < SOUNDNESS_TOLERANCE * a.abs().max(1.0)),
        _ => None,
    };
    Ok(ImprovementRecord {
        rhs_thm1: thm1.rhs,
        rhs_zhang: zhang.rhs,
        killing_residual,
        killing_identity_residual,
        killing,
        consistent,
    })
}
