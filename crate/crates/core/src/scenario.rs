//! Scenario files, the run pipeline and the reports it writes.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    evaluate_bound, improvement_comparison, sign_diagnostics, BoundInput, BoundRegistry, BoundReport,
    ImprovementRecord, OperatorFamily, SignCheck, EQUALITY_TOLERANCE, SOUNDNESS_TOLERANCE,
};
use crate::conformal::{
    conformal_context, conformal_covariance_residual, optimize_u, q_scaling_residual, rbar_oracle_residual,
    u_from_spinor, wem_equality_check, ConformalContext, ConformalFactor,
};
use crate::connections::{integral_identity_residual, pq_thm1, qformula_residual, ConnectionParams};
use crate::energy_momentum::{
    compute_q, em_spinor_residual, qtr_identity_residual, trace_identity_residual, SpinorSample,
};
use crate::error::{Error, Result};
use crate::geometry::{gauss_formula_residual, make_model, Discretization, Model, ModelKind, ModelRegistry, ScalarFieldSpec};
use crate::operators::{assemble, eigensolve, lichnerowicz_residual, witten_identity_residual, OperatorKind};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSelection {
    /// Number of eigenpairs of smallest `|λ|` to compute.
    pub count: usize,
    /// Positions (in ascending eigenvalue order) to evaluate; all when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indices: Option<Vec<usize>>,
}

impl Default for ModeSelection {
    fn default() -> Self {
        ModeSelection { count: 8, indices: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeConfig {
    #[serde(default = "default_band")]
    pub band: usize,
    #[serde(default = "default_budget")]
    pub budget: usize,
}

fn default_band() -> usize {
    2
}

fn default_budget() -> usize {
    200
}

/// Either a fixed conformal factor or a request to optimize one per mode.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConformalConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<ScalarFieldSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimize: Option<OptimizeConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    pub model: ModelKind,
    #[serde(default)]
    pub discretization: Discretization,
    pub operator: OperatorKind,
    #[serde(default)]
    pub modes: ModeSelection,
    pub checks: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conformal: Option<ConformalConfig>,
    /// Overrides for `equality`, `soundness` and `identity`.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default)]
    pub seed: u64,
}

/// Per-mode identity checks.
pub const MODE_CHECKS: &[(&str, &str)] = &[
    ("trace_identity", "tr Q |phi|^2 = Re(D phi, phi) pointwise"),
    ("em_spinor", "EM-spinor residual and T-Killing flag (informational)"),
    ("qtr_identity", "(tr Q)^2 = R/4 + |Q|^2 for EM-spinors"),
    ("qformula", "pointwise norm identity of the modified connection, random p and q"),
    ("integral_identity", "integral identity for D_H or D_f eigenpairs with the EM parameter choice"),
    ("improvement", "thm1_1 and zhang4_1 right-hand sides side by side (informational)"),
    ("q_scaling", "Qbar = e^{-u} Q for the transported spinor"),
    ("wem", "WEM conditions with u = ln|phi|^2/(n-1) (informational)"),
];

/// Model-level checks.
pub const MODEL_CHECKS: &[(&str, &str)] = &[
    ("lichnerowicz", "D^2 = nabla* nabla + R/4 on low modes"),
    ("witten", "D_H^2 = Witten* Witten on low modes"),
    ("gauss_formula", "Gauss formula residual of the embedding"),
    ("conformal_covariance", "Dbar(e^{-(n-1)u/2} phi) = e^{-(n+1)u/2} D phi"),
    ("rbar_oracle", "transformed curvature against a finite-difference oracle"),
];

fn tolerance(s: &Scenario, key: &str, default: f64) -> f64 {
    s.tolerances.get(key).copied().unwrap_or(default)
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: serde_json::Value = serde_json::from_str(text)?;
        if let Some(kind) = raw.pointer("/model/kind").and_then(|v| v.as_str()) {
            if ModelRegistry::global().get(kind).is_none() {
                return Err(Error::config(format!("model.kind: unknown model '{kind}'")));
            }
        }
        let s: Scenario = serde_json::from_value(raw).map_err(|e| Error::config(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Scenario::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.modes.count == 0 {
            return Err(Error::config("modes.count must be positive"));
        }
        if let Some(idx) = &self.modes.indices {
            if let Some(bad) = idx.iter().find(|&&i| i >= self.modes.count) {
                return Err(Error::config(format!("modes.indices: {bad} is out of range")));
            }
        }
        let family = OperatorFamily::from(&self.operator);
        for (pos, id) in self.checks.iter().enumerate() {
            if let Some(strategy) = BoundRegistry::global().get(id) {
                if strategy.operator() != family {
                    return Err(Error::config(format!(
                        "checks[{pos}]: {id} needs operator {}, scenario uses {}",
                        strategy.operator().label(),
                        family.label()
                    )));
                }
            } else if !MODE_CHECKS.iter().chain(MODEL_CHECKS).any(|(c, _)| c == id) {
                return Err(Error::config(format!("checks[{pos}]: unknown check '{id}'")));
            }
        }
        for (key, v) in &self.tolerances {
            if !matches!(key.as_str(), "equality" | "soundness" | "identity") {
                return Err(Error::config(format!("tolerances.{key}: unknown tolerance")));
            }
            if !(v.is_finite() && *v >= f64::EPSILON) {
                return Err(Error::config(format!("tolerances.{key} must be at least machine epsilon")));
            }
        }
        if let Some(c) = &self.conformal {
            if c.u.is_some() && c.optimize.is_some() {
                return Err(Error::config("conformal: give either u or optimize, not both"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub mode: Option<usize>,
    pub status: CheckStatus,
    pub value: Option<f64>,
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckRecord {
    fn measured(id: &str, mode: Option<usize>, value: f64, tol: f64) -> Self {
        CheckRecord {
            id: id.into(),
            mode,
            status: if value <= tol { CheckStatus::Pass } else { CheckStatus::Fail },
            value: Some(value),
            tolerance: Some(tol),
            detail: None,
        }
    }

    fn info(id: &str, mode: Option<usize>, value: Option<f64>, detail: String) -> Self {
        CheckRecord {
            id: id.into(),
            mode,
            status: CheckStatus::Info,
            value,
            tolerance: None,
            detail: Some(detail),
        }
    }

    fn not_applicable(id: &str, mode: Option<usize>, why: String) -> Self {
        CheckRecord {
            id: id.into(),
            mode,
            status: CheckStatus::NotApplicable,
            value: None,
            tolerance: None,
            detail: Some(why),
        }
    }

    fn from_result(id: &str, mode: Option<usize>, r: Result<f64>, tol: f64) -> Result<Self> {
        match r {
            Ok(v) => Ok(CheckRecord::measured(id, mode, v, tol)),
            Err(Error::NotApplicable(why)) => Ok(CheckRecord::not_applicable(id, mode, why)),
            Err(e) => Err(e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeRecord {
    pub index: usize,
    pub lambda: f64,
    pub solver_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub model: String,
    pub mode: usize,
    #[serde(flatten)]
    pub report: BoundReport,
    pub sound: bool,
    pub equality_consistent: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub bounds: usize,
    pub equality: usize,
    pub strict: usize,
    pub boundary: usize,
    pub violated: usize,
    pub not_applicable: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub artifact_version: String,
    pub scenario: Scenario,
    pub modes: Vec<ModeRecord>,
    pub bounds: Vec<BoundRecord>,
    pub checks: Vec<CheckRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conformal_factors: Vec<(usize, ConformalFactor)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub improvements: Vec<(usize, ImprovementRecord)>,
    pub summary: Summary,
    pub verdict: Verdict,
    pub timing: Timing,
}

impl RunReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Thread cap from `HYPERDIRAC_THREADS`, defaulting to the available cores.
pub fn thread_cap() -> usize {
    std::env::var("HYPERDIRAC_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|n| *n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

struct ModeOutcome {
    bounds: Vec<BoundRecord>,
    checks: Vec<CheckRecord>,
    factor: Option<ConformalFactor>,
    improvement: Option<ImprovementRecord>,
}

struct Session<'a> {
    scenario: &'a Scenario,
    model: &'a dyn Model,
    potential: Option<Vec<f64>>,
    family: OperatorFamily,
}

impl Session<'_> {
    fn background(&self) -> Option<&[f64]> {
        match self.family {
            OperatorFamily::Hypersurface => self.model.geometry().mean_curvature.as_deref(),
            OperatorFamily::Schrodinger => self.potential.as_deref(),
            OperatorFamily::Dirac => None,
        }
    }

    fn evaluate(&self, index: usize, lambda: f64, coeffs: &crate::linalg::CVec) -> Result<ModeOutcome> {
        let s = self.scenario;
        let identity_tol = |default: f64| s.tolerances.get("identity").copied().unwrap_or(default);
        let sample = SpinorSample::from_model(self.model, coeffs);
        let field = compute_q(&sample)?;
        let mut checks = Vec::new();
        let mut factor = None;
        let mut improvement = None;
        let needs_conformal = s
            .checks
            .iter()
            .any(|c| matches!(c.as_str(), "thm1_2" | "hijazi_zhang6_1" | "df_prop3" | "q_scaling"));
        let conformal: Option<ConformalContext> = if needs_conformal {
            let spec = match s.conformal.as_ref() {
                Some(ConformalConfig {
                    optimize: Some(opt), ..
                }) => {
                    let b = self.background().unwrap_or(&[]);
                    let b = if b.is_empty() { vec![0.0; sample.nodes()] } else { b.to_vec() };
                    let f = optimize_u(self.model, &field, lambda, &b, opt.band, opt.budget)?;
                    let spec = f.spec.clone();
                    factor = Some(f);
                    spec
                }
                Some(ConformalConfig { u: Some(u), .. }) => u.clone(),
                _ => ScalarFieldSpec::Zero,
            };
            Some(conformal_context(self.model, &sample, &spec)?)
        } else {
            None
        };
        let input = BoundInput {
            operator: self.family,
            lambda,
            sample: &sample,
            field: &field,
            mean_curvature: self.model.geometry().mean_curvature.as_deref(),
            potential: self.potential.as_deref(),
            conformal: conformal.as_ref(),
        };
        let eq_tol = tolerance(s, "equality", EQUALITY_TOLERANCE);
        let sound_tol = tolerance(s, "soundness", SOUNDNESS_TOLERANCE);
        let mut bounds = Vec::new();
        for id in &s.checks {
            if BoundRegistry::global().get(id).is_none() {
                continue;
            }
            let mut report = evaluate_bound(id, &input)?;
            if let Some(m) = report.margin {
                report.equality = m.abs() < eq_tol * report.lambda_sq.max(1.0);
                report.sign = sign_diagnostics(&report);
            }
            let sound = !report.status.evaluable() || report.margin.is_none_or(|m| m >= -sound_tol);
            let equality_consistent = report.equality_consistent();
            bounds.push(BoundRecord {
                model: self.model.name().to_string(),
                mode: index,
                report,
                sound,
                equality_consistent,
            });
        }

        for id in &s.checks {
            let mode = Some(index);
            match id.as_str() {
                "trace_identity" => {
                    let scale = (0..sample.nodes()).map(|q| sample.norm_sqr(q)).fold(0.0, f64::max);
                    let v = trace_identity_residual(&sample, &field) / scale;
                    checks.push(CheckRecord::measured(id, mode, v, identity_tol(1e-8)));
                }
                "em_spinor" => {
                    let em = em_spinor_residual(&sample, &field);
                    checks.push(CheckRecord::info(
                        id,
                        mode,
                        Some(em.residual),
                        format!("t_killing={} trace_spread={:e}", em.t_killing, em.trace_spread),
                    ));
                }
                "qtr_identity" => {
                    checks.push(CheckRecord::from_result(
                        id,
                        mode,
                        qtr_identity_residual(&sample, &field),
                        identity_tol(1e-8),
                    )?);
                }
                "qformula" => {
                    let mut rng = ChaCha8Rng::seed_from_u64(s.seed ^ index as u64);
                    let nodes = sample.nodes();
                    let p: Vec<f64> = (0..nodes).map(|_| rng.gen_range(-2.0..2.0)).collect();
                    let q: Vec<f64> = (0..nodes).map(|_| rng.gen_range(-2.0..2.0)).collect();
                    let b = self.background().map(|b| b.to_vec()).unwrap_or_else(|| vec![0.0; nodes]);
                    let params = ConnectionParams::custom(sample.n, lambda, &b, &p, &q);
                    let grad: f64 = (0..nodes)
                        .map(|q| sample.nabla[q].iter().flatten().map(|z| z.norm_sqr()).sum::<f64>() + sample.norm_sqr(q))
                        .fold(0.0, f64::max);
                    let v = qformula_residual(&sample, &params, &field) / grad;
                    checks.push(CheckRecord::measured(id, mode, v, identity_tol(1e-9)));
                }
                "integral_identity" => match self.background() {
                    Some(b) => {
                        let out = pq_thm1(&sample, &field, b, lambda);
                        match out.params.and_then(|p| integral_identity_residual(&sample, &p, &field)) {
                            Some(v) => checks.push(CheckRecord::measured(id, mode, v, identity_tol(1e-6))),
                            None => checks.push(CheckRecord::not_applicable(
                                id,
                                mode,
                                format!("hypothesis status {:?}", out.status),
                            )),
                        }
                    }
                    None => checks.push(CheckRecord::not_applicable(id, mode, "operator has no background".into())),
                },
                "improvement" => {
                    if self.family == OperatorFamily::Hypersurface {
                        let rec = improvement_comparison(&input)?;
                        let status = match rec.consistent {
                            Some(true) => CheckStatus::Pass,
                            Some(false) => CheckStatus::Fail,
                            None => CheckStatus::Info,
                        };
                        checks.push(CheckRecord {
                            id: id.clone(),
                            mode,
                            status,
                            value: Some(rec.killing_residual),
                            tolerance: None,
                            detail: Some(format!("rhs_thm1={:?} rhs_zhang={:?}", rec.rhs_thm1, rec.rhs_zhang)),
                        });
                        improvement = Some(rec);
                    } else {
                        checks.push(CheckRecord::not_applicable(id, mode, "needs D_H".into()));
                    }
                }
                "q_scaling" => {
                    let ctx = conformal.as_ref().expect("conformal context built above");
                    let (t, _) = q_scaling_residual(&field, ctx);
                    checks.push(CheckRecord::measured(id, mode, t, identity_tol(1e-8)));
                }
                "wem" => match u_from_spinor(&sample).and_then(|u| wem_equality_check(&sample, &field, &u)) {
                    Ok(w) => checks.push(CheckRecord::info(
                        id,
                        mode,
                        Some(w.field_residual),
                        format!("du_residual={:e}", w.du_residual),
                    )),
                    Err(Error::NotApplicable(why)) => checks.push(CheckRecord::not_applicable(id, mode, why)),
                    Err(e) => return Err(e),
                },
                _ => {}
            }
        }
        Ok(ModeOutcome {
            bounds,
            checks,
            factor,
            improvement,
        })
    }
}

fn model_checks(s: &Scenario, model: &dyn Model) -> Result<Vec<CheckRecord>> {
    let tol = |d: f64| s.tolerances.get("identity").copied().unwrap_or(d);
    let mut out = Vec::new();
    for id in &s.checks {
        let rec = match id.as_str() {
            "lichnerowicz" => CheckRecord::from_result(id, None, lichnerowicz_residual(model, 4), tol(1e-8))?,
            "witten" => CheckRecord::from_result(id, None, witten_identity_residual(model, 4), tol(1e-8))?,
            "gauss_formula" => {
                // second-order differences: halving the step should divide the residual by about 4
                let ratio = gauss_formula_residual(&s.model, 32)
                    .and_then(|c| gauss_formula_residual(&s.model, 64).map(|f| c / f));
                match ratio {
                    Ok(v) => CheckRecord {
                        id: id.clone(),
                        mode: None,
                        status: if v >= 3.5 { CheckStatus::Pass } else { CheckStatus::Fail },
                        value: Some(v),
                        tolerance: Some(3.5),
                        detail: Some("residual ratio between N=32 and N=64, lower bound".into()),
                    },
                    Err(Error::NotApplicable(why)) => CheckRecord::not_applicable(id, None, why),
                    Err(e) => return Err(e),
                }
            }
            "conformal_covariance" => {
                let u = s.conformal.as_ref().and_then(|c| c.u.clone()).unwrap_or_default();
                let base = make_model(&s.model, &s.discretization)?;
                let r = if base.is_nodal() {
                    conformal_covariance_residual(base, &u, 3)
                } else {
                    Err(Error::not_applicable("modal basis"))
                };
                CheckRecord::from_result(id, None, r, tol(1e-8))?
            }
            "rbar_oracle" => {
                let u = s.conformal.as_ref().and_then(|c| c.u.clone()).unwrap_or_default();
                CheckRecord::from_result(id, None, rbar_oracle_residual(model, &u), tol(1e-6))?
            }
            _ => continue,
        };
        out.push(rec);
    }
    Ok(out)
}

/// Runs a validated scenario.
pub fn run(scenario: &Scenario) -> Result<RunReport> {
    let start = Instant::now();
    let model = make_model(&scenario.model, &scenario.discretization)?;
    let op = assemble(model.as_ref(), &scenario.operator)?;
    let spectrum = eigensolve(&op, scenario.modes.count, model.symmetry_generator().as_ref())?;
    let potential = match &scenario.operator {
        OperatorKind::Schrodinger { f } => Some(model.scalar_values(f)?),
        _ => None,
    };
    let session = Session {
        scenario,
        model: model.as_ref(),
        potential,
        family: OperatorFamily::from(&scenario.operator),
    };
    let selected: Vec<usize> = match &scenario.modes.indices {
        Some(idx) => idx.iter().copied().filter(|&i| i < spectrum.len()).collect(),
        None => (0..spectrum.len()).collect(),
    };
    let modes: Vec<ModeRecord> = selected
        .iter()
        .map(|&i| ModeRecord {
            index: i,
            lambda: spectrum.values[i],
            solver_residual: spectrum.residuals[i],
        })
        .collect();

    // modes are independent; results are gathered back in selection order
    let threads = thread_cap().min(selected.len()).max(1);
    let chunks: Vec<Vec<usize>> = selected.chunks(selected.len().div_ceil(threads).max(1)).map(|c| c.to_vec()).collect();
    let outcomes: Vec<Result<ModeOutcome>> = std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .iter()
            .map(|chunk| {
                let session = &session;
                let spectrum = &spectrum;
                scope.spawn(move || {
                    chunk
                        .iter()
                        .map(|&i| session.evaluate(i, spectrum.values[i], &spectrum.vector(i)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("mode worker panicked")).collect()
    });

    let mut bounds = Vec::new();
    let mut checks = model_checks(scenario, model.as_ref())?;
    let mut factors = Vec::new();
    let mut improvements = Vec::new();
    for (outcome, &i) in outcomes.into_iter().zip(&selected) {
        let o = outcome?;
        bounds.extend(o.bounds);
        checks.extend(o.checks);
        if let Some(f) = o.factor {
            factors.push((i, f));
        }
        if let Some(r) = o.improvement {
            improvements.push((i, r));
        }
    }
    let summary = summarize(&bounds, &checks);
    let verdict = if summary.failures.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(RunReport {
        artifact_version: ARTIFACT_VERSION.to_string(),
        scenario: scenario.clone(),
        modes,
        bounds,
        checks,
        conformal_factors: factors,
        improvements,
        summary,
        verdict,
        timing: Timing {
            total_ms: start.elapsed().as_millis(),
        },
    })
}

fn summarize(bounds: &[BoundRecord], checks: &[CheckRecord]) -> Summary {
    use crate::connections::HypothesisStatus::*;
    let mut s = Summary {
        bounds: bounds.len(),
        ..Default::default()
    };
    for b in bounds {
        match b.report.status {
            Strict => s.strict += 1,
            Boundary => s.boundary += 1,
            Violated => s.violated += 1,
            NotApplicable => s.not_applicable += 1,
        }
        if b.report.equality {
            s.equality += 1;
        }
        let tag = format!("{} mode {}", b.report.theorem, b.mode);
        if !b.sound {
            s.failures.push(format!("{tag}: negative margin {:?}", b.report.margin));
        }
        if !b.equality_consistent {
            s.failures.push(format!(
                "{tag}: equality={} but residual {:?}",
                b.report.equality, b.report.residual
            ));
        }
        if b.report.sign == SignCheck::Fail {
            s.failures.push(format!("{tag}: sign(lambda) differs from the background sign"));
        }
    }
    for c in checks.iter().filter(|c| c.status == CheckStatus::Fail) {
        s.failures.push(match c.mode {
            Some(m) => format!("{} mode {m}: {:?} > {:?}", c.id, c.value, c.tolerance),
            None => format!("{}: {:?} > {:?}", c.id, c.value, c.tolerance),
        });
    }
    s
}

/// Field-level comparison ignoring timing.
pub fn same_numbers(a: &RunReport, b: &RunReport) -> bool {
    let strip = |r: &RunReport| {
        let mut r = r.clone();
        r.timing.total_ms = 0;
        r
    };
    strip(a) == strip(b)
}

/// One-line human summary.
pub fn summary_line(r: &RunReport) -> String {
    let s = &r.summary;
    format!(
        "{}: verdict {}, {} bounds ({} strict, {} boundary, {} violated, {} n/a), {} equality, {} failures",
        if r.scenario.name.is_empty() { r.scenario.model.name() } else { &r.scenario.name },
        enum_name(&r.verdict),
        s.bounds,
        s.strict,
        s.boundary,
        s.violated,
        s.not_applicable,
        s.equality,
        s.failures.len()
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Markdown,
    Json,
}

impl std::str::FromStr for TableFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "md" => Ok(TableFormat::Markdown),
            "json" => Ok(TableFormat::Json),
            other => Err(Error::config(format!("format: unknown table format '{other}'"))),
        }
    }
}

/// Column order of the bound table.
pub const TABLE_COLUMNS: [&str; 12] = [
    "model", "mode", "theorem", "operator", "lambda", "lambda_sq", "rhs", "margin", "status", "equality", "residual",
    "sign",
];

/// One row of the bound table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub model: String,
    pub mode: usize,
    pub theorem: String,
    pub operator: String,
    pub lambda: f64,
    pub lambda_sq: f64,
    pub rhs: Option<f64>,
    pub margin: Option<f64>,
    pub status: String,
    pub equality: bool,
    pub residual: Option<f64>,
    pub sign: String,
}

fn enum_name<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

pub fn table_rows(report: &RunReport) -> Vec<TableRow> {
    report
        .bounds
        .iter()
        .map(|b| TableRow {
            model: b.model.clone(),
            mode: b.mode,
            theorem: b.report.theorem.clone(),
            operator: b.report.operator.label().to_string(),
            lambda: b.report.lambda,
            lambda_sq: b.report.lambda_sq,
            rhs: b.report.rhs,
            margin: b.report.margin,
            status: enum_name(&b.report.status),
            equality: b.report.equality,
            residual: b.report.residual,
            sign: enum_name(&b.report.sign),
        })
        .collect()
}

/// Shortest round-tripping text, in exponent form outside `[1e-4, 1e15)`.
fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !a.is_finite() {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn row_cells(r: &TableRow) -> Vec<String> {
    vec![
        r.model.clone(),
        r.mode.to_string(),
        r.theorem.clone(),
        r.operator.clone(),
        num(r.lambda),
        num(r.lambda_sq),
        opt(r.rhs),
        opt(r.margin),
        r.status.clone(),
        r.equality.to_string(),
        opt(r.residual),
        r.sign.clone(),
    ]
}

pub fn emit_table(report: &RunReport, format: TableFormat) -> Result<String> {
    let rows = table_rows(report);
    Ok(match format {
        TableFormat::Csv => {
            let mut out = TABLE_COLUMNS.join(",");
            out.push('\n');
            for r in &rows {
                out.push_str(&row_cells(r).join(","));
                out.push('\n');
            }
            out
        }
        TableFormat::Markdown => {
            let mut out = format!("| {} |\n", TABLE_COLUMNS.join(" | "));
            out.push_str(&format!("|{}\n", "---|".repeat(TABLE_COLUMNS.len())));
            for r in &rows {
                out.push_str(&format!("| {} |\n", row_cells(r).join(" | ")));
            }
            out
        }
        TableFormat::Json => serde_json::to_string_pretty(&rows)? + "\n",
    })
}

/// Parses a CSV table written by [`emit_table`].
pub fn parse_csv_table(text: &str) -> Result<Vec<TableRow>> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != TABLE_COLUMNS.join(",") {
        return Err(Error::config("unexpected CSV header"));
    }
    let num = |s: &str| -> Result<f64> { s.parse().map_err(|_| Error::config(format!("bad number '{s}'"))) };
    let opt_num = |s: &str| -> Result<Option<f64>> { if s.is_empty() { Ok(None) } else { num(s).map(Some) } };
    lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            if c.len() != TABLE_COLUMNS.len() {
                return Err(Error::config(format!("row has {} cells", c.len())));
            }
            Ok(TableRow {
                model: c[0].into(),
                mode: c[1].parse().map_err(|_| Error::config("bad mode"))?,
                theorem: c[2].into(),
                operator: c[3].into(),
                lambda: num(c[4])?,
                lambda_sq: num(c[5])?,
                rhs: opt_num(c[6])?,
                margin: opt_num(c[7])?,
                status: c[8].into(),
                equality: c[9] == "true",
                residual: opt_num(c[10])?,
                sign: c[11].into(),
            })
        })
        .collect()
}

/// Loads, runs and writes a scenario; the report goes to `output` or the
/// scenario's own output path.
pub fn run_scenario(path: &Path, output: Option<&Path>) -> Result<RunReport> {
    let scenario = Scenario::load(path)?;
    let report = run(&scenario)?;
    let target = output
        .map(Path::to_path_buf)
        .or_else(|| scenario.output.as_ref().map(Into::into));
    if let Some(t) = target {
        std::fs::write(t, report.to_json()?)?;
    }
    Ok(report)
}

/// Every registered theorem id with its description.
pub fn theorem_list() -> Vec<(String, String, String)> {
    BoundRegistry::global()
        .iter()
        .map(|s| (s.id().to_string(), s.operator().label().to_string(), s.describe().to_string()))
        .collect()
}
