//! Modified covariant derivatives `∇^Q` and `∇^λ`, the choices of the
//! parameter functions `p`, `q`, and the identities behind both bounds.

use serde::{Deserialize, Serialize};

use crate::energy_momentum::{relative_l2, shifted_derivative, EmTensorField, SpinorSample};
use crate::linalg::C64;

/// `|H|` below this switches to the `q ≡ 0` branch.
pub const DEGENERATE_BACKGROUND: f64 = 1e-10;
/// Relative tolerance for a pointwise hypothesis to count as an equality.
pub const BOUNDARY_TOLERANCE: f64 = 1e-8;
/// `|λ|` below this is treated as a zero eigenvalue in boundary limits.
pub const ZERO_EIGENVALUE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisStatus {
    Strict,
    Boundary,
    Violated,
    NotApplicable,
}

impl HypothesisStatus {
    /// Combines pointwise statuses: any violation wins, then any equality.
    pub fn aggregate(items: impl IntoIterator<Item = HypothesisStatus>) -> HypothesisStatus {
        items.into_iter().fold(HypothesisStatus::Strict, |acc, s| match (acc, s) {
            (HypothesisStatus::NotApplicable, _) | (_, HypothesisStatus::NotApplicable) => {
                HypothesisStatus::NotApplicable
            }
            (a, b) => a.max(b),
        })
    }

    pub fn evaluable(self) -> bool {
        matches!(self, HypothesisStatus::Strict | HypothesisStatus::Boundary)
    }
}

/// Which parameter rule is in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamFamily {
    /// `nq² = |B|/(√X − |B|)`, `p = −1/(nq)`.
    EnergyMomentum,
    /// `(1 − nq)² = (n−1)|B|/(√Y − |B|)`, `p = (1−q)/(1−nq)`.
    Zhang,
    /// Arbitrary user-supplied fields.
    Custom,
}

/// Pointwise `p`, `q` and the shift `s = p·B/2 + q·λ` for a background `B`
/// (the mean curvature or a potential).
///
/// Entries are `None` on masked nodes, and at boundary nodes where no finite
/// limit exists.
#[derive(Debug, Clone)]
pub struct ConnectionParams {
    pub family: ParamFamily,
    pub n: usize,
    pub lambda: f64,
    pub background: Vec<f64>,
    /// The curvature term compared with `B²`: `X` or `Y`.
    pub curvature: Vec<Option<f64>>,
    pub p: Vec<Option<f64>>,
    pub q: Vec<Option<f64>>,
    pub shift: Vec<Option<f64>>,
    pub status: HypothesisStatus,
}

impl ConnectionParams {
    pub fn custom(n: usize, lambda: f64, background: &[f64], p: &[f64], q: &[f64]) -> Self {
        let shift = p
            .iter()
            .zip(q)
            .zip(background)
            .map(|((p, q), b)| Some(p * b / 2.0 + q * lambda))
            .collect();
        ConnectionParams {
            family: ParamFamily::Custom,
            n,
            lambda,
            background: background.to_vec(),
            curvature: vec![None; p.len()],
            p: p.iter().map(|v| Some(*v)).collect(),
            q: q.iter().map(|v| Some(*v)).collect(),
            shift,
            status: HypothesisStatus::Strict,
        }
    }

    /// Whether every unmasked node carries a shift.
    pub fn complete(&self, field: &EmTensorField) -> bool {
        field.unmasked().all(|(q, _)| self.shift[q].is_some())
    }

    pub fn shift_range(&self) -> Option<(f64, f64)> {
        let vals: Vec<f64> = self.shift.iter().flatten().copied().collect();
        if vals.is_empty() {
            return None;
        }
        Some((
            vals.iter().cloned().fold(f64::INFINITY, f64::min),
            vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        ))
    }
}

fn classify(x: f64, b: f64) -> HypothesisStatus {
    if b < DEGENERATE_BACKGROUND {
        let tol = BOUNDARY_TOLERANCE * x.abs().max(1.0);
        return if x > tol {
            HypothesisStatus::Strict
        } else if x >= -tol {
            HypothesisStatus::Boundary
        } else {
            HypothesisStatus::Violated
        };
    }
    let d = x - b * b;
    let tol = BOUNDARY_TOLERANCE * x.abs().max(b * b).max(1.0);
    if d > tol {
        HypothesisStatus::Strict
    } else if d >= -tol {
        HypothesisStatus::Boundary
    } else {
        HypothesisStatus::Violated
    }
}

struct Node {
    status: HypothesisStatus,
    p: Option<f64>,
    q: Option<f64>,
    s: Option<f64>,
}

fn em_node(n: f64, x: f64, bs: f64, lambda: f64) -> Node {
    let b = bs.abs();
    let status = classify(x, b);
    match status {
        _ if b < DEGENERATE_BACKGROUND && status != HypothesisStatus::Violated => Node {
            status,
            p: Some(0.0),
            q: Some(0.0),
            s: Some(0.0),
        },
        HypothesisStatus::Strict => {
            let q = (b / (x.sqrt() - b) / n).sqrt();
            let p = -1.0 / (n * q);
            Node {
                status,
                p: Some(p),
                q: Some(q),
                s: Some(p * bs / 2.0 + q * lambda),
            }
        }
        // q → ∞, p → 0: only a zero eigenvalue leaves a finite shift
        HypothesisStatus::Boundary => Node {
            status,
            p: None,
            q: None,
            s: (lambda.abs() < ZERO_EIGENVALUE).then_some(0.0),
        },
        _ => Node {
            status,
            p: None,
            q: None,
            s: None,
        },
    }
}

fn zhang_node(n: f64, y: f64, bs: f64, lambda: f64) -> Node {
    let b = bs.abs();
    let status = classify(y, b);
    match status {
        // (1 − nq)² = 0: q = 1/n, and the shift is λ/n
        _ if b < DEGENERATE_BACKGROUND && status != HypothesisStatus::Violated => Node {
            status,
            p: None,
            q: Some(1.0 / n),
            s: Some(lambda / n),
        },
        HypothesisStatus::Strict => {
            let t = (n - 1.0) * b / (y.sqrt() - b);
            let q = (1.0 - t.sqrt()) / n;
            let p = (1.0 - q) / (1.0 - n * q);
            Node {
                status,
                p: Some(p),
                q: Some(q),
                s: Some(p * bs / 2.0 + q * lambda),
            }
        }
        // q → −∞, p → 1/n
        HypothesisStatus::Boundary => Node {
            status,
            p: None,
            q: None,
            s: (lambda.abs() < ZERO_EIGENVALUE).then_some(bs / (2.0 * n)),
        },
        _ => Node {
            status,
            p: None,
            q: None,
            s: None,
        },
    }
}

/// Pointwise parameters including boundary limits. `curvature[q]` is `X` for
/// the energy-momentum family and `Y` for the Zhang family, `None` on masked
/// nodes.
pub fn params_with_limits(
    family: ParamFamily,
    n: usize,
    curvature: &[Option<f64>],
    background: &[f64],
    lambda: f64,
) -> ConnectionParams {
    let nf = n as f64;
    let nodes: Vec<Option<Node>> = curvature
        .iter()
        .zip(background)
        .map(|(x, b)| {
            x.map(|x| match family {
                ParamFamily::Zhang => zhang_node(nf, x, *b, lambda),
                _ => em_node(nf, x, *b, lambda),
            })
        })
        .collect();
    let status = if family == ParamFamily::Zhang && n < 2 {
        HypothesisStatus::NotApplicable
    } else {
        HypothesisStatus::aggregate(nodes.iter().flatten().map(|nd| nd.status))
    };
    let pick = |f: fn(&Node) -> Option<f64>| -> Vec<Option<f64>> {
        nodes.iter().map(|nd| nd.as_ref().and_then(f)).collect()
    };
    ConnectionParams {
        family,
        n,
        lambda,
        background: background.to_vec(),
        curvature: curvature.to_vec(),
        p: pick(|nd| nd.p),
        q: pick(|nd| nd.q),
        shift: pick(|nd| nd.s),
        status,
    }
}

/// `X = R + 4|Q|²` on unmasked nodes.
pub fn em_curvature(scalar_curvature: &[f64], field: &EmTensorField) -> Vec<Option<f64>> {
    (0..field.values.len())
        .map(|q| field.norm_sqr(q).map(|qq| scalar_curvature[q] + 4.0 * qq))
        .collect()
}

/// `Y = n/(n−1)·R` on unmasked nodes.
pub fn zhang_curvature(n: usize, scalar_curvature: &[f64], field: &EmTensorField) -> Vec<Option<f64>> {
    let factor = if n >= 2 { n as f64 / (n as f64 - 1.0) } else { f64::NAN };
    (0..field.values.len())
        .map(|q| field.at(q).map(|_| factor * scalar_curvature[q]))
        .collect()
}

/// Typed outcome of a parameter choice: parameters exist only when the
/// hypothesis holds strictly.
#[derive(Debug, Clone)]
pub struct PqOutcome {
    pub status: HypothesisStatus,
    pub params: Option<ConnectionParams>,
}

fn outcome(params: ConnectionParams) -> PqOutcome {
    PqOutcome {
        status: params.status,
        params: (params.status == HypothesisStatus::Strict).then_some(params),
    }
}

/// Parameters for the energy-momentum bound; requires `R + 4|Q|² > B² > 0`.
pub fn pq_thm1(sample: &SpinorSample, field: &EmTensorField, background: &[f64], lambda: f64) -> PqOutcome {
    let x = em_curvature(&sample.scalar_curvature, field);
    outcome(params_with_limits(ParamFamily::EnergyMomentum, sample.n, &x, background, lambda))
}

/// Parameters for the Zhang bound; requires `n ≥ 2` and `nR > (n−1)B² > 0`.
pub fn pq_zhang(sample: &SpinorSample, field: &EmTensorField, background: &[f64], lambda: f64) -> PqOutcome {
    let y = zhang_curvature(sample.n, &sample.scalar_curvature, field);
    outcome(params_with_limits(ParamFamily::Zhang, sample.n, &y, background, lambda))
}

/// Derivative fields `[i][node]` of a modified connection and their total
/// L² norm relative to `‖φ‖`.
#[derive(Debug, Clone)]
pub struct ModifiedDerivative {
    pub fields: Vec<Vec<Vec<C64>>>,
    pub norm: f64,
}

fn modified(
    sample: &SpinorSample,
    params: &ConnectionParams,
    field: &EmTensorField,
    with_q: bool,
) -> Option<ModifiedDerivative> {
    if !params.complete(field) {
        return None;
    }
    let mut fields = vec![vec![Vec::new(); sample.nodes()]; sample.n];
    let norm = relative_l2(sample, field, |q, i| {
        let a = if with_q { field.at(q) } else { None };
        let d = shifted_derivative(sample, q, i, a, params.shift[q].unwrap_or(0.0));
        fields[i][q] = d.clone();
        d
    });
    Some(ModifiedDerivative { fields, norm })
}

/// `∇^Q_i φ = ∇_i φ + s c_i φ + Σ_j Q_ij c_j φ`. `None` when some unmasked node
/// has no shift.
pub fn nabla_q_apply(
    sample: &SpinorSample,
    params: &ConnectionParams,
    field: &EmTensorField,
) -> Option<ModifiedDerivative> {
    modified(sample, params, field, true)
}

/// `∇^λ_i φ = ∇_i φ + s c_i φ`.
pub fn nabla_lambda_apply(
    sample: &SpinorSample,
    params: &ConnectionParams,
    field: &EmTensorField,
) -> Option<ModifiedDerivative> {
    modified(sample, params, field, false)
}

/// `max | |∇^Q φ|² − (|∇φ|² + n s²|φ|² − |Q|²|φ|²) |` over unmasked nodes.
pub fn qformula_residual(sample: &SpinorSample, params: &ConnectionParams, field: &EmTensorField) -> f64 {
    let n = sample.n as f64;
    field
        .unmasked()
        .filter_map(|(q, m)| params.shift[q].map(|s| (q, m, s)))
        .map(|(q, m, s)| {
            let lhs: f64 = (0..sample.n)
                .map(|i| {
                    shifted_derivative(sample, q, i, Some(m), s)
                        .iter()
                        .map(|z| z.norm_sqr())
                        .sum::<f64>()
                })
                .sum();
            let grad: f64 = sample.nabla[q].iter().flatten().map(|z| z.norm_sqr()).sum();
            let phi = sample.norm_sqr(q);
            let rhs = grad + n * s * s * phi - m.norm_squared() * phi;
            (lhs - rhs).abs()
        })
        .fold(0.0, f64::max)
}

/// `|∫|∇^Q φ|² − ∫(1+nq²)[λ² − ¼(√X − |B|)²]|φ|²| / ∫|φ|²` for an eigenpair of
/// `D − B/2` and energy-momentum parameters.
pub fn integral_identity_residual(
    sample: &SpinorSample,
    params: &ConnectionParams,
    field: &EmTensorField,
) -> Option<f64> {
    let n = sample.n as f64;
    let lam = params.lambda;
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for (node, m) in field.unmasked() {
        let (s, q, x) = (params.shift[node]?, params.q[node]?, params.curvature[node]?);
        let w = sample.weights[node];
        for i in 0..sample.n {
            lhs += w * shifted_derivative(sample, node, i, Some(m), s)
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>();
        }
        let gap = x.max(0.0).sqrt() - params.background[node].abs();
        rhs += w * (1.0 + n * q * q) * (lam * lam - 0.25 * gap * gap) * sample.norm_sqr(node);
    }
    Some((lhs - rhs).abs() / sample.l2_sqr())
}
