//! Discrete Dirac-type operators, their eigenpairs and the operator identities
//! relating them to the connection Laplacian and the Witten operator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{blockwise, scale_nodes, scale_rows, Model, ScalarFieldSpec};
use crate::linalg::{
    cmul, cmul_adj, congruence_inverse_sqrt, diagonal_of, eigh, generalized_eigh, hermitian_defect,
    hermitian_part, max_abs, CMat, CVec, C64,
};

/// Which Dirac-type operator to assemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum OperatorKind {
    #[serde(rename = "D")]
    Dirac,
    #[serde(rename = "D_H")]
    Hypersurface,
    #[serde(rename = "D_f")]
    Schrodinger { f: ScalarFieldSpec },
}

impl OperatorKind {
    pub fn label(&self) -> &'static str {
        match self {
            OperatorKind::Dirac => "D",
            OperatorKind::Hypersurface => "D_H",
            OperatorKind::Schrodinger { .. } => "D_f",
        }
    }
}

/// A Galerkin operator `A φ = λ M φ` together with its pointwise action.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    pub label: String,
    /// `S^† W P`, Hermitian.
    pub stiffness: CMat,
    /// `S^† W S`, the discrete inner product on coefficients.
    pub mass: CMat,
    /// Node values of the operator applied to coefficients.
    pub pointwise: CMat,
    /// Potential subtracted from `D`, halved: the operator is `D - potential/2`.
    pub potential: Vec<f64>,
    pub hermitian_defect: f64,
}

impl DiscreteOperator {
    pub fn apply_pointwise(&self, coeffs: &CVec) -> CVec {
        &self.pointwise * coeffs
    }
}

/// `D − V/2` for a potential `V` given at the nodes.
pub fn assemble_shifted_dirac(model: &dyn Model, label: &str, potential: &[f64]) -> Result<DiscreteOperator> {
    let k = model.k();
    let mut pointwise = model.dirac_pointwise();
    if potential.iter().any(|v| *v != 0.0) {
        let half: Vec<f64> = potential.iter().map(|v| -0.5 * v).collect();
        pointwise += scale_nodes(model.synthesis(), &half, k);
    }
    let weighted = scale_rows(&pointwise, &model.geometry().weights, k);
    let stiffness = if model.is_nodal() {
        weighted
    } else {
        cmul_adj(model.synthesis(), &weighted)
    };
    let scale = max_abs(&stiffness).max(1.0);
    let defect = hermitian_defect(&stiffness) / scale;
    if defect > 1e-10 {
        return Err(Error::NonHermitian(defect));
    }
    Ok(DiscreteOperator {
        label: label.to_string(),
        stiffness: hermitian_part(&stiffness),
        mass: model.mass(),
        pointwise,
        potential: potential.to_vec(),
        hermitian_defect: defect,
    })
}

pub fn assemble_intrinsic_dirac(model: &dyn Model) -> Result<DiscreteOperator> {
    assemble_shifted_dirac(model, "D", &vec![0.0; model.node_count()])
}

pub fn assemble_hypersurface_dirac(model: &dyn Model) -> Result<DiscreteOperator> {
    let h = model.mean_curvature()?.to_vec();
    assemble_shifted_dirac(model, "D_H", &h)
}

pub fn assemble_dirac_schrodinger(model: &dyn Model, f: &ScalarFieldSpec) -> Result<DiscreteOperator> {
    let values = model.scalar_values(f)?;
    assemble_shifted_dirac(model, "D_f", &values)
}

pub fn assemble(model: &dyn Model, kind: &OperatorKind) -> Result<DiscreteOperator> {
    match kind {
        OperatorKind::Dirac => assemble_intrinsic_dirac(model),
        OperatorKind::Hypersurface => assemble_hypersurface_dirac(model),
        OperatorKind::Schrodinger { f } => assemble_dirac_schrodinger(model, f),
    }
}

/// Eigenpairs sorted by value, eigenvectors `M`-orthonormal.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub values: Vec<f64>,
    /// Coefficient vectors as columns.
    pub vectors: CMat,
    /// `‖Aφ − λMφ‖` in the dual norm of `M`.
    pub residuals: Vec<f64>,
    /// Index groups of numerically equal eigenvalues.
    pub clusters: Vec<Vec<usize>>,
}

impl SpectrumResult {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, i: usize) -> CVec {
        self.vectors.column(i).into_owned()
    }

    pub fn multiplicities(&self) -> Vec<(f64, usize)> {
        self.clusters
            .iter()
            .map(|c| {
                let mean = c.iter().map(|&i| self.values[i]).sum::<f64>() / c.len() as f64;
                (mean, c.len())
            })
            .collect()
    }
}

pub fn cluster_tolerance(lambda: f64) -> f64 {
    1e-8 * lambda.abs().max(1.0)
}

/// The `count` eigenpairs of smallest `|λ|`, returned in ascending order.
///
/// Degenerate clusters are rotated to diagonalize `symmetry` when given, then
/// each vector's first significant coefficient is made real and positive.
pub fn eigensolve(op: &DiscreteOperator, count: usize, symmetry: Option<&CMat>) -> Result<SpectrumResult> {
    let scale = max_abs(&op.stiffness).max(1.0);
    let defect = hermitian_defect(&op.stiffness) / scale;
    if defect > 1e-10 {
        return Err(Error::NonHermitian(defect));
    }
    let (all_values, all_vectors) = generalized_eigh(&op.stiffness, &op.mass)?;
    let mut order: Vec<usize> = (0..all_values.len()).collect();
    order.sort_by(|&a, &b| all_values[a].abs().total_cmp(&all_values[b].abs()).then(a.cmp(&b)));
    let mut chosen: Vec<usize> = order.into_iter().take(count.min(all_values.len())).collect();
    chosen.sort_unstable();
    let values: Vec<f64> = chosen.iter().map(|&i| all_values[i]).collect();
    let mut vectors = CMat::zeros(all_vectors.nrows(), chosen.len());
    for (dst, &src) in chosen.iter().enumerate() {
        vectors.set_column(dst, &all_vectors.column(src));
    }

    let clusters = group_clusters(&values);
    if let Some(p) = symmetry {
        for cluster in clusters.iter().filter(|c| c.len() > 1) {
            let block = CMat::from_fn(vectors.nrows(), cluster.len(), |r, c| vectors[(r, cluster[c])]);
            let gram = block.adjoint() * &op.mass * p * &block;
            let (_, rot) = eigh(&hermitian_part(&gram))?;
            let rotated = block * rot;
            for (c, &idx) in cluster.iter().enumerate() {
                vectors.set_column(idx, &rotated.column(c));
            }
        }
    }
    for j in 0..vectors.ncols() {
        fix_phase(&mut vectors, j);
    }

    let ax = cmul(&op.stiffness, &vectors);
    let mx = cmul(&op.mass, &vectors);
    let mut r = ax;
    for j in 0..values.len() {
        let col = mx.column(j).scale(values[j]);
        let mut rc = r.column_mut(j);
        rc -= col;
    }
    let residuals = dual_norms(&r, &op.mass)?;

    Ok(SpectrumResult {
        values,
        vectors,
        residuals,
        clusters,
    })
}

fn group_clusters(values: &[f64]) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (i, v) in values.iter().enumerate() {
        match clusters.last_mut() {
            Some(last) if (values[*last.last().unwrap()] - v).abs() < cluster_tolerance(*v) => last.push(i),
            _ => clusters.push(vec![i]),
        }
    }
    clusters
}

fn fix_phase(vectors: &mut CMat, j: usize) {
    let col = vectors.column(j);
    let biggest = col.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    if let Some(pivot) = col.iter().find(|z| z.norm() > 1e-6 * biggest).copied() {
        let phase = pivot.conj() / pivot.norm();
        for z in vectors.column_mut(j).iter_mut() {
            *z *= phase;
        }
    }
}

fn dual_norms(r: &CMat, m: &CMat) -> Result<Vec<f64>> {
    let y = match diagonal_of(m) {
        Some(d) => CMat::from_fn(r.nrows(), r.ncols(), |i, j| r[(i, j)] / d[i]),
        None => nalgebra::Cholesky::new(m.clone())
            .ok_or_else(|| Error::Numerical("mass matrix is not positive definite".into()))?
            .solve(r),
    };
    Ok((0..r.ncols())
        .map(|j| r.column(j).dotc(&y.column(j)).re.max(0.0).sqrt())
        .collect())
}

/// Weighted inner product `Σ w_q <a_q, b_q>` of node values.
pub fn weighted_inner(model: &dyn Model, a: &[C64], b: &[C64]) -> C64 {
    let k = model.k();
    model
        .geometry()
        .weights
        .iter()
        .enumerate()
        .map(|(q, w)| {
            (0..k)
                .map(|c| b[q * k + c].conj() * a[q * k + c])
                .sum::<C64>()
                * *w
        })
        .sum()
}

/// Node values of `∇_{e_i} φ` for each frame direction.
pub fn covariant_derivative(model: &dyn Model, coeffs: &CVec) -> Vec<CVec> {
    model.nabla().iter().map(|n| n * coeffs).collect()
}

/// Pointwise map of the Witten operator `D̃ = Σ e_i·∇̃_{e_i}` into the full
/// ambient spinor space, with `∇̃ = ∇ + ½ h(e_i)·ν·`.
pub fn witten_pointwise(model: &dyn Model) -> Result<CMat> {
    let second = model
        .geometry()
        .second_fundamental
        .as_ref()
        .ok_or_else(|| Error::not_applicable(format!("{} has no second fundamental form", model.name())))?;
    let k = model.k();
    let big = model.space().ambient_dim();
    let v = &model.space().embedding;
    let n = model.n();
    let s = model.synthesis();
    let mut out = CMat::zeros(model.node_count() * big, model.ndof());
    for q in 0..model.node_count() {
        let (gammas, _) = model.ambient_frame(q);
        let c = model.clifford(q);
        let s_rows = s.rows(q * k, k);
        let mut acc = CMat::zeros(big, model.ndof());
        for i in 0..n {
            let mut inner = model.nabla()[i].rows(q * k, k).into_owned();
            for j in 0..n {
                let hij = second[q][(i, j)];
                if hij != 0.0 {
                    inner += (&c[j] * s_rows) * C64::new(0.5 * hij, 0.0);
                }
            }
            acc += &gammas[i] * v * inner;
        }
        out.rows_mut(q * big, big).copy_from(&acc);
    }
    Ok(out)
}

/// Normalizes a form restricted to the band basis `B` by the Gram matrix `B^† M B`.
fn normalized(restricted: &CMat, model: &dyn Model, b: &CMat) -> Result<f64> {
    let gram = cmul_adj(b, &cmul(&model.mass(), b));
    Ok(max_abs(&congruence_inverse_sqrt(restricted, &gram)?))
}

/// `(PB)^† W (PB)` for a pointwise map `P` with `rows_per_node` rows per node.
fn band_form(p: &CMat, b: &CMat, weights: &[f64], rows_per_node: usize) -> CMat {
    let pb = cmul(p, b);
    cmul_adj(&pb, &scale_rows(&pb, weights, rows_per_node))
}

/// `D² − ∇*∇ − R/4` as quadratic forms, restricted to modes up to `band`.
pub fn lichnerowicz_residual(model: &dyn Model, band: usize) -> Result<f64> {
    let k = model.k();
    let w = &model.geometry().weights;
    let b = model.low_band(band);
    let mut x = band_form(&model.dirac_pointwise(), &b, w, k);
    for n in model.nabla() {
        x -= band_form(n, &b, w, k);
    }
    let quarter_r: Vec<f64> = model
        .geometry()
        .scalar_curvature
        .iter()
        .zip(w)
        .map(|(r, wq)| 0.25 * r * wq)
        .collect();
    let sb = cmul(model.synthesis(), &b);
    x -= cmul_adj(&sb, &scale_rows(&sb, &quarter_r, k));
    normalized(&x, model, &b)
}

/// `D_H² − D̃*D̃` as quadratic forms, restricted to modes up to `band`.
pub fn witten_identity_residual(model: &dyn Model, band: usize) -> Result<f64> {
    let dh = assemble_hypersurface_dirac(model)?;
    witten_identity_residual_for(model, &dh, band)
}

/// As [`witten_identity_residual`] with a caller-supplied `D_H`.
pub fn witten_identity_residual_for(model: &dyn Model, dh: &DiscreteOperator, band: usize) -> Result<f64> {
    let k = model.k();
    let w = &model.geometry().weights;
    let b = model.low_band(band);
    let witten = witten_pointwise(model)?;
    let x = band_form(&dh.pointwise, &b, w, k) - band_form(&witten, &b, w, model.space().ambient_dim());
    normalized(&x, model, &b)
}

/// Rayleigh quotient `<φ, Aφ>/<φ, Mφ>`.
pub fn rayleigh_quotient(op: &DiscreteOperator, x: &CVec) -> f64 {
    let num = x.dotc(&(&op.stiffness * x)).re;
    let den = x.dotc(&(&op.mass * x)).re;
    num / den
}

/// Node blocks `c_i` gathered for one direction, for `blockwise`.
pub fn clifford_blocks(model: &dyn Model, i: usize) -> Vec<CMat> {
    (0..model.node_count()).map(|q| model.clifford(q)[i].clone()).collect()
}

/// Node values of `Σ_j a_j(q) c_j φ` given per-node coefficients `a`.
pub fn clifford_combination(model: &dyn Model, coeffs: &[Vec<f64>], values: &CMat) -> CMat {
    let n = model.n();
    let blocks: Vec<CMat> = (0..model.node_count())
        .map(|q| {
            let c = model.clifford(q);
            let mut acc = CMat::zeros(model.k(), model.k());
            for j in 0..n {
                acc += &c[j] * C64::new(coeffs[q][j], 0.0);
            }
            acc
        })
        .collect();
    blockwise(&blocks, values)
}
