//! Energy-momentum tensor of a spinor field and the identities it satisfies.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Model;
use crate::linalg::{CMat, CVec, C64};

/// Relative threshold on `|φ|²` below which a node counts as a zero.
pub const ZERO_SET_THRESHOLD: f64 = 1e-8;

/// Pointwise values of a spinor field and its covariant derivatives.
///
/// Built either from a model and coefficient vector, or by transporting
/// another sample through a conformal change.
#[derive(Debug, Clone)]
pub struct SpinorSample {
    pub n: usize,
    pub k: usize,
    pub weights: Vec<f64>,
    pub scalar_curvature: Vec<f64>,
    /// `phi[q][a]`.
    pub phi: Vec<Vec<C64>>,
    /// `nabla[q][i][a]`, the derivative along the `i`-th frame vector.
    pub nabla: Vec<Vec<Vec<C64>>>,
    /// `cliff[q][i] = e_i·ν·` at node `q`.
    pub cliff: Vec<Vec<CMat>>,
}

fn chunk(v: &CVec, k: usize) -> Vec<Vec<C64>> {
    v.as_slice().chunks(k).map(|c| c.to_vec()).collect()
}

impl SpinorSample {
    pub fn from_model(model: &dyn Model, coeffs: &CVec) -> Self {
        let k = model.k();
        let phi = chunk(&(model.synthesis() * coeffs), k);
        let derivs: Vec<Vec<Vec<C64>>> = model.nabla().iter().map(|m| chunk(&(m * coeffs), k)).collect();
        let nodes = phi.len();
        let nabla = (0..nodes)
            .map(|q| derivs.iter().map(|d| d[q].clone()).collect())
            .collect();
        let cliff = (0..nodes).map(|q| model.clifford(q).to_vec()).collect();
        SpinorSample {
            n: model.n(),
            k,
            weights: model.geometry().weights.clone(),
            scalar_curvature: model.geometry().scalar_curvature.clone(),
            phi,
            nabla,
            cliff,
        }
    }

    pub fn nodes(&self) -> usize {
        self.phi.len()
    }

    pub fn norm_sqr(&self, q: usize) -> f64 {
        self.phi[q].iter().map(|z| z.norm_sqr()).sum()
    }

    /// `∫ |φ|²` by the node quadrature.
    pub fn l2_sqr(&self) -> f64 {
        (0..self.nodes()).map(|q| self.weights[q] * self.norm_sqr(q)).sum()
    }

    /// `c_i v` at node `q`.
    pub fn act(&self, q: usize, i: usize, v: &[C64]) -> Vec<C64> {
        let c = &self.cliff[q][i];
        (0..self.k)
            .map(|a| (0..self.k).map(|b| c[(a, b)] * v[b]).sum())
            .collect()
    }

    /// `Σ_i c_i ∇_i φ` at node `q`.
    pub fn dirac_at(&self, q: usize) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.k];
        for i in 0..self.n {
            for (o, v) in out.iter_mut().zip(self.act(q, i, &self.nabla[q][i])) {
                *o += v;
            }
        }
        out
    }
}

pub fn re_inner(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x * y.conj()).re).sum()
}

/// Outcome of masking the zero set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaskStatus {
    Ok,
    /// More than half of the nodes lie in the zero set.
    MostlyMasked,
}

/// `Q^φ` at every node outside the zero set of `φ`.
#[derive(Debug, Clone)]
pub struct EmTensorField {
    pub n: usize,
    /// `None` on masked nodes.
    pub values: Vec<Option<DMatrix<f64>>>,
    pub masked: usize,
    pub status: MaskStatus,
}

impl EmTensorField {
    pub fn at(&self, q: usize) -> Option<&DMatrix<f64>> {
        self.values[q].as_ref()
    }

    pub fn trace(&self, q: usize) -> Option<f64> {
        self.at(q).map(|m| m.trace())
    }

    /// Frobenius norm squared `Σ Q_ij²`.
    pub fn norm_sqr(&self, q: usize) -> Option<f64> {
        self.at(q).map(|m| m.norm_squared())
    }

    pub fn mask_fraction(&self) -> f64 {
        self.masked as f64 / self.values.len().max(1) as f64
    }

    pub fn unmasked(&self) -> impl Iterator<Item = (usize, &DMatrix<f64>)> {
        self.values.iter().enumerate().filter_map(|(q, v)| v.as_ref().map(|m| (q, m)))
    }

    /// `e^{-u} Q`, the tensor of the transported spinor under `ḡ = e^{2u}g`.
    pub fn scaled(&self, u: &[f64]) -> EmTensorField {
        let values = self
            .values
            .iter()
            .zip(u)
            .map(|(v, u)| v.as_ref().map(|m| m * (-u).exp()))
            .collect();
        EmTensorField { values, ..*self }
    }
}

/// `Q_ij = ½ Re(c_i ∇_j φ + c_j ∇_i φ, φ)/|φ|²` off the zero set.
pub fn compute_q(sample: &SpinorSample) -> Result<EmTensorField> {
    let n = sample.n;
    let norms: Vec<f64> = (0..sample.nodes()).map(|q| sample.norm_sqr(q)).collect();
    let top = norms.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 || !top.is_finite() {
        return Err(Error::ZeroSpinor);
    }
    let floor = ZERO_SET_THRESHOLD * top;
    let mut masked = 0;
    let values: Vec<Option<DMatrix<f64>>> = (0..sample.nodes())
        .map(|q| {
            if norms[q] < floor {
                masked += 1;
                return None;
            }
            let phi = &sample.phi[q];
            // a[i][j] = Re(c_i ∇_j φ, φ)
            let a = DMatrix::from_fn(n, n, |i, j| re_inner(&sample.act(q, i, &sample.nabla[q][j]), phi));
            Some((&a + a.transpose()) * (0.5 / norms[q]))
        })
        .collect();
    let status = if masked * 2 > values.len() {
        MaskStatus::MostlyMasked
    } else {
        MaskStatus::Ok
    };
    Ok(EmTensorField {
        n,
        values,
        masked,
        status,
    })
}

/// `max |tr Q·|φ|² − Re(Dφ, φ)|` over unmasked nodes.
pub fn trace_identity_residual(sample: &SpinorSample, field: &EmTensorField) -> f64 {
    field
        .unmasked()
        .map(|(q, m)| {
            let lhs = m.trace() * sample.norm_sqr(q);
            let rhs = re_inner(&sample.dirac_at(q), &sample.phi[q]);
            (lhs - rhs).abs()
        })
        .fold(0.0, f64::max)
}

/// Relative L² size of a per-node, per-direction spinor defect.
pub(crate) fn relative_l2<F>(sample: &SpinorSample, field: &EmTensorField, mut defect: F) -> f64
where
    F: FnMut(usize, usize) -> Vec<C64>,
{
    let mut num = 0.0;
    let mut den = 0.0;
    for (q, _) in field.unmasked() {
        den += sample.weights[q] * sample.norm_sqr(q);
        for i in 0..sample.n {
            let d = defect(q, i);
            num += sample.weights[q] * d.iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
    }
    if den == 0.0 {
        return f64::INFINITY;
    }
    (num / den).sqrt()
}

/// `∇_i φ + Σ_j a_ij c_j φ + s c_i φ` at node `q`.
pub(crate) fn shifted_derivative(
    sample: &SpinorSample,
    q: usize,
    i: usize,
    a: Option<&DMatrix<f64>>,
    s: f64,
) -> Vec<C64> {
    let mut out = sample.nabla[q][i].clone();
    let phi = &sample.phi[q];
    for j in 0..sample.n {
        let coef = a.map(|m| m[(i, j)]).unwrap_or(0.0) + if i == j { s } else { 0.0 };
        if coef != 0.0 {
            for (o, v) in out.iter_mut().zip(sample.act(q, j, phi)) {
                *o += v * coef;
            }
        }
    }
    out
}

/// Result of testing the EM-spinor equation `∇_i φ = −Σ_j Q_ij c_j φ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmCheck {
    pub residual: f64,
    /// Spread of `tr Q` over the unmasked nodes.
    pub trace_spread: f64,
    pub trace_constant: bool,
    /// EM-spinor with constant `tr Q`.
    pub t_killing: bool,
}

pub const EM_TOLERANCE: f64 = 1e-6;

pub fn em_spinor_residual(sample: &SpinorSample, field: &EmTensorField) -> EmCheck {
    let residual = relative_l2(sample, field, |q, i| shifted_derivative(sample, q, i, field.at(q), 0.0));
    let traces: Vec<f64> = field.unmasked().map(|(_, m)| m.trace()).collect();
    let hi = traces.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = traces.iter().cloned().fold(f64::INFINITY, f64::min);
    let trace_spread = hi - lo;
    let trace_constant = trace_spread < EM_TOLERANCE * hi.abs().max(lo.abs()).max(1.0);
    EmCheck {
        residual,
        trace_spread,
        trace_constant,
        t_killing: residual < EM_TOLERANCE && trace_constant,
    }
}

/// `max |(tr Q)² − R/4 − |Q|²|`, only for certified EM-spinors.
pub fn qtr_identity_residual(sample: &SpinorSample, field: &EmTensorField) -> Result<f64> {
    let em = em_spinor_residual(sample, field);
    if em.residual >= EM_TOLERANCE {
        return Err(Error::not_applicable(format!(
            "not an EM-spinor (residual {:.3e})",
            em.residual
        )));
    }
    Ok(field
        .unmasked()
        .map(|(q, m)| (m.trace().powi(2) - 0.25 * sample.scalar_curvature[q] - m.norm_squared()).abs())
        .fold(0.0, f64::max))
}
