//! Model hypersurfaces and intrinsic manifolds, each paired with the spectral
//! discretization it is solved in.

mod curve;
mod embedding;
mod registry;
mod sphere;
mod torus;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::clifford::SpinorSpace;
use crate::error::{Error, Result};
use crate::linalg::{CMat, C64};

pub use curve::CurveModel;
pub use embedding::{brioschi_curvature, ellipse_curvature, gauss_formula_residual};
pub use registry::{make_model, ModelFactory, ModelRegistry};
pub use sphere::SphereModel;
pub use torus::TorusModel;

/// Model kind and its geometric parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    Circle { r: f64 },
    Ellipse { a: f64, b: f64 },
    Sphere2 { r: f64 },
    #[serde(rename = "geodesic_sphere_S3")]
    GeodesicSphereS3 { rho: f64 },
    FlatTorus2 { l1: f64, l2: f64 },
    ConformalTorus2 { w: f64 },
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Circle { .. } => "circle",
            ModelKind::Ellipse { .. } => "ellipse",
            ModelKind::Sphere2 { .. } => "sphere2",
            ModelKind::GeodesicSphereS3 { .. } => "geodesic_sphere_S3",
            ModelKind::FlatTorus2 { .. } => "flat_torus2",
            ModelKind::ConformalTorus2 { .. } => "conformal_torus2",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::config(format!("model.{name} must be positive, got {v}")))
            }
        };
        match *self {
            ModelKind::Circle { r } | ModelKind::Sphere2 { r } => positive("r", r),
            ModelKind::Ellipse { a, b } => positive("a", a).and(positive("b", b)),
            ModelKind::GeodesicSphereS3 { rho } => {
                if rho > 0.0 && rho < std::f64::consts::PI {
                    Ok(())
                } else {
                    Err(Error::config(format!("model.rho must lie in (0, π), got {rho}")))
                }
            }
            ModelKind::FlatTorus2 { l1, l2 } => positive("l1", l1).and(positive("l2", l2)),
            ModelKind::ConformalTorus2 { w } => {
                if w.is_finite() {
                    Ok(())
                } else {
                    Err(Error::config("model.w must be finite"))
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinStructure {
    #[default]
    Antiperiodic,
    Periodic,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Discretization {
    /// Node count per direction for nodal bases, harmonic band for spheres.
    pub resolution: Option<usize>,
    pub spin_structure: SpinStructure,
}

impl Discretization {
    pub fn with_resolution(resolution: usize) -> Self {
        Discretization {
            resolution: Some(resolution),
            ..Default::default()
        }
    }
}

/// One Fourier term `cos·cos(k·x) + sin·sin(k·x)`; curves use only `k[0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierTerm {
    pub k: [i32; 2],
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
}

/// Real spherical harmonic term: `Re Y_lm` for `m >= 0`, `Im Y_l|m|` for `m < 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicTerm {
    pub l: usize,
    pub m: i64,
    pub coeff: f64,
}

/// Smooth scalar fields on a model, evaluated analytically at the nodes.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ScalarFieldSpec {
    #[default]
    Zero,
    Constant {
        value: f64,
    },
    Fourier {
        terms: Vec<FourierTerm>,
    },
    Harmonic {
        terms: Vec<HarmonicTerm>,
    },
    /// The mean curvature of the model; values only.
    MeanCurvature,
}

impl ScalarFieldSpec {
    pub fn is_zero(&self) -> bool {
        match self {
            ScalarFieldSpec::Zero => true,
            ScalarFieldSpec::Constant { value } => *value == 0.0,
            ScalarFieldSpec::Fourier { terms } => terms.iter().all(|t| t.cos == 0.0 && t.sin == 0.0),
            ScalarFieldSpec::Harmonic { terms } => terms.iter().all(|t| t.coeff == 0.0),
            ScalarFieldSpec::MeanCurvature => false,
        }
    }
}

/// Node values of a scalar, its frame derivatives `e_i(u)` and `Δu`.
#[derive(Debug, Clone)]
pub struct ScalarField {
    pub values: Vec<f64>,
    pub gradient: Vec<Vec<f64>>,
    pub laplacian: Vec<f64>,
}

impl ScalarField {
    pub fn constant(value: f64, nodes: usize, n: usize) -> Self {
        ScalarField {
            values: vec![value; nodes],
            gradient: vec![vec![0.0; n]; nodes],
            laplacian: vec![0.0; nodes],
        }
    }
}

/// Pointwise geometric data at the quadrature nodes.
#[derive(Debug, Clone)]
pub struct NodeGeometry {
    /// Quadrature weight times the Riemannian volume element.
    pub weights: Vec<f64>,
    /// Embedding or chart coordinates, for reporting.
    pub positions: Vec<Vec<f64>>,
    /// Second fundamental form in the node frame, absent for intrinsic models.
    pub second_fundamental: Option<Vec<DMatrix<f64>>>,
    pub mean_curvature: Option<Vec<f64>>,
    pub scalar_curvature: Vec<f64>,
}

/// A discretized spin manifold.
///
/// Spinor fields are coefficient vectors of length `ndof`. The synthesis
/// matrix maps coefficients to node values (`nodes·k` rows, node-major), and
/// each `nabla(i)` maps coefficients to node values of `∇_{e_i}φ`.
pub trait Model: Send + Sync {
    fn kind(&self) -> &ModelKind;
    fn n(&self) -> usize;
    fn space(&self) -> &SpinorSpace;
    fn geometry(&self) -> &NodeGeometry;
    fn ndof(&self) -> usize;
    fn synthesis(&self) -> &CMat;
    fn nabla(&self) -> &[CMat];
    /// Frame actions `c_i = e_i·ν·` on the working spinor space at a node.
    fn clifford(&self, node: usize) -> &[CMat];
    /// Ambient actions `γ(e_i)` and `γ(ν)` at a node.
    fn ambient_frame(&self, node: usize) -> (Vec<CMat>, CMat);
    /// True when coefficients are node values (synthesis is the identity).
    fn is_nodal(&self) -> bool;
    fn resolution(&self) -> usize;
    fn scalar_field(&self, spec: &ScalarFieldSpec) -> Result<ScalarField>;
    /// Coefficient basis (columns) of the low modes up to `band`.
    fn low_band(&self, band: usize) -> CMat;
    /// Hermitian operator commuting with `D`, used to split degenerate clusters.
    fn symmetry_generator(&self) -> Option<CMat> {
        None
    }
    /// Node values of `Dφ`, as a matrix on coefficients.
    fn dirac_pointwise(&self) -> CMat {
        let mut out = CMat::zeros(self.node_count() * self.k(), self.ndof());
        for (i, nab) in self.nabla().iter().enumerate() {
            let blocks: Vec<CMat> = (0..self.node_count())
                .map(|q| self.clifford(q)[i].clone())
                .collect();
            out += blockwise(&blocks, nab);
        }
        out
    }
    /// Whether an ambient embedding is stored.
    fn has_embedding(&self) -> bool {
        false
    }

    fn k(&self) -> usize {
        self.space().k()
    }

    fn node_count(&self) -> usize {
        self.geometry().weights.len()
    }

    fn name(&self) -> &'static str {
        self.kind().name()
    }

    fn mean_curvature(&self) -> Result<&[f64]> {
        self.geometry()
            .mean_curvature
            .as_deref()
            .ok_or_else(|| Error::not_applicable(format!("{} has no mean curvature", self.name())))
    }

    /// Node values of a scalar, accepting `MeanCurvature`.
    fn scalar_values(&self, spec: &ScalarFieldSpec) -> Result<Vec<f64>> {
        match spec {
            ScalarFieldSpec::MeanCurvature => Ok(self.mean_curvature()?.to_vec()),
            other => Ok(self.scalar_field(other)?.values),
        }
    }

    /// Node-weighted mass matrix `S^† W S`.
    fn mass(&self) -> CMat {
        let k = self.k();
        if self.is_nodal() {
            let d = self.geometry().weights.iter().flat_map(|w| vec![C64::new(*w, 0.0); k]);
            return CMat::from_diagonal(&crate::linalg::CVec::from_iterator(self.ndof(), d));
        }
        let s = self.synthesis();
        let ws = scale_rows(s, &self.geometry().weights, k);
        let m = crate::linalg::cmul_adj(s, &ws);
        // exact quadrature makes the modal mass diagonal up to roundoff
        let d = m.diagonal();
        let off = crate::linalg::max_abs(&(&m - CMat::from_diagonal(&d)));
        if off < 1e-13 * crate::linalg::max_abs(&m) {
            CMat::from_diagonal(&d.map(|z| C64::new(z.re, 0.0)))
        } else {
            crate::linalg::hermitian_part(&m)
        }
    }
}

/// Multiplies the rows of node `q` (a `k`-block) by `weights[q]`.
pub fn scale_rows(m: &CMat, weights: &[f64], k: usize) -> CMat {
    let mut out = m.clone();
    for (q, w) in weights.iter().enumerate() {
        for a in 0..k {
            out.row_mut(q * k + a).scale_mut(*w);
        }
    }
    out
}

/// Applies a per-node `k×k` block to the node rows of `m`.
pub fn blockwise(blocks: &[CMat], m: &CMat) -> CMat {
    let k = blocks.first().map(|b| b.nrows()).unwrap_or(1);
    let mut out = CMat::zeros(m.nrows(), m.ncols());
    for (q, b) in blocks.iter().enumerate() {
        let rows = m.rows(q * k, k);
        out.rows_mut(q * k, k).copy_from(&(b * rows));
    }
    out
}

/// Multiplies node `q` rows by the scalar `s[q]`.
pub fn scale_nodes(m: &CMat, s: &[f64], k: usize) -> CMat {
    scale_rows(m, s, k)
}

/// Node values of a coefficient vector, grouped per node.
pub fn node_values(model: &dyn Model, coeffs: &[C64]) -> Vec<Vec<C64>> {
    let v = model.synthesis() * crate::linalg::CVec::from_column_slice(coeffs);
    split_nodes(v.as_slice(), model.k())
}

pub fn split_nodes(flat: &[C64], k: usize) -> Vec<Vec<C64>> {
    flat.chunks(k).map(|c| c.to_vec()).collect()
}
