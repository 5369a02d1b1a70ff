use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::{Model, ModelKind, NodeGeometry, ScalarField, ScalarFieldSpec, SpinStructure};
use crate::clifford::SpinorSpace;
use crate::error::{Error, Result};
use crate::linalg::{CMat, C64};
use crate::special::{fourier_derivative, fourier_modes};

/// Ellipse `(a cos t, b sin t)` in the plane (a circle when `a == b`),
/// collocated at `N` equispaced parameter values in the rotating frame.
///
/// The unit normal points inward so the curvature is positive.
pub struct CurveModel {
    kind: ModelKind,
    a: f64,
    b: f64,
    nodes: usize,
    spin: SpinStructure,
    space: SpinorSpace,
    geometry: NodeGeometry,
    synthesis: CMat,
    nabla: Vec<CMat>,
    cliff: Vec<CMat>,
    params: Vec<f64>,
    speeds: Vec<f64>,
}

impl CurveModel {
    pub fn new(kind: ModelKind, nodes: usize, spin: SpinStructure) -> Result<Self> {
        kind.validate()?;
        let (a, b) = match kind {
            ModelKind::Circle { r } => (r, r),
            ModelKind::Ellipse { a, b } => (a, b),
            _ => return Err(Error::config("curve model needs a circle or ellipse")),
        };
        if nodes < 4 || nodes % 2 == 1 {
            return Err(Error::config(format!(
                "curve resolution must be an even number >= 4, got {nodes}"
            )));
        }
        let space = SpinorSpace::for_hypersurface(1)?;
        let params: Vec<f64> = (0..nodes).map(|j| 2.0 * PI * j as f64 / nodes as f64).collect();
        let speeds: Vec<f64> = params.iter().map(|&t| speed(a, b, t)).collect();
        let h: Vec<f64> = params.iter().map(|&t| super::ellipse_curvature(a, b, t)).collect();
        let weights = speeds.iter().map(|s| s * 2.0 * PI / nodes as f64).collect();
        let positions = params.iter().map(|&t| vec![a * t.cos(), b * t.sin()]).collect();
        let f = fourier_derivative(nodes, spin == SpinStructure::Antiperiodic);
        let mut d = f;
        for (j, s) in speeds.iter().enumerate() {
            d.row_mut(j).scale_mut(1.0 / s);
        }
        let geometry = NodeGeometry {
            weights,
            positions,
            second_fundamental: Some(h.iter().map(|&v| DMatrix::from_element(1, 1, v)).collect()),
            mean_curvature: Some(h),
            scalar_curvature: vec![0.0; nodes],
        };
        let cliff = space.standard_tangent_actions();
        Ok(CurveModel {
            kind,
            a,
            b,
            nodes,
            spin,
            space,
            geometry,
            synthesis: CMat::identity(nodes, nodes),
            nabla: vec![d],
            cliff,
            params,
            speeds,
        })
    }

    pub fn spin_structure(&self) -> SpinStructure {
        self.spin
    }

    pub fn semi_axes(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn speeds(&self) -> &[f64] {
        &self.speeds
    }

    pub fn length(&self) -> f64 {
        self.geometry.weights.iter().sum()
    }

    /// Node values of `e^{iκt}` for each represented mode `κ`.
    pub fn modes(&self) -> Vec<(f64, Vec<C64>)> {
        fourier_modes(self.nodes, self.spin == SpinStructure::Antiperiodic)
            .into_iter()
            .map(|(kappa, _)| {
                let v = self.params.iter().map(|&t| C64::from_polar(1.0, kappa * t)).collect();
                (kappa, v)
            })
            .collect()
    }
}

fn speed(a: f64, b: f64, t: f64) -> f64 {
    (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt()
}

impl Model for CurveModel {
    fn kind(&self) -> &ModelKind {
        &self.kind
    }

    fn n(&self) -> usize {
        1
    }

    fn space(&self) -> &SpinorSpace {
        &self.space
    }

    fn geometry(&self) -> &NodeGeometry {
        &self.geometry
    }

    fn ndof(&self) -> usize {
        self.nodes
    }

    fn synthesis(&self) -> &CMat {
        &self.synthesis
    }

    fn nabla(&self) -> &[CMat] {
        &self.nabla
    }

    fn clifford(&self, _node: usize) -> &[CMat] {
        &self.cliff
    }

    fn ambient_frame(&self, _node: usize) -> (Vec<CMat>, CMat) {
        let g = &self.space.ambient.generators;
        (vec![g[0].clone()], g[1].clone())
    }

    fn is_nodal(&self) -> bool {
        true
    }

    fn has_embedding(&self) -> bool {
        true
    }

    fn resolution(&self) -> usize {
        self.nodes
    }

    fn scalar_field(&self, spec: &ScalarFieldSpec) -> Result<ScalarField> {
        match spec {
            ScalarFieldSpec::Zero => Ok(ScalarField::constant(0.0, self.nodes, 1)),
            ScalarFieldSpec::Constant { value } => Ok(ScalarField::constant(*value, self.nodes, 1)),
            ScalarFieldSpec::Fourier { terms } => {
                let mut values = vec![0.0; self.nodes];
                let mut gradient = vec![vec![0.0]; self.nodes];
                let mut laplacian = vec![0.0; self.nodes];
                for (j, &t) in self.params.iter().enumerate() {
                    let s = self.speeds[j];
                    let ds = (self.a * self.a - self.b * self.b) * t.sin() * t.cos() / s;
                    let (mut u, mut ut, mut utt) = (0.0, 0.0, 0.0);
                    for term in terms {
                        let k = term.k[0] as f64;
                        let (sn, cs) = (k * t).sin_cos();
                        u += term.cos * cs + term.sin * sn;
                        ut += k * (-term.cos * sn + term.sin * cs);
                        utt += -k * k * (term.cos * cs + term.sin * sn);
                    }
                    values[j] = u;
                    gradient[j][0] = ut / s;
                    laplacian[j] = utt / (s * s) - ut * ds / (s * s * s);
                }
                Ok(ScalarField {
                    values,
                    gradient,
                    laplacian,
                })
            }
            ScalarFieldSpec::Harmonic { .. } => Err(Error::config(
                "harmonic scalar fields are only defined on sphere models",
            )),
            ScalarFieldSpec::MeanCurvature => Err(Error::config(
                "mean_curvature carries no derivative data; use it as a potential only",
            )),
        }
    }

    fn low_band(&self, band: usize) -> CMat {
        let cols: Vec<Vec<C64>> = self
            .modes()
            .into_iter()
            .filter(|(kappa, _)| kappa.abs() <= band as f64 + 0.5)
            .map(|(_, v)| v)
            .collect();
        CMat::from_fn(self.nodes, cols.len(), |r, c| cols[c][r])
    }
}
