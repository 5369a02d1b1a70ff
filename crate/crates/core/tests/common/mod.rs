#![allow(dead_code)]

use hyperdirac::bounds::{BoundInput, OperatorFamily};
use hyperdirac::energy_momentum::{compute_q, EmTensorField, SpinorSample};
use hyperdirac::geometry::{make_model, Discretization, Model, ModelKind, ScalarFieldSpec};
use hyperdirac::linalg::CVec;
use hyperdirac::operators::{assemble, eigensolve, OperatorKind, SpectrumResult};

pub use std::f64::consts::PI;

pub fn model(kind: ModelKind, res: usize) -> Box<dyn Model> {
    make_model(&kind, &Discretization::with_resolution(res)).unwrap()
}

pub fn spectrum(m: &dyn Model, op: &OperatorKind, count: usize) -> SpectrumResult {
    let a = assemble(m, op).unwrap();
    eigensolve(&a, count, m.symmetry_generator().as_ref()).unwrap()
}

/// Eigenpair closest to `target`.
pub fn mode(m: &dyn Model, op: &OperatorKind, count: usize, target: f64) -> (f64, CVec) {
    let s = spectrum(m, op, count);
    let i = (0..s.len())
        .min_by(|&a, &b| (s.values[a] - target).abs().total_cmp(&(s.values[b] - target).abs()))
        .unwrap();
    (s.values[i], s.vector(i))
}

pub struct Eigen {
    pub lambda: f64,
    pub sample: SpinorSample,
    pub field: EmTensorField,
    pub potential: Option<Vec<f64>>,
    pub operator: OperatorFamily,
}

impl Eigen {
    pub fn new(m: &dyn Model, op: &OperatorKind, lambda: f64, coeffs: &CVec) -> Self {
        let sample = SpinorSample::from_model(m, coeffs);
        let field = compute_q(&sample).unwrap();
        let potential = match op {
            OperatorKind::Schrodinger { f } => Some(m.scalar_values(f).unwrap()),
            _ => None,
        };
        Eigen {
            lambda,
            sample,
            field,
            potential,
            operator: op.into(),
        }
    }

    pub fn near(m: &dyn Model, op: &OperatorKind, count: usize, target: f64) -> Self {
        let (l, v) = mode(m, op, count, target);
        Eigen::new(m, op, l, &v)
    }

    pub fn input<'a>(&'a self, m: &'a dyn Model) -> BoundInput<'a> {
        BoundInput {
            operator: self.operator,
            lambda: self.lambda,
            sample: &self.sample,
            field: &self.field,
            mean_curvature: m.geometry().mean_curvature.as_deref(),
            potential: self.potential.as_deref(),
            conformal: None,
        }
    }
}

pub fn f_const(v: f64) -> OperatorKind {
    OperatorKind::Schrodinger {
        f: ScalarFieldSpec::Constant { value: v },
    }
}

pub fn square_torus() -> ModelKind {
    ModelKind::FlatTorus2 { l1: 2.0 * PI, l2: 2.0 * PI }
}
