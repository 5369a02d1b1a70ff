use std::f64::consts::PI;

use super::{blockwise, scale_nodes, Model, ModelKind, NodeGeometry, ScalarField, ScalarFieldSpec};
use crate::clifford::SpinorSpace;
use crate::error::{Error, Result};
use crate::linalg::{kron, CMat, C64, I};
use crate::special::fourier_derivative;

const GOLDEN: f64 = 1.618_033_988_749_895;

/// Two-torus `R^2 / (L1 Z × L2 Z)` with the trivial spin structure, collocated
/// on an odd `N × N` grid.
///
/// The conformal variant carries the metric `e^{2u0}(dx² + dy²)` on the
/// `2π`-periodic square with `u0 = w cos x`; its spinors are expressed through
/// the conformal identification with flat spinors.
pub struct TorusModel {
    kind: ModelKind,
    periods: [f64; 2],
    grid: usize,
    factor: Vec<f64>,
    factor_grad: Vec<[f64; 2]>,
    space: SpinorSpace,
    geometry: NodeGeometry,
    synthesis: CMat,
    flat_derivatives: Vec<CMat>,
    nabla: Vec<CMat>,
    cliff: Vec<CMat>,
}

impl TorusModel {
    pub fn new(kind: ModelKind, grid: usize) -> Result<Self> {
        kind.validate()?;
        let (periods, w) = match kind {
            ModelKind::FlatTorus2 { l1, l2 } => ([l1, l2], 0.0),
            ModelKind::ConformalTorus2 { w } => ([2.0 * PI, 2.0 * PI], w),
            _ => return Err(Error::config("torus model needs flat_torus2 or conformal_torus2")),
        };
        if grid < 3 || grid.is_multiple_of(2) {
            return Err(Error::config(format!(
                "torus resolution must be an odd number >= 3, got {grid}"
            )));
        }
        let space = SpinorSpace::for_hypersurface(2)?;
        let k = space.k();
        let nodes = grid * grid;
        let ik = CMat::identity(k, k);
        let ig = CMat::identity(grid, grid);
        let f1 = fourier_derivative(grid, false) * C64::new(2.0 * PI / periods[0], 0.0);
        let f2 = fourier_derivative(grid, false) * C64::new(2.0 * PI / periods[1], 0.0);
        let dx = kron(&kron(&f1, &ig), &ik);
        let dy = kron(&kron(&ig, &f2), &ik);

        let mut positions = Vec::with_capacity(nodes);
        let mut factor = Vec::with_capacity(nodes);
        let mut factor_grad = Vec::with_capacity(nodes);
        let mut flat_lap = Vec::with_capacity(nodes);
        for ix in 0..grid {
            for iy in 0..grid {
                let x = periods[0] * ix as f64 / grid as f64;
                let y = periods[1] * iy as f64 / grid as f64;
                positions.push(vec![x, y]);
                factor.push(w * x.cos());
                factor_grad.push([-w * x.sin(), 0.0]);
                flat_lap.push(-w * x.cos());
            }
        }
        let cell = periods[0] * periods[1] / nodes as f64;
        let weights = factor.iter().map(|u| cell * (2.0 * u).exp()).collect();
        let scalar_curvature = factor
            .iter()
            .zip(&flat_lap)
            .map(|(u, l)| -2.0 * (-2.0 * u).exp() * l)
            .collect();

        let cliff = space.standard_tangent_actions();
        let flat_derivatives = vec![dx, dy];
        let nabla = if w == 0.0 {
            flat_derivatives.clone()
        } else {
            let scale: Vec<f64> = factor.iter().map(|u| (-u).exp()).collect();
            (0..2)
                .map(|i| {
                    let blocks: Vec<CMat> = factor_grad
                        .iter()
                        .map(|g| {
                            let du = &cliff[0] * C64::new(g[0], 0.0) + &cliff[1] * C64::new(g[1], 0.0);
                            (&cliff[i] * du) * C64::new(-0.5, 0.0) - &ik * C64::new(0.5 * g[i], 0.0)
                        })
                        .collect();
                    let id = CMat::identity(nodes * k, nodes * k);
                    let op = &flat_derivatives[i] + blockwise(&blocks, &id);
                    scale_nodes(&op, &scale, k)
                })
                .collect()
        };

        let geometry = NodeGeometry {
            weights,
            positions,
            second_fundamental: None,
            mean_curvature: None,
            scalar_curvature,
        };
        Ok(TorusModel {
            kind,
            periods,
            grid,
            factor,
            factor_grad,
            space,
            geometry,
            synthesis: CMat::identity(nodes * k, nodes * k),
            flat_derivatives,
            nabla,
            cliff,
        })
    }

    pub fn periods(&self) -> [f64; 2] {
        self.periods
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    /// Node values of the built-in conformal factor (zero on the flat torus).
    pub fn base_factor(&self) -> &[f64] {
        &self.factor
    }

    /// Coordinate derivatives of the flat square, one per direction.
    pub fn flat_derivatives(&self) -> &[CMat] {
        &self.flat_derivatives
    }

    fn flat_dirac(&self) -> CMat {
        let nodes = self.grid * self.grid;
        let mut out = CMat::zeros(nodes * 2, nodes * 2);
        for i in 0..2 {
            let blocks = vec![self.cliff[i].clone(); nodes];
            out += blockwise(&blocks, &self.flat_derivatives[i]);
        }
        out
    }

    fn wave(&self, kx: i64, ky: i64) -> Vec<C64> {
        self.geometry
            .positions
            .iter()
            .map(|p| {
                let phase = 2.0 * PI * (kx as f64 * p[0] / self.periods[0] + ky as f64 * p[1] / self.periods[1]);
                C64::from_polar(1.0, phase)
            })
            .collect()
    }
}

impl Model for TorusModel {
    fn kind(&self) -> &ModelKind {
        &self.kind
    }

    fn n(&self) -> usize {
        2
    }

    fn space(&self) -> &SpinorSpace {
        &self.space
    }

    fn geometry(&self) -> &NodeGeometry {
        &self.geometry
    }

    fn ndof(&self) -> usize {
        self.synthesis.ncols()
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
        (vec![g[0].clone(), g[1].clone()], g[2].clone())
    }

    fn is_nodal(&self) -> bool {
        true
    }

    fn resolution(&self) -> usize {
        self.grid
    }

    fn dirac_pointwise(&self) -> CMat {
        let d = self.flat_dirac();
        if self.factor.iter().all(|u| *u == 0.0) {
            return d;
        }
        let right: Vec<f64> = self.factor.iter().map(|u| (0.5 * u).exp()).collect();
        let left: Vec<f64> = self.factor.iter().map(|u| (-1.5 * u).exp()).collect();
        let mut inner = d;
        for (q, v) in right.iter().enumerate() {
            for a in 0..2 {
                inner.column_mut(q * 2 + a).scale_mut(*v);
            }
        }
        scale_nodes(&inner, &left, 2)
    }

    fn scalar_field(&self, spec: &ScalarFieldSpec) -> Result<ScalarField> {
        let nodes = self.grid * self.grid;
        match spec {
            ScalarFieldSpec::Zero => Ok(ScalarField::constant(0.0, nodes, 2)),
            ScalarFieldSpec::Constant { value } => Ok(ScalarField::constant(*value, nodes, 2)),
            ScalarFieldSpec::Fourier { terms } => {
                let mut field = ScalarField::constant(0.0, nodes, 2);
                for (q, p) in self.geometry.positions.iter().enumerate() {
                    let mut grad = [0.0; 2];
                    let mut lap = 0.0;
                    for t in terms {
                        let kv = [
                            2.0 * PI * t.k[0] as f64 / self.periods[0],
                            2.0 * PI * t.k[1] as f64 / self.periods[1],
                        ];
                        let (sn, cs) = (kv[0] * p[0] + kv[1] * p[1]).sin_cos();
                        let v = t.cos * cs + t.sin * sn;
                        let dv = -t.cos * sn + t.sin * cs;
                        field.values[q] += v;
                        grad[0] += kv[0] * dv;
                        grad[1] += kv[1] * dv;
                        lap -= (kv[0] * kv[0] + kv[1] * kv[1]) * v;
                    }
                    let e = (-self.factor[q]).exp();
                    field.gradient[q] = vec![e * grad[0], e * grad[1]];
                    field.laplacian[q] = e * e * lap;
                }
                Ok(field)
            }
            ScalarFieldSpec::Harmonic { .. } => Err(Error::config(
                "harmonic scalar fields are only defined on sphere models",
            )),
            ScalarFieldSpec::MeanCurvature => Err(Error::not_applicable("tori carry no mean curvature")),
        }
    }

    fn low_band(&self, band: usize) -> CMat {
        let b = band.min((self.grid - 1) / 2) as i64;
        let nodes = self.grid * self.grid;
        let mut cols = Vec::new();
        for kx in -b..=b {
            for ky in -b..=b {
                let wave = self.wave(kx, ky);
                for a in 0..2 {
                    let mut col = vec![C64::new(0.0, 0.0); nodes * 2];
                    for q in 0..nodes {
                        col[q * 2 + a] = wave[q];
                    }
                    cols.push(col);
                }
            }
        }
        CMat::from_fn(nodes * 2, cols.len(), |r, c| cols[c][r])
    }

    fn symmetry_generator(&self) -> Option<CMat> {
        let ik = CMat::identity(2, 2);
        let ig = CMat::identity(self.grid, self.grid);
        let f = fourier_derivative(self.grid, false);
        let py = kron(&kron(&ig, &f), &ik);
        let gen = if self.factor.iter().all(|u| *u == 0.0) {
            kron(&kron(&f, &ig), &ik) + py * C64::new(GOLDEN, 0.0)
        } else {
            py
        };
        Some(gen * (-I))
    }
}

impl TorusModel {
    /// Coordinate gradient of the built-in conformal factor.
    pub fn base_factor_gradient(&self) -> &[[f64; 2]] {
        &self.factor_grad
    }
}
