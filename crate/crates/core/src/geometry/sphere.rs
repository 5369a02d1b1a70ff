use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::{Model, ModelKind, NodeGeometry, ScalarField, ScalarFieldSpec};
use crate::clifford::SpinorSpace;
use crate::error::{Error, Result};
use crate::linalg::{c, CMat, C64, I};
use crate::special::{gauss_legendre, harmonic_derivative, lm_count, lm_index, spherical_harmonics};

/// Round 2-sphere of radius `r`, spinors trivialized by the constant spinors
/// of the ambient `R^3` and expanded in `Y_lm ⊗ C^2` for `l <= L`.
///
/// The same intrinsic data also serves the geodesic sphere at distance `ρ` in
/// the unit 3-sphere (`r = sin ρ`), which only changes the second fundamental
/// form to `cot ρ · δ`.
pub struct SphereModel {
    kind: ModelKind,
    radius: f64,
    band: usize,
    space: SpinorSpace,
    geometry: NodeGeometry,
    synthesis: CMat,
    nabla: Vec<CMat>,
    cliff: Vec<Vec<CMat>>,
    frames: Vec<[[f64; 3]; 3]>,
    units: Vec<[f64; 3]>,
}

impl SphereModel {
    pub fn new(kind: ModelKind, band: usize) -> Result<Self> {
        kind.validate()?;
        let (radius, h) = match kind {
            ModelKind::Sphere2 { r } => (r, 1.0 / r),
            ModelKind::GeodesicSphereS3 { rho } => (rho.sin(), rho.cos() / rho.sin()),
            _ => return Err(Error::config("sphere model needs sphere2 or geodesic_sphere_S3")),
        };
        if band < 1 {
            return Err(Error::config("sphere band must be at least 1"));
        }
        let space = SpinorSpace::for_hypersurface(2)?;
        let k = space.k();
        let (xs, ws) = gauss_legendre(band + 4);
        let nphi = 2 * band + 6;
        let count = lm_count(band);
        let ndof = count * k;

        let mut weights = Vec::new();
        let mut positions = Vec::new();
        let mut frames = Vec::new();
        let mut units = Vec::new();
        let mut tables = Vec::new();
        for (x, w) in xs.iter().zip(&ws) {
            let theta = x.acos();
            for l in 0..nphi {
                let phi = 2.0 * PI * l as f64 / nphi as f64;
                let (st, ct) = theta.sin_cos();
                let (sp, cp) = phi.sin_cos();
                let unit = [st * cp, st * sp, ct];
                let e_theta = [ct * cp, ct * sp, -st];
                let e_phi = [-sp, cp, 0.0];
                let nu = [-unit[0], -unit[1], -unit[2]];
                weights.push(radius * radius * w * 2.0 * PI / nphi as f64);
                positions.push(unit.iter().map(|v| v * radius).collect());
                frames.push([e_theta, e_phi, nu]);
                units.push(unit);
                tables.push(spherical_harmonics(band, theta, phi));
            }
        }
        let nodes = weights.len();

        let cliff: Vec<Vec<CMat>> = frames
            .iter()
            .map(|f| {
                (0..2)
                    .map(|i| space.tangent_action(&f[i], &f[2]))
                    .collect()
            })
            .collect();

        let mut synthesis = CMat::zeros(nodes * k, ndof);
        let mut nabla = vec![CMat::zeros(nodes * k, ndof); 2];
        for q in 0..nodes {
            let table = &tables[q];
            for l in 0..=band {
                for m in -(l as i64)..=(l as i64) {
                    let idx = lm_index(l, m);
                    let y = table[idx];
                    let dy: Vec<C64> = (0..2)
                        .map(|i| harmonic_derivative(table, l, m, units[q], frames[q][i]) / radius)
                        .collect();
                    for a in 0..k {
                        synthesis[(q * k + a, idx * k + a)] = y;
                        for i in 0..2 {
                            nabla[i][(q * k + a, idx * k + a)] += dy[i];
                            for b in 0..k {
                                nabla[i][(q * k + a, idx * k + b)] -=
                                    cliff[q][i][(a, b)] * y * (0.5 / radius);
                            }
                        }
                    }
                }
            }
        }

        let second = DMatrix::from_diagonal_element(2, 2, h);
        let geometry = NodeGeometry {
            weights,
            positions,
            second_fundamental: Some(vec![second; nodes]),
            mean_curvature: Some(vec![2.0 * h; nodes]),
            scalar_curvature: vec![2.0 / (radius * radius); nodes],
        };
        Ok(SphereModel {
            kind,
            radius,
            band,
            space,
            geometry,
            synthesis,
            nabla,
            cliff,
            frames,
            units,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn band(&self) -> usize {
        self.band
    }

    /// Node frame `(e_θ, e_φ, ν)` in ambient coordinates.
    pub fn frame(&self, node: usize) -> [[f64; 3]; 3] {
        self.frames[node]
    }

    /// Rotation generator about the `z` axis on coefficients.
    pub fn angular_momentum_z(&self) -> CMat {
        let k = self.space.k();
        let g = &self.space.ambient.generators;
        let spin = (&g[0] * &g[1]) * (I * 0.5);
        let count = lm_count(self.band);
        let mut out = CMat::zeros(count * k, count * k);
        for l in 0..=self.band {
            for m in -(l as i64)..=(l as i64) {
                let idx = lm_index(l, m);
                for a in 0..k {
                    out[(idx * k + a, idx * k + a)] += c(m as f64);
                    for b in 0..k {
                        out[(idx * k + a, idx * k + b)] += spin[(a, b)];
                    }
                }
            }
        }
        out
    }
}

impl Model for SphereModel {
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

    fn clifford(&self, node: usize) -> &[CMat] {
        &self.cliff[node]
    }

    fn ambient_frame(&self, node: usize) -> (Vec<CMat>, CMat) {
        let f = &self.frames[node];
        (
            vec![self.space.gamma(&f[0]), self.space.gamma(&f[1])],
            self.space.gamma(&f[2]),
        )
    }

    fn is_nodal(&self) -> bool {
        false
    }

    fn has_embedding(&self) -> bool {
        matches!(self.kind, ModelKind::Sphere2 { .. })
    }

    fn resolution(&self) -> usize {
        self.band
    }

    fn scalar_field(&self, spec: &ScalarFieldSpec) -> Result<ScalarField> {
        let nodes = self.geometry.weights.len();
        match spec {
            ScalarFieldSpec::Zero => Ok(ScalarField::constant(0.0, nodes, 2)),
            ScalarFieldSpec::Constant { value } => Ok(ScalarField::constant(*value, nodes, 2)),
            ScalarFieldSpec::Harmonic { terms } => {
                let lmax = terms.iter().map(|t| t.l).max().unwrap_or(0);
                for t in terms {
                    if t.m.unsigned_abs() as usize > t.l {
                        return Err(Error::config(format!(
                            "harmonic term has |m| > l (l={}, m={})",
                            t.l, t.m
                        )));
                    }
                }
                let mut field = ScalarField::constant(0.0, nodes, 2);
                for q in 0..nodes {
                    let pos = &self.geometry.positions[q];
                    let theta = (pos[2] / self.radius).clamp(-1.0, 1.0).acos();
                    let phi = pos[1].atan2(pos[0]);
                    let table = spherical_harmonics(lmax, theta, phi);
                    for t in terms {
                        let m = t.m.abs();
                        let part = |z: C64| if t.m >= 0 { z.re } else { z.im };
                        let y = part(table[lm_index(t.l, m)]);
                        field.values[q] += t.coeff * y;
                        for i in 0..2 {
                            let d = harmonic_derivative(&table, t.l, m, self.units[q], self.frames[q][i]);
                            field.gradient[q][i] += t.coeff * part(d) / self.radius;
                        }
                        let lf = t.l as f64;
                        field.laplacian[q] -= t.coeff * y * lf * (lf + 1.0) / (self.radius * self.radius);
                    }
                }
                Ok(field)
            }
            ScalarFieldSpec::Fourier { .. } => Err(Error::config(
                "Fourier scalar fields are only defined on curves and tori",
            )),
            ScalarFieldSpec::MeanCurvature => Err(Error::config(
                "mean_curvature carries no derivative data; use it as a potential only",
            )),
        }
    }

    fn low_band(&self, band: usize) -> CMat {
        let k = self.space.k();
        let cols = lm_count(band.min(self.band)) * k;
        CMat::identity(self.ndof(), cols)
    }

    fn symmetry_generator(&self) -> Option<CMat> {
        Some(self.angular_momentum_z())
    }
}
