//! Extrinsic checks computed directly from embeddings and metrics by finite
//! differences, independent of the spectral machinery.

use std::f64::consts::PI;

use super::ModelKind;
use crate::error::{Error, Result};

/// Curvature of `(a cos t, b sin t)` with the inward normal.
pub fn ellipse_curvature(a: f64, b: f64, t: f64) -> f64 {
    a * b / (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).powf(1.5)
}

type V3 = [f64; 3];

fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn scale(a: V3, s: f64) -> V3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn norm(a: V3) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

/// Max over a grid of `|∇̃_i e_j − ∇_i e_j − h_ij ν|`, with the ambient
/// derivative taken by central differences of the embedded frame at the grid
/// spacing.
pub fn gauss_formula_residual(kind: &ModelKind, resolution: usize) -> Result<f64> {
    kind.validate()?;
    if resolution < 4 {
        return Err(Error::config("resolution must be at least 4"));
    }
    match *kind {
        ModelKind::Circle { r } => Ok(curve_residual(r, r, resolution)),
        ModelKind::Ellipse { a, b } => Ok(curve_residual(a, b, resolution)),
        ModelKind::Sphere2 { r } => Ok(sphere_residual(r, resolution)),
        _ => Err(Error::not_applicable(format!(
            "{} stores no ambient embedding",
            kind.name()
        ))),
    }
}

fn curve_residual(a: f64, b: f64, n: usize) -> f64 {
    let step = 2.0 * PI / n as f64;
    let tangent = |t: f64| {
        let d = [-a * t.sin(), b * t.cos(), 0.0];
        scale(d, 1.0 / norm(d))
    };
    let mut worst = 0.0f64;
    for j in 0..n {
        let t = step * j as f64;
        let speed = (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt();
        let de = scale(sub(tangent(t + step), tangent(t - step)), 1.0 / (2.0 * step * speed));
        let e = tangent(t);
        let nu = [-e[1], e[0], 0.0];
        let h = ellipse_curvature(a, b, t);
        // a curve is geodesic in itself: ∇_e e = 0
        worst = worst.max(norm(sub(de, scale(nu, h))));
    }
    worst
}

fn sphere_residual(r: f64, n: usize) -> f64 {
    let step = PI / n as f64;
    let frame = |theta: f64, phi: f64| -> [V3; 3] {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        [
            [ct * cp, ct * sp, -st],
            [-sp, cp, 0.0],
            [-st * cp, -st * sp, -ct],
        ]
    };
    let mut worst = 0.0f64;
    for j in 0..n {
        let theta = (j as f64 + 0.5) * step;
        for l in 0..2 * n {
            let phi = l as f64 * step;
            let f = frame(theta, phi);
            let (ft_p, ft_m) = (frame(theta + step, phi), frame(theta - step, phi));
            let (fp_p, fp_m) = (frame(theta, phi + step), frame(theta, phi - step));
            let cot = theta.cos() / theta.sin();
            // the coordinate frame is singular at the poles
            if theta.sin() < 0.5 {
                continue;
            }
            for jdx in 0..2 {
                let d_theta = scale(sub(ft_p[jdx], ft_m[jdx]), 1.0 / (2.0 * step * r));
                let d_phi = scale(sub(fp_p[jdx], fp_m[jdx]), 1.0 / (2.0 * step * r * theta.sin()));
                let intrinsic_phi = if jdx == 0 {
                    scale(f[1], cot / r)
                } else {
                    scale(f[0], -cot / r)
                };
                let normal = scale(f[2], 1.0 / r);
                let r_theta = if jdx == 0 {
                    sub(d_theta, normal)
                } else {
                    d_theta
                };
                let r_phi = if jdx == 1 {
                    sub(sub(d_phi, intrinsic_phi), normal)
                } else {
                    sub(d_phi, intrinsic_phi)
                };
                worst = worst.max(norm(r_theta)).max(norm(r_phi));
            }
        }
    }
    worst
}

/// Scalar curvature `2K` of an orthogonal metric `E dx² + G dy²` at `(x, y)`
/// from the Brioschi formula, with fourth-order differences of step `h`.
pub fn brioschi_curvature<F>(metric: F, x: f64, y: f64, h: f64) -> f64
where
    F: Fn(f64, f64) -> (f64, f64),
{
    let d = |f: &dyn Fn(f64) -> f64, s: f64| {
        (-f(s + 2.0 * h) + 8.0 * f(s + h) - 8.0 * f(s - h) + f(s - 2.0 * h)) / (12.0 * h)
    };
    let term_x = |xx: f64| {
        let (e, g) = metric(xx, y);
        let gx = d(&|s| metric(s, y).1, xx);
        gx / (e * g).sqrt()
    };
    let term_y = |yy: f64| {
        let (e, g) = metric(x, yy);
        let ey = d(&|s| metric(x, s).0, yy);
        ey / (e * g).sqrt()
    };
    let (e, g) = metric(x, y);
    let k = -(d(&term_x, x) + d(&term_y, y)) / (2.0 * (e * g).sqrt());
    2.0 * k
}
