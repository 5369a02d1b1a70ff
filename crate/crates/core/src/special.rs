//! Gauss–Legendre quadrature, spherical harmonics and periodic spectral
//! differentiation matrices.

use std::f64::consts::PI;

use crate::linalg::{c, CMat, C64, I};

/// Nodes and weights on `[-1, 1]`, nodes descending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Index of `(l, m)` in a flat table ordered by `l` then `m = -l..=l`.
pub fn lm_index(l: usize, m: i64) -> usize {
    (l * l) + (l as i64 + m) as usize
}

pub fn lm_count(lmax: usize) -> usize {
    (lmax + 1) * (lmax + 1)
}

/// Orthonormal spherical harmonics with the Condon–Shortley phase, all
/// `l <= lmax`, evaluated at `(theta, phi)`.
pub fn spherical_harmonics(lmax: usize, theta: f64, phi: f64) -> Vec<C64> {
    let x = theta.cos();
    let s = theta.sin();
    let mut out = vec![c(0.0); lm_count(lmax)];
    // normalised associated Legendre values, column by column in m
    for m in 0..=lmax {
        let mf = m as f64;
        let mut pmm = (1.0 / (4.0 * PI)).sqrt();
        for k in 1..=m {
            let kf = k as f64;
            pmm *= -((2.0 * kf + 1.0) / (2.0 * kf)).sqrt() * s;
        }
        let mut vals = vec![0.0; lmax + 1];
        vals[m] = pmm;
        if m < lmax {
            vals[m + 1] = (2.0 * mf + 3.0).sqrt() * x * pmm;
        }
        for l in (m + 2)..=lmax {
            let lf = l as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
            vals[l] = a * (x * vals[l - 1] - b * vals[l - 2]);
        }
        let phase = C64::from_polar(1.0, mf * phi);
        for (l, &p) in vals.iter().enumerate().skip(m) {
            let y = phase * p;
            out[lm_index(l, m as i64)] = y;
            if m > 0 {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                out[lm_index(l, -(m as i64))] = y.conj() * sign;
            }
        }
    }
    out
}

/// Cartesian angular momentum `L = -i x × ∇` applied to `Y_lm`, evaluated from
/// a precomputed harmonic table.
pub fn angular_momentum(table: &[C64], l: usize, m: i64) -> [C64; 3] {
    let lf = l as f64;
    let mf = m as f64;
    let up = if m < l as i64 {
        ((lf - mf) * (lf + mf + 1.0)).sqrt() * table[lm_index(l, m + 1)]
    } else {
        c(0.0)
    };
    let down = if m > -(l as i64) {
        ((lf + mf) * (lf - mf + 1.0)).sqrt() * table[lm_index(l, m - 1)]
    } else {
        c(0.0)
    };
    let lx = (up + down) * 0.5;
    let ly = (up - down) / (I * 2.0);
    let lz = table[lm_index(l, m)] * mf;
    [lx, ly, lz]
}

/// Directional derivative of `Y_lm` on the unit sphere along the unit tangent
/// `t` at the point `x`.
pub fn harmonic_derivative(table: &[C64], l: usize, m: i64, x: [f64; 3], t: [f64; 3]) -> C64 {
    let lv = angular_momentum(table, l, m);
    let txx = cross(t, x);
    (lv[0] * txx[0] + lv[1] * txx[1] + lv[2] * txx[2]) * (-I)
}

pub fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Spectral first-derivative matrix on `n` equispaced nodes of `[0, 2π)`.
///
/// `antiperiodic` uses the half-integer modes `-n/2 + 1/2 ..= n/2 - 1/2`
/// (requires even `n`); otherwise integer modes with the Nyquist mode
/// differentiated to zero. The result is skew-Hermitian.
pub fn fourier_derivative(n: usize, antiperiodic: bool) -> CMat {
    let modes = fourier_modes(n, antiperiodic);
    let nf = n as f64;
    CMat::from_fn(n, n, |a, b| {
        let ta = 2.0 * PI * a as f64 / nf;
        let tb = 2.0 * PI * b as f64 / nf;
        let mut acc = c(0.0);
        for &(kappa, differentiable) in &modes {
            if differentiable {
                acc += C64::from_polar(1.0, kappa * (ta - tb)) * I * kappa;
            }
        }
        acc / nf
    })
}

/// Mode numbers represented on `n` nodes, with a flag telling whether the mode
/// is differentiated (false only for an unpaired Nyquist mode).
pub fn fourier_modes(n: usize, antiperiodic: bool) -> Vec<(f64, bool)> {
    let half = (n / 2) as f64;
    if antiperiodic {
        (0..n).map(|j| (j as f64 - half + 0.5, true)).collect()
    } else if n % 2 == 1 {
        let h = ((n - 1) / 2) as i64;
        (-h..=h).map(|k| (k as f64, true)).collect()
    } else {
        (0..n)
            .map(|j| {
                let k = j as f64 - half;
                (k, j != 0)
            })
            .collect()
    }
}
