//! Dense complex linear algebra helpers on top of nalgebra.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMat::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Complex product through four real GEMMs, much faster than the generic
/// complex kernel.
pub fn cmul(a: &CMat, b: &CMat) -> CMat {
    let (ar, ai) = split(a);
    let (br, bi) = split(b);
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    CMat::from_fn(re.nrows(), re.ncols(), |i, j| C64::new(re[(i, j)], im[(i, j)]))
}

/// `a^† b` without forming the adjoint explicitly.
pub fn cmul_adj(a: &CMat, b: &CMat) -> CMat {
    let (ar, ai) = split(a);
    let (br, bi) = split(b);
    // explicit transposes hit the fast GEMM path; tr_mul does not
    let (ar, ai) = (ar.transpose(), ai.transpose());
    let re = &ar * &br + &ai * &bi;
    let im = &ar * &bi - &ai * &br;
    CMat::from_fn(re.nrows(), re.ncols(), |i, j| C64::new(re[(i, j)], im[(i, j)]))
}

fn split(m: &CMat) -> (DMatrix<f64>, DMatrix<f64>) {
    (m.map(|z| z.re), m.map(|z| z.im))
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest entry of `m - m^†`.
pub fn hermitian_defect(m: &CMat) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Real part of the Hermitian product `<a, b> = sum a_i conj(b_i)`.
pub fn re_dot(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x * y.conj()).re).sum()
}

pub fn norm_sqr(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// `mat * v` for a small matrix acting on a slice.
pub fn apply(mat: &CMat, v: &[C64]) -> Vec<C64> {
    let k = mat.nrows();
    let mut out = vec![C64::new(0.0, 0.0); k];
    for (a, o) in out.iter_mut().enumerate() {
        for (b, x) in v.iter().enumerate() {
            *o += mat[(a, b)] * x;
        }
    }
    out
}

/// Solves the Hermitian-definite problem `A x = λ M x`.
///
/// Returns ascending eigenvalues and eigenvectors as columns, orthonormal in the
/// `M` inner product.
pub fn generalized_eigh(a: &CMat, m: &CMat) -> Result<(Vec<f64>, CMat)> {
    if let Some(d) = diagonal_of(m) {
        if d.iter().any(|v| *v <= 0.0) {
            return Err(Error::Numerical("mass matrix is not positive definite".into()));
        }
        let inv_sqrt: Vec<f64> = d.iter().map(|v| 1.0 / v.sqrt()).collect();
        let reduced = CMat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * (inv_sqrt[i] * inv_sqrt[j]));
        let (values, mut vecs) = hermitian_eigen(reduced)?;
        for (i, s) in inv_sqrt.iter().enumerate() {
            vecs.row_mut(i).scale_mut(*s);
        }
        return Ok((values, vecs));
    }
    let chol = Cholesky::new(m.clone())
        .ok_or_else(|| Error::Numerical("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let x = l
        .solve_lower_triangular(a)
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
    let reduced = l
        .solve_lower_triangular(&x.adjoint())
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
    let (values, y) = hermitian_eigen(reduced)?;
    let vecs = l
        .adjoint()
        .solve_upper_triangular(&y)
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
    Ok((values, vecs))
}

fn hermitian_eigen(m: CMat) -> Result<(Vec<f64>, CMat)> {
    let eig = SymmetricEigen::try_new(hermitian_part(&m), 1e-15, 0)
        .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut sorted = CMat::zeros(eig.eigenvectors.nrows(), eig.eigenvectors.ncols());
    for (dst, &src) in order.iter().enumerate() {
        sorted.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((values, sorted))
}

/// Real diagonal of `m` when `m` is exactly a real diagonal matrix.
pub fn diagonal_of(m: &CMat) -> Option<Vec<f64>> {
    let n = m.nrows();
    for j in 0..m.ncols() {
        for i in 0..n {
            let z = m[(i, j)];
            if (i != j && z != C64::new(0.0, 0.0)) || (i == j && z.im != 0.0) {
                return None;
            }
        }
    }
    Some((0..n).map(|i| m[(i, i)].re).collect())
}

/// Ordinary Hermitian eigen-decomposition, ascending.
pub fn eigh(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    let id = CMat::identity(a.nrows(), a.ncols());
    generalized_eigh(a, &id)
}

/// `M^{-1/2}`-style congruence: returns `L^{-1} X L^{-†}` for `M = L L^†`.
pub fn congruence_inverse_sqrt(x: &CMat, m: &CMat) -> Result<CMat> {
    if let Some(d) = diagonal_of(m) {
        let s: Vec<f64> = d.iter().map(|v| 1.0 / v.sqrt()).collect();
        return Ok(CMat::from_fn(x.nrows(), x.ncols(), |i, j| x[(i, j)] * (s[i] * s[j])));
    }
    let chol = Cholesky::new(m.clone())
        .ok_or_else(|| Error::Numerical("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let y = l
        .solve_lower_triangular(x)
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
    l.solve_lower_triangular(&y.adjoint())
        .map(|z| z.adjoint())
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))
}

/// Right singular vectors whose singular values fall below `tol`, plus the
/// smallest singular value.
pub fn null_space(a: &CMat, tol: f64) -> (Vec<CVec>, f64) {
    // Work with the square Gram matrix so nalgebra always returns a full V.
    let gram = a.adjoint() * a;
    let (vals, vecs) = match eigh(&gram) {
        Ok(r) => r,
        Err(_) => return (Vec::new(), f64::INFINITY),
    };
    let smallest = vals.first().copied().unwrap_or(0.0).max(0.0).sqrt();
    let basis = vals
        .iter()
        .enumerate()
        .filter(|(_, v)| v.max(0.0).sqrt() < tol)
        .map(|(i, _)| vecs.column(i).into_owned())
        .collect();
    (basis, smallest)
}

/// Unitary factor of the polar decomposition.
pub fn polar_unitary(m: &CMat) -> CMat {
    let svd = SVD::new(m.clone(), true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    u * v_t
}

pub fn unitarity_defect(u: &CMat) -> f64 {
    let n = u.ncols();
    max_abs(&(u.adjoint() * u - CMat::identity(n, n)))
}
