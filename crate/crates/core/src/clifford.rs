//! Complex Clifford representations with the convention `g_i g_j + g_j g_i = -2 δ_ij`.
//!
//! Generators are built recursively from Pauli blocks. In odd dimension the
//! representation is normalised so the complex volume element acts as `+Id`.
//! [`alpha_embed`] realises `e_i ↦ e_i · ν` inside the ambient algebra and
//! [`find_intertwiner`] compares two representations up to unitary equivalence.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, eigh, kron, max_abs, null_space, polar_unitary, CMat, C64, I};

/// Largest supported generator count.
pub const MAX_GENERATORS: usize = 8;

#[derive(Debug, Clone)]
pub struct GammaSet {
    pub n: usize,
    pub dim_spinor: usize,
    pub generators: Vec<CMat>,
}

#[derive(Debug, Clone)]
pub struct ChiralitySplit {
    pub defining_operator: CMat,
    pub projector_plus: CMat,
    pub projector_minus: CMat,
    /// Orthonormal basis of the `+1` eigenspace, as columns.
    pub plus_basis: CMat,
    pub minus_basis: CMat,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RelationDefects {
    pub anticommutation: f64,
    pub unitarity: f64,
    pub skew_hermitian: f64,
}

fn pauli() -> [CMat; 3] {
    let z0 = c(0.0);
    let x = CMat::from_row_slice(2, 2, &[z0, c(1.0), c(1.0), z0]);
    let y = CMat::from_row_slice(2, 2, &[z0, -I, I, z0]);
    let z = CMat::from_row_slice(2, 2, &[c(1.0), z0, z0, c(-1.0)]);
    [x, y, z]
}

fn ipow(k: usize) -> C64 {
    match k % 4 {
        0 => c(1.0),
        1 => I,
        2 => c(-1.0),
        _ => -I,
    }
}

fn product(mats: &[CMat], dim: usize) -> CMat {
    mats.iter().fold(CMat::identity(dim, dim), |acc, g| acc * g)
}

pub fn build_gamma(n: usize) -> Result<GammaSet> {
    if n == 0 || n > MAX_GENERATORS {
        return Err(Error::config(format!(
            "Clifford dimension must lie in 1..={MAX_GENERATORS}, got {n}"
        )));
    }
    let m = n / 2;
    let dim = 1usize << m;
    let [sx, sy, sz] = pauli();
    let id2 = CMat::identity(2, 2);
    let mut generators = Vec::with_capacity(n);
    for j in 0..m {
        for block in [&sx, &sy] {
            let mut acc = CMat::identity(1, 1);
            for slot in 0..m {
                let factor = if slot < j {
                    sz.clone()
                } else if slot == j {
                    block.scale(1.0) * I
                } else {
                    id2.clone()
                };
                acc = kron(&acc, &factor);
            }
            generators.push(acc);
        }
    }
    if n % 2 == 1 {
        let even_volume = product(&generators, dim) * ipow(m);
        let mut last = even_volume * I;
        let mut all = generators.clone();
        all.push(last.clone());
        let omega = product(&all, dim) * ipow(m + 1);
        if (omega[(0, 0)] + c(1.0)).norm() < 1e-9 {
            last = -last;
        }
        generators.push(last);
    }
    Ok(GammaSet {
        n,
        dim_spinor: dim,
        generators,
    })
}

/// Complex volume element `i^{⌊(n+1)/2⌋} g_1 ⋯ g_n`.
pub fn volume_element(g: &GammaSet) -> CMat {
    let power = g.n.div_ceil(2);
    product(&g.generators, g.dim_spinor) * ipow(power)
}

/// Maps the ambient generators `g_1..g_{n+1}` to `h_i = g_i g_ν` (`ν` the last one).
pub fn alpha_embed(ambient: &GammaSet) -> Result<GammaSet> {
    if ambient.n < 2 {
        return Err(Error::config("alpha_embed needs at least two ambient generators"));
    }
    let nu = ambient.generators.last().expect("non-empty");
    let generators = ambient.generators[..ambient.n - 1]
        .iter()
        .map(|g| g * nu)
        .collect();
    Ok(GammaSet {
        n: ambient.n - 1,
        dim_spinor: ambient.dim_spinor,
        generators,
    })
}

/// Compresses every generator to the subspace spanned by the orthonormal columns of `basis`.
pub fn restrict(g: &GammaSet, basis: &CMat) -> GammaSet {
    let generators = g
        .generators
        .iter()
        .map(|m| basis.adjoint() * m * basis)
        .collect();
    GammaSet {
        n: g.n,
        dim_spinor: basis.ncols(),
        generators,
    }
}

pub fn negated(g: &GammaSet) -> GammaSet {
    GammaSet {
        n: g.n,
        dim_spinor: g.dim_spinor,
        generators: g.generators.iter().map(|m| -m).collect(),
    }
}

/// Clifford action of the real vector `v` (components along the generators).
pub fn vector_action(g: &GammaSet, v: &[f64]) -> CMat {
    let mut out = CMat::zeros(g.dim_spinor, g.dim_spinor);
    for (gen, &x) in g.generators.iter().zip(v) {
        out += gen.scale(x);
    }
    out
}

pub fn relation_defects(g: &GammaSet) -> RelationDefects {
    let d = g.dim_spinor;
    let id = CMat::identity(d, d);
    let mut anti = 0.0f64;
    let mut unit = 0.0f64;
    let mut skew = 0.0f64;
    for (i, gi) in g.generators.iter().enumerate() {
        unit = unit.max(max_abs(&(gi.adjoint() * gi - &id)));
        skew = skew.max(max_abs(&(gi.adjoint() + gi)));
        for (j, gj) in g.generators.iter().enumerate() {
            let expected = if i == j { id.scale(-2.0) } else { CMat::zeros(d, d) };
            anti = anti.max(max_abs(&(gi * gj + gj * gi - expected)));
        }
    }
    RelationDefects {
        anticommutation: anti,
        unitarity: unit,
        skew_hermitian: skew,
    }
}

/// Unitary `U` with `U A_i = B_i U` for all generators.
pub fn find_intertwiner(a: &GammaSet, b: &GammaSet) -> Result<CMat> {
    if a.n != b.n || a.dim_spinor != b.dim_spinor {
        return Err(Error::config(format!(
            "intertwiner needs matching shapes: ({}, {}) vs ({}, {})",
            a.n, a.dim_spinor, b.n, b.dim_spinor
        )));
    }
    let d = a.dim_spinor;
    let id = CMat::identity(d, d);
    let rows = a.n * d * d;
    let mut system = CMat::zeros(rows, d * d);
    for (k, (ai, bi)) in a.generators.iter().zip(&b.generators).enumerate() {
        let block = kron(&id, bi) - kron(&ai.transpose(), &id);
        system
            .view_mut((k * d * d, 0), (d * d, d * d))
            .copy_from(&block);
    }
    let (basis, smallest) = null_space(&system, 1e-6);
    let Some(v) = basis.first() else {
        return Err(Error::Inequivalent(smallest));
    };
    let raw = CMat::from_fn(d, d, |r, col| v[col * d + r]);
    let u = polar_unitary(&raw);
    let residual = intertwiner_residual(a, b, &u);
    if residual > 1e-10 {
        return Err(Error::Inequivalent(residual));
    }
    Ok(u)
}

pub fn intertwiner_residual(a: &GammaSet, b: &GammaSet, u: &CMat) -> f64 {
    a.generators
        .iter()
        .zip(&b.generators)
        .map(|(ai, bi)| max_abs(&(u * ai - bi * u)))
        .fold(0.0, f64::max)
}

/// Splits the ambient spinor space of a hypersurface of dimension `n = ambient.n - 1`.
///
/// Even `n` uses `iν·`; odd `n` uses the ambient volume element.
pub fn chirality_split(ambient: &GammaSet) -> Result<ChiralitySplit> {
    if ambient.n < 2 {
        return Err(Error::config("chirality splitting needs an ambient dimension >= 2"));
    }
    let d = ambient.dim_spinor;
    let n = ambient.n - 1;
    let defining = if n.is_multiple_of(2) {
        ambient.generators.last().expect("non-empty") * I
    } else {
        volume_element(ambient)
    };
    let id = CMat::identity(d, d);
    let plus = (&id + &defining).scale(0.5);
    let minus = (&id - &defining).scale(0.5);
    let (vals, vecs) = eigh(&crate::linalg::hermitian_part(&defining))?;
    let cols = |pred: &dyn Fn(f64) -> bool| {
        let idx: Vec<usize> = (0..vals.len()).filter(|&i| pred(vals[i])).collect();
        CMat::from_fn(d, idx.len(), |r, k| vecs[(r, idx[k])])
    };
    let plus_basis = cols(&|v| v > 0.0);
    let minus_basis = cols(&|v| v < 0.0);
    Ok(ChiralitySplit {
        defining_operator: defining,
        projector_plus: plus,
        projector_minus: minus,
        plus_basis,
        minus_basis,
    })
}

/// Ambient representation plus the subspace on which hypersurface spinors live.
///
/// For even `n` that is the full ambient spinor space; for odd `n` it is the
/// positive chirality half.
#[derive(Debug, Clone)]
pub struct SpinorSpace {
    pub n: usize,
    pub ambient: GammaSet,
    /// Columns span the working subspace (`K × k`).
    pub embedding: CMat,
}

impl SpinorSpace {
    pub fn for_hypersurface(n: usize) -> Result<Self> {
        let ambient = build_gamma(n + 1)?;
        let embedding = if n.is_multiple_of(2) {
            CMat::identity(ambient.dim_spinor, ambient.dim_spinor)
        } else {
            chirality_split(&ambient)?.plus_basis
        };
        Ok(SpinorSpace {
            n,
            ambient,
            embedding,
        })
    }

    /// Dimension of the working spinor space.
    pub fn k(&self) -> usize {
        self.embedding.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient.dim_spinor
    }

    pub fn gamma(&self, v: &[f64]) -> CMat {
        vector_action(&self.ambient, v)
    }

    /// Tangent action `X·ν·` compressed to the working subspace.
    pub fn tangent_action(&self, x: &[f64], nu: &[f64]) -> CMat {
        self.embedding.adjoint() * self.gamma(x) * self.gamma(nu) * &self.embedding
    }

    /// Frame actions `c_i = e_i·ν·` when the frame is the standard basis.
    pub fn standard_tangent_actions(&self) -> Vec<CMat> {
        let nu = self.ambient.generators.last().expect("non-empty");
        self.ambient.generators[..self.n]
            .iter()
            .map(|g| self.embedding.adjoint() * g * nu * &self.embedding)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{re_dot, unitarity_defect};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_spinor(rng: &mut ChaCha8Rng, d: usize) -> Vec<C64> {
        (0..d)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    #[test]
    fn dimension_one_generator_squares_to_minus_one() {
        let g = build_gamma(1).unwrap();
        assert_eq!(g.dim_spinor, 1);
        let sq = g.generators[0][(0, 0)] * g.generators[0][(0, 0)];
        assert!((sq + c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn relations_hold_up_to_six() {
        for n in 1..=6 {
            let g = build_gamma(n).unwrap();
            assert_eq!(g.dim_spinor, 1 << (n / 2));
            let d = relation_defects(&g);
            assert!(d.anticommutation < 1e-12, "n={n}");
            assert!(d.unitarity < 1e-12);
            assert!(d.skew_hermitian < 1e-12);
        }
    }

    #[test]
    fn odd_volume_element_is_identity() {
        for n in [1, 3, 5] {
            let g = build_gamma(n).unwrap();
            let w = volume_element(&g);
            assert!(max_abs(&(w - CMat::identity(g.dim_spinor, g.dim_spinor))) < 1e-12);
        }
    }

    #[test]
    fn even_volume_element_is_traceless_involution() {
        let g = build_gamma(2).unwrap();
        let w = volume_element(&g);
        assert!(max_abs(&(&w * &w - CMat::identity(2, 2))) < 1e-12);
        assert!(w.trace().norm() < 1e-12);
    }

    #[test]
    fn alpha_maps_odd_volume_to_even_volume() {
        // α(ω_{2m+1}) = ω_{2m+2} for m = 0, 1
        for n in [1, 3] {
            let amb = build_gamma(n + 1).unwrap();
            let h = alpha_embed(&amb).unwrap();
            let w_h = volume_element(&h);
            assert!(max_abs(&(w_h - volume_element(&amb))) < 1e-12);
        }
    }

    #[test]
    fn rejects_zero_dimension() {
        assert!(matches!(build_gamma(0), Err(Error::Config(_))));
    }

    #[test]
    fn identical_sets_are_intertwined() {
        let g = build_gamma(4).unwrap();
        let u = find_intertwiner(&g, &g).unwrap();
        assert!(unitarity_defect(&u) < 1e-10);
        assert!(intertwiner_residual(&g, &g, &u) < 1e-10);
    }

    #[test]
    fn negated_odd_irrep_is_inequivalent() {
        let g = build_gamma(3).unwrap();
        let res = find_intertwiner(&g, &negated(&g));
        assert!(matches!(res, Err(Error::Inequivalent(_))));
    }

    #[test]
    fn even_hypersurface_spinors_match_intrinsic() {
        let intrinsic = build_gamma(2).unwrap();
        let embedded = alpha_embed(&build_gamma(3).unwrap()).unwrap();
        assert!(relation_defects(&embedded).anticommutation < 1e-12);
        let u = find_intertwiner(&intrinsic, &embedded).unwrap();
        assert!(intertwiner_residual(&intrinsic, &embedded, &u) < 1e-10);
    }

    #[test]
    fn odd_hypersurface_positive_half_matches_intrinsic() {
        let amb = build_gamma(4).unwrap();
        let split = chirality_split(&amb).unwrap();
        let embedded = restrict(&alpha_embed(&amb).unwrap(), &split.plus_basis);
        let intrinsic = build_gamma(3).unwrap();
        let u = find_intertwiner(&intrinsic, &embedded).unwrap();
        assert!(intertwiner_residual(&intrinsic, &embedded, &u) < 1e-10);
    }

    #[test]
    fn chirality_swapping_and_preservation() {
        // n = 2 inside ambient 3: tangent actions anticommute with iν
        let amb3 = build_gamma(3).unwrap();
        let s3 = chirality_split(&amb3).unwrap();
        let w = &s3.defining_operator;
        assert!(max_abs(&(w * w - CMat::identity(2, 2))) < 1e-12);
        for h in &alpha_embed(&amb3).unwrap().generators {
            assert!(max_abs(&(h * w + w * h)) < 1e-12);
        }
        // n = 3 inside ambient 4: tangent actions commute with ω_4
        let amb4 = build_gamma(4).unwrap();
        let s4 = chirality_split(&amb4).unwrap();
        let w = &s4.defining_operator;
        for h in &alpha_embed(&amb4).unwrap().generators {
            assert!(max_abs(&(h * w - w * h)) < 1e-12);
        }
        let p = &s4.projector_plus;
        let m = &s4.projector_minus;
        assert!(max_abs(&(p + m - CMat::identity(4, 4))) < 1e-12);
        assert!(max_abs(&(p * p - p)) < 1e-12);
        assert!(max_abs(&(p * m)) < 1e-12);
    }

    #[test]
    fn clifford_metric_compatibility() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..=5 {
            let g = build_gamma(n).unwrap();
            for _ in 0..200 {
                let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let mut y: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                for v in [&mut x, &mut y] {
                    let nrm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
                    v.iter_mut().for_each(|a| *a /= nrm);
                }
                let gxy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
                let phi = random_spinor(&mut rng, g.dim_spinor);
                let xp = crate::linalg::apply(&vector_action(&g, &x), &phi);
                let yp = crate::linalg::apply(&vector_action(&g, &y), &phi);
                let pp = re_dot(&phi, &phi);
                assert!((re_dot(&xp, &yp) - gxy * pp).abs() < 1e-12);
                assert!(re_dot(&xp, &phi).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn form_adjointness_signs() {
        // (τ·φ, ψ) = (-1)^{k(k+1)/2} (φ, τ·ψ) for k = 1, 2
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = build_gamma(4).unwrap();
        for _ in 0..50 {
            let phi = random_spinor(&mut rng, 4);
            let psi = random_spinor(&mut rng, 4);
            let i = rng.gen_range(0..4);
            let mut j = rng.gen_range(0..4);
            if j == i {
                j = (i + 1) % 4;
            }
            let one = &g.generators[i];
            let two = &g.generators[i] * &g.generators[j];
            for (tau, sign) in [(one.clone(), -1.0), (two, -1.0)] {
                let lhs = re_dot(&crate::linalg::apply(&tau, &phi), &psi);
                let rhs = re_dot(&phi, &crate::linalg::apply(&tau, &psi));
                assert!((lhs - sign * rhs).abs() < 1e-12);
            }
        }
    }
}
