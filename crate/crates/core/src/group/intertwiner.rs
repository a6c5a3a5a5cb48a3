//! G-equivariant maps between the permutation modules of two coset actions.
//!
//! With `ρ(g)` the permutation matrix `ρ(g)[c·g][c] = 1`, an intertwiner is an
//! integer matrix `T` (rows indexed by cosets of `H2`, columns by cosets of
//! `H1`) with `T ρ1(g) = ρ2(g) T` for every `g`. Averaging an arbitrary matrix
//! `X` over the group, `T = Σ_g ρ2(g) X ρ1(g)^-1`, always intertwines; an
//! invertible one exists exactly when `H1` and `H2` are almost conjugate.

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::exact::{bit_length, determinant, IntMatrix};
use super::{almost_conjugate, coset_action, CosetTable, PermGroup, Subgroup};
use crate::error::{Error, Result};

pub const INTERTWINER_ATTEMPTS: u64 = 20;

#[derive(Debug, Clone)]
pub struct Intertwiner {
    matrix: IntMatrix,
    source: CosetTable,
    target: CosetTable,
    seed: u64,
    attempts: u64,
    det_bits: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct IntertwinerSummary {
    pub index: usize,
    pub seed: u64,
    pub attempts: u64,
    pub determinant_bits: u64,
    pub max_entry: i64,
    pub generator_residual: i64,
    pub element_residual: i64,
}

/// `Σ_g ρ2(g) X ρ1(g)^-1`; entry `(r, c)` is `Σ_g X[r·g][c·g]`.
pub fn average_intertwiner(
    group: &PermGroup,
    source: &CosetTable,
    target: &CosetTable,
    x: &IntMatrix,
) -> IntMatrix {
    assert_eq!((x.rows(), x.cols()), (target.index(), source.index()));
    let (rows, cols) = (target.index(), source.index());
    let mut t = IntMatrix::zeros(rows, cols);
    let mut row_img = vec![0usize; rows];
    let mut col_img = vec![0usize; cols];
    for g in 0..group.order() {
        for (r, img) in row_img.iter_mut().enumerate() {
            *img = target.act(group, r, g);
        }
        for (c, img) in col_img.iter_mut().enumerate() {
            *img = source.act(group, c, g);
        }
        for r in 0..rows {
            for c in 0..cols {
                t[(r, c)] += x[(row_img[r], col_img[c])];
            }
        }
    }
    t
}

/// Largest `|T[r·g][c·g] − T[r][c]|` over the given elements; this is the
/// max-entry of `ρ2(g) T − T ρ1(g)` up to a row permutation.
fn residual_over(
    group: &PermGroup,
    t: &IntMatrix,
    source: &CosetTable,
    target: &CosetTable,
    elements: impl IntoIterator<Item = usize>,
) -> i64 {
    let mut worst = 0;
    for g in elements {
        for r in 0..t.rows() {
            let rg = target.act(group, r, g);
            for c in 0..t.cols() {
                let cg = source.act(group, c, g);
                worst = worst.max((t[(rg, cg)] - t[(r, c)]).abs());
            }
        }
    }
    worst
}

/// Builds an invertible intertwiner from seeded random matrices with entries
/// in `0..=9`, retrying with seeds `seed, seed+1, ..` up to
/// [`INTERTWINER_ATTEMPTS`] times.
pub fn build_intertwiner(
    group: &PermGroup,
    h1: &Subgroup,
    h2: &Subgroup,
    seed: u64,
) -> Result<Intertwiner> {
    if !almost_conjugate(group, h1, h2).verdict {
        return Err(Error::NotAlmostConjugate);
    }
    let source = coset_action(group, h1);
    let target = coset_action(group, h2);
    let mut seeds = Vec::new();
    for attempt in 0..INTERTWINER_ATTEMPTS {
        let s = seed.wrapping_add(attempt);
        seeds.push(s);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let mut x = IntMatrix::zeros(target.index(), source.index());
        for r in 0..x.rows() {
            for c in 0..x.cols() {
                x[(r, c)] = rng.gen_range(0..10);
            }
        }
        let t = average_intertwiner(group, &source, &target, &x);
        let det = determinant(&t);
        if det.is_zero() {
            continue;
        }
        let gens = group.generator_indices();
        let residual = residual_over(group, &t, &source, &target, gens);
        assert_eq!(residual, 0, "group average failed to intertwine");
        return Ok(Intertwiner {
            det_bits: bit_length(&det),
            matrix: t,
            source,
            target,
            seed: s,
            attempts: attempt + 1,
        });
    }
    Err(Error::NoInvertibleFound { seeds })
}

impl Intertwiner {
    /// Wraps a caller-supplied matrix; used for hand-built intertwiners.
    pub fn from_parts(
        group: &PermGroup,
        matrix: IntMatrix,
        source: CosetTable,
        target: CosetTable,
    ) -> Result<Self> {
        if (matrix.rows(), matrix.cols()) != (target.index(), source.index()) {
            return Err(Error::DimensionMismatch(format!(
                "intertwiner is {}x{}, cosets give {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.index(),
                source.index()
            )));
        }
        let det = determinant(&matrix);
        if det.is_zero() {
            return Err(Error::NoInvertibleFound { seeds: vec![] });
        }
        let it = Intertwiner {
            det_bits: bit_length(&det),
            matrix,
            source,
            target,
            seed: 0,
            attempts: 0,
        };
        if it.generator_residual(group) != 0 {
            return Err(Error::validation(
                "intertwiner",
                "matrix does not intertwine",
            ));
        }
        Ok(it)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn source(&self) -> &CosetTable {
        &self.source
    }

    pub fn target(&self) -> &CosetTable {
        &self.target
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn attempts(&self) -> u64 {
        self.attempts
    }

    /// Exact intertwining defect over the generators of `group`.
    pub fn generator_residual(&self, group: &PermGroup) -> i64 {
        residual_over(
            group,
            &self.matrix,
            &self.source,
            &self.target,
            group.generator_indices(),
        )
    }

    /// Exact intertwining defect over every element of `group`.
    pub fn element_residual(&self, group: &PermGroup) -> i64 {
        residual_over(
            group,
            &self.matrix,
            &self.source,
            &self.target,
            0..group.order(),
        )
    }

    pub fn summary(&self, group: &PermGroup) -> IntertwinerSummary {
        IntertwinerSummary {
            index: self.source.index(),
            seed: self.seed,
            attempts: self.attempts,
            determinant_bits: self.det_bits,
            max_entry: self.matrix.max_abs(),
            generator_residual: self.generator_residual(group),
            element_residual: self.element_residual(group),
        }
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.matrix.rows(), self.matrix.cols(), |r, c| {
            self.matrix[(r, c)] as f64
        })
    }
}

/// Orthogonal polar factor `U = T (TᵗT)^(-1/2)`. Since the coset
/// representations are orthogonal, `TᵗT` commutes with `ρ1` and `U` still
/// intertwines.
pub fn unitarize_intertwiner(t: &Intertwiner) -> Result<DMatrix<f64>> {
    let m = t.to_f64();
    let scale = t.matrix.max_abs().max(1) as f64;
    let m = m / scale;
    let gram = m.transpose() * &m;
    let eig = SymmetricEigen::new(gram);
    let max = eig.eigenvalues.max();
    let min = eig.eigenvalues.min();
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail too
    if !(min >= 1e-12 * max) || max <= 0.0 {
        return Err(Error::IllConditioned { min, max });
    }
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
    let root = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose();
    Ok(m * root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::perm::Permutation;

    #[test]
    fn identity_seed_matrix_gives_scalar() {
        let g = fixtures::symmetric_group(4);
        let h = Subgroup::stabilizer(&g, 0).unwrap();
        let t = coset_action(&g, &h);
        let avg = average_intertwiner(&g, &t, &t, &IntMatrix::identity(t.index()));
        let mut expected = IntMatrix::identity(4);
        for i in 0..4 {
            expected[(i, i)] = 24;
        }
        assert_eq!(avg, expected);
        let it = Intertwiner::from_parts(&g, avg, t.clone(), t).unwrap();
        let u = unitarize_intertwiner(&it).unwrap();
        assert!((u - DMatrix::<f64>::identity(4, 4)).abs().max() < 1e-14);
    }

    #[test]
    fn non_gassmann_pair_is_rejected() {
        let g = fixtures::symmetric_group(4);
        let h1 = Subgroup::generated(&g, vec![Permutation::from_cycles(4, &[&[0, 1]]).unwrap()])
            .unwrap();
        let h2 = Subgroup::generated(
            &g,
            vec![Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap()],
        )
        .unwrap();
        assert!(matches!(
            build_intertwiner(&g, &h1, &h2, 1),
            Err(Error::NotAlmostConjugate)
        ));
    }

    #[test]
    fn conjugate_pair_intertwines_exactly() {
        let g = fixtures::symmetric_group(4);
        let h1 = Subgroup::stabilizer(&g, 0).unwrap();
        let h2 = Subgroup::stabilizer(&g, 3).unwrap();
        let it = build_intertwiner(&g, &h1, &h2, 9).unwrap();
        assert_eq!(it.element_residual(&g), 0);
        assert_eq!(it.generator_residual(&g), 0);
    }
}
