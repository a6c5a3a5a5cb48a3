use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use super::{ConnectionData, Potential};
use crate::cover::Multigraph;
use crate::error::{Error, Result};

/// Hermitian matrix of `Δ_k + Q` on a graph.
#[derive(Debug, Clone)]
pub struct MagneticOperator {
    pub k: i64,
    pub matrix: DMatrix<Complex64>,
}

impl MagneticOperator {
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    /// First entry where `H != H*` bit-for-bit.
    pub fn hermitian_defect(&self) -> Option<(usize, usize)> {
        let n = self.dimension();
        for i in 0..n {
            if self.matrix[(i, i)].im != 0.0 {
                return Some((i, i));
            }
            for j in i + 1..n {
                if self.matrix[(i, j)] != self.matrix[(j, i)].conj() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Largest absolute row sum; an upper bound on the spectral radius.
    pub fn norm_inf(&self) -> f64 {
        self.matrix
            .row_iter()
            .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// `H[v][v] = deg(v) + Q(v)` and `H[v][w] = -Σ_{e: v→w} exp(i k θ_e)`; a loop
/// with phase `θ` adds `2 - 2cos(kθ)` to its diagonal entry.
pub fn build_operator(
    graph: &Multigraph,
    conn: &ConnectionData,
    k: i64,
    q: &Potential,
) -> Result<MagneticOperator> {
    let n = graph.vertex_count;
    if q.values.len() < n {
        return Err(Error::MissingPotential(q.values.len()));
    }
    if q.values.len() > n {
        return Err(Error::DimensionMismatch(format!(
            "potential has {} values for {n} vertices",
            q.values.len()
        )));
    }
    let mut h = DMatrix::<Complex64>::zeros(n, n);
    let mut diag: Vec<f64> = q.values.clone();
    for (e, &(t, hd)) in graph.edges.iter().enumerate() {
        let angle = conn.phase(e)?.scale(k).radians();
        if t == hd {
            diag[t] += 2.0 - 2.0 * angle.cos();
            continue;
        }
        diag[t] += 1.0;
        diag[hd] += 1.0;
        let w = Complex64::from_polar(1.0, angle);
        // accumulate only the upper triangle, then mirror
        if t < hd {
            h[(t, hd)] -= w;
        } else {
            h[(hd, t)] -= w.conj();
        }
    }
    for i in 0..n {
        h[(i, i)] = Complex64::new(diag[i], 0.0);
        for j in i + 1..n {
            h[(j, i)] = h[(i, j)].conj();
        }
    }
    let op = MagneticOperator { k, matrix: h };
    debug_assert!(op.hermitian_defect().is_none());
    Ok(op)
}

/// Eigenvalues in ascending order.
pub fn eigenvalues(op: &MagneticOperator) -> Result<Vec<f64>> {
    if let Some((row, col)) = op.hermitian_defect() {
        return Err(Error::NonHermitian { row, col });
    }
    let mut vals: Vec<f64> = op.matrix.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Eigenpairs sorted by eigenvalue; eigenvectors are the columns.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

pub fn eigen_pairs(op: &MagneticOperator) -> Result<EigenPairs> {
    if let Some((row, col)) = op.hermitian_defect() {
        return Err(Error::NonHermitian { row, col });
    }
    let eig = SymmetricEigen::new(op.matrix.clone());
    let mut order: Vec<usize> = (0..op.dimension()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(op.dimension(), op.dimension(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    Ok(EigenPairs { values, vectors })
}

/// `max_i ‖H x_i − λ_i x_i‖₂ / ‖H‖` over all eigenpairs.
pub fn relative_residual(op: &MagneticOperator, pairs: &EigenPairs) -> f64 {
    let norm = op.norm_inf().max(f64::MIN_POSITIVE);
    (0..pairs.values.len())
        .map(|i| {
            let x: DVector<Complex64> = pairs.vectors.column(i).into_owned();
            let r = &op.matrix * &x - x * Complex64::new(pairs.values[i], 0.0);
            r.norm()
        })
        .fold(0.0, f64::max)
        / norm
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralComparison {
    pub max_gap: f64,
    pub equal: bool,
}

/// L∞ distance between two sorted spectra.
pub fn compare_spectra(a: &[f64], b: &[f64], tol: f64) -> Result<SpectralComparison> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let max_gap = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    Ok(SpectralComparison {
        max_gap,
        equal: max_gap <= tol,
    })
}
