//! Transplantation of sections between the quotients `M₁ = Γ₁\M` and
//! `M₂ = Γ₂\M`.
//!
//! Write the cover group as `Ĝ = ⊔_j G t_j`. A quotient vertex `(u, Γx)` with
//! `x = g t_j` sits in the fibre `(u, j)` at position `Γg` of `Γ\G`. Inside
//! every fibre the quotient operators only ever shift positions by right
//! multiplication with elements of `G`, so the intertwiner `T` of the two coset
//! modules, applied fibre by fibre as `Tᵗ`, carries sections of `M₂` to
//! sections of `M₁` and intertwines the Schrödinger operators.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::MagneticOperator;
use crate::cover::QuotientGraph;
use crate::error::{Error, Result};
use crate::group::{CosetTable, Intertwiner, PermGroup};

#[derive(Debug, Clone)]
pub struct Transplantation {
    /// `dim M₁ × dim M₂`.
    pub matrix: DMatrix<f64>,
}

/// `(fibre j, position in Γ\G)` for every coset of `Γ` in `Ĝ`.
fn fibre_layout(
    top: &PermGroup,
    mid: &PermGroup,
    mid_in_top: &CosetTable,
    quotient_cosets: &CosetTable,
    mid_cosets: &CosetTable,
) -> Result<Vec<(usize, usize)>> {
    quotient_cosets
        .coset_reps()
        .iter()
        .map(|&x| {
            let j = mid_in_top.coset_of(x);
            let t = mid_in_top.coset_reps()[j];
            let g = top.mul(x, top.inv(t));
            let g_mid = mid.require(top.element(g))?;
            Ok((j, mid_cosets.coset_of(g_mid)))
        })
        .collect()
}

impl Transplantation {
    /// Fibrewise `Tᵗ` from the integer intertwiner.
    pub fn new(
        top: &PermGroup,
        mid: &PermGroup,
        mid_in_top: &CosetTable,
        intertwiner: &Intertwiner,
        m1: &QuotientGraph,
        m2: &QuotientGraph,
    ) -> Result<Self> {
        Self::with_coefficients(
            top,
            mid,
            mid_in_top,
            intertwiner,
            &intertwiner.to_f64(),
            m1,
            m2,
        )
    }

    /// Fibrewise `Cᵗ` for any matrix `C` shaped like the intertwiner, e.g. its
    /// orthogonal polar factor.
    pub fn with_coefficients(
        top: &PermGroup,
        mid: &PermGroup,
        mid_in_top: &CosetTable,
        intertwiner: &Intertwiner,
        coeffs: &DMatrix<f64>,
        m1: &QuotientGraph,
        m2: &QuotientGraph,
    ) -> Result<Self> {
        let (src, dst) = (intertwiner.source(), intertwiner.target());
        if (coeffs.nrows(), coeffs.ncols()) != (dst.index(), src.index()) {
            return Err(Error::DimensionMismatch("coefficient matrix shape".into()));
        }
        if m1.graph.vertex_count != m2.graph.vertex_count || m1.index() != m2.index() {
            return Err(Error::DimensionMismatch(format!(
                "quotients have {} and {} vertices",
                m1.graph.vertex_count, m2.graph.vertex_count
            )));
        }
        let l1 = fibre_layout(top, mid, mid_in_top, &m1.coset_table, src)?;
        let l2 = fibre_layout(top, mid, mid_in_top, &m2.coset_table, dst)?;
        let idx = m1.index();
        let base_vertices = m1.graph.vertex_count / idx;
        let n = m1.graph.vertex_count;
        let mut matrix = DMatrix::zeros(n, n);
        for u in 0..base_vertices {
            for (c1, &(j1, d1)) in l1.iter().enumerate() {
                for (c2, &(j2, d2)) in l2.iter().enumerate() {
                    if j1 == j2 {
                        matrix[(u * idx + c1, u * idx + c2)] = coeffs[(d2, d1)];
                    }
                }
            }
        }
        Ok(Transplantation { matrix })
    }

    /// Section on `M₂` to section on `M₁`.
    pub fn transplant_section(&self, s: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        if s.len() != self.matrix.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "section has {} entries, expected {}",
                s.len(),
                self.matrix.ncols()
            )));
        }
        Ok(self.matrix.map(|x| Complex64::new(x, 0.0)) * s)
    }

    /// `‖𝒯(Δ₂+Q) − (Δ₁+Q)𝒯‖_max`.
    pub fn intertwining_residual(
        &self,
        op1: &MagneticOperator,
        op2: &MagneticOperator,
    ) -> Result<f64> {
        let n = self.matrix.nrows();
        if op1.dimension() != n || op2.dimension() != self.matrix.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "operators are {}x{} and {}x{}, transplantation is {}x{}",
                op1.dimension(),
                op1.dimension(),
                op2.dimension(),
                op2.dimension(),
                n,
                self.matrix.ncols()
            )));
        }
        let t = self.matrix.map(|x| Complex64::new(x, 0.0));
        let diff = &t * &op2.matrix - &op1.matrix * &t;
        Ok(diff.iter().map(|z| z.norm()).fold(0.0, f64::max))
    }
}
