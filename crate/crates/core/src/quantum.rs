//! Quantum Hamiltonian `Ĥ_k = (ħ²/2)(Δ_k + R/6)` with `ħ = 1/k`, and
//! quantum-equivalence verdicts built on it.

use serde::Serialize;

use crate::cover::Multigraph;
use crate::error::{Error, Result};
use crate::magnetic::{
    build_operator, compare_spectra, eigenvalues, ConnectionData, MagneticOperator, Potential,
};

/// Default scalar-curvature stand-in.
pub const DEFAULT_CURVATURE: f64 = -2.0;

/// Scalar-curvature field `R` on vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureField {
    pub values: Vec<f64>,
}

impl CurvatureField {
    pub fn constant(n: usize, r: f64) -> Self {
        CurvatureField { values: vec![r; n] }
    }
}

/// `(Δ_k + diag(R)/6) / (2k²)`.
pub fn quantum_hamiltonian(
    delta_k: &MagneticOperator,
    r: &CurvatureField,
    k: i64,
) -> Result<MagneticOperator> {
    if k <= 0 {
        return Err(Error::BadK(k));
    }
    if r.values.len() != delta_k.dimension() {
        return Err(Error::LengthMismatch(r.values.len(), delta_k.dimension()));
    }
    let scale = 1.0 / (2.0 * (k as f64) * (k as f64));
    let mut m = delta_k.matrix.clone();
    for (i, &ri) in r.values.iter().enumerate() {
        m[(i, i)].re += ri / 6.0;
    }
    m *= num_complex::Complex64::new(scale, 0.0);
    Ok(MagneticOperator { k, matrix: m })
}

/// One side of a quantum-equivalence comparison.
pub struct QuantumSide<'a> {
    pub graph: &'a Multigraph,
    pub connection: &'a ConnectionData,
    pub curvature: &'a CurvatureField,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuantumLevel {
    pub k: i64,
    pub eigenvalues: Vec<f64>,
    pub eigenvalues_m2: Vec<f64>,
    pub gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuantumSpectrumReport {
    pub verdict: bool,
    pub tolerance: f64,
    pub levels: Vec<QuantumLevel>,
}

impl QuantumSpectrumReport {
    pub fn max_gap(&self) -> f64 {
        self.levels.iter().map(|l| l.gap).fold(0.0, f64::max)
    }
}

/// Spectra of `Ĥ_k` on both sides for every `k` in `ks` (all `k ≥ 1`).
pub fn quantum_equivalence(
    a: &QuantumSide<'_>,
    b: &QuantumSide<'_>,
    ks: &[i64],
    tol: f64,
) -> Result<QuantumSpectrumReport> {
    let mut levels = Vec::with_capacity(ks.len());
    for &k in ks {
        let ea = quantum_spectrum(a, k)?;
        let eb = quantum_spectrum(b, k)?;
        let cmp = compare_spectra(&ea, &eb, tol)?;
        levels.push(QuantumLevel {
            k,
            eigenvalues: ea,
            eigenvalues_m2: eb,
            gap: cmp.max_gap,
        });
    }
    Ok(QuantumSpectrumReport {
        verdict: levels.iter().all(|l| l.gap <= tol),
        tolerance: tol,
        levels,
    })
}

pub fn quantum_spectrum(side: &QuantumSide<'_>, k: i64) -> Result<Vec<f64>> {
    if k <= 0 {
        return Err(Error::BadK(k));
    }
    let n = side.graph.vertex_count;
    let delta = build_operator(side.graph, side.connection, k, &Potential::zero(n))?;
    eigenvalues(&quantum_hamiltonian(&delta, side.curvature, k)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> (Multigraph, ConnectionData) {
        (Multigraph::cycle(4), ConnectionData::zero(4))
    }

    #[test]
    fn scalar_arithmetic() {
        // C4 has eigenvalue 2; R = -2: k=1 gives 5/6, k=2 gives 5/24
        let (g, c) = c4();
        let r = CurvatureField::constant(4, -2.0);
        let side = QuantumSide {
            graph: &g,
            connection: &c,
            curvature: &r,
        };
        let e1 = quantum_spectrum(&side, 1).unwrap();
        assert!((e1[1] - 5.0 / 6.0).abs() < 1e-12);
        let e2 = quantum_spectrum(&side, 2).unwrap();
        assert!((e2[1] - 5.0 / 24.0).abs() < 1e-12);
    }

    #[test]
    fn zero_curvature_halves() {
        let (g, c) = c4();
        let r = CurvatureField::constant(4, 0.0);
        let side = QuantumSide {
            graph: &g,
            connection: &c,
            curvature: &r,
        };
        let e = quantum_spectrum(&side, 1).unwrap();
        for (x, y) in e.iter().zip([0.0, 1.0, 1.0, 2.0]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_nonpositive_k() {
        let (g, c) = c4();
        let op = build_operator(&g, &c, 0, &Potential::zero(4)).unwrap();
        let r = CurvatureField::constant(4, -2.0);
        assert!(matches!(
            quantum_hamiltonian(&op, &r, 0),
            Err(Error::BadK(0))
        ));
        assert!(matches!(
            quantum_hamiltonian(&op, &r, -3),
            Err(Error::BadK(-3))
        ));
    }

    #[test]
    fn identical_sides_are_equivalent() {
        let (g, c) = c4();
        let r = CurvatureField::constant(4, -2.0);
        let side = QuantumSide {
            graph: &g,
            connection: &c,
            curvature: &r,
        };
        let rep = quantum_equivalence(&side, &side, &[1, 2, 3], 1e-10).unwrap();
        assert!(rep.verdict);
        assert_eq!(rep.max_gap(), 0.0);
    }
}
