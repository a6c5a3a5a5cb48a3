//! Report types. Everything here is a pure function of (scenario, seed);
//! wall-clock timings are kept in [`Timings`] and written to their own file.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::cover::IsoCertificate;
use crate::error::{Error, Result};
use crate::group::{ClassCount, IntertwinerSummary};
use crate::magnetic::HolonomyReport;

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Provenance {
    pub tool: String,
    pub scenario: String,
    /// SHA-256 of every input file.
    pub inputs: BTreeMap<String, String>,
    pub seed: u64,
    /// Seed the connection was actually drawn from.
    pub data_seed: u64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct UnitaryCheck {
    /// `‖UᵗU − I‖_max`.
    pub orthogonality_defect: f64,
    /// `max_g ‖Uρ₁(g) − ρ₂(g)U‖_max` over generators.
    pub generator_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct IntertwinerReport {
    #[serde(flatten)]
    pub summary: IntertwinerSummary,
    pub matrix: Vec<Vec<i64>>,
    pub unitary: UnitaryCheck,
}

#[derive(Debug, Clone, Serialize)]
pub struct GassmannReport {
    pub group: String,
    pub group_order: usize,
    pub gamma1_order: usize,
    pub gamma2_order: usize,
    pub almost_conjugate: bool,
    pub conjugate: bool,
    /// Some `g` with `gΓ₁g⁻¹ = Γ₂`, in cycle notation.
    pub conjugator: Option<String>,
    /// Permutation characters of the two coset actions agree everywhere.
    pub characters_agree: bool,
    pub classes: Vec<ClassCount>,
    pub intertwiner: Option<IntertwinerReport>,
}

impl GassmannReport {
    /// Almost conjugate but not conjugate.
    pub fn is_gassmann_pair(&self) -> bool {
        self.almost_conjugate && !self.conjugate
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SubgroupSummary {
    pub order: usize,
    pub generators: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchPair {
    pub h1: SubgroupSummary,
    pub h2: SubgroupSummary,
    pub class_counts: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub group: String,
    pub group_order: usize,
    pub max_generators: usize,
    pub pairs: Vec<SearchPair>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
    pub components: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverReport {
    pub sheets: usize,
    pub base: GraphSummary,
    pub cover: GraphSummary,
    pub intermediate: GraphSummary,
    pub m1: GraphSummary,
    pub m2: GraphSummary,
    pub free_action: bool,
    /// `|V|` and `|E|` scale by the index for every quotient.
    pub counts_consistent: bool,
    /// Quotient by the whole deck group is isomorphic to the base.
    pub tower_consistent: bool,
}

impl CoverReport {
    pub fn verified(&self) -> bool {
        self.free_action && self.counts_consistent && self.tower_consistent
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IsoReport {
    pub certificate: IsoCertificate,
    /// The map `(u, Γ₁x) ↦ (u, Γ₂τx)` is an isomorphism, when `τ` is given.
    pub sigma_is_isomorphism: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumLevel {
    pub k: i64,
    pub m1: Vec<f64>,
    pub m2: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GapLevel {
    pub k: i64,
    pub gap: f64,
    pub equal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub tolerance: f64,
    pub levels: Vec<GapLevel>,
    pub max_gap: f64,
    pub verdict: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualLevel {
    pub k: i64,
    /// `‖𝒯(Δ₂+Q) − (Δ₁+Q)𝒯‖_max` with the integer intertwiner.
    pub residual: f64,
    /// Same with its orthogonal polar factor.
    pub unitary_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransplantReport {
    pub intertwiner: IntertwinerReport,
    pub levels: Vec<ResidualLevel>,
    pub max_residual: f64,
    /// `𝒯` sends the constant section to `scale` times the constant section.
    pub constant_section_scale: f64,
    pub constant_section_defect: f64,
    pub bound: f64,
    pub verdict: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuantumLevelReport {
    pub k: i64,
    pub eigenvalues: Vec<f64>,
    pub eigenvalues_m2: Vec<f64>,
    pub gap: f64,
    /// `max |eig(Ĥ_k) − (eig(Δ_k) + R/6)/(2k²)|`, for constant `R`.
    pub affine_defect: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuantumReport {
    pub tolerance: f64,
    pub curvature_constant: Option<f64>,
    pub levels: Vec<QuantumLevelReport>,
    pub max_gap: f64,
    pub verdict: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BrooksReport {
    pub tau: String,
    pub tolerance: f64,
    /// Gaps between `(∇₁, Q₁)` and `(σ*∇₂, σ*Q₂)` on `M₁`.
    pub levels: Vec<GapLevel>,
    pub max_gap: f64,
    pub holonomy: HolonomyReport,
    pub holonomy_pullback: HolonomyReport,
    /// Largest holonomy difference over fundamental cycles, radians.
    pub holonomy_difference: f64,
    /// The two connections have different holonomy, exactly.
    pub connections_differ: bool,
    pub verdict: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct HolonomyPair {
    pub m1: HolonomyReport,
    pub m2: HolonomyReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub provenance: Provenance,
    pub gassmann: GassmannReport,
    pub cover: CoverReport,
    pub isomorphism: IsoReport,
    pub spectra: CompareReport,
    pub transplant: Option<TransplantReport>,
    pub quantum: Option<QuantumReport>,
    pub brooks: Option<BrooksReport>,
    pub holonomy: HolonomyPair,
    pub verdict: bool,
}

/// Wall-clock seconds per stage.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Timings {
    pub stages: BTreeMap<String, f64>,
    pub threads: usize,
}

/// `%.12g`-style rendering.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..12).contains(&exp) {
        let fixed = format!("{:.*}", (11 - exp) as usize, x);
        let fixed = if fixed.contains('.') {
            fixed
                .trim_end_matches('0')
                .trim_end_matches('.')
                .to_string()
        } else {
            fixed
        };
        if fixed == "-0" {
            "0".into()
        } else {
            fixed
        }
    } else {
        let (mant, e) = sci.split_once('e').unwrap();
        let mant = if mant.contains('.') {
            mant.trim_end_matches('0').trim_end_matches('.')
        } else {
            mant
        };
        let e: i32 = e.parse().unwrap();
        format!("{mant}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
    }
}

/// One row per eigenvalue: `k`, `index`, `value`.
pub fn spectra_tsv<'a>(levels: impl IntoIterator<Item = (i64, &'a [f64])>) -> String {
    let mut out = String::from("k\tindex\tvalue\n");
    for (k, values) in levels {
        for (i, v) in values.iter().enumerate() {
            writeln!(out, "{k}\t{i}\t{}", format_sig(*v)).unwrap();
        }
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(-0.0), "0");
        assert_eq!(format_sig(2.0), "2");
        assert_eq!(format_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig(123456.789), "123456.789");
        assert_eq!(format_sig(6.0 - 1e-13), "6");
        assert_eq!(format_sig(1.5e-9), "1.5e-09");
        assert_eq!(format_sig(-2.220446049250313e-16), "-2.22044604925e-16");
        assert_eq!(format_sig(1e12), "1e+12");
    }

    #[test]
    fn tsv_layout() {
        let a = [0.0, 2.0];
        let s = spectra_tsv([(3, &a[..])]);
        assert_eq!(s, "k\tindex\tvalue\n3\t0\t0\n3\t1\t2\n");
    }
}
