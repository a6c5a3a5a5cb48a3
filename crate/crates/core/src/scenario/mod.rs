//! Scenario files: loading, validation of the subgroup tower, seeded
//! generation of invariant data, and the end-to-end pipeline.

pub mod bundled;
pub mod files;
mod generate;
mod pipeline;
pub mod report;

use std::collections::BTreeMap;
use std::path::{Component, Path, PathBuf};
use std::sync::Arc;

use crate::cover::{quotient, QuotientGraph, VoltageGraph};
use crate::error::{Error, Result};
use crate::group::{PermGroup, Subgroup};
use crate::magnetic::{invariant_cover_field, ConnectionData};
use crate::perm::Permutation;

pub use files::{
    ConnectionFile, ConnectionSpecFile, FieldFile, FieldLevel, FieldSpecFile, GraphEdgeFile,
    GraphFile, GroupFile, ScenarioFile,
};
pub use generate::{generate_invariant_data, mid_edge_tau_image, InvariantData, MAX_RESEEDS};
pub use pipeline::{
    brooks, compare, cover_build, gassmann_verify, isocheck, isocheck_files, k_values, per_k,
    quantum, run_scenario, search_group, search_group_file, spectra, transplant, worker_threads,
    write_run, Prepared, RunOptions,
};

/// Where a vertex field (`Q` or `R`) comes from, resolved to the vertices of
/// the intermediate quotient `G\M`.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldSource {
    Constant(f64),
    Random { scale: f64 },
    Values(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConnectionSource {
    Zero,
    Random {
        max_denominator: i64,
        break_tau: bool,
    },
    Files {
        base: ConnectionData,
        intermediate: Option<ConnectionData>,
    },
}

/// A validated scenario: `Γ₁, Γ₂ ≤ G ≤ Ĝ`, optional `τ`, and the voltage
/// graph, with the three quotients already built.
#[derive(Debug)]
pub struct Scenario {
    pub name: String,
    pub path: PathBuf,
    pub top: Arc<PermGroup>,
    pub mid: PermGroup,
    /// `G` as a subgroup of `Ĝ`.
    pub mid_in_top: Subgroup,
    /// `Γᵢ` as subgroups of `G`.
    pub gamma1: Subgroup,
    pub gamma2: Subgroup,
    /// `Γᵢ` as subgroups of `Ĝ`.
    pub gamma1_top: Subgroup,
    pub gamma2_top: Subgroup,
    /// Index of `τ` in `Ĝ`.
    pub tau: Option<usize>,
    pub voltage_graph: VoltageGraph,
    pub m1: QuotientGraph,
    pub m2: QuotientGraph,
    /// `G\M`.
    pub mid_quotient: QuotientGraph,
    pub connection: ConnectionSource,
    pub potential: FieldSource,
    pub curvature: FieldSource,
    pub k_range: (i64, i64),
    pub tolerance: f64,
    pub seed: u64,
    pub output: Option<PathBuf>,
    /// SHA-256 of every file read, keyed by the path as written.
    pub input_hashes: BTreeMap<String, String>,
}

fn embed(field: &str, into: &PermGroup, into_name: &str, gens: &[Permutation]) -> Result<Subgroup> {
    for (i, g) in gens.iter().enumerate() {
        if g.degree() != into.degree() {
            return Err(Error::validation(
                format!("{field}.generators[{i}]"),
                format!(
                    "degree {} differs from {into_name} degree {}",
                    g.degree(),
                    into.degree()
                ),
            ));
        }
        if into.index_of(g).is_none() {
            return Err(Error::validation(
                field,
                format!("generator {i} = {g} is not an element of {into_name}"),
            ));
        }
    }
    Subgroup::generated(into, gens.to_vec())
}

/// `name` resolved next to the file `rel`, with `..` folded lexically.
fn sibling(rel: &str, name: &str) -> String {
    let joined = Path::new(rel).parent().unwrap_or(Path::new("")).join(name);
    let mut out = PathBuf::new();
    for c in joined.components() {
        match c {
            Component::CurDir => {}
            Component::ParentDir
                if matches!(out.components().next_back(), Some(Component::Normal(_))) =>
            {
                out.pop();
            }
            other => out.push(other),
        }
    }
    out.to_string_lossy().into_owned()
}

fn check_parent(
    loader: &mut files::Loader,
    field: &str,
    rel: &str,
    file: &GroupFile,
) -> Result<()> {
    let Some(parent) = &file.parent else {
        return Ok(());
    };
    let parent_rel = sibling(rel, parent);
    let pf: GroupFile = loader
        .read(&parent_rel)
        .map_err(|e| Error::validation(format!("{field}.parent"), e.to_string()))?;
    let pg = PermGroup::new(
        &pf.name,
        pf.degree,
        pf.permutations(&format!("{field}.parent"))?,
    )?;
    embed(
        &format!("{field}.parent"),
        &pg,
        &pf.name,
        &file.permutations(field)?,
    )
    .map(|_| ())
}

fn field_source(
    loader: &mut files::Loader,
    field: &'static str,
    key: char,
    spec: &FieldSpecFile,
    mid_q: &QuotientGraph,
) -> Result<FieldSource> {
    Ok(match spec {
        FieldSpecFile::Zero => FieldSource::Constant(0.0),
        FieldSpecFile::Constant { value } => {
            if !value.is_finite() {
                return Err(Error::validation(
                    format!("{field}.value"),
                    "value is not finite",
                ));
            }
            FieldSource::Constant(*value)
        }
        FieldSpecFile::Random { scale } => {
            if !(scale.is_finite() && *scale >= 0.0) {
                return Err(Error::validation(
                    format!("{field}.scale"),
                    "scale must be finite and nonnegative",
                ));
            }
            FieldSource::Random { scale: *scale }
        }
        FieldSpecFile::File { path } => {
            let f: FieldFile = loader.read(path)?;
            match f.level {
                FieldLevel::Intermediate => {
                    FieldSource::Values(f.dense(field, key, mid_q.graph.vertex_count)?)
                }
                FieldLevel::Cover => {
                    let base_vertices = mid_q.graph.vertex_count / mid_q.index();
                    let order = mid_q.index() * mid_q.coset_table.subgroup().order();
                    let cover = f.dense(field, key, base_vertices * order)?;
                    FieldSource::Values(invariant_cover_field(field, &cover, mid_q)?)
                }
            }
        }
    })
}

impl Scenario {
    pub fn load(path: impl AsRef<Path>) -> Result<Scenario> {
        let path = path.as_ref();
        let dir = path.parent().unwrap_or(Path::new("")).to_path_buf();
        let file_name = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mut loader = files::Loader::new(dir.clone());
        let sf: ScenarioFile = loader.read(&file_name)?;
        let mut s = Self::from_file(sf, &mut loader)?;
        s.path = path.to_path_buf();
        s.input_hashes = loader.hashes;
        Ok(s)
    }

    /// Validates a parsed scenario; relative paths resolve through `loader`.
    pub fn from_file(sf: ScenarioFile, loader: &mut files::Loader) -> Result<Scenario> {
        if sf.k_range[0] > sf.k_range[1] {
            return Err(Error::validation(
                "k_range",
                "lower bound exceeds upper bound",
            ));
        }
        if !(sf.tolerance.is_finite() && sf.tolerance > 0.0) {
            return Err(Error::validation(
                "tolerance",
                "must be positive and finite",
            ));
        }

        let top_file: GroupFile = loader.read(&sf.cover_group)?;
        let top = Arc::new(PermGroup::new(
            &top_file.name,
            top_file.degree,
            top_file.permutations("cover_group")?,
        )?);

        let (mid, mid_in_top) = match &sf.intermediate_group {
            Some(rel) => {
                let f: GroupFile = loader.read(rel)?;
                let gens = f.permutations("intermediate_group")?;
                let mid_in_top = embed("intermediate_group", &top, "cover_group", &gens)?;
                check_parent(loader, "intermediate_group", rel, &f)?;
                (PermGroup::new(&f.name, f.degree, gens)?, mid_in_top)
            }
            None => (
                PermGroup::new(top.name(), top.degree(), top.generators().to_vec())?,
                Subgroup::whole(&top),
            ),
        };

        let mut gammas = Vec::new();
        for (field, rel) in [("gamma1", &sf.gamma1), ("gamma2", &sf.gamma2)] {
            let f: GroupFile = loader.read(rel)?;
            let gens = f.permutations(field)?;
            let in_mid = embed(field, &mid, "the intermediate group", &gens)?;
            check_parent(loader, field, rel, &f)?;
            let in_top = Subgroup::generated(&top, gens)?;
            gammas.push((in_mid, in_top));
        }
        let (gamma2, gamma2_top) = gammas.pop().expect("two subgroups");
        let (gamma1, gamma1_top) = gammas.pop().expect("two subgroups");

        let tau = match &sf.tau {
            None => None,
            Some(images) => {
                let p = Permutation::from_images(images)
                    .map_err(|e| Error::validation("tau", e.to_string()))?;
                let t = top.index_of(&p).ok_or_else(|| {
                    Error::validation("tau", format!("{p} is not an element of the cover group"))
                })?;
                if !mid_in_top.conjugated(&top, t).same_elements(&mid_in_top) {
                    return Err(Error::validation(
                        "tau",
                        "does not normalize the intermediate group",
                    ));
                }
                if !gamma1_top.conjugated(&top, t).same_elements(&gamma2_top) {
                    return Err(Error::validation(
                        "tau",
                        "conjugation by tau does not carry gamma1 onto gamma2",
                    ));
                }
                Some(t)
            }
        };

        let gf: GraphFile = loader.read(&sf.voltage_graph)?;
        if let Some(g) = &gf.group {
            let rel = sibling(&sf.voltage_graph, g);
            let f: GroupFile = loader
                .read(&rel)
                .map_err(|e| Error::validation("voltage_graph.group", e.to_string()))?;
            if f.degree != top_file.degree || f.generators != top_file.generators {
                return Err(Error::validation(
                    "voltage_graph.group",
                    format!("`{g}` is not the scenario's cover group"),
                ));
            }
        }
        let base = gf
            .base_graph()
            .map_err(|e| Error::validation("voltage_graph", e.to_string()))?;
        let mut voltages = Vec::with_capacity(gf.edges.len());
        for (i, e) in gf.edges.iter().enumerate() {
            let field = format!("voltage_graph.edges[{i}].voltage");
            let images = e
                .voltage
                .as_ref()
                .ok_or_else(|| Error::validation(&field, "missing voltage"))?;
            let p = Permutation::from_images(images)
                .map_err(|err| Error::validation(&field, err.to_string()))?;
            let v = top.index_of(&p).ok_or_else(|| {
                Error::validation(&field, format!("{p} is not an element of the cover group"))
            })?;
            voltages.push(v);
        }
        let voltage_graph = VoltageGraph::new(base, top.clone(), voltages)?;

        let m1 = quotient(&voltage_graph, &gamma1_top);
        let m2 = quotient(&voltage_graph, &gamma2_top);
        let mid_quotient = quotient(&voltage_graph, &mid_in_top);

        let connection = match &sf.connection {
            ConnectionSpecFile::Zero => ConnectionSource::Zero,
            ConnectionSpecFile::Random {
                max_denominator,
                break_tau,
            } => {
                if *max_denominator < 1 {
                    return Err(Error::validation(
                        "connection.max_denominator",
                        "must be at least 1",
                    ));
                }
                if *break_tau && (tau.is_none() || mid_quotient.index() < 2) {
                    return Err(Error::validation(
                        "connection.break_tau",
                        "needs tau and a proper intermediate group",
                    ));
                }
                ConnectionSource::Random {
                    max_denominator: *max_denominator,
                    break_tau: *break_tau,
                }
            }
            ConnectionSpecFile::Files { base, intermediate } => {
                let f: ConnectionFile = loader.read(base)?;
                let b = f.connection("connection.base", |id| voltage_graph.base.edge_index(id))?;
                let intermediate = match intermediate {
                    None => None,
                    Some(rel) => {
                        let f: ConnectionFile = loader.read(rel)?;
                        let n = mid_quotient.graph.edge_count() as u64;
                        Some(f.connection("connection.intermediate", |id| {
                            (id < n).then_some(id as usize)
                        })?)
                    }
                };
                ConnectionSource::Files {
                    base: b,
                    intermediate,
                }
            }
        };

        let potential = field_source(loader, "potential", 'q', &sf.potential, &mid_quotient)?;
        let curvature = field_source(loader, "curvature", 'r', &sf.curvature, &mid_quotient)?;

        Ok(Scenario {
            name: sf.name,
            path: PathBuf::new(),
            top,
            mid,
            mid_in_top,
            gamma1,
            gamma2,
            gamma1_top,
            gamma2_top,
            tau,
            voltage_graph,
            m1,
            m2,
            mid_quotient,
            connection,
            potential,
            curvature,
            k_range: (sf.k_range[0], sf.k_range[1]),
            tolerance: sf.tolerance,
            seed: sf.seed,
            output: sf.output.map(|o| loader.resolve(&o)),
            input_hashes: BTreeMap::new(),
        })
    }

    /// `[Ĝ : G]`.
    pub fn sheets(&self) -> usize {
        self.mid_quotient.index()
    }
}
