//! On-disk JSON schemas and a loader that records a SHA-256 of every input.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cover::{BaseGraph, Multigraph};
use crate::error::{Error, Result};
use crate::magnetic::{ConnectionData, Turn};
use crate::perm::Permutation;

/// `{"name", "degree", "generators"}`; subgroup files add `"parent"`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GroupFile {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
}

impl GroupFile {
    pub fn from_perms(
        name: &str,
        degree: usize,
        gens: &[Permutation],
        parent: Option<&str>,
    ) -> Self {
        GroupFile {
            name: name.to_string(),
            degree,
            generators: gens.iter().map(Permutation::to_vec).collect(),
            parent: parent.map(str::to_string),
        }
    }

    pub fn permutations(&self, field: &str) -> Result<Vec<Permutation>> {
        self.generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                if g.len() != self.degree {
                    return Err(Error::validation(
                        format!("{field}.generators[{i}]"),
                        format!("has {} images, degree is {}", g.len(), self.degree),
                    ));
                }
                Permutation::from_images(g).map_err(|e| {
                    Error::validation(format!("{field}.generators[{i}]"), e.to_string())
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GraphEdgeFile {
    pub id: u64,
    pub from: usize,
    pub to: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub voltage: Option<Vec<usize>>,
}

/// Voltage-graph file. Plain graphs omit `voltage` and `group`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GraphFile {
    pub vertices: usize,
    pub edges: Vec<GraphEdgeFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
}

impl GraphFile {
    pub fn base_graph(&self) -> Result<BaseGraph> {
        let graph = Multigraph::new(
            self.vertices,
            self.edges.iter().map(|e| (e.from, e.to)).collect(),
        )?;
        BaseGraph::new(graph, self.edges.iter().map(|e| e.id).collect())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TurnFile {
    pub num: i64,
    pub den: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PhaseFile {
    pub edge: u64,
    pub turn: TurnFile,
}

/// `{"graph": id, "phases": [{"edge": id, "turn": {"num": p, "den": q}}]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ConnectionFile {
    pub graph: String,
    pub phases: Vec<PhaseFile>,
}

impl ConnectionFile {
    /// Resolves edge ids through `edge_index`.
    pub fn connection(
        &self,
        field: &str,
        edge_index: impl Fn(u64) -> Option<usize>,
    ) -> Result<ConnectionData> {
        let mut data = ConnectionData::default();
        for (i, p) in self.phases.iter().enumerate() {
            let e = edge_index(p.edge).ok_or_else(|| {
                Error::validation(
                    format!("{field}.phases[{i}].edge"),
                    format!("unknown edge id {}", p.edge),
                )
            })?;
            let t = Turn::new(p.turn.num, p.turn.den).map_err(|_| {
                Error::validation(format!("{field}.phases[{i}].turn"), "zero denominator")
            })?;
            if data.phases.insert(e, t).is_some() {
                return Err(Error::validation(
                    format!("{field}.phases[{i}].edge"),
                    format!("edge id {} listed twice", p.edge),
                ));
            }
        }
        Ok(data)
    }

    pub fn from_connection(
        graph: &str,
        conn: &ConnectionData,
        ids: impl Fn(usize) -> u64,
    ) -> Result<Self> {
        let phases = conn
            .phases
            .iter()
            .map(|(&e, t)| {
                let (num, den) = num_traits::ToPrimitive::to_i64(t.numer())
                    .zip(num_traits::ToPrimitive::to_i64(t.denom()))
                    .ok_or_else(|| Error::validation("phases", "turn does not fit in 64 bits"))?;
                Ok(PhaseFile {
                    edge: ids(e),
                    turn: TurnFile { num, den },
                })
            })
            .collect::<Result<_>>()?;
        Ok(ConnectionFile {
            graph: graph.to_string(),
            phases,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FieldValueFile {
    pub vertex: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

/// Where a vertex field lives.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "snake_case")]
pub enum FieldLevel {
    /// Vertices `(u, Gx)` of the intermediate quotient; invariant by construction.
    #[default]
    Intermediate,
    /// Vertices `(u, x)` of the full cover; checked for invariance.
    Cover,
}

/// Potential (`"q"`) or curvature (`"r"`) file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FieldFile {
    #[serde(default)]
    pub level: FieldLevel,
    pub values: Vec<FieldValueFile>,
}

impl FieldFile {
    /// Dense values for `n` vertices, reading key `q` or `r`.
    pub fn dense(&self, field: &str, key: char, n: usize) -> Result<Vec<f64>> {
        let mut out = vec![None; n];
        for (i, v) in self.values.iter().enumerate() {
            let x = match key {
                'q' => v.q,
                _ => v.r,
            }
            .ok_or_else(|| {
                Error::validation(
                    format!("{field}.values[{i}]"),
                    format!("missing key `{key}`"),
                )
            })?;
            if v.vertex >= n {
                return Err(Error::validation(
                    format!("{field}.values[{i}].vertex"),
                    format!("vertex {} out of range ({n} vertices)", v.vertex),
                ));
            }
            if !x.is_finite() {
                return Err(Error::validation(
                    format!("{field}.values[{i}]"),
                    "value is not finite",
                ));
            }
            out[v.vertex] = Some(x);
        }
        out.into_iter()
            .enumerate()
            .map(|(v, x)| x.ok_or(Error::MissingPotential(v)))
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ConnectionSpecFile {
    Zero,
    Random {
        #[serde(default = "default_max_den")]
        max_denominator: i64,
        #[serde(default)]
        break_tau: bool,
    },
    Files {
        base: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        intermediate: Option<String>,
    },
}

fn default_max_den() -> i64 {
    360
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum FieldSpecFile {
    Zero,
    Constant {
        value: f64,
    },
    Random {
        #[serde(default = "default_scale")]
        scale: f64,
    },
    File {
        path: String,
    },
}

fn default_scale() -> f64 {
    1.0
}

fn default_connection() -> ConnectionSpecFile {
    ConnectionSpecFile::Random {
        max_denominator: 360,
        break_tau: false,
    }
}

fn default_potential() -> FieldSpecFile {
    FieldSpecFile::Zero
}

fn default_curvature() -> FieldSpecFile {
    FieldSpecFile::Constant {
        value: crate::quantum::DEFAULT_CURVATURE,
    }
}

fn default_k_range() -> [i64; 2] {
    [0, 8]
}

fn default_tolerance() -> f64 {
    crate::magnetic::SPECTRUM_TOL
}

/// Self-describing scenario; paths are relative to the scenario file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ScenarioFile {
    pub name: String,
    /// The deck group `Ĝ`.
    pub cover_group: String,
    /// `G ≤ Ĝ`; defaults to `Ĝ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intermediate_group: Option<String>,
    pub gamma1: String,
    pub gamma2: String,
    /// Element of `Ĝ` with `τΓ₁τ⁻¹ = Γ₂`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Vec<usize>>,
    pub voltage_graph: String,
    #[serde(default = "default_connection")]
    pub connection: ConnectionSpecFile,
    #[serde(default = "default_potential")]
    pub potential: FieldSpecFile,
    #[serde(default = "default_curvature")]
    pub curvature: FieldSpecFile,
    #[serde(default = "default_k_range")]
    pub k_range: [i64; 2],
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

/// Reads JSON files relative to a root directory and remembers their hashes.
#[derive(Debug, Default)]
pub struct Loader {
    root: PathBuf,
    pub hashes: BTreeMap<String, String>,
}

impl Loader {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Loader {
            root: root.into(),
            hashes: BTreeMap::new(),
        }
    }

    pub fn resolve(&self, rel: &str) -> PathBuf {
        self.root.join(rel)
    }

    pub fn read<T: DeserializeOwned>(&mut self, rel: &str) -> Result<T> {
        let path = self.resolve(rel);
        let bytes = std::fs::read(&path).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        self.hashes.insert(rel.to_string(), sha256_hex(&bytes));
        serde_json::from_slice(&bytes).map_err(|source| Error::Json { path, source })
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_slice(&bytes).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_defaults() {
        let s: ScenarioFile = serde_json::from_str(
            r#"{"name":"x","cover_group":"g.json","gamma1":"a.json","gamma2":"b.json","voltage_graph":"v.json"}"#,
        )
        .unwrap();
        assert_eq!(s.k_range, [0, 8]);
        assert_eq!(s.tolerance, 1e-8);
        assert_eq!(s.curvature, FieldSpecFile::Constant { value: -2.0 });
        assert!(matches!(
            s.connection,
            ConnectionSpecFile::Random {
                max_denominator: 360,
                ..
            }
        ));
    }

    #[test]
    fn field_file_requires_every_vertex() {
        let f: FieldFile = serde_json::from_str(r#"{"values":[{"vertex":0,"q":1.5}]}"#).unwrap();
        assert_eq!(f.dense("potential", 'q', 1).unwrap(), vec![1.5]);
        assert!(matches!(
            f.dense("potential", 'q', 2),
            Err(Error::MissingPotential(1))
        ));
        assert!(f.dense("curvature", 'r', 1).is_err());
    }

    #[test]
    fn connection_file_resolves_ids() {
        let f: ConnectionFile = serde_json::from_str(
            r#"{"graph":"base","phases":[{"edge":10,"turn":{"num":1,"den":4}},{"edge":20,"turn":{"num":-2,"den":6}}]}"#,
        )
        .unwrap();
        let conn = f
            .connection("c", |id| [10, 20].iter().position(|&x| x == id))
            .unwrap();
        assert_eq!(conn.phase(1).unwrap(), &Turn::new(-1, 3).unwrap());
        assert!(f.connection("c", |_| None).is_err());
    }

    #[test]
    fn hashes_are_hex_sha256() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
