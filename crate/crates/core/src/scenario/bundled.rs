//! Writers for the bundled scenarios and the invalid fixtures that exercise
//! each validation rule.

use std::path::{Path, PathBuf};

use super::files::{
    write_json, ConnectionSpecFile, FieldSpecFile, GraphEdgeFile, GraphFile, GroupFile,
    ScenarioFile,
};
use crate::error::Result;
use crate::fixtures;
use crate::group::PermGroup;
use crate::perm::Permutation;
use crate::quantum::DEFAULT_CURVATURE;

fn group_file(g: &PermGroup, parent: Option<&str>) -> GroupFile {
    GroupFile::from_perms(g.name(), g.degree(), g.generators(), parent)
}

fn graph_file(
    vertices: usize,
    edges: &[(usize, usize)],
    voltages: Option<&[Permutation]>,
    group: Option<&str>,
) -> GraphFile {
    GraphFile {
        vertices,
        edges: edges
            .iter()
            .enumerate()
            .map(|(i, &(from, to))| GraphEdgeFile {
                id: i as u64,
                from,
                to,
                voltage: voltages.map(|v| v[i].images().iter().map(|&x| x as usize).collect()),
            })
            .collect(),
        group: group.map(str::to_string),
    }
}

fn images(p: &Permutation) -> Vec<usize> {
    p.images().iter().map(|&x| x as usize).collect()
}

fn write_groups(dir: &Path) -> Result<()> {
    let g = fixtures::fano_group_points_planes();
    let (p, q) = fixtures::fano_point_plane_stabilizers(&g);
    write_json(&dir.join("groups/gl32.json"), &group_file(&g, None))?;
    write_json(
        &dir.join("groups/gl32_duality.json"),
        &group_file(&fixtures::fano_group_with_duality(), None),
    )?;
    write_json(
        &dir.join("groups/point_stabilizer.json"),
        &GroupFile::from_perms("point stabilizer", 14, p.generators(), Some("gl32.json")),
    )?;
    write_json(
        &dir.join("groups/plane_stabilizer.json"),
        &GroupFile::from_perms("plane stabilizer", 14, q.generators(), Some("gl32.json")),
    )?;
    let s4 = fixtures::symmetric_group(4);
    let c = |cycles: &[&[usize]]| Permutation::from_cycles(4, cycles).unwrap();
    write_json(&dir.join("groups/s4.json"), &group_file(&s4, None))?;
    write_json(
        &dir.join("groups/s4_transposition.json"),
        &GroupFile::from_perms("<(0 1)>", 4, &[c(&[&[0, 1]])], Some("s4.json")),
    )?;
    write_json(
        &dir.join("groups/s4_double_transposition.json"),
        &GroupFile::from_perms(
            "<(0 1)(2 3)>",
            4,
            &[c(&[&[0, 1], &[2, 3]])],
            Some("s4.json"),
        ),
    )?;
    Ok(())
}

fn write_graphs(dir: &Path) -> Result<()> {
    let gens = fixtures::fano_generators_points_planes();
    let id = Permutation::identity(14);
    write_json(
        &dir.join("graphs/fano_base.json"),
        &graph_file(
            2,
            &[(0, 1), (0, 1), (0, 1)],
            Some(&[id.clone(), gens[0].clone(), gens[1].clone()]),
            Some("../groups/gl32.json"),
        ),
    )?;
    write_json(
        &dir.join("graphs/brooks_base.json"),
        &graph_file(
            2,
            &[(0, 1), (0, 1), (0, 1), (0, 0)],
            Some(&[id, gens[0].clone(), gens[1].clone(), fixtures::duality()]),
            Some("../groups/gl32_duality.json"),
        ),
    )?;
    write_json(
        &dir.join("graphs/fano_bouquet.json"),
        &graph_file(
            1,
            &[(0, 0), (0, 0), (0, 0)],
            Some(&[gens[0].clone(), gens[1].clone(), &gens[0] * &gens[1]]),
            Some("../groups/gl32.json"),
        ),
    )?;
    let c = |cycles: &[&[usize]]| Permutation::from_cycles(4, cycles).unwrap();
    write_json(
        &dir.join("graphs/s4_base.json"),
        &graph_file(
            2,
            &[(0, 1), (0, 1), (0, 1)],
            Some(&[Permutation::identity(4), c(&[&[0, 1]]), c(&[&[0, 1, 2, 3]])]),
            Some("../groups/s4.json"),
        ),
    )?;
    write_json(
        &dir.join("graphs/c4.json"),
        &graph_file(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], None, None),
    )?;
    write_json(
        &dir.join("graphs/p4.json"),
        &graph_file(4, &[(0, 1), (1, 2), (2, 3)], None, None),
    )?;
    Ok(())
}

fn base_scenario(name: &str) -> ScenarioFile {
    ScenarioFile {
        name: name.to_string(),
        cover_group: "groups/gl32.json".into(),
        intermediate_group: None,
        gamma1: "groups/point_stabilizer.json".into(),
        gamma2: "groups/plane_stabilizer.json".into(),
        tau: None,
        voltage_graph: "graphs/fano_base.json".into(),
        connection: ConnectionSpecFile::Random {
            max_denominator: 360,
            break_tau: false,
        },
        potential: FieldSpecFile::Random { scale: 1.0 },
        curvature: FieldSpecFile::Constant {
            value: DEFAULT_CURVATURE,
        },
        k_range: [0, 8],
        tolerance: crate::magnetic::SPECTRUM_TOL,
        seed: 1,
        output: Some(format!("out/{name}")),
    }
}

fn brooks_file() -> ScenarioFile {
    ScenarioFile {
        cover_group: "groups/gl32_duality.json".into(),
        intermediate_group: Some("groups/gl32.json".into()),
        tau: Some(images(&fixtures::duality())),
        voltage_graph: "graphs/brooks_base.json".into(),
        connection: ConnectionSpecFile::Random {
            max_denominator: 360,
            break_tau: true,
        },
        ..base_scenario("brooks")
    }
}

fn write_scenario(dir: &Path, file: &ScenarioFile) -> Result<PathBuf> {
    write_groups(dir)?;
    write_graphs(dir)?;
    let path = dir.join(format!("{}.json", file.name));
    write_json(&path, file)?;
    Ok(path)
}

/// `GL(3,2)` on points and planes over two vertices joined by three edges
/// with voltages `1, a, b`; `Γ₁, Γ₂` the point and plane stabilizers.
pub fn write_fano(dir: &Path) -> Result<PathBuf> {
    write_scenario(dir, &base_scenario("fano"))
}

/// One vertex with loops `a, b, ab`: the two quotients are isospectral for
/// every `k` but not isomorphic as graphs.
pub fn write_fano_bouquet(dir: &Path) -> Result<PathBuf> {
    let file = ScenarioFile {
        voltage_graph: "graphs/fano_bouquet.json".into(),
        ..base_scenario("fano_bouquet")
    };
    write_scenario(dir, &file)
}

/// The Fano tower extended by the duality `τ`, with a τ-breaking
/// intermediate connection.
pub fn write_brooks(dir: &Path) -> Result<PathBuf> {
    write_scenario(dir, &brooks_file())
}

/// `S4` with `⟨(0 1)⟩` and `⟨(0 1)(2 3)⟩`: not almost conjugate.
pub fn write_s4_negative(dir: &Path) -> Result<PathBuf> {
    let file = ScenarioFile {
        cover_group: "groups/s4.json".into(),
        gamma1: "groups/s4_transposition.json".into(),
        gamma2: "groups/s4_double_transposition.json".into(),
        voltage_graph: "graphs/s4_base.json".into(),
        ..base_scenario("s4_negative")
    };
    write_scenario(dir, &file)
}

/// `Γ₁ = Γ₂`.
pub fn write_degenerate(dir: &Path) -> Result<PathBuf> {
    let file = ScenarioFile {
        gamma2: "groups/point_stabilizer.json".into(),
        ..base_scenario("degenerate")
    };
    write_scenario(dir, &file)
}

/// A scenario that must fail validation, and the field it must name.
#[derive(Debug, Clone)]
pub struct InvalidFixture {
    pub path: PathBuf,
    pub field: &'static str,
}

/// One fixture per validation rule.
pub fn write_invalid(dir: &Path) -> Result<Vec<InvalidFixture>> {
    write_groups(dir)?;
    write_graphs(dir)?;
    let tau = fixtures::duality();
    let transposition = Permutation::from_cycles(14, &[&[0, 1]]).unwrap();
    write_json(
        &dir.join("groups/duality_subgroup.json"),
        &GroupFile::from_perms(
            "<tau>",
            14,
            std::slice::from_ref(&tau),
            Some("gl32_duality.json"),
        ),
    )?;
    write_json(
        &dir.join("groups/gl32_with_transposition.json"),
        &GroupFile::from_perms("too big", 14, std::slice::from_ref(&transposition), None),
    )?;
    let gens = fixtures::fano_generators_points_planes();
    write_json(
        &dir.join("graphs/bad_voltage.json"),
        &graph_file(
            2,
            &[(0, 1), (0, 1), (0, 1), (0, 0)],
            Some(&[
                Permutation::identity(14),
                transposition.clone(),
                gens[1].clone(),
                tau.clone(),
            ]),
            None,
        ),
    )?;
    let c4 = fixtures::cyclic_group(4);
    write_json(
        &dir.join("groups/c4.json"),
        &group_file(&c4, Some("s4.json")),
    )?;
    write_json(
        &dir.join("groups/s4_trivial.json"),
        &GroupFile::from_perms("trivial", 4, &[], Some("s4.json")),
    )?;

    let brooks = brooks_file();
    let cases: Vec<(&str, &'static str, ScenarioFile)> = vec![
        (
            "invalid_gamma1",
            "gamma1",
            ScenarioFile {
                gamma1: "groups/duality_subgroup.json".into(),
                ..brooks.clone()
            },
        ),
        (
            "invalid_gamma2",
            "gamma2",
            ScenarioFile {
                gamma2: "groups/duality_subgroup.json".into(),
                ..brooks.clone()
            },
        ),
        (
            "invalid_intermediate",
            "intermediate_group",
            ScenarioFile {
                intermediate_group: Some("groups/gl32_with_transposition.json".into()),
                ..brooks.clone()
            },
        ),
        (
            "invalid_tau_membership",
            "tau",
            ScenarioFile {
                tau: Some(images(&transposition)),
                ..brooks.clone()
            },
        ),
        (
            "invalid_tau_conjugation",
            "tau",
            ScenarioFile {
                gamma2: "groups/point_stabilizer.json".into(),
                ..brooks.clone()
            },
        ),
        (
            "invalid_tau_normalizer",
            "tau",
            ScenarioFile {
                cover_group: "groups/s4.json".into(),
                intermediate_group: Some("groups/c4.json".into()),
                gamma1: "groups/s4_trivial.json".into(),
                gamma2: "groups/s4_trivial.json".into(),
                tau: Some(vec![1, 0, 2, 3]),
                voltage_graph: "graphs/s4_base.json".into(),
                connection: ConnectionSpecFile::Zero,
                ..brooks.clone()
            },
        ),
        (
            "invalid_voltage",
            "voltage_graph.edges[1].voltage",
            ScenarioFile {
                voltage_graph: "graphs/bad_voltage.json".into(),
                ..brooks.clone()
            },
        ),
    ];
    cases
        .into_iter()
        .map(|(name, field, mut file)| {
            file.name = name.to_string();
            let path = dir.join(format!("{name}.json"));
            write_json(&path, &file)?;
            Ok(InvalidFixture { path, field })
        })
        .collect()
}

/// Every bundled scenario, valid ones first.
pub fn write_all(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = vec![
        write_fano(dir)?,
        write_fano_bouquet(dir)?,
        write_brooks(dir)?,
        write_s4_negative(dir)?,
        write_degenerate(dir)?,
    ];
    out.extend(write_invalid(dir)?.into_iter().map(|f| f.path));
    Ok(out)
}
