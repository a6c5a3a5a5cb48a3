use std::path::Path;
use std::time::Instant;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::files::{read_json, GraphFile, GroupFile};
use super::generate::{generate_invariant_data, InvariantData};
use super::report::*;
use super::Scenario;
use crate::cover::{
    check_free_action, connectivity, derive_cover, graph_isomorphic, is_isomorphism, quotient,
    sigma_map, IsoVerdict, Multigraph, QuotientGraph,
};
use crate::error::{Error, Result};
use crate::group::{
    almost_conjugate_with, build_intertwiner, conjugacy_classes, coset_action, find_conjugator,
    permutation_character, search_gassmann, unitarize_intertwiner, Intertwiner, PermGroup,
    Subgroup,
};
use crate::magnetic::{
    build_operator, compare_spectra, descend_connection, descend_vertex_field, eigenvalues,
    holonomy_report, pullback_by_sigma, pullback_potential_by_sigma, ConnectionData, Potential,
    Transplantation, RESIDUAL_TOL,
};
use crate::quantum::{quantum_spectrum, CurvatureField, QuantumSide};

/// Scenario data descended to both quotients.
#[derive(Debug, Clone)]
pub struct Prepared<'a> {
    pub scenario: &'a Scenario,
    pub seed: u64,
    pub data: InvariantData,
    pub conn1: ConnectionData,
    pub conn2: ConnectionData,
    pub q1: Potential,
    pub q2: Potential,
    pub r1: CurvatureField,
    pub r2: CurvatureField,
}

impl<'a> Prepared<'a> {
    pub fn new(scenario: &'a Scenario, seed: u64) -> Result<Self> {
        let data = generate_invariant_data(scenario, seed)?;
        let mid = data
            .intermediate
            .as_ref()
            .map(|d| (&scenario.mid_quotient, d));
        let field = |values: &[f64], target: &QuotientGraph| {
            descend_vertex_field(&scenario.mid_quotient, values, target)
        };
        Ok(Prepared {
            conn1: descend_connection(&data.base, mid, &scenario.m1)?,
            conn2: descend_connection(&data.base, mid, &scenario.m2)?,
            q1: Potential {
                values: field(&data.potential, &scenario.m1)?,
            },
            q2: Potential {
                values: field(&data.potential, &scenario.m2)?,
            },
            r1: CurvatureField {
                values: field(&data.curvature, &scenario.m1)?,
            },
            r2: CurvatureField {
                values: field(&data.curvature, &scenario.m2)?,
            },
            scenario,
            seed,
            data,
        })
    }

    /// `R`, when it is constant.
    pub fn constant_curvature(&self) -> Option<f64> {
        let c = *self.data.curvature.first()?;
        self.data.curvature.iter().all(|&r| r == c).then_some(c)
    }
}

fn thread_count() -> Option<usize> {
    std::env::var("SUNADA_LAB_THREADS")
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
}

/// Runs `f` for every `k`, in parallel, returning results in input order.
/// `SUNADA_LAB_THREADS` caps the worker count.
pub fn per_k<T: Send>(ks: &[i64], f: impl Fn(i64) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    let run = || ks.par_iter().map(|&k| f(k)).collect::<Result<Vec<T>>>();
    match thread_count() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(run),
        None => run(),
    }
}

pub fn worker_threads() -> usize {
    thread_count().unwrap_or_else(rayon::current_num_threads)
}

fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, f64::max)
}

fn intertwiner_report(group: &PermGroup, it: &Intertwiner) -> Result<IntertwinerReport> {
    let u = unitarize_intertwiner(it)?;
    let orthogonality_defect = (u.transpose() * &u - DMatrix::identity(u.ncols(), u.ncols()))
        .abs()
        .max();
    let (src, dst) = (it.source(), it.target());
    let mut generator_residual: f64 = 0.0;
    for g in group.generator_indices() {
        for r in 0..dst.index() {
            for c in 0..src.index() {
                let d = u[(dst.act(group, r, g), src.act(group, c, g))] - u[(r, c)];
                generator_residual = generator_residual.max(d.abs());
            }
        }
    }
    Ok(IntertwinerReport {
        summary: it.summary(group),
        matrix: it.matrix().to_rows(),
        unitary: UnitaryCheck {
            orthogonality_defect,
            generator_residual,
        },
    })
}

/// Almost-conjugacy of `Γ₁, Γ₂` in `G`, with class counts, a conjugator if
/// one exists, the permutation-character cross-check, and an exact
/// intertwiner when almost conjugate.
pub fn gassmann_verify(scn: &Scenario, seed: u64) -> Result<GassmannReport> {
    let g = &scn.mid;
    let classes = conjugacy_classes(g);
    let ac = almost_conjugate_with(g, &classes, &scn.gamma1, &scn.gamma2);
    let t1 = coset_action(g, &scn.gamma1);
    let t2 = coset_action(g, &scn.gamma2);
    let characters_agree = (0..g.order())
        .all(|x| permutation_character(g, &t1, x) == permutation_character(g, &t2, x));
    let intertwiner = if ac.verdict {
        let it = build_intertwiner(g, &scn.gamma1, &scn.gamma2, seed)?;
        Some(intertwiner_report(g, &it)?)
    } else {
        None
    };
    let conjugator = find_conjugator(g, &scn.gamma1, &scn.gamma2);
    Ok(GassmannReport {
        group: g.name().to_string(),
        group_order: g.order(),
        gamma1_order: scn.gamma1.order(),
        gamma2_order: scn.gamma2.order(),
        almost_conjugate: ac.verdict,
        conjugate: conjugator.is_some(),
        conjugator: conjugator.map(|c| g.element(c).to_string()),
        characters_agree,
        classes: ac.per_class_counts,
        intertwiner,
    })
}

fn summarize_subgroup(h: &Subgroup) -> SubgroupSummary {
    SubgroupSummary {
        order: h.order(),
        generators: h.generators().iter().map(|p| p.images().to_vec()).collect(),
    }
}

pub fn search_group(group: &PermGroup, max_generators: usize) -> Result<SearchReport> {
    let pairs = search_gassmann(group, max_generators)?
        .into_iter()
        .map(|p| SearchPair {
            h1: summarize_subgroup(&p.h1),
            h2: summarize_subgroup(&p.h2),
            class_counts: p.class_counts,
        })
        .collect();
    Ok(SearchReport {
        group: group.name().to_string(),
        group_order: group.order(),
        max_generators,
        pairs,
    })
}

pub fn search_group_file(path: &Path, max_generators: usize) -> Result<SearchReport> {
    let f: GroupFile = read_json(path)?;
    let g = PermGroup::new(&f.name, f.degree, f.permutations("group")?)?;
    search_group(&g, max_generators)
}

fn summarize_graph(g: &Multigraph) -> GraphSummary {
    GraphSummary {
        vertices: g.vertex_count,
        edges: g.edge_count(),
        components: connectivity(g),
    }
}

pub fn cover_build(scn: &Scenario) -> Result<CoverReport> {
    let vg = &scn.voltage_graph;
    let base = &vg.base.graph;
    let cover = derive_cover(vg);
    let whole = quotient(vg, &Subgroup::whole(&scn.top));
    let quotients = [&cover, &scn.mid_quotient, &scn.m1, &scn.m2, &whole];
    let counts_consistent = quotients.iter().all(|q| {
        q.graph.vertex_count == base.vertex_count * q.index()
            && q.graph.edge_count() == base.edge_count() * q.index()
    });
    let free_action = [&scn.gamma1_top, &scn.gamma2_top, &scn.mid_in_top]
        .iter()
        .all(|h| check_free_action(vg, h));
    let tower_consistent = graph_isomorphic(&whole.graph, base)?.verdict == IsoVerdict::Isomorphic;
    Ok(CoverReport {
        sheets: scn.sheets(),
        base: summarize_graph(base),
        cover: summarize_graph(&cover.graph),
        intermediate: summarize_graph(&scn.mid_quotient.graph),
        m1: summarize_graph(&scn.m1.graph),
        m2: summarize_graph(&scn.m2.graph),
        free_action,
        counts_consistent,
        tower_consistent,
    })
}

pub fn isocheck(scn: &Scenario) -> Result<IsoReport> {
    let certificate = graph_isomorphic(&scn.m1.graph, &scn.m2.graph)?;
    let sigma_is_isomorphism = match scn.tau {
        Some(t) => {
            let map = sigma_map(&scn.voltage_graph, &scn.m1, &scn.m2, t)?;
            Some(is_isomorphism(&scn.m1.graph, &scn.m2.graph, &map))
        }
        None => None,
    };
    Ok(IsoReport {
        certificate,
        sigma_is_isomorphism,
    })
}

/// Isomorphism of two plain graph files (voltages ignored).
pub fn isocheck_files(a: &Path, b: &Path) -> Result<IsoReport> {
    let ga: GraphFile = read_json(a)?;
    let gb: GraphFile = read_json(b)?;
    Ok(IsoReport {
        certificate: graph_isomorphic(&ga.base_graph()?.graph, &gb.base_graph()?.graph)?,
        sigma_is_isomorphism: None,
    })
}

fn spectrum(graph: &Multigraph, conn: &ConnectionData, k: i64, q: &Potential) -> Result<Vec<f64>> {
    eigenvalues(&build_operator(graph, conn, k, q)?)
}

/// Sorted spectra of `Δ_k + Q` on both quotients.
pub fn spectra(prep: &Prepared<'_>, ks: &[i64]) -> Result<Vec<SpectrumLevel>> {
    let s = prep.scenario;
    per_k(ks, |k| {
        Ok(SpectrumLevel {
            k,
            m1: spectrum(&s.m1.graph, &prep.conn1, k, &prep.q1)?,
            m2: spectrum(&s.m2.graph, &prep.conn2, k, &prep.q2)?,
        })
    })
}

fn gaps(levels: &[SpectrumLevel], tol: f64) -> Result<CompareReport> {
    let levels = levels
        .iter()
        .map(|l| {
            let c = compare_spectra(&l.m1, &l.m2, tol)?;
            Ok(GapLevel {
                k: l.k,
                gap: c.max_gap,
                equal: c.equal,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CompareReport {
        tolerance: tol,
        max_gap: max_of(levels.iter().map(|l| l.gap)),
        verdict: levels.iter().all(|l| l.equal),
        levels,
    })
}

pub fn compare(prep: &Prepared<'_>, ks: &[i64], tol: f64) -> Result<CompareReport> {
    gaps(&spectra(prep, ks)?, tol)
}

pub fn transplant(prep: &Prepared<'_>, ks: &[i64]) -> Result<TransplantReport> {
    let s = prep.scenario;
    let it = build_intertwiner(&s.mid, &s.gamma1, &s.gamma2, prep.seed)?;
    let mid_cosets = &s.mid_quotient.coset_table;
    let tr = Transplantation::new(&s.top, &s.mid, mid_cosets, &it, &s.m1, &s.m2)?;
    let u = unitarize_intertwiner(&it)?;
    let tu = Transplantation::with_coefficients(&s.top, &s.mid, mid_cosets, &it, &u, &s.m1, &s.m2)?;
    let levels = per_k(ks, |k| {
        let o1 = build_operator(&s.m1.graph, &prep.conn1, k, &prep.q1)?;
        let o2 = build_operator(&s.m2.graph, &prep.conn2, k, &prep.q2)?;
        Ok(ResidualLevel {
            k,
            residual: tr.intertwining_residual(&o1, &o2)?,
            unitary_residual: tu.intertwining_residual(&o1, &o2)?,
        })
    })?;
    let rows: Vec<f64> = tr.matrix.row_iter().map(|r| r.sum()).collect();
    let scale = rows.first().copied().unwrap_or(0.0);
    let constant_section_defect = max_of(rows.iter().map(|r| (r - scale).abs()));
    let intertwiner = intertwiner_report(&s.mid, &it)?;
    let max_residual = max_of(levels.iter().map(|l| l.residual));
    let exact =
        intertwiner.summary.generator_residual == 0 && intertwiner.summary.element_residual == 0;
    Ok(TransplantReport {
        intertwiner,
        verdict: exact && max_residual < RESIDUAL_TOL,
        levels,
        max_residual,
        constant_section_scale: scale,
        constant_section_defect,
        bound: RESIDUAL_TOL,
    })
}

/// `Ĥ_k` on both quotients for `k ≥ 1`; `Q` does not enter.
pub fn quantum(prep: &Prepared<'_>, ks: &[i64], tol: f64) -> Result<QuantumReport> {
    if let Some(&k) = ks.iter().find(|&&k| k <= 0) {
        return Err(Error::BadK(k));
    }
    let s = prep.scenario;
    let constant = prep.constant_curvature();
    let side1 = QuantumSide {
        graph: &s.m1.graph,
        connection: &prep.conn1,
        curvature: &prep.r1,
    };
    let side2 = QuantumSide {
        graph: &s.m2.graph,
        connection: &prep.conn2,
        curvature: &prep.r2,
    };
    let levels = per_k(ks, |k| {
        let e1 = quantum_spectrum(&side1, k)?;
        let e2 = quantum_spectrum(&side2, k)?;
        let gap = compare_spectra(&e1, &e2, tol)?.max_gap;
        let affine_defect = match constant {
            Some(r) => {
                let n = s.m1.graph.vertex_count;
                let plain = spectrum(&s.m1.graph, &prep.conn1, k, &Potential::zero(n))?;
                let kf = k as f64;
                Some(max_of(
                    plain
                        .iter()
                        .zip(&e1)
                        .map(|(l, h)| ((l + r / 6.0) / (2.0 * kf * kf) - h).abs()),
                ))
            }
            None => None,
        };
        Ok(QuantumLevelReport {
            k,
            eigenvalues: e1,
            eigenvalues_m2: e2,
            gap,
            affine_defect,
        })
    })?;
    let max_gap = max_of(levels.iter().map(|l| l.gap));
    Ok(QuantumReport {
        tolerance: tol,
        curvature_constant: constant,
        verdict: levels.iter().all(|l| l.gap <= tol),
        max_gap,
        levels,
    })
}

/// `(∇₁, Q₁)` against `(σ*∇₂, σ*Q₂)` on the single quotient `M₁`.
pub fn brooks(prep: &Prepared<'_>, ks: &[i64], tol: f64) -> Result<BrooksReport> {
    let s = prep.scenario;
    let tau = s
        .tau
        .ok_or_else(|| Error::validation("tau", "the Brooks construction needs tau"))?;
    let vg = &s.voltage_graph;
    let pulled = pullback_by_sigma(vg, &prep.conn2, tau, &s.m1, &s.m2)?;
    let pulled_q = pullback_potential_by_sigma(vg, &prep.q2, tau, &s.m1, &s.m2)?;
    let levels = per_k(ks, |k| {
        let a = spectrum(&s.m1.graph, &prep.conn1, k, &prep.q1)?;
        let b = spectrum(&s.m1.graph, &pulled, k, &pulled_q)?;
        let c = compare_spectra(&a, &b, tol)?;
        Ok(GapLevel {
            k,
            gap: c.max_gap,
            equal: c.equal,
        })
    })?;
    let holonomy = holonomy_report(&s.m1.graph, &prep.conn1)?;
    let holonomy_pullback = holonomy_report(&s.m1.graph, &pulled)?;
    let holonomy_difference = holonomy.max_difference(&holonomy_pullback)?;
    let connections_differ = holonomy != holonomy_pullback;
    let spectra_equal = levels.iter().all(|l| l.equal);
    Ok(BrooksReport {
        tau: s.top.element(tau).to_string(),
        tolerance: tol,
        max_gap: max_of(levels.iter().map(|l| l.gap)),
        levels,
        holonomy,
        holonomy_pullback,
        holonomy_difference,
        connections_differ,
        verdict: spectra_equal && connections_differ,
    })
}

/// Options a CLI invocation may override.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub k_range: Option<(i64, i64)>,
    pub tolerance: Option<f64>,
}

pub fn k_values(range: (i64, i64)) -> Vec<i64> {
    (range.0..=range.1).collect()
}

/// Full pipeline: verify, build, spectra, compare, transplant, quantize,
/// and the Brooks pair when `τ` is given.
pub fn run_scenario(
    scn: &Scenario,
    opts: &RunOptions,
) -> Result<(RunReport, Vec<SpectrumLevel>, Timings)> {
    let seed = opts.seed.unwrap_or(scn.seed);
    let ks = k_values(opts.k_range.unwrap_or(scn.k_range));
    let tol = opts.tolerance.unwrap_or(scn.tolerance);
    let mut timings = Timings {
        threads: worker_threads(),
        ..Timings::default()
    };
    let mut stage = |name: &str, t: Instant| {
        timings
            .stages
            .insert(name.to_string(), t.elapsed().as_secs_f64());
    };

    let t = Instant::now();
    let gassmann = gassmann_verify(scn, seed)?;
    stage("gassmann", t);
    let t = Instant::now();
    let cover = cover_build(scn)?;
    let isomorphism = isocheck(scn)?;
    stage("cover", t);
    let t = Instant::now();
    let prep = Prepared::new(scn, seed)?;
    let levels = spectra(&prep, &ks)?;
    let spectra_report = gaps(&levels, tol)?;
    stage("spectra", t);
    let t = Instant::now();
    let transplant_report = if gassmann.almost_conjugate {
        Some(transplant(&prep, &ks)?)
    } else {
        None
    };
    stage("transplant", t);
    let t = Instant::now();
    let qks: Vec<i64> = ks.iter().copied().filter(|&k| k >= 1).collect();
    let quantum_report = if qks.is_empty() {
        None
    } else {
        Some(quantum(&prep, &qks, tol)?)
    };
    stage("quantum", t);
    let t = Instant::now();
    let brooks_report = if scn.tau.is_some() {
        Some(brooks(&prep, &ks, tol)?)
    } else {
        None
    };
    stage("brooks", t);
    let holonomy = HolonomyPair {
        m1: holonomy_report(&scn.m1.graph, &prep.conn1)?,
        m2: holonomy_report(&scn.m2.graph, &prep.conn2)?,
    };

    let verdict = gassmann.almost_conjugate
        && cover.verified()
        && spectra_report.verdict
        && transplant_report.as_ref().is_none_or(|r| r.verdict)
        && quantum_report.as_ref().is_none_or(|r| r.verdict)
        && brooks_report.as_ref().is_none_or(|r| r.verdict);
    let report = RunReport {
        provenance: Provenance {
            tool: TOOL_VERSION.to_string(),
            scenario: scn.name.clone(),
            inputs: scn.input_hashes.clone(),
            seed,
            data_seed: prep.data.seed,
        },
        gassmann,
        cover,
        isomorphism,
        spectra: spectra_report,
        transplant: transplant_report,
        quantum: quantum_report,
        brooks: brooks_report,
        holonomy,
        verdict,
    };
    Ok((report, levels, timings))
}

/// Writes `report.json`, `spectra_m1.tsv`, `spectra_m2.tsv` and
/// `timings.json` into `dir`.
pub fn write_run(
    dir: &Path,
    report: &RunReport,
    levels: &[SpectrumLevel],
    timings: &Timings,
) -> Result<()> {
    super::files::write_json(&dir.join("report.json"), report)?;
    write_text(
        &dir.join("spectra_m1.tsv"),
        &spectra_tsv(levels.iter().map(|l| (l.k, &l.m1[..]))),
    )?;
    write_text(
        &dir.join("spectra_m2.tsv"),
        &spectra_tsv(levels.iter().map(|l| (l.k, &l.m2[..]))),
    )?;
    super::files::write_json(&dir.join("timings.json"), timings)
}
