//! Acceptance suite: one numbered criterion per check, each printed as a
//! PASS/FAIL line. Runs without the libtest harness; exits non-zero if any
//! criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sunada_lab::cover::Multigraph;
use sunada_lab::fixtures;
use sunada_lab::group::{almost_conjugate_with, build_intertwiner, conjugacy_classes, PermGroup};
use sunada_lab::magnetic::{
    build_operator, eigenvalues, gauge_transform, holonomy_report, ConnectionData, Potential, Turn,
};
use sunada_lab::scenario::{self, mid_edge_tau_image, Prepared};

use common::{fixtures_dir, load, max_gap};

type Outcome = Result<String, String>;
type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const SEED: u64 = 1;
const K_ALL: std::ops::RangeInclusive<i64> = 0..=8;

fn ks(r: std::ops::RangeInclusive<i64>) -> Vec<i64> {
    r.collect()
}

fn zero_potential(prep: &mut Prepared<'_>) {
    prep.q1 = Potential::zero(prep.q1.values.len());
    prep.q2 = Potential::zero(prep.q2.values.len());
}

fn c1_gassmann(dir: &Path) -> Outcome {
    let start = Instant::now();
    let scn = load(dir, "fano");
    let report = scenario::gassmann_verify(&scn, SEED).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();

    let g = &scn.mid;
    let classes = common::classes(g);
    let c1 = common::class_counts(&classes, &scn.gamma1);
    let c2 = common::class_counts(&classes, &scn.gamma2);
    ensure!(g.order() == 168, "group order {}", g.order());
    ensure!(report.almost_conjugate, "reported not almost conjugate");
    ensure!(!report.conjugate, "reported conjugate");
    ensure!(
        c1 == c2,
        "brute-force class counts differ: {c1:?} vs {c2:?}"
    );
    ensure!(
        !common::conjugate(g, &scn.gamma1, &scn.gamma2),
        "brute force finds a conjugator"
    );
    let mut reported: Vec<(usize, usize, usize)> = report
        .classes
        .iter()
        .map(|c| (c.class_size, c.gamma1, c.gamma2))
        .collect();
    let mut oracle: Vec<(usize, usize, usize)> = classes
        .iter()
        .zip(c1.iter().zip(&c2))
        .map(|(c, (&a, &b))| (c.len(), a, b))
        .collect();
    reported.sort_unstable();
    oracle.sort_unstable();
    ensure!(
        reported == oracle,
        "class table {reported:?} vs oracle {oracle:?}"
    );
    ensure!(elapsed < 5.0, "took {elapsed:.2} s");
    Ok(format!(
        "{} classes, counts {c1:?}, {elapsed:.2} s",
        classes.len()
    ))
}

fn c2_bundles(dir: &Path) -> Outcome {
    let start = Instant::now();
    let scn = load(dir, "fano");
    let mut prep = Prepared::new(&scn, SEED).map_err(|e| e.to_string())?;
    zero_potential(&mut prep);
    let report = scenario::compare(&prep, &ks(K_ALL), 1e-8).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();
    ensure!(
        prep.conn1.phases.values().any(|t| !t.is_zero()),
        "connection is trivial"
    );
    ensure!(report.levels.len() == 9, "{} levels", report.levels.len());
    ensure!(report.max_gap < 1e-8, "max gap {:e}", report.max_gap);
    ensure!(elapsed < 10.0, "took {elapsed:.2} s");
    Ok(format!(
        "max gap {:.1e} over k = 0..8, {elapsed:.2} s",
        report.max_gap
    ))
}

fn c3_potentials(dir: &Path) -> Outcome {
    let scn = load(dir, "fano");
    let prep = Prepared::new(&scn, SEED).map_err(|e| e.to_string())?;
    let q = &prep.data.potential;
    ensure!(q.iter().any(|&v| v != q[0]), "potential is constant");
    let report = scenario::compare(&prep, &ks(K_ALL), 1e-8).map_err(|e| e.to_string())?;
    ensure!(report.max_gap < 1e-8, "max gap {:e}", report.max_gap);
    Ok(format!(
        "max gap {:.1e} with non-constant Q",
        report.max_gap
    ))
}

fn c4_transplant(dir: &Path) -> Outcome {
    let scn = load(dir, "fano");
    let prep = Prepared::new(&scn, SEED).map_err(|e| e.to_string())?;
    let report = scenario::transplant(&prep, &ks(K_ALL)).map_err(|e| e.to_string())?;
    ensure!(
        report.max_residual < 1e-10,
        "residual {:e}",
        report.max_residual
    );

    let g = &scn.mid;
    let it = build_intertwiner(g, &scn.gamma1, &scn.gamma2, SEED).map_err(|e| e.to_string())?;
    let t = it.matrix().to_rows();
    let (src, dst) = (it.source(), it.target());
    for gen in g.generator_indices() {
        for (r, row) in t.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                let moved = t[dst.act(g, r, gen)][src.act(g, c, gen)];
                ensure!(
                    moved == v,
                    "T ρ₁(g) ≠ ρ₂(g) T at ({r}, {c}) for generator {gen}"
                );
            }
        }
    }
    let float = nalgebra::DMatrix::from_fn(t.len(), t[0].len(), |r, c| t[r][c] as f64);
    let det = float.determinant();
    ensure!(det.abs() > 0.5, "intertwiner is singular (det {det})");
    Ok(format!(
        "residual {:.1e}, integer identity exact, det {det:.0}",
        report.max_residual
    ))
}

fn c5_quantum(dir: &Path) -> Outcome {
    let scn = load(dir, "fano");
    let prep = Prepared::new(&scn, SEED).map_err(|e| e.to_string())?;
    ensure!(prep.constant_curvature() == Some(-2.0), "R is not -2");
    let report = scenario::quantum(&prep, &ks(1..=8), 1e-10).map_err(|e| e.to_string())?;
    ensure!(report.max_gap < 1e-10, "quantum gap {:e}", report.max_gap);
    let graph = &scn.m1.graph;
    let mut affine: f64 = 0.0;
    for level in &report.levels {
        let k = level.k;
        let delta = build_operator(graph, &prep.conn1, k, &Potential::zero(graph.vertex_count))
            .and_then(|op| eigenvalues(&op))
            .map_err(|e| e.to_string())?;
        let predicted: Vec<f64> = delta
            .iter()
            .map(|l| (l - 1.0 / 3.0) / (2.0 * (k * k) as f64))
            .collect();
        affine = affine.max(max_gap(&predicted, &level.eigenvalues));
    }
    ensure!(affine < 1e-12, "affine defect {affine:e}");
    Ok(format!(
        "gap {:.1e}, affine defect {affine:.1e}",
        report.max_gap
    ))
}

fn c6_brooks(dir: &Path) -> Outcome {
    let scn = load(dir, "brooks");
    ensure!(
        scn.top.order() == 2 * scn.mid.order(),
        "[Ĝ:G] = {}",
        scn.top.order() / scn.mid.order()
    );
    let tau = scn.tau.ok_or("no tau")?;
    let top = &scn.top;
    let conj: BTreeSet<usize> = scn
        .gamma1_top
        .elements()
        .iter()
        .map(|&x| top.mul(top.mul(tau, x), top.inv(tau)))
        .collect();
    let g2: BTreeSet<usize> = scn.gamma2_top.elements().iter().copied().collect();
    ensure!(conj == g2, "τΓ₁τ⁻¹ ≠ Γ₂");

    let prep = Prepared::new(&scn, SEED).map_err(|e| e.to_string())?;
    let delta = prep
        .data
        .intermediate
        .as_ref()
        .ok_or("no intermediate phase")?;
    let broken = (0..scn.mid_quotient.graph.edge_count()).any(|e| {
        let img = mid_edge_tau_image(&scn, tau, e);
        delta.phases[&e] != delta.phases[&img]
    });
    ensure!(broken, "δ is τ-invariant");

    let report = scenario::brooks(&prep, &ks(K_ALL), 1e-8).map_err(|e| e.to_string())?;
    ensure!(report.max_gap < 1e-8, "gap {:e}", report.max_gap);
    ensure!(
        report.holonomy_difference >= 0.1,
        "holonomy difference {}",
        report.holonomy_difference
    );
    Ok(format!(
        "gap {:.1e}, holonomy difference {:.3} rad",
        report.max_gap, report.holonomy_difference
    ))
}

fn c7_negative(dir: &Path) -> Outcome {
    let scn = load(dir, "s4_negative");
    let classes = common::classes(&scn.mid);
    let c1 = common::class_counts(&classes, &scn.gamma1);
    let c2 = common::class_counts(&classes, &scn.gamma2);
    ensure!(c1 != c2, "brute force says almost conjugate");
    let report = scenario::gassmann_verify(&scn, SEED).map_err(|e| e.to_string())?;
    ensure!(!report.almost_conjugate, "reported almost conjugate");
    let mut gaps = Vec::new();
    for seed in 0..5 {
        let prep = Prepared::new(&scn, seed).map_err(|e| e.to_string())?;
        gaps.push(
            scenario::compare(&prep, &ks(K_ALL), 1e-8)
                .map_err(|e| e.to_string())?
                .max_gap,
        );
    }
    ensure!(gaps.iter().any(|&g| g > 1e-6), "gaps {gaps:?}");
    let shown: Vec<String> = gaps.iter().map(|g| format!("{g:.2}")).collect();
    Ok(format!(
        "not almost conjugate; per-seed max gaps [{}]",
        shown.join(", ")
    ))
}

fn c8_characters() -> Outcome {
    let groups: Vec<(&str, PermGroup)> = vec![
        ("S3", fixtures::symmetric_group(3)),
        ("S4", fixtures::symmetric_group(4)),
        ("D4", fixtures::dihedral_group(4)),
        ("Q8", fixtures::quaternion_group()),
        ("S3xS3", fixtures::s3_times_s3()),
    ];
    let mut summary = Vec::new();
    for (name, g) in &groups {
        let subs = common::two_generator_subgroups(g);
        let chars: Vec<Vec<usize>> = subs
            .iter()
            .map(|h| common::permutation_character(g, h))
            .collect();
        let classes = conjugacy_classes(g);
        let mut pairs = 0;
        let mut almost = 0;
        for i in 0..subs.len() {
            for j in i..subs.len() {
                let ac = almost_conjugate_with(g, &classes, &subs[i], &subs[j]).verdict;
                ensure!(
                    ac == (chars[i] == chars[j]),
                    "{name}: subgroups {i} and {j} disagree (almost conjugate = {ac})"
                );
                pairs += 1;
                almost += ac as usize;
            }
        }
        summary.push(format!(
            "{name} {} subgroups/{pairs} pairs/{almost} ac",
            subs.len()
        ));
    }
    Ok(summary.join("; "))
}

fn c9_cycles() -> Outcome {
    let phases = [(0, 1), (1, 7), (2, 5), (1, 2), (5, 12), (-3, 11)];
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 1..=12 {
        let graph = Multigraph::cycle(n);
        for &(p, q) in &phases {
            let turn = Turn::new(p, q).map_err(|e| e.to_string())?;
            let conn = ConnectionData::from_turns(vec![turn; n]);
            let theta = 2.0 * std::f64::consts::PI * p as f64 / q as f64;
            for k in K_ALL {
                let got = build_operator(&graph, &conn, k, &Potential::zero(n))
                    .and_then(|op| eigenvalues(&op))
                    .map_err(|e| e.to_string())?;
                let gap = max_gap(&got, &common::cycle_spectrum(n, k, theta));
                ensure!(gap < 1e-10, "C{n}, phase {p}/{q}, k = {k}: gap {gap:e}");
                worst = worst.max(gap);
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases, max deviation {worst:.1e}"))
}

fn random_connection(graph: &Multigraph, rng: &mut ChaCha8Rng) -> ConnectionData {
    ConnectionData::from_turns(
        (0..graph.edge_count())
            .map(|_| {
                let den = rng.gen_range(1..=360);
                Turn::new(rng.gen_range(0..den), den).unwrap()
            })
            .collect(),
    )
}

fn c10_gauge_and_powers(dir: &Path) -> Outcome {
    let fano = load(dir, "fano");
    let prep = Prepared::new(&fano, SEED).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let c6 = Multigraph::cycle(6);
    let c6_conn = random_connection(&c6, &mut rng);
    let cases: [(&Multigraph, &ConnectionData, Potential); 2] = [
        (&c6, &c6_conn, Potential::zero(6)),
        (&fano.m1.graph, &prep.conn1, prep.q1.clone()),
    ];
    let mut worst: f64 = 0.0;
    for (graph, conn, q) in &cases {
        let hol = holonomy_report(graph, conn).map_err(|e| e.to_string())?;
        let base: Vec<Vec<f64>> = K_ALL
            .map(|k| build_operator(graph, conn, k, q).and_then(|op| eigenvalues(&op)))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for seed in 0..100u64 {
            let mut g = ChaCha8Rng::seed_from_u64(seed);
            let gauge: Vec<Turn> = (0..graph.vertex_count)
                .map(|_| {
                    let den = g.gen_range(1..=360);
                    Turn::new(g.gen_range(-den..den), den).unwrap()
                })
                .collect();
            let moved = gauge_transform(graph, conn, &gauge).map_err(|e| e.to_string())?;
            let moved_hol = holonomy_report(graph, &moved).map_err(|e| e.to_string())?;
            ensure!(moved_hol == hol, "gauge seed {seed} changed the holonomy");
            for (k, spec) in K_ALL.zip(&base) {
                let e = build_operator(graph, &moved, k, q)
                    .and_then(|op| eigenvalues(&op))
                    .map_err(|e| e.to_string())?;
                let gap = max_gap(spec, &e);
                ensure!(gap < 1e-12, "gauge seed {seed}, k = {k}: gap {gap:e}");
                worst = worst.max(gap);
            }
        }

        for k in K_ALL {
            let power = conn.tensor_power(k);
            for (e, t) in &conn.phases {
                let expected = Turn::new(
                    i64::try_from(t.numer()).unwrap() * k,
                    i64::try_from(t.denom()).unwrap(),
                )
                .unwrap();
                ensure!(
                    power.phases[e] == expected,
                    "edge {e}, k = {k}: power phase is not k times"
                );
            }
            let ph = holonomy_report(graph, &power).map_err(|e| e.to_string())?;
            for (a, b) in ph.cycles.iter().zip(&hol.cycles) {
                ensure!(
                    a.holonomy.congruent(&b.holonomy.scale(k)),
                    "holonomy of power {k} is not k times"
                );
            }
        }
    }
    Ok(format!(
        "200 gauges, max spectral drift {worst:.1e}; power law exact"
    ))
}

fn main() {
    let dir = fixtures_dir();
    let criteria: Vec<(&str, Criterion)> = vec![
        (
            "Gassmann verification (Fano, order 168)",
            Box::new(|| c1_gassmann(dir.path())),
        ),
        (
            "bundle isospectrality, k = 0..8",
            Box::new(|| c2_bundles(dir.path())),
        ),
        (
            "isospectrality with invariant potential",
            Box::new(|| c3_potentials(dir.path())),
        ),
        (
            "exact transplantation",
            Box::new(|| c4_transplant(dir.path())),
        ),
        (
            "quantum equivalence and affine law",
            Box::new(|| c5_quantum(dir.path())),
        ),
        (
            "Brooks pair on one quotient",
            Box::new(|| c6_brooks(dir.path())),
        ),
        (
            "negative control (S4)",
            Box::new(|| c7_negative(dir.path())),
        ),
        ("character criterion, exhaustive", Box::new(c8_characters)),
        ("closed-form cycle spectra", Box::new(c9_cycles)),
        (
            "gauge invariance and power law",
            Box::new(|| c10_gauge_and_powers(dir.path())),
        ),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
