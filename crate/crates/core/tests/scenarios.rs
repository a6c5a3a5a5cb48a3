mod common;

use std::fs;

use sunada_lab::cover::IsoVerdict;
use sunada_lab::magnetic::Potential;
use sunada_lab::scenario::{self, files::ScenarioFile, Prepared, RunOptions, Scenario};
use sunada_lab::Error;

#[test]
fn runs_are_byte_reproducible() {
    let dir = common::fixtures_dir();
    let scn = common::load(dir.path(), "fano");
    let out = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for run in ["a", "b"] {
        let (report, levels, timings) =
            scenario::run_scenario(&scn, &RunOptions::default()).unwrap();
        let target = out.path().join(run);
        scenario::write_run(&target, &report, &levels, &timings).unwrap();
        reports.push((
            fs::read(target.join("report.json")).unwrap(),
            fs::read(target.join("spectra_m1.tsv")).unwrap(),
        ));
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn report_provenance_names_every_input() {
    let dir = common::fixtures_dir();
    let scn = common::load(dir.path(), "brooks");
    let (report, _, _) = scenario::run_scenario(&scn, &RunOptions::default()).unwrap();
    assert!(report.verdict);
    let inputs = &report.provenance.inputs;
    assert!(inputs.keys().any(|k| k.ends_with("brooks.json")));
    assert!(
        inputs.keys().any(|k| k == "groups/gl32_duality.json"),
        "{inputs:?}"
    );
    assert!(inputs.values().all(|h| h.len() == 64));
}

#[test]
fn negative_control_separates_spectra_for_every_seed() {
    let dir = common::fixtures_dir();
    let scn = common::load(dir.path(), "s4_negative");
    for seed in 0..5 {
        let prep = Prepared::new(&scn, seed).unwrap();
        let r = scenario::compare(&prep, &scenario::k_values((0, 8)), 1e-8).unwrap();
        assert!(r.max_gap > 1e-6, "seed {seed}: {}", r.max_gap);
    }
}

#[test]
fn degenerate_pair_is_trivially_isospectral() {
    let dir = common::fixtures_dir();
    let scn = common::load(dir.path(), "degenerate");
    let prep = Prepared::new(&scn, 4).unwrap();
    let r = scenario::compare(&prep, &scenario::k_values((0, 8)), 1e-8).unwrap();
    assert_eq!(r.max_gap, 0.0);
    assert_eq!(
        scenario::isocheck(&scn).unwrap().certificate.verdict,
        IsoVerdict::Isomorphic
    );
}

#[test]
fn bouquet_quotients_are_isospectral_but_not_isomorphic() {
    let dir = common::fixtures_dir();
    let scn = common::load(dir.path(), "fano_bouquet");
    let mut prep = Prepared::new(&scn, 2).unwrap();
    prep.q1 = Potential::zero(7);
    prep.q2 = Potential::zero(7);
    let r = scenario::compare(&prep, &scenario::k_values((0, 8)), 1e-8).unwrap();
    assert!(r.verdict, "{}", r.max_gap);
    assert_eq!(
        scenario::isocheck(&scn).unwrap().certificate.verdict,
        IsoVerdict::NonIsomorphic
    );
}

#[test]
fn zero_connection_gives_plain_laplacian() {
    let dir = common::fixtures_dir();
    let path = dir.path().join("fano.json");
    let mut file: ScenarioFile = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    file.connection = serde_json::from_str(r#"{"mode":"zero"}"#).unwrap();
    file.potential = serde_json::from_str(r#"{"mode":"zero"}"#).unwrap();
    let zpath = dir.path().join("fano_zero.json");
    fs::write(&zpath, serde_json::to_string(&file).unwrap()).unwrap();
    let scn = Scenario::load(&zpath).unwrap();
    let prep = Prepared::new(&scn, 0).unwrap();
    assert!(prep.conn1.phases.values().all(|t| t.is_zero()));
    let levels = scenario::spectra(&prep, &[0, 3]).unwrap();
    assert_eq!(levels[0].m1, levels[1].m1);
    assert!(levels[0].m1[0].abs() < 1e-12);
}

#[test]
fn cover_level_potential_must_be_invariant() {
    let dir = common::fixtures_dir();
    let scn = common::load(dir.path(), "fano");
    let cover_vertices = scn.voltage_graph.base.graph.vertex_count * scn.top.order();
    let values: Vec<serde_json::Value> = (0..cover_vertices)
        .map(|v| serde_json::json!({"vertex": v, "q": v as f64}))
        .collect();
    let field = serde_json::json!({"level": "cover", "values": values});
    fs::write(dir.path().join("cover_q.json"), field.to_string()).unwrap();

    let path = dir.path().join("fano.json");
    let mut file: ScenarioFile = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    file.potential = serde_json::from_str(r#"{"mode":"file","path":"cover_q.json"}"#).unwrap();
    let bad = dir.path().join("fano_cover_q.json");
    fs::write(&bad, serde_json::to_string(&file).unwrap()).unwrap();
    match Scenario::load(&bad) {
        Err(Error::NotInvariant { field, .. }) => assert_eq!(field, "potential"),
        other => panic!("expected NotInvariant, got {other:?}"),
    }
}

#[test]
fn every_invalid_fixture_names_its_field() {
    let dir = tempfile::tempdir().unwrap();
    for f in scenario::bundled::write_invalid(dir.path()).unwrap() {
        match Scenario::load(&f.path) {
            Err(Error::ValidationFailed { field, .. }) => {
                assert_eq!(field, f.field, "{}", f.path.display())
            }
            other => panic!(
                "{}: expected ValidationFailed, got {other:?}",
                f.path.display()
            ),
        }
    }
}
