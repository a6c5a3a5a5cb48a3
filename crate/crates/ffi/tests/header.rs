//! Compiles and runs a C program against the generated header and the
//! static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "sunada_lab.h"

int main(int argc, char **argv) {
    if (argc < 2) return 10;
    SlScenario *s = NULL;
    if (sl_scenario_load(argv[1], &s) != SL_OK) {
        fprintf(stderr, "%s\n", sl_last_error());
        return 11;
    }
    double gap = -1.0;
    SlStatus st = sl_scenario_compare(s, 1, 0, 3, 1e-8, &gap);
    sl_scenario_free(s);
    if (st != SL_OK || gap < 0.0 || gap > 1e-8) return 12;

    SlGroup *g = NULL;
    if (sl_group_from_json("{\"name\":\"c3\",\"degree\":3,\"generators\":[[1,2,0]]}", &g) != SL_OK) return 13;
    size_t order = 0;
    sl_group_order(g, &order);
    sl_group_free(g);
    if (order != 3) return 14;

    if (sl_scenario_load(NULL, &s) != SL_INVALID_ARGUMENT) return 15;
    printf("%s ok\n", sl_version());
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<this test>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler found; skipping");
        return;
    }
    let lib = target_dir().join("libsunada_lab_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let out = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let scn = sunada_lab::scenario::bundled::write_fano(&dir.path().join("scn")).unwrap();
    let run = Command::new(&exe).arg(&scn).output().unwrap();
    assert!(
        run.status.success(),
        "exit {:?}: {}",
        run.status.code(),
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(String::from_utf8_lossy(&run.stdout).ends_with("ok\n"));
}
