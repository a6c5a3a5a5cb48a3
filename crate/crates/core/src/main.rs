use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sunada_lab::cover::IsoVerdict;
use sunada_lab::scenario::report::{format_sig, spectra_tsv, write_text, GapLevel, TOOL_VERSION};
use sunada_lab::scenario::{self, bundled, Prepared, RunOptions, Scenario};
use sunada_lab::{Error, Result};

#[derive(Parser)]
#[command(
    name = "sunada-lab",
    version,
    about = "Isospectral magnetic line bundles on Sunada graph quotients"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gassmann-pair checks.
    #[command(subcommand)]
    Gassmann(GassmannCommand),
    /// Derived covers and quotients.
    #[command(subcommand)]
    Cover(CoverCommand),
    /// Sorted spectra of the magnetic operator on both quotients.
    Spectra(Common),
    /// Per-k spectral gaps between the two quotients.
    Compare(Common),
    /// Exact intertwiner and transplantation residuals.
    Transplant(Common),
    /// Quantum Hamiltonian spectra (k ≥ 1).
    Quantum(Common),
    /// Two connections on one quotient via the normalizing element tau.
    Brooks(Common),
    /// Graph isomorphism of the quotients, or of two graph files.
    Isocheck(IsoArgs),
    /// Full pipeline; writes report.json, spectra TSVs and timings.json.
    Run(Common),
    /// Writes the bundled scenarios and invalid fixtures.
    Fixtures {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum GassmannCommand {
    Verify(Common),
    Search(SearchArgs),
}

#[derive(Subcommand)]
enum CoverCommand {
    Build(Common),
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Json,
    Tsv,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    scenario: PathBuf,
    /// Inclusive range `LO..HI`.
    #[arg(long, value_parser = parse_k_range)]
    k: Option<(i64, i64)>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, conflicts_with = "group", required_unless_present = "group")]
    scenario: Option<PathBuf>,
    /// Group file to search instead of a scenario's intermediate group.
    #[arg(long)]
    group: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    max_generators: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct IsoArgs {
    #[arg(long, required_unless_present_all = ["a", "b"], conflicts_with_all = ["a", "b"])]
    scenario: Option<PathBuf>,
    #[arg(long, requires = "b")]
    a: Option<PathBuf>,
    #[arg(long, requires = "a")]
    b: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn parse_k_range(s: &str) -> std::result::Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got `{s}`"))?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: i64 = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

/// Common wrapper for every command's JSON output.
#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    command: &'a str,
    scenario: Option<String>,
    inputs: BTreeMap<String, String>,
    seed: Option<u64>,
    verdict: bool,
    result: T,
}

struct Outcome {
    verdict: bool,
    json: String,
    tsv: String,
}

fn outcome<T: Serialize>(
    command: &str,
    scn: Option<&Scenario>,
    seed: Option<u64>,
    verdict: bool,
    result: T,
    tsv: String,
) -> Outcome {
    let env = Envelope {
        tool: TOOL_VERSION,
        command,
        scenario: scn.map(|s| s.name.clone()),
        inputs: scn.map(|s| s.input_hashes.clone()).unwrap_or_default(),
        seed,
        verdict,
        result,
    };
    let mut json = serde_json::to_string_pretty(&env).expect("serializable");
    json.push('\n');
    Outcome { verdict, json, tsv }
}

fn gap_tsv(levels: &[GapLevel]) -> String {
    let mut s = String::from("k\tgap\tequal\n");
    for l in levels {
        writeln!(s, "{}\t{}\t{}", l.k, format_sig(l.gap), l.equal).unwrap();
    }
    s
}

fn paired_tsv<'a>(rows: impl IntoIterator<Item = (i64, &'a [f64], &'a [f64])>) -> String {
    let mut s = String::from("k\tindex\tm1\tm2\n");
    for (k, a, b) in rows {
        for (i, (x, y)) in a.iter().zip(b).enumerate() {
            writeln!(s, "{k}\t{i}\t{}\t{}", format_sig(*x), format_sig(*y)).unwrap();
        }
    }
    s
}

struct Ctx<'a> {
    scn: Scenario,
    args: &'a Common,
}

impl Ctx<'_> {
    fn seed(&self) -> u64 {
        self.args.seed.unwrap_or(self.scn.seed)
    }
    fn ks(&self, default: (i64, i64)) -> Vec<i64> {
        scenario::k_values(self.args.k.unwrap_or(default))
    }
    fn tol(&self) -> f64 {
        self.args.tol.unwrap_or(self.scn.tolerance)
    }
}

fn load(args: &Common) -> Result<Ctx<'_>> {
    Ok(Ctx {
        scn: Scenario::load(&args.scenario)?,
        args,
    })
}

fn emit(out: Option<&Path>, name: &str, format: Format, o: &Outcome) -> Result<()> {
    match format {
        Format::Json => print!("{}", o.json),
        Format::Tsv => print!("{}", o.tsv),
    }
    if let Some(dir) = out {
        write_text(&dir.join(format!("{name}.json")), &o.json)?;
        if !o.tsv.is_empty() {
            write_text(&dir.join(format!("{name}.tsv")), &o.tsv)?;
        }
    }
    Ok(())
}

fn scenario_command(name: &str, args: &Common) -> Result<bool> {
    let ctx = load(args)?;
    let scn = &ctx.scn;
    let seed = ctx.seed();
    let o = match name {
        "gassmann-verify" => {
            let r = scenario::gassmann_verify(scn, seed)?;
            let exact = r.intertwiner.as_ref().is_some_and(|i| {
                i.summary.generator_residual == 0 && i.summary.element_residual == 0
            });
            let verdict = r.almost_conjugate && r.characters_agree && exact;
            let mut tsv = String::from("class\tsize\tgamma1\tgamma2\n");
            for c in &r.classes {
                writeln!(
                    tsv,
                    "{}\t{}\t{}\t{}",
                    c.representative, c.class_size, c.gamma1, c.gamma2
                )
                .unwrap();
            }
            outcome(name, Some(scn), Some(seed), verdict, r, tsv)
        }
        "cover-build" => {
            let r = scenario::cover_build(scn)?;
            let mut tsv = String::from("graph\tvertices\tedges\tcomponents\n");
            for (label, g) in [
                ("base", &r.base),
                ("cover", &r.cover),
                ("intermediate", &r.intermediate),
                ("m1", &r.m1),
                ("m2", &r.m2),
            ] {
                writeln!(
                    tsv,
                    "{label}\t{}\t{}\t{}",
                    g.vertices, g.edges, g.components
                )
                .unwrap();
            }
            outcome(name, Some(scn), None, r.verified(), r, tsv)
        }
        "spectra" => {
            let prep = Prepared::new(scn, seed)?;
            let levels = scenario::spectra(&prep, &ctx.ks(scn.k_range))?;
            if let Some(dir) = &args.out {
                write_text(
                    &dir.join("spectra_m1.tsv"),
                    &spectra_tsv(levels.iter().map(|l| (l.k, &l.m1[..]))),
                )?;
                write_text(
                    &dir.join("spectra_m2.tsv"),
                    &spectra_tsv(levels.iter().map(|l| (l.k, &l.m2[..]))),
                )?;
            }
            let tsv = paired_tsv(levels.iter().map(|l| (l.k, &l.m1[..], &l.m2[..])));
            outcome(name, Some(scn), Some(seed), true, levels, tsv)
        }
        "compare" => {
            let prep = Prepared::new(scn, seed)?;
            let r = scenario::compare(&prep, &ctx.ks(scn.k_range), ctx.tol())?;
            let tsv = gap_tsv(&r.levels);
            outcome(name, Some(scn), Some(seed), r.verdict, r, tsv)
        }
        "transplant" => {
            let prep = Prepared::new(scn, seed)?;
            let r = scenario::transplant(&prep, &ctx.ks(scn.k_range))?;
            let mut tsv = String::from("k\tresidual\tunitary_residual\n");
            for l in &r.levels {
                writeln!(
                    tsv,
                    "{}\t{}\t{}",
                    l.k,
                    format_sig(l.residual),
                    format_sig(l.unitary_residual)
                )
                .unwrap();
            }
            outcome(name, Some(scn), Some(seed), r.verdict, r, tsv)
        }
        "quantum" => {
            let prep = Prepared::new(scn, seed)?;
            let default = (scn.k_range.0.max(1), scn.k_range.1.max(1));
            let r = scenario::quantum(&prep, &ctx.ks(default), ctx.tol())?;
            let tsv = paired_tsv(
                r.levels
                    .iter()
                    .map(|l| (l.k, &l.eigenvalues[..], &l.eigenvalues_m2[..])),
            );
            outcome(name, Some(scn), Some(seed), r.verdict, r, tsv)
        }
        "brooks" => {
            let prep = Prepared::new(scn, seed)?;
            let r = scenario::brooks(&prep, &ctx.ks(scn.k_range), ctx.tol())?;
            let tsv = gap_tsv(&r.levels);
            outcome(name, Some(scn), Some(seed), r.verdict, r, tsv)
        }
        "run" => {
            let opts = RunOptions {
                seed: args.seed,
                k_range: args.k,
                tolerance: args.tol,
            };
            let (report, levels, timings) = scenario::run_scenario(scn, &opts)?;
            if let Some(dir) = args.out.as_ref().or(scn.output.as_ref()) {
                scenario::write_run(dir, &report, &levels, &timings)?;
            }
            let tsv = gap_tsv(&report.spectra.levels);
            let verdict = report.verdict;
            let o = outcome(name, Some(scn), Some(seed), verdict, report, tsv);
            match args.format {
                Format::Json => print!("{}", o.json),
                Format::Tsv => print!("{}", o.tsv),
            }
            return Ok(verdict);
        }
        _ => unreachable!("unknown command {name}"),
    };
    emit(args.out.as_deref(), name, args.format, &o)?;
    Ok(o.verdict)
}

fn search(args: &SearchArgs) -> Result<bool> {
    let (report, scn) = match (&args.group, &args.scenario) {
        (Some(g), _) => (scenario::search_group_file(g, args.max_generators)?, None),
        (None, Some(p)) => {
            let scn = Scenario::load(p)?;
            (
                scenario::search_group(&scn.mid, args.max_generators)?,
                Some(scn),
            )
        }
        (None, None) => return Err(Error::validation("scenario", "give --scenario or --group")),
    };
    let mut tsv = String::from("pair\th1_order\th2_order\n");
    for (i, p) in report.pairs.iter().enumerate() {
        writeln!(tsv, "{i}\t{}\t{}", p.h1.order, p.h2.order).unwrap();
    }
    let verdict = !report.pairs.is_empty();
    let o = outcome("gassmann-search", scn.as_ref(), None, verdict, report, tsv);
    emit(args.out.as_deref(), "gassmann-search", args.format, &o)?;
    Ok(verdict)
}

fn isocheck(args: &IsoArgs) -> Result<bool> {
    let (report, scn) = match (&args.scenario, &args.a, &args.b) {
        (Some(p), _, _) => {
            let scn = Scenario::load(p)?;
            (scenario::isocheck(&scn)?, Some(scn))
        }
        (None, Some(a), Some(b)) => (scenario::isocheck_files(a, b)?, None),
        _ => {
            return Err(Error::validation(
                "scenario",
                "give --scenario or both --a and --b",
            ))
        }
    };
    let verdict = report.certificate.verdict == IsoVerdict::Isomorphic;
    let tsv = format!(
        "verdict\tsearch_nodes\n{}\t{}\n",
        if verdict {
            "isomorphic"
        } else {
            "non_isomorphic"
        },
        report.certificate.search_nodes
    );
    let o = outcome("isocheck", scn.as_ref(), None, verdict, report, tsv);
    emit(args.out.as_deref(), "isocheck", args.format, &o)?;
    Ok(verdict)
}

fn dispatch(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Gassmann(GassmannCommand::Verify(a)) => scenario_command("gassmann-verify", a),
        Command::Gassmann(GassmannCommand::Search(a)) => search(a),
        Command::Cover(CoverCommand::Build(a)) => scenario_command("cover-build", a),
        Command::Spectra(a) => scenario_command("spectra", a),
        Command::Compare(a) => scenario_command("compare", a),
        Command::Transplant(a) => scenario_command("transplant", a),
        Command::Quantum(a) => scenario_command("quantum", a),
        Command::Brooks(a) => scenario_command("brooks", a),
        Command::Isocheck(a) => isocheck(a),
        Command::Run(a) => scenario_command("run", a),
        Command::Fixtures { out } => {
            for p in bundled::write_all(out)? {
                println!("{}", p.display());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
