//! `posetsat`: cube-height analysis, saturated-family construction and the
//! cube-width scan from the command line.
//!
//! Exit codes: 0 success, 2 input error, 3 size cap, 4 internal error,
//! 5 scan found `w* > |P|`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use posetsat::embedding::separation_witnesses;
use posetsat::enumerate::MAX_CANONICAL_SIZE;
use posetsat::ledger::ledger_from_result;
use posetsat::saturation::{DEFAULT_SAMPLES, FULL_VERIFY_MAX_GROUND, ORACLE_MAX_GROUND};
use posetsat::{
    canonical_form, catalog_from_str, check_separation, claim31_check, cube_width, enumerate_posets, exact_sat_oracle,
    greedy_saturated_family, random_poset, vc_dimension, verify_saturated, Error, Poset, SetFamily, VerifyMode,
};

const SCHEMA_VERSION: u32 = 1;
const SCAN_HEADER: &str = "canonical,size,cube_height,cube_width,conjecture_41";
const SCAN_DENSITIES: [f64; 4] = [0.15, 0.3, 0.5, 0.75];

#[derive(Parser)]
#[command(
    name = "posetsat",
    version,
    about = "Cube-height, cube-width and induced saturation of finite posets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Height, width, cube-height, cube-width, witness and bound ledger.
    Analyze {
        #[command(flatten)]
        source: PosetSource,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build a greedy saturated family in the n-cube and verify it.
    Saturate {
        #[command(flatten)]
        source: PosetSource,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        verify: VerifyArgs,
        /// Include per-layer accept/reject counts of the greedy sweep.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verify that a given family is saturated for a poset.
    Verify {
        #[command(flatten)]
        source: PosetSource,
        /// Family JSON: {"ground", "members"} or {"ground", "masks"}.
        #[arg(long)]
        family: PathBuf,
        #[command(flatten)]
        verify: VerifyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// VC-dimension and Sauer-Shelah sum of a family.
    Vc {
        #[arg(long)]
        family: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// One row per poset with its cube-height, cube-width and `w* <= |P|`.
    ConjectureScan {
        /// Scan every isomorphism class of size 1..=max-size (at most 6).
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        max_size: Option<usize>,
        /// Scan seeded random posets instead.
        #[arg(long, requires = "size")]
        random: bool,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact minimum saturated family next to the greedy one (n <= 4, |P| <= 4).
    Oracle {
        #[command(flatten)]
        source: PosetSource,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PosetSource {
    /// Poset file: JSON {"size", "relations"} or text `k; i<j ...`.
    #[arg(long)]
    poset: Option<PathBuf>,
    /// Catalog poset `name[:param]`.
    #[arg(long)]
    catalog: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Defaults to full up to n = 20 and sample above.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OutputArgs {
    /// Defaults to csv for conjecture-scan and json elsewhere.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Full,
    Sample,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Cap(String),
    Internal(String),
    Violation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Cap(_) => 3,
            Failure::Internal(_) => 4,
            Failure::Violation(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Cap(m) | Failure::Internal(m) | Failure::Violation(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Size(_) => Failure::Cap(e.to_string()),
            Error::BudgetExhausted(_) | Error::Internal(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| run(cli.command));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

/// `POSETSAT_THREADS=0` selects the single-threaded reference mode.
fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("POSETSAT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Failure::Input(format!("POSETSAT_THREADS must be a non-negative integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n.max(1))
        .build_global()
        .map_err(|e| Failure::Internal(e.to_string()))
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Analyze { source, output } => analyze(&load_poset(&source)?, &output),
        Command::Saturate {
            source,
            n,
            verify,
            trace,
            output,
        } => saturate(&load_poset(&source)?, n, &verify, trace, &output),
        Command::Verify {
            source,
            family,
            verify,
            output,
        } => verify_family(&load_poset(&source)?, &load_family(&family)?, &verify, &output),
        Command::Vc { family, output } => vc(&load_family(&family)?, &output),
        Command::ConjectureScan {
            max_size,
            random,
            size,
            count,
            seed,
            output,
        } => {
            let posets = if random {
                random_scan_population(size.expect("clap requires --size"), count, seed)?
            } else {
                exhaustive_scan_population(max_size.expect("clap requires --max-size"))?
            };
            conjecture_scan(&posets, &output)
        }
        Command::Oracle { source, n, output } => oracle(&load_poset(&source)?, n, &output),
    }
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_poset(source: &PosetSource) -> CliResult<Poset> {
    match (&source.poset, &source.catalog) {
        (Some(path), None) => Ok(Poset::parse(&read_file(path)?)?),
        (None, Some(name)) => Ok(catalog_from_str(name)?),
        _ => Err(Failure::Input("exactly one of --poset or --catalog is required".into())),
    }
}

fn load_family(path: &Path) -> CliResult<SetFamily> {
    Ok(SetFamily::from_json(&read_file(path)?)?)
}

fn verify_mode(args: &VerifyArgs, n: usize) -> CliResult<VerifyMode> {
    let mode = args.mode.unwrap_or(if n <= FULL_VERIFY_MAX_GROUND {
        Mode::Full
    } else {
        Mode::Sample
    });
    match mode {
        Mode::Full if n > FULL_VERIFY_MAX_GROUND => Err(Failure::Cap(format!(
            "full verification is capped at n = {FULL_VERIFY_MAX_GROUND}; use --mode sample"
        ))),
        Mode::Full => Ok(VerifyMode::Full),
        Mode::Sample => Ok(VerifyMode::Sample {
            count: args.samples,
            seed: args.seed,
        }),
    }
}

fn envelope(command: &str, body: Value) -> Value {
    let mut doc = json!({ "schema_version": SCHEMA_VERSION, "command": command });
    if let (Some(doc), Value::Object(body)) = (doc.as_object_mut(), body) {
        doc.extend(body);
    }
    doc
}

fn emit(output: &OutputArgs, json_doc: &Value, csv: impl FnOnce() -> String) -> CliResult<()> {
    emit_as(output, Format::Json, json_doc, csv)
}

fn emit_as(output: &OutputArgs, default: Format, json_doc: &Value, csv: impl FnOnce() -> String) -> CliResult<()> {
    let text = match output.format.unwrap_or(default) {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(json_doc).map_err(|e| Failure::Internal(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => csv(),
    };
    match &output.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Internal(e.to_string())),
    }
}

fn to_value<T: serde::Serialize>(value: &T) -> CliResult<Value> {
    serde_json::to_value(value).map_err(|e| Failure::Internal(e.to_string()))
}

fn analyze(p: &Poset, output: &OutputArgs) -> CliResult<()> {
    let started = Instant::now();
    let hw = cube_width(p)?;
    let ledger = ledger_from_result(p, &hw);
    let separation = check_separation(&hw.witness);
    let doc = envelope(
        "analyze",
        json!({
            "poset": p.to_dsl(),
            "size": p.size(),
            "height": p.height(),
            "width": p.width(),
            "maximal_elements": p.maximal_elements(),
            "cube_height": hw.cube_height,
            "cube_width": hw.cube_width,
            "witness": hw.witness.to_json(),
            "ledger": to_value(&ledger)?,
            "separation": to_value(&separation)?,
            "wall_time_ms": started.elapsed().as_millis() as u64,
        }),
    );
    if !ledger.all_hold() {
        return Err(Failure::Internal(format!("bound ledger violated for {}", p.to_dsl())));
    }
    emit(output, &doc, || {
        format!(
            "poset,size,height,width,cube_height,cube_width,ledger_holds,separates\n{},{},{},{},{},{},{},{}\n",
            p.to_dsl(),
            p.size(),
            p.height(),
            p.width(),
            hw.cube_height,
            hw.cube_width,
            ledger.all_hold(),
            separation.separates
        )
    })
}

fn saturate(p: &Poset, n: usize, args: &VerifyArgs, trace: bool, output: &OutputArgs) -> CliResult<()> {
    let started = Instant::now();
    let mode = verify_mode(args, n)?;
    let (fam, greedy) = greedy_saturated_family(p, n)?;
    let mut report = verify_saturated(p, &fam, mode)?;
    report.warnings = greedy.warnings;
    if trace {
        report.greedy_trace = greedy.greedy_trace;
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let vc = vc_dimension(&fam)?;
    let claim = claim31_check(p, &fam)?;
    let doc = envelope(
        "saturate",
        json!({
            "saturation": to_value(&report)?,
            "vc": to_value(&vc)?,
            "claim31": to_value(&claim)?,
            "wall_time_ms": started.elapsed().as_millis() as u64,
        }),
    );
    if !report.p_free || !report.saturated {
        return Err(Failure::Internal(format!(
            "greedy family failed verification (p_free = {}, saturated = {}, counterexample = {:?})",
            report.p_free, report.saturated, report.counterexample
        )));
    }
    emit(output, &doc, || {
        format!(
            "poset,n,family_size,p_free,saturated,sample_mode,vc_dimension,claim31\n{},{},{},{},{},{},{},{}\n",
            p.to_dsl(),
            n,
            fam.len(),
            report.p_free,
            report.saturated,
            report.sample_mode,
            vc.dimension.map(|d| d.to_string()).unwrap_or_default(),
            claim.all_hold()
        )
    })
}

fn verify_family(p: &Poset, fam: &SetFamily, args: &VerifyArgs, output: &OutputArgs) -> CliResult<()> {
    let started = Instant::now();
    let report = verify_saturated(p, fam, verify_mode(args, fam.ground())?)?;
    let doc = envelope(
        "verify",
        json!({
            "saturation": to_value(&report)?,
            "separation": to_value(&separation_witnesses(fam.ground(), fam.members()))?,
            "wall_time_ms": started.elapsed().as_millis() as u64,
        }),
    );
    emit(output, &doc, || {
        format!(
            "poset,n,family_size,p_free,saturated,sample_mode\n{},{},{},{},{},{}\n",
            p.to_dsl(),
            fam.ground(),
            fam.len(),
            report.p_free,
            report.saturated,
            report.sample_mode
        )
    })
}

fn vc(fam: &SetFamily, output: &OutputArgs) -> CliResult<()> {
    let report = vc_dimension(fam)?;
    let doc = envelope("vc", to_value(&report)?);
    emit(output, &doc, || {
        format!(
            "ground,family_size,dimension,witness,sauer_shelah_sum\n{},{},{},{},{}\n",
            fam.ground(),
            report.family_size,
            report.dimension.map(|d| d.to_string()).unwrap_or_default(),
            report.witness.map(|w| format!("\"{w}\"")).unwrap_or_default(),
            report.sauer_shelah_sum
        )
    })
}

fn exhaustive_scan_population(max_size: usize) -> CliResult<Vec<Poset>> {
    if !(1..=posetsat::enumerate::MAX_ENUMERATION_SIZE).contains(&max_size) {
        return Err(Failure::Cap(format!(
            "exhaustive scan needs 1 <= --max-size <= {}, got {max_size}",
            posetsat::enumerate::MAX_ENUMERATION_SIZE
        )));
    }
    let mut out = Vec::new();
    for k in 1..=max_size {
        out.extend(enumerate_posets(k)?);
    }
    Ok(out)
}

/// Poset `i` uses seed `seed + i` and density `SCAN_DENSITIES[i % 4]`.
fn random_scan_population(size: usize, count: usize, seed: u64) -> CliResult<Vec<Poset>> {
    if !(1..=MAX_CANONICAL_SIZE).contains(&size) {
        return Err(Failure::Cap(format!(
            "random scan needs 1 <= --size <= {MAX_CANONICAL_SIZE}, got {size}"
        )));
    }
    (0..count)
        .map(|i| Ok(random_poset(size, SCAN_DENSITIES[i % 4], seed.wrapping_add(i as u64))?))
        .collect()
}

struct ScanRow {
    canonical: String,
    size: usize,
    cube_height: usize,
    cube_width: usize,
    conjecture_41: bool,
}

fn conjecture_scan(posets: &[Poset], output: &OutputArgs) -> CliResult<()> {
    let mut rows = Vec::with_capacity(posets.len());
    for p in posets {
        let hw = cube_width(p)?;
        rows.push(ScanRow {
            canonical: canonical_form(p)?.to_poset().to_dsl(),
            size: p.size(),
            cube_height: hw.cube_height,
            cube_width: hw.cube_width,
            conjecture_41: hw.cube_width <= p.size(),
        });
    }
    let violations: Vec<&ScanRow> = rows.iter().filter(|r| !r.conjecture_41).collect();
    let doc = envelope(
        "conjecture-scan",
        json!({
            "rows": rows.iter().map(|r| json!({
                "canonical": r.canonical,
                "size": r.size,
                "cube_height": r.cube_height,
                "cube_width": r.cube_width,
                "conjecture_41": r.conjecture_41,
            })).collect::<Vec<_>>(),
            "violations": violations.len(),
        }),
    );
    let csv = || {
        let mut s = format!("{SCAN_HEADER}\n");
        for r in &rows {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                r.canonical,
                r.size,
                r.cube_height,
                r.cube_width,
                if r.conjecture_41 { "pass" } else { "FAIL" }
            ));
        }
        s
    };
    emit_as(output, Format::Csv, &doc, csv)?;
    if violations.is_empty() {
        return Ok(());
    }
    for r in &violations {
        eprintln!(
            "COUNTEREXAMPLE: poset `{}` has cube-width {} > |P| = {}. This would refute w* <= |P|; \
             re-check it independently before treating it as a finding.",
            r.canonical, r.cube_width, r.size
        );
    }
    Err(Failure::Violation(format!(
        "{} poset(s) with w* > |P|",
        violations.len()
    )))
}

fn oracle(p: &Poset, n: usize, output: &OutputArgs) -> CliResult<()> {
    if p.size() > ORACLE_MAX_GROUND {
        return Err(Failure::Cap(format!(
            "oracle needs |P| <= {ORACLE_MAX_GROUND}, got {}",
            p.size()
        )));
    }
    if n == 0 || n > ORACLE_MAX_GROUND {
        return Err(Failure::Cap(format!(
            "oracle needs 1 <= n <= {ORACLE_MAX_GROUND}, got {n}"
        )));
    }
    let (exact, witness) = exact_sat_oracle(p, n)?;
    let (greedy, _) = greedy_saturated_family(p, n)?;
    let doc = envelope(
        "oracle",
        json!({
            "poset": p.to_dsl(),
            "n": n,
            "exact": exact,
            "greedy": greedy.len(),
            "witness": witness.to_json_members(),
        }),
    );
    emit(output, &doc, || {
        format!("poset,n,exact,greedy\n{},{n},{exact},{}\n", p.to_dsl(), greedy.len())
    })
}
