//! Command-line front end: `sumset`, `spectrum`, `witness` and `verify`.
//!
//! Exit codes: 0 success, 1 a check or prediction failed, 2 usage error,
//! 3 overflow or internal error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use hfold_core::constructions::{
    ap_witness, base_case_family, bh_witness, hk_witness, thm1_family, thm2_family, Witness, WitnessCheck,
};
use hfold_core::group::format_literal;
use hfold_core::spectrum::{DichotomyVerdict, GapVerdict};
use hfold_core::verifier::run_suite;
use hfold_core::{
    classify, compute_spectrum, gap_check, hfold_sumset, min_dichotomy_check, CheckOutcome, Error, FiniteSet,
    SpectrumReport, Suite, SuiteParams, VerdictStatus, WitnessKind,
};
use serde::Serialize;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "hfold", version, about = "Exact h-fold sumsets, size spectra and witness sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Debug, clap::Args)]
struct Output {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Write to this file instead of standard output
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute hA for one set, split into trivial and nontrivial elements
    Sumset {
        /// Set literal, e.g. "0,1,2,4" or "0 0;1 2;2 4"
        #[arg(long)]
        set: String,
        #[arg(long)]
        h: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Scan canonical k-sets with maximum <= M and report achieved sizes
    Spectrum {
        #[arg(long)]
        h: usize,
        #[arg(long)]
        k: usize,
        /// Largest element of the canonical sets scanned
        #[arg(long = "max")]
        max: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Build a witness set and print its predicted properties
    Witness {
        /// ap | hk | max | thm1 | thm2 | base
        #[arg(long)]
        kind: String,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        k: Option<usize>,
        /// ap/hk: a; thm1: gaps..,b,c; thm2: gaps..,b,d; base: e
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        params: Vec<i128>,
        /// Run the sumset engine and compare against the prediction
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Run theorem checks over grids and seeded samples
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        h: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long = "max")]
        max: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
}

/// A command failure mapped to an exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Overflow(_) | Error::Internal(_) | Error::ChainNotIncreasing { .. } => EXIT_INTERNAL,
            _ => EXIT_USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self { code: EXIT_INTERNAL, message: format!("i/o: {e}") }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Self { code: EXIT_INTERNAL, message: format!("json: {e}") }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Self { code: EXIT_INTERNAL, message: format!("csv: {e}") }
    }
}

type CmdResult = Result<u8, Failure>;

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command) -> CmdResult {
    match command {
        Command::Sumset { set, h, out } => sumset_cmd(&set, h, &out),
        Command::Spectrum { h, k, max, jobs, out } => spectrum_cmd(h, k, max, jobs, &out),
        Command::Witness { kind, h, k, params, check, out } => witness_cmd(&kind, h, k, &params, check, &out),
        Command::Verify { suite, h, k, max, seed, trials, out } => {
            verify_cmd(&suite, SuiteArgs { h, k, max, seed, trials }, &out)
        }
    }
}

fn writer(out: &Output) -> Result<Box<dyn Write>, Failure> {
    Ok(match &out.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(w: &mut dyn Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

/// `SumsetResult` in JSON form; `trivial`/`nontrivial` are null when the
/// chain is undefined (`h = 1` or `k = 1`).
#[derive(Debug, Serialize)]
struct SumsetRecord {
    h: usize,
    k: usize,
    base: FiniteSet,
    size: usize,
    elements: String,
    trivial: Option<String>,
    nontrivial: Option<String>,
}

fn sumset_cmd(literal: &str, h: usize, out: &Output) -> CmdResult {
    if h < 1 {
        return Err(Failure::usage("--h must be at least 1"));
    }
    let set: FiniteSet = literal.parse()?;
    let classified = if h >= 2 && set.len() >= 2 { Some(classify(&set, h)?) } else { None };
    let elements = match &classified {
        Some(r) => r.elements().to_vec(),
        None => hfold_sumset(&set, h)?,
    };
    let mut w = writer(out)?;
    match out.format {
        Format::Json => {
            let record = SumsetRecord {
                h,
                k: set.len(),
                base: set.clone(),
                size: elements.len(),
                elements: format_literal(&elements),
                trivial: classified.as_ref().map(|r| format_literal(r.trivial())),
                nontrivial: classified.as_ref().map(|r| format_literal(r.nontrivial())),
            };
            write_json(&mut w, &record)?;
        }
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(&mut w);
            csv.write_record(["element", "trivial"])?;
            for e in &elements {
                let trivial = classified
                    .as_ref()
                    .map_or(String::new(), |r| r.trivial().binary_search(e).is_ok().to_string());
                csv.write_record([e.to_string(), trivial])?;
            }
            csv.flush()?;
        }
        Format::Plain => {
            writeln!(w, "A = {{{set}}}  (h = {h}, k = {})", set.len())?;
            writeln!(w, "|hA| = {}", elements.len())?;
            writeln!(w, "hA = {{{}}}", format_literal(&elements))?;
            if let Some(r) = &classified {
                let chain: Vec<String> = r
                    .trivial()
                    .iter()
                    .map(|e| if e.dim() == 1 { e.to_string() } else { format!("({e})") })
                    .collect();
                writeln!(w, "trivial chain ({}): {}", r.trivial().len(), chain.join(" < "))?;
                writeln!(w, "nontrivial ({}): {{{}}}", r.nontrivial().len(), format_literal(r.nontrivial()))?;
            }
        }
    }
    w.flush()?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct SpectrumOutput<'a> {
    #[serde(flatten)]
    report: &'a SpectrumReport,
    gap_check: GapVerdict,
    dichotomy_check: DichotomyVerdict,
}

fn status_word(s: VerdictStatus) -> &'static str {
    match s {
        VerdictStatus::Pass => "pass",
        VerdictStatus::Vacuous => "pass (vacuous: empty interval)",
        VerdictStatus::Fail => "FAIL",
        VerdictStatus::NotApplicable => "not applicable (k < 4)",
    }
}

fn spectrum_cmd(h: usize, k: usize, max: usize, jobs: usize, out: &Output) -> CmdResult {
    if jobs == 0 {
        return Err(Failure::usage("--jobs must be at least 1"));
    }
    let report = compute_spectrum(h, k, max, jobs)?;
    let gap = gap_check(&report);
    let dich = min_dichotomy_check(&report);
    let mut w = writer(out)?;
    match out.format {
        Format::Json => write_json(&mut w, &SpectrumOutput { report: &report, gap_check: gap.clone(), dichotomy_check: dich.clone() })?,
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(&mut w);
            csv.write_record(["size", "witness", "is_ap"])?;
            for (size, set) in &report.witnesses {
                csv.write_record([size.to_string(), set.to_string(), set.is_arithmetic_progression().to_string()])?;
            }
            csv.flush()?;
        }
        Format::Plain => {
            writeln!(w, "h = {h}, k = {k}, canonical sets with max <= {max}: {} scanned", report.sets_scanned)?;
            writeln!(w, "achieved sizes ({}): {:?}", report.achieved.len(), report.achieved)?;
            for (size, set) in &report.witnesses {
                writeln!(w, "  {size:>6}  {{{set}}}")?;
            }
            writeln!(w, "gap [{}, {}]: {}", gap.lo, gap.hi, status_word(gap.status))?;
            writeln!(w, "dichotomy: {}", status_word(dich.status))?;
            writeln!(w, "note: {}", report.note)?;
        }
    }
    w.flush()?;
    Ok(if gap.status.ok() && dich.status.ok() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn build_witness(kind: WitnessKind, h: usize, k: Option<usize>, params: &[i128]) -> Result<Witness, Failure> {
    let need_k = || k.ok_or_else(|| Failure::usage(format!("--k is required for kind {kind}")));
    let single = |default: i128| match params {
        [] => Ok(default),
        [a] => Ok(*a),
        _ => Err(Failure::usage(format!("kind {kind} takes one parameter"))),
    };
    let witness = match kind {
        WitnessKind::Ap => ap_witness(h, need_k()?, single(1)?)?,
        WitnessKind::Hk => hk_witness(h, need_k()?, single(1)?)?,
        WitnessKind::BhMax => {
            if !params.is_empty() {
                return Err(Failure::usage("kind max takes no parameters"));
            }
            bh_witness(h, need_k()?)?
        }
        WitnessKind::Thm1Family | WitnessKind::Thm2Family => {
            if params.len() < 3 {
                return Err(Failure::usage(format!("kind {kind} needs --params gaps..,b,{}", if kind == WitnessKind::Thm1Family { "c" } else { "d" })));
            }
            let (gaps, tail) = params.split_at(params.len() - 2);
            if kind == WitnessKind::Thm1Family {
                thm1_family(h, gaps, tail[0], tail[1])?
            } else {
                thm2_family(h, gaps, tail[0], tail[1])?
            }
        }
        WitnessKind::BaseCase => match params {
            [e] => base_case_family(h, *e)?,
            _ => return Err(Failure::usage("kind base needs --params e")),
        },
    };
    if let Some(k) = k {
        if k != witness.set.len() {
            return Err(Failure::usage(format!("--k {k} does not match the {} elements these parameters give", witness.set.len())));
        }
    }
    Ok(witness)
}

#[derive(Debug, Serialize)]
struct WitnessOutput<'a> {
    #[serde(flatten)]
    witness: &'a Witness,
    #[serde(skip_serializing_if = "Option::is_none")]
    check: Option<WitnessCheck>,
}

fn witness_cmd(kind: &str, h: usize, k: Option<usize>, params: &[i128], check: bool, out: &Output) -> CmdResult {
    let kind: WitnessKind = kind.parse()?;
    let witness = build_witness(kind, h, k, params)?;
    let outcome = if check { Some(witness.check()?) } else { None };
    let mut w = writer(out)?;
    match out.format {
        Format::Json => write_json(&mut w, &WitnessOutput { witness: &witness, check: outcome.clone() })?,
        Format::Csv => return Err(Failure::usage("witness supports --format plain or json")),
        Format::Plain => {
            writeln!(w, "kind {kind}, h = {h}, k = {}", witness.set.len())?;
            writeln!(w, "A = {{{}}}", witness.set)?;
            let p = &witness.predicted;
            if let Some(s) = p.exact_size {
                writeln!(w, "predicted |hA| = {s}")?;
            }
            if let Some(s) = p.min_size {
                writeln!(w, "predicted |hA| >= {s}")?;
            }
            if let Some(n) = p.min_nontrivial {
                writeln!(w, "predicted nontrivial >= {n}")?;
            }
            if let Some(es) = &p.exact_sumset {
                writeln!(w, "predicted hA = {{{}}}", format_literal(es))?;
            }
            if let Some(c) = &outcome {
                let nontrivial = c.nontrivial.map_or("n/a".to_string(), |n| n.to_string());
                writeln!(w, "computed |hA| = {}, nontrivial = {nontrivial}", c.size)?;
                if c.passed() {
                    writeln!(w, "check: pass")?;
                } else {
                    writeln!(w, "check: FAIL ({})", c.failures.join("; "))?;
                }
            }
        }
    }
    w.flush()?;
    Ok(match outcome {
        Some(c) if !c.passed() => EXIT_CHECK_FAILED,
        _ => EXIT_OK,
    })
}

struct SuiteArgs {
    h: Option<usize>,
    k: Option<usize>,
    max: Option<usize>,
    seed: Option<u64>,
    trials: Option<u64>,
}

const DEFAULT_SEED: u64 = 1;

fn replay_command(o: &CheckOutcome, args: &SuiteArgs, seed: u64) -> String {
    let mut cmd = format!("hfold verify --suite {}", o.check);
    if o.seed.is_some() {
        cmd.push_str(&format!(" --seed {seed}"));
    }
    for (flag, v) in [("--h", args.h), ("--k", args.k), ("--max", args.max)] {
        if let Some(v) = v {
            cmd.push_str(&format!(" {flag} {v}"));
        }
    }
    if let Some(t) = args.trials {
        cmd.push_str(&format!(" --trials {t}"));
    }
    cmd
}

fn verify_cmd(suite: &str, args: SuiteArgs, out: &Output) -> CmdResult {
    let suite: Suite = suite.parse()?;
    if out.format == Format::Json && args.seed.is_none() {
        return Err(Failure::usage("--format json requires an explicit --seed"));
    }
    if out.format == Format::Csv {
        return Err(Failure::usage("verify supports --format plain or json"));
    }
    if args.trials == Some(0) {
        return Err(Failure::usage("--trials must be at least 1"));
    }
    let seed = args.seed.unwrap_or(DEFAULT_SEED);
    let params = SuiteParams { seed, trials: args.trials, h: args.h, k: args.k, max: args.max };
    let outcomes = run_suite(suite, &params);
    let mut w = writer(out)?;
    match out.format {
        Format::Json => write_json(&mut w, &outcomes)?,
        _ => {
            for o in &outcomes {
                writeln!(w, "{o}")?;
                for f in o.failures.iter().take(5) {
                    writeln!(w, "    {}: {}", f.input, f.detail)?;
                }
                if !o.passed() {
                    writeln!(w, "    replay: {}", replay_command(o, &args, seed))?;
                    writeln!(w, "    (theorem-backed check: a failure indicates an implementation bug)")?;
                }
            }
        }
    }
    w.flush()?;
    Ok(if outcomes.iter().all(CheckOutcome::passed) { EXIT_OK } else { EXIT_CHECK_FAILED })
}
