use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cmtk::io::{
    self, ClassifyResult, LowDimInput, PairSpec, Report, VerdictRecord, WitnessJson, WitnessOutcome,
};
use cmtk::oracle::{run_oracle, OracleReport};
use cmtk::{Error, FrameSpec, LowDimVerdict, SearchBounds, Verification};

#[derive(Parser)]
#[command(name = "cmtk", version, about = "Torsion verdicts and Hodge certificates for CM types")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Isomorphism classes of CM types on a frame.
    Classify(FrameArgs),
    /// Both torsion verdicts for a pair of CM types.
    Verdict {
        #[arg(long)]
        pair: PathBuf,
    },
    /// Search for (or check) a torsion-infinite Hodge class certificate.
    Witness {
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        max_r: Option<u64>,
        #[arg(long)]
        max_t: Option<u64>,
        /// Check the certificate stored under "witness" instead of searching.
        #[arg(long)]
        verify: bool,
    },
    /// Decision table for simple abelian varieties of dimension at most 3.
    Lowdim {
        #[arg(long)]
        input: PathBuf,
    },
    /// Cross-check exact algebra against brute-force oracles.
    Oracle {
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        #[arg(long, default_value_t = 8)]
        max_order: usize,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct FrameArgs {
    #[arg(long)]
    cyclic: Option<usize>,
    /// JSON or TOML file holding a frame spec.
    #[arg(long)]
    frame: Option<PathBuf>,
}

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_EXHAUSTED: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("cmtk: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn emit<T: Serialize>(format: Format, report: &Report<T>, text: impl FnOnce(&T) -> String) {
    let out = match format {
        Format::Json => report.to_json() + "\n",
        Format::Text => text(&report.result),
    };
    let _ = std::io::stdout().write_all(out.as_bytes());
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let max_order = io::max_order_from_env()?;
    match &cli.command {
        Command::Classify(args) => {
            let spec = match (&args.cyclic, &args.frame) {
                (Some(n), _) => FrameSpec::Cyclic { cyclic: *n },
                (None, Some(path)) => io::load_input(path)?,
                (None, None) => unreachable!("clap requires one frame source"),
            };
            let report = io::cmd_classify(&spec, max_order)?;
            emit(cli.format, &report, classify_text);
            Ok(0)
        }
        Command::Verdict { pair } => {
            let spec: PairSpec = io::load_input(pair)?;
            let report = io::cmd_verdict(&spec, max_order)?;
            emit(cli.format, &report, verdict_text);
            Ok(0)
        }
        Command::Witness { pair, max_r, max_t, verify } => {
            let spec: PairSpec = io::load_input(pair)?;
            let bounds = match (max_r, max_t) {
                (None, None) => None,
                (r, t) => {
                    let base = spec.bounds.unwrap_or_else(|| {
                        let n = spec.frame.order() as u64;
                        SearchBounds { max_r: n, max_t: n }
                    });
                    Some(SearchBounds { max_r: r.unwrap_or(base.max_r), max_t: t.unwrap_or(base.max_t) })
                }
            };
            let report = io::cmd_witness(&spec, bounds, *verify, max_order)?;
            emit(cli.format, &report, witness_text);
            Ok(match &report.result {
                WitnessOutcome::BoundsExhausted { .. } => EXIT_EXHAUSTED,
                WitnessOutcome::Checked { verification: Verification::Invalid(_), .. } => EXIT_FAILED_CHECK,
                _ => 0,
            })
        }
        Command::Lowdim { input } => {
            let spec = io::load_input::<LowDimInput>(input)?.into_spec()?;
            let report = io::cmd_lowdim(&spec, max_order)?;
            emit(cli.format, &report, lowdim_text);
            Ok(0)
        }
        Command::Oracle { cases, max_order: sweep } => {
            if *sweep > max_order {
                return Err(Error::Input(format!("--max-order {sweep} exceeds the cap of {max_order}")));
            }
            let result = run_oracle(cli.seed, *cases, *sweep);
            let passed = result.passed();
            let input = (cli.seed, *cases, *sweep);
            emit(cli.format, &Report::new("oracle", &input, result), oracle_text);
            Ok(if passed { 0 } else { EXIT_FAILED_CHECK })
        }
    }
}

fn classify_text(r: &ClassifyResult) -> String {
    let mut out = format!("{}: {} CM types in {} classes\n", r.frame, r.cm_types, r.classes.len());
    for c in &r.classes {
        out += &format!(
            "  {:?} orbit {} rank {}{}{}\n",
            c.representative,
            c.orbit_size,
            c.lattice_rank,
            if c.primitive { " primitive" } else { "" },
            if c.nondegenerate { " nondegenerate" } else { "" },
        );
    }
    out
}

fn verdict_text(v: &VerdictRecord) -> String {
    format!(
        "A1 for A2: {} (H12 = {})\nA2 for A1: {} (H21 = {})\nmutual: {}\n",
        v.direction_12.abbrev(),
        v.h12,
        v.direction_21.abbrev(),
        v.h21,
        if v.mutual { "yes" } else { "no" }
    )
}

fn witness_line(w: &WitnessJson) -> String {
    let terms: Vec<String> = w.coeffs.iter().map(|c| format!("{}·{:?}", c.e, c.weight)).collect();
    format!(
        "{}\n  {}·{:?} + {}·χ = {}\n",
        w.descriptor.as_deref().unwrap_or(""),
        w.r,
        w.alpha0,
        w.twist,
        terms.join(" + ")
    )
}

fn witness_text(o: &WitnessOutcome) -> String {
    match o {
        WitnessOutcome::Found { witness } => witness_line(witness),
        WitnessOutcome::ProvenAbsent => "no certificate exists: rational spans are not nested\n".into(),
        WitnessOutcome::BoundsExhausted { bounds } => {
            format!("nothing found with r <= {} and t <= {}\n", bounds.max_r, bounds.max_t)
        }
        WitnessOutcome::Checked { witness, verification } => match verification {
            Verification::Valid => format!("valid: {}", witness_line(witness)),
            Verification::Invalid(d) => format!("invalid: {d}\n"),
        },
    }
}

fn lowdim_text(v: &LowDimVerdict) -> String {
    format!(
        "case: {:?}\nA for B: {}\nB for A: {}\n",
        v.case,
        v.a_for_b.abbrev(),
        v.b_for_a.abbrev()
    )
}

fn oracle_text(r: &OracleReport) -> String {
    format!(
        "matrices: {} cases, {} hermite / {} smith / {} rank failures\npairs: {} over orders {:?}, {} mismatches\n{}\n",
        r.matrices.cases,
        r.matrices.hermite_failures,
        r.matrices.smith_failures,
        r.matrices.rank_failures,
        r.pairs.pairs,
        r.pairs.frames,
        r.pairs.mismatches,
        if r.passed() { "ok" } else { "FAILED" }
    )
}
