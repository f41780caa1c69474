//! `voteexplain` command-line surface.
//!
//! Exit codes: 0 success, 1 input error, 2 empty explanation set,
//! 3 fixture inconsistency.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::engine::{self, ExplainOptions};
use crate::fixtures::{self, InstanceDerivation};
use crate::profile::{self, VoteProfile};
use crate::report::{ExplanationReport, FeatureReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_EMPTY: i32 = 2;
pub const EXIT_FIXTURE: i32 = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "voteexplain",
    about = "Explain ranked-voting outcomes with voting criteria"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank the justifications for a designated winner.
    Analyze(CommonArgs),
    /// Print all six feature values for every candidate.
    Features(CommonArgs),
    /// List the published instances.
    Fixtures(CommonArgs),
    /// Rerun the assignment search for the instances.
    Derive(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Profile document (analyze, features) or instance list (derive).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Candidate to explain.
    #[arg(long)]
    pub winner: Option<String>,
    /// Number of explanations.
    #[arg(long, default_value_t = engine::DEFAULT_N, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    pub n: usize,
    /// Seed for breaking exact score ties.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Include the full ranked survivor list and extend through cutoff ties.
    #[arg(long)]
    pub audit: bool,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let (code, stdout, stderr) = match cli.command {
        Command::Analyze(a) => cmd_analyze(&a),
        Command::Features(a) => cmd_features(&a),
        Command::Fixtures(a) => cmd_fixtures(&a),
        Command::Derive(a) => cmd_derive(&a),
    };
    let _ = out.write_all(stdout.as_bytes());
    let _ = err.write_all(stderr.as_bytes());
    code
}

type Outcome = (i32, String, String);

fn input_error(msgs: impl IntoIterator<Item = String>) -> Outcome {
    let mut s = String::new();
    for m in msgs {
        let _ = writeln!(s, "error: {m}");
    }
    (EXIT_INPUT, String::new(), s)
}

fn load_profile(args: &CommonArgs) -> Result<VoteProfile, Outcome> {
    let path = args
        .input
        .as_ref()
        .ok_or_else(|| input_error(["--input is required".to_string()]))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_error([format!("cannot read {}: {e}", path.display())]))?;
    profile::parse_profile(&text).map_err(|e| input_error(e.violations()))
}

pub fn cmd_analyze(args: &CommonArgs) -> Outcome {
    let p = match load_profile(args) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let Some(winner) = args.winner.as_deref() else {
        return input_error(["--winner is required".to_string()]);
    };
    let opts = ExplainOptions {
        n: args.n,
        seed: args.seed,
        audit: args.audit,
    };
    let set = match engine::explain_named(&p, winner, &opts) {
        Ok(s) => s,
        Err(e) => return input_error([e.to_string()]),
    };
    let report = ExplanationReport::new(&set, &p);
    let body = match args.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    };
    if set.is_dominated() {
        let msg = format!("{winner} is strictly beaten on every feature; no explanation exists\n");
        return (EXIT_EMPTY, body, msg);
    }
    (EXIT_OK, body, String::new())
}

pub fn cmd_features(args: &CommonArgs) -> Outcome {
    let p = match load_profile(args) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let report = FeatureReport::new(&p);
    let body = match args.format {
        Format::Text => report.to_text(),
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
    };
    (EXIT_OK, body, String::new())
}

pub fn cmd_fixtures(args: &CommonArgs) -> Outcome {
    let insts = fixtures::published_instances();
    let body = match args.format {
        Format::Json => serde_json::to_string_pretty(&insts).expect("instances serialize") + "\n",
        Format::Text => {
            let mut s = format!(
                "{:<4} {:<14} {:<14} {}\n",
                "id", "distribution", "features", "explanations"
            );
            for i in &insts {
                let _ = writeln!(s, "{i}");
            }
            s
        }
    };
    (EXIT_OK, body, String::new())
}

fn derivation_line(d: &InstanceDerivation) -> String {
    match (&d.canonical, &d.failure) {
        (Some(c), _) => {
            let orders: Vec<String> = c
                .slot_to_order
                .iter()
                .map(|&o| fixtures::order_label(&fixtures::ORDERS[o]))
                .collect();
            format!(
                "{:<4} consistent  filter={:<6} matches={}/{} winner={} slots={} order_agrees={}",
                d.instance.id,
                c.semantics.as_str(),
                d.consistent_matches,
                d.feature_matches,
                fixtures::LABELS[c.winner],
                orders.join(","),
                c.verified.explanation_order
            )
        }
        (None, reason) => format!(
            "{:<4} INCONSISTENT {}",
            d.instance.id,
            reason.as_deref().unwrap_or("")
        ),
    }
}

pub fn cmd_derive(args: &CommonArgs) -> Outcome {
    let insts = match &args.input {
        None => fixtures::published_instances(),
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return input_error([format!("cannot read {}: {e}", path.display())]),
            };
            match fixtures::parse_instances(&text) {
                Ok(i) => i,
                Err(e) => return input_error([e.to_string()]),
            }
        }
    };
    let derived = fixtures::derive_all(&insts);
    let body = match args.format {
        Format::Json => fixtures::fixture_file(&derived),
        Format::Text => derived.iter().map(|d| derivation_line(d) + "\n").collect(),
    };
    let bad: Vec<&InstanceDerivation> = derived.iter().filter(|d| !d.is_consistent()).collect();
    if bad.is_empty() {
        (EXIT_OK, body, String::new())
    } else {
        let mut e = String::new();
        for d in bad {
            let _ = writeln!(
                e,
                "error: instance {} is inconsistent: {}",
                d.instance.id,
                d.failure.as_deref().unwrap_or("")
            );
        }
        (EXIT_FIXTURE, body, e)
    }
}
