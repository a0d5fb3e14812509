use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use quatbraid::algebra::center;
use quatbraid::braid::{evaluate, invariant, markov_move_test, phase_magnitude, BraidWord};
use quatbraid::cover::{triple_cover_dim, triple_cover_order, SeifertMatrix};
use quatbraid::diagrams::{bratteli, bratteli_dot, cut_graph, hecke_dimension};
use quatbraid::group::{enumerate_group, DEFAULT_MAX_ELEMENTS};
use quatbraid::hecke::{subalgebra_dimension, MAX_SPAN_STRANDS};
use quatbraid::links::{load_link_table, LinkEntry};
use quatbraid::report::{
    conjugation_table_check, markov_trace_check, relation_check, run_suite, Status, SuiteConfig, VerificationReport,
};

/// Environment variable overriding the default group enumeration cap.
const MAX_ELEMENTS_VAR: &str = "QUATBRAID_MAX_ELEMENTS";

const ERROR_EXIT: u8 = 4;

#[derive(Parser)]
#[command(name = "quatbraid", version, about = "Exact checks for the quaternionic braid representation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Relations, conjugation table and Markov trace in Q_n.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// dim of the subalgebra generated by the s_i, by span closure and by path counting.
    Dim {
        #[arg(long)]
        n: usize,
    },
    /// Basis of the center of Q_n.
    Center {
        #[arg(long)]
        n: usize,
    },
    /// Invariant of the closure of a braid word.
    Invariant {
        #[arg(long)]
        strands: usize,
        /// Signed generator indices, e.g. "1 1 -2".
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        word: String,
        /// Also check this many random Markov moves.
        #[arg(long, default_value_t = 0)]
        markov_trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Enumerate the conjugation image of the braid group in Q_n.
    Group {
        #[arg(long)]
        n: usize,
        /// Element cap; defaults to $QUATBRAID_MAX_ELEMENTS or 2000000.
        #[arg(long)]
        max: Option<usize>,
    },
    /// Bratteli diagram of the (k,l) Hecke quotient.
    Bratteli {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 6)]
        l: usize,
        #[arg(long)]
        levels: usize,
        /// Label nodes modulo full columns of height k.
        #[arg(long)]
        reduced: bool,
        /// Also report the bipartite graph between this level and the next.
        #[arg(long)]
        cut: Option<usize>,
        /// Write the diagram (or the cut graph, with --cut) as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// dim H1 of the triple branched cover over Z2, from a Seifert matrix
    /// or a link table.
    CoverDim {
        #[arg(long)]
        seifert: PathBuf,
    },
    /// The full check battery.
    Suite {
        /// JSON config; missing fields take their defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        link_table: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Leave the wall-time field out of the report.
        #[arg(long)]
        no_timing: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(status) => ExitCode::from(status.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(ERROR_EXIT)
        }
    }
}

/// Prints to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn print_json(value: &serde_json::Value) {
    emit(&serde_json::to_string_pretty(value).expect("json value"));
}

fn max_elements(flag: Option<usize>) -> Result<usize> {
    if let Some(m) = flag {
        return Ok(m);
    }
    match std::env::var(MAX_ELEMENTS_VAR) {
        Ok(v) => v.trim().parse().with_context(|| format!("{MAX_ELEMENTS_VAR}={v:?} is not a count")),
        Err(_) => Ok(DEFAULT_MAX_ELEMENTS),
    }
}

fn run(command: Command) -> Result<Status> {
    match command {
        Command::Verify { n, seed } => {
            let started = Instant::now();
            let checks = vec![relation_check(n), conjugation_table_check(n), markov_trace_check(n, seed)];
            let report = VerificationReport::new("verify", json!({ "n": n }), seed, checks, started);
            eprint!("{}", report.summary());
            emit(&report.to_json(true));
            Ok(report.status())
        }
        Command::Dim { n } => {
            let paths = hecke_dimension(3, 6, n)?;
            let span = if n <= MAX_SPAN_STRANDS { Some(subalgebra_dimension(n)? as u128) } else { None };
            let agree = span.map(|s| s == paths);
            print_json(&json!({ "n": n, "pathCount": paths, "spanClosure": span, "agree": agree }));
            Ok(match agree {
                Some(true) => Status::Pass,
                Some(false) => Status::Fail,
                None => Status::Inconclusive,
            })
        }
        Command::Center { n } => {
            let basis: Vec<String> = center(n)?.iter().map(|w| w.to_string()).collect();
            print_json(&json!({ "n": n, "dimension": basis.len(), "basis": basis }));
            Ok(Status::Pass)
        }
        Command::Invariant { strands, word, markov_trials, seed } => {
            let beta = BraidWord::parse(strands, &word)?;
            let value = invariant(&beta)?;
            let image = evaluate(&beta)?;
            let shape = phase_magnitude(&value);
            let mut out = json!({
                "braid": beta.to_string(),
                "exponentSum": beta.exponent_sum(),
                "image": image.to_string(),
                "invariant": value,
                "invariantText": value.to_string(),
                "normSq": value.norm_sq().to_string(),
                "log2NormSq": shape.map(|s| s.log2_norm_sq),
                "squareSign": shape.map(|s| s.square_sign),
            });
            let mut status = Status::Pass;
            if markov_trials > 0 {
                let report = markov_move_test(&beta, markov_trials, seed)?;
                if !report.pass {
                    status = Status::Fail;
                }
                out["markov"] = serde_json::to_value(report)?;
            }
            print_json(&out);
            Ok(status)
        }
        Command::Group { n, max } => {
            let report = enumerate_group(n, max_elements(max)?)?;
            print_json(&serde_json::to_value(&report)?);
            Ok(if !report.conclusive {
                Status::Inconclusive
            } else if report.braid_relations_hold && report.generator_cubes_trivial {
                Status::Pass
            } else {
                Status::Fail
            })
        }
        Command::Bratteli { k, l, levels, reduced, cut, dot } => {
            let diagram = bratteli(k, l, levels, reduced)?;
            let mut out = json!({
                "k": k,
                "l": l,
                "reduced": reduced,
                "levels": diagram.iter().map(|lv| json!({
                    "level": lv.level,
                    "nodes": lv.labels.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                    "pathCounts": lv.path_counts,
                    "dimension": lv.dimension(),
                })).collect::<Vec<_>>(),
            });
            let mut dot_text = bratteli_dot(&diagram);
            if let Some(c) = cut {
                let graph = cut_graph(&diagram, c)?;
                out["cut"] = json!({
                    "levels": [c, c + 1],
                    "labels": graph.labels,
                    "edges": graph.edges,
                    "dynkinType": graph.dynkin_type(),
                });
                dot_text = graph.to_dot(&format!("cut_{c}_{}", c + 1));
            }
            if let Some(path) = dot {
                fs::write(&path, dot_text).with_context(|| format!("cannot write {}", path.display()))?;
            }
            print_json(&out);
            Ok(Status::Pass)
        }
        Command::CoverDim { seifert } => {
            print_json(&cover_dims(&seifert)?);
            Ok(Status::Pass)
        }
        Command::Suite { config, link_table, seed, output, no_timing } => {
            let mut cfg = match &config {
                Some(path) => {
                    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
                    serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))?
                }
                None => SuiteConfig::default(),
            };
            if link_table.is_some() {
                cfg.link_table = link_table;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Ok(v) = std::env::var(MAX_ELEMENTS_VAR) {
                cfg.max_elements =
                    v.trim().parse().with_context(|| format!("{MAX_ELEMENTS_VAR}={v:?} is not a count"))?;
            }
            let report = run_suite(&cfg)?;
            eprint!("{}", report.summary());
            let text = report.to_json(!no_timing);
            match output {
                Some(path) => fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?,
                None => emit(&text),
            }
            Ok(report.status())
        }
    }
}

/// Accepts a bare matrix `[[..]]` or a link table.
fn cover_dims(path: &Path) -> Result<serde_json::Value> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("malformed JSON in {}", path.display()))?;
    let row = |name: Option<&str>, v: &SeifertMatrix| json!({ "name": name, "size": v.size(), "dim": triple_cover_dim(v), "order": triple_cover_order(v).to_string() });
    let is_table = value.as_array().and_then(|a| a.first()).is_some_and(|e| e.is_object());
    if !is_table {
        let v: SeifertMatrix = serde_json::from_value(value)
            .with_context(|| format!("{} is not a square integer matrix", path.display()))?;
        return Ok(row(None, &v));
    }
    let entries: Vec<LinkEntry> = load_link_table(path)?;
    let rows: Vec<_> = entries.iter().filter_map(|e| e.seifert.as_ref().map(|v| row(Some(&e.name), v))).collect();
    if rows.is_empty() {
        bail!("no entry of {} has a Seifert matrix", path.display());
    }
    Ok(json!(rows))
}
