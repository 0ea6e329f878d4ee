//! The `turan` command line.
//!
//! [`dispatch`] parses an argument vector, runs one subcommand and returns
//! the exit code together with everything destined for standard output and
//! standard error, so the binary is a thin shell around it and tests can
//! drive it without spawning processes.
//!
//! Exit codes: 0 on success, 1 for usage and validation problems, 2 when the
//! library reports an internal-consistency failure.

pub mod cache;
mod input;

use std::io::BufRead;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use turan_core::blowup::{blow_up, exponent_r};
use turan_core::lab::{brute_force_ex, brute_force_ex_stream, growth_report, lower_bound_construction};
use turan_core::proof::{run_pipeline, ConstantsSpec, PipelineConfig, RainbowStrategy};
use turan_core::subgraph::{contains_copy, count_copies};

pub use input::detect_format;
use input::{vertex_list, GraphReader};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{flag}: {source}")]
    Arg { flag: String, source: turan_core::Error },
    #[error(transparent)]
    Core(#[from] turan_core::Error),
    #[error("unsupported format: {0} has no CSV form")]
    UnsupportedFormat(&'static str),
}

impl CliError {
    fn arg(flag: &str, source: turan_core::Error) -> Self {
        CliError::Arg { flag: format!("--{flag}"), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) | CliError::Arg { source: e, .. } if e.is_internal() => 2,
            _ => 1,
        }
    }
}

/// What one invocation produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dispatched {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "turan", version, about = "Generalized Turán numbers for forbidden trees")]
struct Cli {
    /// Emit CSV instead of JSON; only tabular reports support it.
    #[arg(long, global = true)]
    csv: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exponent r(H, T) with its witness set.
    Exponent {
        #[arg(long = "H")]
        h: String,
        #[arg(long = "T")]
        t: String,
    },
    /// The (U, t)-blow-up of H.
    Blowup {
        #[arg(long = "H")]
        h: String,
        /// Comma-separated vertices of H to identify; empty for none.
        #[arg(long = "U", default_value = "")]
        u: String,
        #[arg(long)]
        t: usize,
    },
    /// Number of copies of H in G, as an exact decimal string.
    Count {
        #[arg(long = "G")]
        g: String,
        #[arg(long = "H")]
        h: String,
    },
    /// Whether G contains H, with one embedding when it does.
    Contains {
        #[arg(long = "G")]
        g: String,
        #[arg(long = "H")]
        h: String,
    },
    /// The T-free lower-bound construction on n vertices.
    Construct {
        #[arg(long = "H")]
        h: String,
        #[arg(long = "T")]
        t: String,
        #[arg(long)]
        n: usize,
    },
    /// Exact Ex(n, H, T) by exhaustive search, or over graph6 lines on stdin.
    BruteForce {
        #[arg(long = "H")]
        h: String,
        #[arg(long = "T")]
        t: String,
        #[arg(long)]
        n: usize,
        /// Read candidate graphs as graph6 lines from standard input.
        #[arg(long)]
        stream: bool,
    },
    /// Construction counts at several n with log-log slopes.
    Growth {
        #[arg(long = "H")]
        h: String,
        #[arg(long = "T")]
        t: String,
        /// Comma-separated, strictly increasing.
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<usize>,
    },
    /// Run the upper-bound pipeline on a host graph.
    Pipeline {
        #[arg(long = "G")]
        g: String,
        #[arg(long = "H")]
        h: String,
        #[arg(long = "T")]
        t: String,
        /// `paper`, `desk:C` for a uniform constant, or `desk:C1,C2,...`.
        #[arg(long, default_value = "paper")]
        constants: String,
        #[arg(long, value_enum, default_value_t = RainbowArg::Derandomized)]
        rainbow: RainbowArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        trials: u32,
        /// Write the refinement trace as JSON lines to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Exponent lookup through the persistent profile store.
    Cache {
        #[arg(long = "H")]
        h: String,
        #[arg(long = "T")]
        t: String,
        /// Store path; defaults to $TURAN_CACHE or ~/.cache/turan/profiles.jsonl.
        #[arg(long)]
        store: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum RainbowArg {
    Derandomized,
    Random,
}

/// A finished report: its JSON form and, for tables, its CSV form.
struct Report {
    name: &'static str,
    json: Value,
    csv: Option<String>,
    warnings: Vec<String>,
}

impl Report {
    fn new(name: &'static str, doc: impl Serialize) -> Result<Self, CliError> {
        let json = serde_json::to_value(doc).map_err(|e| CliError::Io(format!("serializing {name}: {e}")))?;
        Ok(Report { name, json, csv: None, warnings: Vec::new() })
    }
}

/// Serializes with sorted keys; big integers are already strings.
pub fn emit_json(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("a JSON value always serializes");
    s.push('\n');
    s
}

pub fn dispatch<I, S>(argv: I, stdin: &mut dyn BufRead) -> Dispatched
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Dispatched { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Dispatched { code: 1, stdout: String::new(), stderr: text },
            };
        }
    };
    let want_csv = cli.csv;
    match run(cli.command, stdin) {
        Ok(report) => {
            let mut stderr: String = report.warnings.iter().map(|w| format!("warning: {w}\n")).collect();
            if want_csv {
                match report.csv {
                    Some(csv) => Dispatched { code: 0, stdout: csv, stderr },
                    None => {
                        let e = CliError::UnsupportedFormat(report.name);
                        stderr.push_str(&format!("error: {e}\n"));
                        Dispatched { code: e.exit_code(), stdout: String::new(), stderr }
                    }
                }
            } else {
                Dispatched { code: 0, stdout: emit_json(&report.json), stderr }
            }
        }
        Err(e) => Dispatched { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn run(command: Command, stdin: &mut dyn BufRead) -> Result<Report, CliError> {
    let mut graphs = GraphReader::new(stdin);
    match command {
        Command::Exponent { h, t } => {
            let (h, t) = (graphs.graph("H", &h)?, graphs.graph("T", &t)?);
            Report::new("exponent profile", exponent_r(&h, &t)?)
        }
        Command::Blowup { h, u, t } => {
            let h = graphs.graph("H", &h)?;
            let u = vertex_list("U", &u)?;
            Report::new("blow-up", blow_up(&h, &u, t)?)
        }
        Command::Count { g, h } => {
            let (g, h) = (graphs.graph("G", &g)?, graphs.graph("H", &h)?);
            let copies = count_copies(&g, &h)?;
            Report::new("copy count", json!({ "copies": copies.to_str_radix(10) }))
        }
        Command::Contains { g, h } => {
            let (g, h) = (graphs.graph("G", &g)?, graphs.graph("H", &h)?);
            let found = contains_copy(&g, &h)?;
            Report::new("containment", json!({ "contains": found.is_some(), "embedding": found }))
        }
        Command::Construct { h, t, n } => {
            let (h, t) = (graphs.graph("H", &h)?, graphs.graph("T", &t)?);
            let g = lower_bound_construction(&h, &t, n)?;
            let copies = count_copies(&g, &h)?;
            Report::new(
                "construction",
                json!({ "n": n, "graph": g, "edges": g.edge_count(), "copies": copies.to_str_radix(10) }),
            )
        }
        Command::BruteForce { h, t, n, stream } => {
            let (h, t) = (graphs.graph("H", &h)?, graphs.graph("T", &t)?);
            let result = if stream {
                brute_force_ex_stream(graphs.take_stdin("--stream")?, n, &h, &t)?
            } else {
                brute_force_ex(n, &h, &t)?
            };
            Report::new("brute-force result", result)
        }
        Command::Growth { h, t, ns } => {
            let (h, t) = (graphs.graph("H", &h)?, graphs.graph("T", &t)?);
            let report = growth_report(&h, &t, &ns)?;
            let csv = report.to_csv();
            let mut out = Report::new("growth report", report)?;
            out.csv = Some(csv);
            Ok(out)
        }
        Command::Pipeline { g, h, t, constants, rainbow, seed, trials, trace } => {
            let (g, h, t) = (graphs.graph("G", &g)?, graphs.graph("H", &h)?, graphs.graph("T", &t)?);
            let rainbow = match rainbow {
                RainbowArg::Derandomized => RainbowStrategy::Derandomized,
                RainbowArg::Random => RainbowStrategy::Random { seed, trials },
            };
            let config = PipelineConfig { constants: parse_constants(&constants)?, rainbow };
            let report = run_pipeline(&g, &h, &t, &config)?;
            if let Some(path) = trace {
                std::fs::write(&path, report.trace_jsonl())
                    .map_err(|e| CliError::Io(format!("--trace: {}: {e}", path.display())))?;
            }
            Report::new("pipeline report", report)
        }
        Command::Cache { h, t, store } => {
            let (h, t) = (graphs.graph("H", &h)?, graphs.graph("T", &t)?);
            let store = store.unwrap_or_else(cache::default_store);
            let outcome = cache::lookup_or_compute(&h, &t, &store)?;
            let warnings = outcome.warning.iter().cloned().collect();
            let mut out = Report::new(
                "cache lookup",
                json!({ "cache": outcome.status, "key": outcome.key, "profile": outcome.profile, "store": store }),
            )?;
            out.warnings = warnings;
            Ok(out)
        }
    }
}

fn parse_constants(spec: &str) -> Result<ConstantsSpec, CliError> {
    let bad = || CliError::Usage(format!("--constants: expected paper, desk:C or desk:C1,C2,..., got {spec:?}"));
    if spec == "paper" {
        return Ok(ConstantsSpec::PaperScale);
    }
    let list = spec.strip_prefix("desk:").ok_or_else(bad)?;
    let values: Vec<BigUint> =
        list.split(',').map(|s| s.trim().parse::<BigUint>().map_err(|_| bad())).collect::<Result<_, _>>()?;
    match values.as_slice() {
        [] => Err(bad()),
        [c] => Ok(ConstantsSpec::DeskUniform(u64::try_from(c).map_err(|_| bad())?)),
        _ => Ok(ConstantsSpec::Desk(values)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_spec_forms() {
        assert_eq!(parse_constants("paper").unwrap(), ConstantsSpec::PaperScale);
        assert_eq!(parse_constants("desk:3").unwrap(), ConstantsSpec::DeskUniform(3));
        assert_eq!(
            parse_constants("desk:2,5").unwrap(),
            ConstantsSpec::Desk(vec![BigUint::from(2u8), BigUint::from(5u8)])
        );
        for bad in ["", "desk:", "desk:x", "fast"] {
            assert!(matches!(parse_constants(bad), Err(CliError::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn exit_codes_by_class() {
        let internal = turan_core::Error::Internal("x".into());
        assert_eq!(CliError::Core(internal.clone()).exit_code(), 2);
        assert_eq!(CliError::arg("G", internal).exit_code(), 2);
        assert_eq!(CliError::Core(turan_core::Error::Validation("x".into())).exit_code(), 1);
        assert_eq!(CliError::UnsupportedFormat("x").exit_code(), 1);
    }
}
