//! Command-line front end. `run` never exits the process, so it can be tested
//! in-process.
//!
//! Exit codes: 0 for decided answers, 2 for undetermined ones, 1 for input
//! errors and usage errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::classify::{self, Alpha, QiVerdict};
use crate::format::parse;
use crate::gog::{validate, GoGSpec, GraphOfGroups};
use crate::holonomy::{compute_holonomy, non_discreteness_witness};
use crate::linalg::rational::{parse_rational, rat};
use crate::words::distortion::{distortion_profile, letter_vector, ExactWindow};

pub const EXIT_DECIDED: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_UNDETERMINED: i32 = 2;

/// Holonomy witness bounds for the `holonomy` command.
const WITNESS_EPSILON: (i64, i64) = (1, 1000);
const WITNESS_MAX_LENGTH: usize = 11;
/// Powers up to this bound are all listed by `distortion`; beyond it only powers of 2.
const DENSE_POWERS: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "gbs",
    version,
    about = "Generalized Baumslag-Solitar groups as graphs of ℤⁿ-groups"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a .gog file for semantic errors.
    Validate { file: PathBuf },
    /// Print the standard presentation of the fundamental group.
    Presentation { file: PathBuf },
    /// Holonomy of each stable letter and a bounded non-discreteness search.
    Holonomy { file: PathBuf },
    /// Quasi-isometry subclass, Haagerup property and weak amenability.
    Classify { file: PathBuf },
    /// Decide whether two graphs of groups are quasi-isometric.
    Compare { first: PathBuf, second: PathBuf },
    /// Word length of powers of a vertex letter.
    Distortion {
        file: PathBuf,
        #[arg(long)]
        element: String,
        #[arg(long)]
        max_power: u64,
    },
    /// Equivariant L^p-compression exponent.
    Compression {
        file: PathBuf,
        /// Exponent p ≥ 1, as an integer, fraction or decimal.
        #[arg(long)]
        p: String,
    },
}

struct Output {
    code: i32,
    text: String,
    json: serde_json::Value,
}

fn to_json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn load(path: &Path) -> Result<GoGSpec, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse(&text).map_err(|e| format!("{}:{e}", path.display()))
}

/// Parsed and validated.
fn load_valid(path: &Path) -> Result<GoGSpec, String> {
    let spec = load(path)?;
    let report = validate(&spec);
    if !report.is_ok() {
        return Err(format!("{}: invalid graph of groups:\n{report}", path.display()));
    }
    Ok(spec)
}

fn decided(yes: bool) -> i32 {
    if yes {
        EXIT_DECIDED
    } else {
        EXIT_UNDETERMINED
    }
}

fn execute(command: Command) -> Result<Output, String> {
    let err = |e: &dyn std::fmt::Display| e.to_string();
    match command {
        Command::Validate { file } => {
            let spec = load(&file)?;
            let report = validate(&spec);
            let ok = report.is_ok();
            Ok(Output {
                code: if ok { EXIT_DECIDED } else { EXIT_INPUT },
                text: format!("{report}\n"),
                json: json!({ "valid": ok, "violations": to_json(&report.violations) }),
            })
        }
        Command::Presentation { file } => {
            let g = GraphOfGroups::new(load_valid(&file)?).map_err(|e| err(&e))?;
            let p = g.presentation();
            Ok(Output {
                code: EXIT_DECIDED,
                text: format!("{p}\n"),
                json: to_json(&p),
            })
        }
        Command::Holonomy { file } => {
            let hd = compute_holonomy(&load_valid(&file)?).map_err(|e| err(&e))?;
            let witness = non_discreteness_witness(&hd, &rat(WITNESS_EPSILON.0, WITNESS_EPSILON.1), WITNESS_MAX_LENGTH);
            let mut text = format!("base vertex {}\n", hd.base_vertex);
            for s in &hd.stable {
                let _ = writeln!(text, "hol({}) = {}", s.letter, s.matrix);
            }
            if !hd.vertex_letters.is_empty() {
                let _ = writeln!(text, "hol({}) = identity", hd.vertex_letters.join(", "));
            }
            let _ = writeln!(text, "{}", witness.describe());
            Ok(Output {
                code: EXIT_DECIDED,
                text,
                json: json!({ "holonomy": to_json(&hd), "non_discreteness": to_json(&witness) }),
            })
        }
        Command::Classify { file } => {
            let report = classify::classify(&load_valid(&file)?).map_err(|e| err(&e))?;
            let w = &report.whyte;
            let mut text = format!("ends: {}\namenable: {} ({})\n", w.ends, w.amenable, w.amenable_reason);
            for n in &w.notes {
                let _ = writeln!(text, "note: {n}");
            }
            for e in w.evidence.iter().chain(&report.cv.evidence) {
                let _ = writeln!(text, "evidence: {}", e.describe());
            }
            let _ = writeln!(text, "holonomy closure: {}", report.cv.reason);
            for c in &report.citations {
                let _ = writeln!(text, "cites: {}", c.key);
            }
            let _ = writeln!(text, "{}", report.summary_line());
            Ok(Output {
                code: decided(report.is_decided()),
                json: to_json(&report),
                text,
            })
        }
        Command::Compare { first, second } => {
            let (a, b) = (load_valid(&first)?, load_valid(&second)?);
            let r = classify::qi_compare(&a, &b).map_err(|e| err(&e))?;
            let mut text = format!("{}\n", r.verdict);
            let _ = writeln!(
                text,
                "{}{}",
                r.reason,
                if r.exact || r.verdict == QiVerdict::Undetermined {
                    ""
                } else {
                    " [sampled]"
                }
            );
            let _ = writeln!(text, "subclasses: {} and {}", r.left.whyte_case, r.right.whyte_case);
            for e in &r.evidence {
                let _ = writeln!(text, "evidence: {}", e.describe());
            }
            Ok(Output {
                code: decided(r.verdict != QiVerdict::Undetermined),
                json: to_json(&r),
                text,
            })
        }
        Command::Distortion {
            file,
            element,
            max_power,
        } => {
            let spec = load_valid(&file)?;
            if max_power == 0 {
                return Err("--max-power must be at least 1".into());
            }
            let v = letter_vector(&spec, &element).map_err(|e| err(&e))?;
            let mut powers: Vec<u64> = (1..=max_power.min(DENSE_POWERS)).collect();
            powers.extend((5..64).map(|k| 1u64 << k).take_while(|&m| m <= max_power));
            powers.push(max_power);
            powers.sort_unstable();
            powers.dedup();
            let profile = distortion_profile(&spec, &v, &powers, ExactWindow::default()).map_err(|e| err(&e))?;
            let mut text = String::new();
            for row in &profile.rows {
                let exact = row.exact_length.map_or("-".to_string(), |l| l.to_string());
                let _ = writeln!(
                    text,
                    "{element}^{}: length ≤ {} via {}; exact {exact}",
                    row.m, row.upper_bound, row.upper_bound_word
                );
            }
            if let Some(l) = profile.limsup_estimate {
                let _ = writeln!(text, "max length / ln m: {l:.3}");
            }
            Ok(Output {
                code: EXIT_DECIDED,
                json: to_json(&profile),
                text,
            })
        }
        Command::Compression { file, p } => {
            let spec = load_valid(&file)?;
            let p = parse_rational(&p).ok_or_else(|| format!("cannot parse exponent `{p}`"))?;
            let r = classify::compression_report(&spec, &p).map_err(|e| err(&e))?;
            let text = format!("{r}\n{}\n", r.reason);
            Ok(Output {
                code: decided(r.alpha != Alpha::Undetermined),
                json: to_json(&r),
                text,
            })
        }
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// the report. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let help = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let rendered = e.render().to_string();
            if help {
                let _ = write!(out, "{rendered}");
                return EXIT_DECIDED;
            }
            let _ = write!(err, "{rendered}");
            return EXIT_INPUT;
        }
    };
    let format = cli.format;
    match execute(cli.command) {
        Ok(o) => {
            let _ = match format {
                Format::Text => write!(out, "{}", o.text),
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&o.json).expect("json")),
            };
            o.code
        }
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_INPUT
        }
    }
}
