//! Command-line front end for the `circwidth` library.
//!
//! [`run`] parses an argument vector, performs the command and returns the
//! text, the optional JSON value and the exit status; `main` only prints.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use circwidth::format::{self, FormatError};
use circwidth::knot_ops::{self, InducedSum, KnotOpsError};
use circwidth::knot_table::{self, TableError};
use circwidth::rewrites::{self, RewriteError};
use circwidth::{compare_width, CircularDecomposition, DecompositionError, WidthMultiset};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
    /// Set only on success with `--json`; `stdout` then holds its rendering.
    pub json: Option<Value>,
}

#[derive(Debug, Parser)]
#[command(
    name = "circwidth",
    version,
    about = "Circular width of knot exteriors"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SumArg {
    Csum,
    Bsum,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a decomposition file; exits 1 if it is invalid.
    Validate { file: PathBuf },
    /// Print the width multiset.
    Width { file: PathBuf },
    /// Compare two widths: less, equal or greater.
    Compare { left: PathBuf, right: PathBuf },
    /// Decomposition induced on the connected sum of two knots.
    Csum {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Decomposition induced on the boundary sum of two knot exteriors.
    Bsum {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Width upper bound for a connected or boundary sum.
    Bound {
        kind: SumArg,
        left: PathBuf,
        right: PathBuf,
    },
    /// Bounded search for a thinner decomposition.
    Thin {
        file: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Shape indicators of a knot-exterior decomposition.
    Classify {
        file: PathBuf,
        /// Record that the decomposition is known to be in circular thin position.
        #[arg(long)]
        assert_thin: bool,
    },
    /// Canonical decomposition of a knot from an invariant table.
    Knot {
        name: String,
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error("{path}: {source}")]
    Table { path: String, source: TableError },
    #[error("{0}")]
    Knot(#[from] TableError),
    #[error("{0}")]
    Decomposition(#[from] DecompositionError),
    #[error("{0}")]
    KnotOps(#[from] KnotOpsError),
    #[error("{0}")]
    Rewrite(#[from] RewriteError),
}

/// What a successful command produced, before rendering.
struct Output {
    text: String,
    json: Value,
    status: i32,
    writes: Vec<(PathBuf, String)>,
}

impl Output {
    fn new(text: String, json: Value) -> Self {
        Self {
            text,
            json,
            status: EXIT_OK,
            writes: Vec::new(),
        }
    }
}

pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let (stdout, stderr) = if status == EXIT_OK {
                (rendered, String::new())
            } else {
                (String::new(), rendered)
            };
            return CommandResult {
                status,
                stdout,
                stderr,
                json: None,
            };
        }
    };
    match execute(&cli.command).and_then(commit) {
        Ok(out) => {
            let (stdout, json) = if cli.json {
                let text = serde_json::to_string_pretty(&out.json).expect("json value") + "\n";
                (text, Some(out.json))
            } else {
                (out.text, None)
            };
            CommandResult {
                status: out.status,
                stdout,
                stderr: String::new(),
                json,
            }
        }
        Err(e) => CommandResult {
            status: EXIT_DOMAIN,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            json: None,
        },
    }
}

/// Files are written only once the whole command has succeeded.
fn commit(out: Output) -> Result<Output, CliError> {
    for (path, contents) in &out.writes {
        std::fs::write(path, contents).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(out)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load(path: &Path) -> Result<CircularDecomposition, CliError> {
    format::parse(&read(path)?).map_err(|source| CliError::Format {
        path: path.display().to_string(),
        source,
    })
}

fn label(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn width_json(w: &WidthMultiset) -> Value {
    json!(w.entries())
}

fn execute(command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Validate { file } => {
            let d = load(file)?;
            let report = d.validate();
            let mut out = Output::new(
                report.to_string(),
                json!({ "valid": report.is_valid(), "report": report }),
            );
            if !report.is_valid() {
                out.status = EXIT_DOMAIN;
            }
            Ok(out)
        }
        Command::Width { file } => {
            let w = load(file)?.width()?;
            Ok(Output::new(
                format!("{w}\n"),
                json!({ "width": width_json(&w) }),
            ))
        }
        Command::Compare { left, right } => {
            let a = load(left)?.width()?;
            let b = load(right)?.width()?;
            let order = match compare_width(&a, &b) {
                std::cmp::Ordering::Less => "less",
                std::cmp::Ordering::Equal => "equal",
                std::cmp::Ordering::Greater => "greater",
            };
            Ok(Output::new(
                format!("{order}\n"),
                json!({ "order": order, "left": width_json(&a), "right": width_json(&b) }),
            ))
        }
        Command::Csum {
            left,
            right,
            output,
        } => sum(left, right, output, knot_ops::connected_sum),
        Command::Bsum {
            left,
            right,
            output,
        } => sum(left, right, output, knot_ops::boundary_sum),
        Command::Bound { kind, left, right } => {
            let (a, b) = (load(left)?, load(right)?);
            let (w, name) = match kind {
                SumArg::Csum => (knot_ops::cw_upper_bound_csum(&a, &b)?, "csum"),
                SumArg::Bsum => (knot_ops::cw_upper_bound_bsum(&a, &b)?, "bsum"),
            };
            Ok(Output::new(
                format!("{w}\n"),
                json!({ "kind": name, "bound": width_json(&w) }),
            ))
        }
        Command::Thin {
            file,
            budget,
            output,
            trace,
        } => {
            let d = load(file)?;
            let r = rewrites::thin_search(&d, *budget)?;
            let steps: Vec<String> = r.trace.iter().map(|s| s.to_string()).collect();
            let mut text = format!("{}\nwidth {}\n", rewrites::FORMAL_MODEL_LABEL, r.width);
            let _ = writeln!(text, "explored {}", r.explored);
            let _ = writeln!(text, "exhausted {}", r.exhausted);
            let _ = writeln!(text, "rewrites {}", steps.len());
            let mut out = Output::new(
                text,
                json!({
                    "label": rewrites::FORMAL_MODEL_LABEL,
                    "width": width_json(&r.width),
                    "explored": r.explored,
                    "exhausted": r.exhausted,
                    "trace": steps,
                }),
            );
            if let Some(path) = output {
                out.writes.push((path.clone(), format::serialize(&r.best)));
            }
            if let Some(path) = trace {
                out.writes
                    .push((path.clone(), rewrites::format_trace(&r.trace)));
            }
            Ok(out)
        }
        Command::Classify { file, assert_thin } => {
            let c = rewrites::classify(&load(file)?, *assert_thin)?;
            let text = format!(
                "form {}\nclosed-thin-component {}\nconnected-thin-surfaces {}\nthin-asserted {}\n",
                c.form, c.closed_thin_component, c.connected_thin_surfaces, c.thin_asserted
            );
            Ok(Output::new(
                text,
                serde_json::to_value(c).expect("classification"),
            ))
        }
        Command::Knot {
            name,
            table,
            output,
        } => {
            let records =
                knot_table::parse_table(&read(table)?).map_err(|source| CliError::Table {
                    path: table.display().to_string(),
                    source,
                })?;
            let record = knot_table::find(&records, name)?;
            let d = knot_table::canonical_decomposition(record)?;
            let w = d.width()?;
            let body = format::serialize(&d);
            Ok(match output {
                Some(path) => {
                    let mut o = Output::new(
                        format!("width {w}\n"),
                        json!({ "knot": record, "width": width_json(&w), "output": path }),
                    );
                    o.writes.push((path.clone(), body));
                    o
                }
                None => Output::new(
                    body.clone(),
                    json!({ "knot": record, "width": width_json(&w), "decomposition": body }),
                ),
            })
        }
    }
}

fn sum(
    left: &Path,
    right: &Path,
    output: &Path,
    op: fn(&CircularDecomposition, &CircularDecomposition) -> Result<InducedSum, KnotOpsError>,
) -> Result<Output, CliError> {
    let induced = op(&load(left)?, &load(right)?)?.labelled(&label(left), &label(right));
    let w = induced.decomposition.width()?;
    let mut out = Output::new(
        format!("width {w}\n"),
        json!({
            "width": width_json(&w),
            "provenance": induced.provenance,
            "output": output,
        }),
    );
    out.writes.push((
        output.to_path_buf(),
        format::serialize(&induced.decomposition),
    ));
    Ok(out)
}
