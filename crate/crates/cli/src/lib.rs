//! File formats, subcommand dispatch and reports for `hcyc-core`.
//!
//! Every run is a pure function of its input files, flags and seed; reports
//! carry no timing or host data, so a fixed seed gives byte-identical
//! output.

mod commands;
pub mod report;
pub mod schema;
mod selftest;

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

pub use report::{Fact, Format, Report, Row, Table, Tally};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The file is missing or does not match its JSON schema.
    #[error("{path}: {msg}")]
    Schema { path: String, msg: String },

    /// The file parsed but the object fails a domain validator.
    #[error("{path}: {msg}")]
    Validation { path: String, msg: String },

    #[error(transparent)]
    Core(#[from] hcyc_core::Error),

    #[error("{0}")]
    Usage(String),

    #[error("{0}: {1}")]
    Io(String, std::io::Error),
}

impl CliError {
    /// 2 for resource caps, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_resource_limit() => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, Parser)]
#[command(
    name = "hcyc",
    version,
    about = "Exact cyclic homology, twisted cohomology, Chern characters and Dixmier-Douady classes"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Highest degree computed (tensor degree for hh/hc/hp/chern/jlo).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_degree: Option<u64>,

    /// u-window half-width for twisted and ss.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub window: Option<u64>,

    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Largest coordinate space any single step may allocate.
    #[arg(long, global = true, default_value_t = hcyc_core::cyclic::DEFAULT_CAP as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: u64,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Debug, Args)]
pub struct AlgebraInput {
    #[arg(long)]
    pub algebra: PathBuf,
}

#[derive(Clone, Debug, Args)]
pub struct TwistInput {
    #[arg(long)]
    pub cdga: PathBuf,
    /// Closed 3-form as a combination of basis labels, e.g. `x3` or `2*b3`.
    #[arg(long, default_value = "0")]
    pub twist: String,
}

#[derive(Clone, Debug, Args)]
pub struct ConnectionInput {
    #[arg(long)]
    pub cdga: PathBuf,
    /// Matrix size of the connection.
    #[arg(long, default_value_t = 2)]
    pub size: usize,
    /// The 2-form φ; the twist is `c = −dφ`.
    #[arg(long, default_value = "0")]
    pub phi: String,
    /// Number of random chains checked.
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Lift {
    Canonical,
    AsGiven,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Hochschild homology of a finite-dimensional algebra.
    Hh(AlgebraInput),
    /// Cyclic homology.
    Hc(AlgebraInput),
    /// Periodic cyclic homology with its stabilization certificate.
    Hp(AlgebraInput),
    /// Twisted cohomology of a graded-commutative model.
    Twisted(TwistInput),
    /// Spectral sequence of the form-degree filtration.
    Ss {
        #[command(flatten)]
        input: TwistInput,
        /// Number of pages computed.
        #[arg(long, default_value_t = 6)]
        pages: usize,
    },
    /// Closedness of the Chern character on random idempotents or invertibles.
    Chern {
        #[command(flatten)]
        input: AlgebraInput,
        #[arg(long, default_value_t = 2)]
        size: usize,
        #[arg(long, value_enum, default_value_t = Parity::Even)]
        parity: Parity,
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// Chain-map identity of the JLO character for a random connection.
    Jlo(ConnectionInput),
    /// Homotopy formula along a linear path of connections.
    Homotopy {
        #[command(flatten)]
        input: ConnectionInput,
        /// 2-forms β₁, β₂, … of the path `θ + tα`, `φ − Σ t^k β_k` (α random).
        #[arg(long)]
        beta: Vec<String>,
    },
    /// Dixmier-Douady class of projective transition data.
    Dd {
        #[arg(long)]
        nerve: PathBuf,
        #[arg(long)]
        cocycle: PathBuf,
        #[arg(long, value_enum, default_value_t = Lift::Canonical)]
        lift: Lift,
        /// Random re-lifts and coboundary shifts checked.
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Whether two transition data on one nerve have the same class.
    ClassCompare {
        #[arg(long)]
        nerve: PathBuf,
        #[arg(long)]
        first: PathBuf,
        #[arg(long)]
        second: PathBuf,
    },
    /// The full property suite at small sizes.
    Selftest,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Hh(_) => "hh",
            Command::Hc(_) => "hc",
            Command::Hp(_) => "hp",
            Command::Twisted(_) => "twisted",
            Command::Ss { .. } => "ss",
            Command::Chern { .. } => "chern",
            Command::Jlo(_) => "jlo",
            Command::Homotopy { .. } => "homotopy",
            Command::Dd { .. } => "dd",
            Command::ClassCompare { .. } => "class-compare",
            Command::Selftest => "selftest",
        }
    }
}

fn path(p: &std::path::Path) -> Value {
    Value::String(p.display().to_string())
}

impl RunConfig {
    /// The flags that determine the result, for the report header.
    pub fn echo(&self) -> BTreeMap<String, Value> {
        let mut c = BTreeMap::new();
        c.insert("subcommand".into(), self.command.name().into());
        c.insert("cap".into(), self.cap.into());
        if let Some(d) = self.max_degree {
            c.insert("max_degree".into(), d.into());
        }
        if let Some(w) = self.window {
            c.insert("window".into(), w.into());
        }
        let mut put = |k: &str, v: Value| {
            c.insert(k.into(), v);
        };
        match &self.command {
            Command::Hh(a) | Command::Hc(a) | Command::Hp(a) => put("algebra", path(&a.algebra)),
            Command::Twisted(t) => {
                put("cdga", path(&t.cdga));
                put("twist", t.twist.clone().into());
            }
            Command::Ss { input, pages } => {
                put("cdga", path(&input.cdga));
                put("twist", input.twist.clone().into());
                put("pages", (*pages).into());
            }
            Command::Chern {
                input,
                size,
                parity,
                samples,
            } => {
                put("algebra", path(&input.algebra));
                put("size", (*size).into());
                put(
                    "parity",
                    if *parity == Parity::Even {
                        "even"
                    } else {
                        "odd"
                    }
                    .into(),
                );
                put("samples", (*samples).into());
            }
            Command::Jlo(j) => connection_echo(&mut put, j),
            Command::Homotopy { input, beta } => {
                connection_echo(&mut put, input);
                put("beta", beta.clone().into());
            }
            Command::Dd {
                nerve,
                cocycle,
                lift,
                samples,
            } => {
                put("nerve", path(nerve));
                put("cocycle", path(cocycle));
                put(
                    "lift",
                    if *lift == Lift::Canonical {
                        "canonical"
                    } else {
                        "as-given"
                    }
                    .into(),
                );
                put("samples", (*samples).into());
            }
            Command::ClassCompare {
                nerve,
                first,
                second,
            } => {
                put("nerve", path(nerve));
                put("first", path(first));
                put("second", path(second));
            }
            Command::Selftest => {}
        }
        c
    }
}

fn connection_echo(put: &mut impl FnMut(&str, Value), j: &ConnectionInput) {
    put("cdga", path(&j.cdga));
    put("size", j.size.into());
    put("phi", j.phi.clone().into());
    put("samples", j.samples.into());
}

/// Runs one subcommand. Errors carry the exit code; a report with failed
/// tallies is still returned and maps to exit code 1.
pub fn run_command(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut report = Report::new(cfg.echo(), cfg.seed);
    commands::dispatch(cfg, &mut report)?;
    Ok(report)
}

/// Writes the rendered report to `--out` or returns it for standard output.
pub fn emit_report(
    r: &Report,
    format: Format,
    out: Option<&std::path::Path>,
) -> Result<Option<String>, CliError> {
    let text = r.render(format)?;
    match out {
        Some(p) => {
            fs::write(p, text).map_err(|e| CliError::Io(p.display().to_string(), e))?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

/// `0` when every tally passed, `1` otherwise.
pub fn exit_code(r: &Report) -> i32 {
    (r.failures() > 0) as i32
}
