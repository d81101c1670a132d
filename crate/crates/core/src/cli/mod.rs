//! Command-line front end.
//!
//! Every subcommand produces a [`Report`]. JSON output is the whole report;
//! CSV output is the command's main table, with a one-line summary on stderr.
//! Exit codes: 0 when every property holds, 1 when one fails, 2 for
//! configuration and usage errors.

pub mod checks;
pub mod commands;
pub mod config;
pub mod tables;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::dynamics::format_real;
use crate::error::{Error, Result};
use crate::geometry::SpaceTag;
pub use config::{OutputFormat, RunConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "sl2z", version, about = "Superintegrable systems on deformed and constant-curvature 2D spaces")]
pub struct Cli {
    /// JSON run configuration
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Space tag: S2z, AdSz, H2z, dSz, E2, M2, S2, AdS, H2, dS
    #[arg(long, global = true)]
    pub space: Option<SpaceTag>,
    /// Deformation parameter
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub z: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Output file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Algebraic identities on random phase-space points
    Verify,
    /// Integrate a Hamiltonian flow and report invariant drift
    Simulate,
    /// Integrate a geodesic and compare with its closed form
    Geodesic,
    /// Gaussian curvature against a finite-difference oracle
    Curvature,
    /// Oscillator decomposition of the SW potential
    Decompose,
    /// Reference rows of the space and Hamiltonian tables
    Tables {
        /// Table numbers (1-4); all by default
        which: Vec<u8>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Simulate => "simulate",
            Command::Geodesic => "geodesic",
            Command::Curvature => "curvature",
            Command::Decompose => "decompose",
            Command::Tables { .. } => "tables",
        }
    }
}

/// Plain rows rendered as RFC 4180 CSV.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(w);
        out.write_record(&self.header)?;
        for r in &self.rows {
            out.write_record(r)?;
        }
        out.flush()?;
        Ok(())
    }
}

pub fn real(v: f64) -> String {
    format_real(v)
}

/// What a subcommand hands back before rendering.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub results: serde_json::Value,
    pub table: Table,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub config_echo: RunConfig,
    pub results: serde_json::Value,
    pub pass: bool,
}

/// Loads the configuration and applies the command-line overrides.
pub fn effective_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(tag) = cli.space {
        cfg.space = Some(tag);
    }
    if let Some(z) = cli.z {
        if !z.is_finite() {
            return Err(Error::Config(format!("--z must be finite, got {z}")));
        }
        cfg.model.z = Some(z);
        cfg.sampling.z_grid = vec![z];
    }
    if let Some(seed) = cli.seed {
        cfg.sampling.seed = seed;
    }
    if let Some(f) = cli.format {
        cfg.output.format = f;
    }
    if let Some(p) = &cli.out {
        cfg.output.path = Some(p.display().to_string());
    }
    if let Command::Tables { which } = &cli.command {
        if !which.is_empty() {
            cfg.tables = which.clone();
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn execute(command: &Command, cfg: &RunConfig) -> Result<Outcome> {
    match command {
        Command::Verify => commands::verify(cfg),
        Command::Simulate => commands::simulate(cfg),
        Command::Geodesic => commands::geodesic(cfg),
        Command::Curvature => commands::curvature(cfg),
        Command::Decompose => commands::decompose(cfg),
        Command::Tables { .. } => tables::tables(cfg),
    }
}

fn emit(report: &Report, table: &Table, cfg: &RunConfig) -> Result<()> {
    let mut sink: Box<dyn Write> = match &cfg.output.path {
        Some(p) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(p).map_err(|e| Error::Io(format!("cannot create {p}: {e}")))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    };
    match cfg.output.format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut sink, report).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(sink)?;
        }
        OutputFormat::Csv => {
            table.write_csv(&mut sink)?;
            eprintln!("{}: {}", report.command, if report.pass { "pass" } else { "FAIL" });
        }
    }
    sink.flush()?;
    Ok(())
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidSpec(_) | Error::Io(_) => EXIT_CONFIG,
        _ => EXIT_FAIL,
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
        }
    };
    let result = effective_config(&cli).and_then(|cfg| {
        let outcome = execute(&cli.command, &cfg)?;
        let report = Report { command: cli.command.name().into(), config_echo: cfg.clone(), results: outcome.results, pass: outcome.pass };
        emit(&report, &outcome.table, &cfg)?;
        Ok(report.pass)
    });
    match result {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
