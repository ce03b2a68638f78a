//! Command-line front end: scene files in, JSON reports out.
//!
//! Exit codes: 0 for a degenerate (or classified) configuration, 1 for a
//! well-formed non-degenerate one, 2 for any error.

mod commands;
mod report;
pub mod scene;

use crate::error::GeomError;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub use report::Report;

pub const EXIT_DEGENERATE: i32 = 0;
pub const EXIT_NON_DEGENERATE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "lorentz-gram", version, about = "Gram-determinant tests for configurations in hyperbolic space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a scene satisfies a theorem's degeneracy condition.
    Verify(RunArgs),
    /// Extract the geometric witness behind a degenerate scene.
    Classify(RunArgs),
    /// Print a generated scene.
    Generate(GenArgs),
    /// Report which three-term relation holds among four objects.
    Relation(RelationArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    Penner,
    Ptolemy1,
    Ptolemy2,
    Casey,
    CaseyE,
}

impl Theorem {
    pub fn name(self) -> &'static str {
        match self {
            Theorem::Penner => "penner",
            Theorem::Ptolemy1 => "ptolemy1",
            Theorem::Ptolemy2 => "ptolemy2",
            Theorem::Casey => "casey",
            Theorem::CaseyE => "casey-e",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Scene file.
    #[arg(required_unless_present = "scenes_dir")]
    pub scene: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub theorem: Theorem,
    #[arg(long, default_value_t = crate::lorentz::DEFAULT_TOL)]
    pub tol: f64,
    /// Search over coorientations (default on for casey and casey-e).
    #[arg(long)]
    pub search_signs: Option<bool>,
    /// Add Poincaré ball coordinates to the report.
    #[arg(long)]
    pub emit_disk: bool,
    /// Process every `*.json` scene in a directory.
    #[arg(long, conflicts_with = "scene")]
    pub scenes_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub kind: String,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Kind-specific parameters as `key=value` (radius, offset, lambda).
    #[arg(long, num_args = 1..)]
    pub params: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct RelationArgs {
    #[arg(required_unless_present = "scenes_dir")]
    pub scene: Option<PathBuf>,
    #[arg(long, default_value_t = crate::lorentz::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, conflicts_with = "scene")]
    pub scenes_dir: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Schema(_) => "SchemaViolation",
            CliError::Io(_) => "IoError",
            CliError::Usage(_) => "UsageError",
            CliError::Geom(e) => e.kind(),
        }
    }
}

/// Output document and exit code of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

impl Outcome {
    fn from_report(r: &Report) -> Self {
        Outcome { output: r.render(), code: r.code }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Verify(a) => run_scenes(a.scene.as_deref(), a.scenes_dir.as_deref(), |text| {
            commands::verify(text, a)
        }),
        Command::Classify(a) => run_scenes(a.scene.as_deref(), a.scenes_dir.as_deref(), |text| {
            commands::classify(text, a)
        }),
        Command::Relation(a) => run_scenes(a.scene.as_deref(), a.scenes_dir.as_deref(), |text| {
            commands::relation(text, a)
        }),
        Command::Generate(a) => commands::generate(a),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn run_scenes(
    scene: Option<&Path>,
    dir: Option<&Path>,
    f: impl Fn(&str) -> Report + Sync,
) -> Outcome {
    let one = |path: &Path| match read(path) {
        Ok(text) => f(&text),
        Err(e) => Report::error("", &e),
    };
    match (scene, dir) {
        (Some(path), _) => Outcome::from_report(&one(path)),
        (None, Some(dir)) => {
            let mut paths: Vec<PathBuf> = match std::fs::read_dir(dir) {
                Ok(entries) => entries
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|p| p.extension().is_some_and(|x| x == "json"))
                    .collect(),
                Err(e) => {
                    let err = CliError::Io(format!("{}: {e}", dir.display()));
                    return Outcome::from_report(&Report::error("", &err));
                }
            };
            paths.sort();
            let reports: Vec<Report> = std::thread::scope(|s| {
                let handles: Vec<_> = paths.iter().map(|p| s.spawn(|| one(p))).collect();
                handles.into_iter().map(|h| h.join().expect("scene worker")).collect()
            });
            let code = reports.iter().map(|r| r.code).max().unwrap_or(EXIT_DEGENERATE);
            let mut map = BTreeMap::new();
            for (p, r) in paths.iter().zip(&reports) {
                let name = p.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
                map.insert(name, r.value.clone());
            }
            let mut doc = Map::new();
            doc.insert("schema".into(), Value::from(scene::SCHEMA));
            doc.insert("reports".into(), serde_json::to_value(map).expect("reports"));
            Outcome {
                output: report::render_value(&Value::Object(doc)),
                code,
            }
        }
        (None, None) => Outcome::from_report(&Report::error(
            "",
            &CliError::Usage("a scene file or --scenes-dir is required".into()),
        )),
    }
}
