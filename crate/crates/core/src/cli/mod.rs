//! The `pointfree` command line: loads a workspace directory and runs one
//! subcommand, printing a versioned report.
//!
//! Exit codes are 0 when every verdict passes, 1 when some verdict fails
//! and 2 on errors (unknown names, malformed input, infinite targets for
//! `export-dot`).

#[macro_use]
mod workspace;
mod commands;
mod report;

pub use commands::{finite_frame_of, CheckProperty, MapAction};
pub use report::{Report, HEADER};
pub use workspace::{parse_maps, AnyMap, MapSpec, Space, Workspace, WorkspaceError};

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_traits::Signed;
use thiserror::Error;

use crate::compactification::CompactifyError;
use crate::cstar::CStarError;
use crate::locale::Grid;
use crate::rational::{parse_q, pow2_neg, Q};
use crate::spectrum::SpectrumError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error(transparent)]
    Workspace(#[from] WorkspaceError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}: not finitely renderable")]
    NotFinite(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    CStar(#[from] CStarError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Compactify(#[from] CompactifyError),
}

#[derive(Debug, Parser)]
#[command(
    name = "pointfree",
    version,
    about = "Finite presentations of locales, compactifications and spectra"
)]
struct Args {
    /// Directory holding the lattice, locale, algebra and map files.
    #[arg(long, global = true, default_value = "workspace")]
    workspace: PathBuf,
    /// Precision for norm brackets, as an exact rational.
    #[arg(long, global = true)]
    eps: Option<String>,
    /// Emit `key<TAB>value` records.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide or spot-check a property of a locale.
    Check { target: String, property: String },
    /// Build the one-point compactification and check it is compact regular.
    Compactify { target: String },
    /// Spectrum, compactified spectrum and the ideal/open correspondence.
    Dual {
        algebra: String,
        #[arg(long)]
        ideal: Option<String>,
    },
    /// Bracket the norm of an element from positivity of the spectrum.
    Norm { algebra: String, element: String },
    /// Validate the unitization, optionally computing one norm.
    Unitize {
        algebra: String,
        element: Option<String>,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        scalar: String,
    },
    /// Check a partial map for properness and its extension to the
    /// compactifications.
    MapCheck {
        map: String,
        #[arg(default_value = "all")]
        action: String,
    },
    /// Write the Hasse diagram of a finite frame of opens in DOT.
    #[command(alias = "export")]
    ExportDot {
        target: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the registered names.
    List,
}

/// What a run printed and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn error(message: impl std::fmt::Display) -> Self {
        Self {
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
            code: 2,
        }
    }
}

fn default_eps() -> Q {
    pow2_neg(20)
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            };
        }
    };
    match execute(&args) {
        Ok((report, holds)) => Outcome {
            stdout: report.render(args.machine),
            stderr: String::new(),
            code: if holds { 0 } else { 1 },
        },
        Err(e) => Outcome::error(e),
    }
}

fn execute(args: &Args) -> Result<(Report, bool), CliError> {
    let eps = match &args.eps {
        Some(t) => {
            let e = parse_q(t).map_err(|_| CliError::Usage(format!("bad --eps {t:?}")))?;
            if !e.is_positive() {
                return Err(CliError::Usage("--eps must be positive".into()));
            }
            e
        }
        None => default_eps(),
    };
    let ws = Workspace::load(&args.workspace)?;
    let grid = Grid::default();
    let mut r;
    let holds = match &args.command {
        Command::Check { target, property } => {
            let property: CheckProperty = property.parse().map_err(CliError::Usage)?;
            let space = ws.space(target)?;
            r = Report::new("check");
            commands::check(space, property, &grid, &mut r)
        }
        Command::Compactify { target } => {
            let space = ws.space(target)?;
            r = Report::new("compactify");
            commands::compactify_cmd(space, &grid, &mut r)
        }
        Command::Dual { algebra, ideal } => {
            let a = ws.algebra(algebra)?;
            r = Report::new("dual");
            commands::dual(&a, ideal.as_deref(), &Grid::small(), &mut r)?
        }
        Command::Norm { algebra, element } => {
            let a = ws.algebra(algebra)?;
            r = Report::new("norm");
            commands::norm(&a, element, &eps, &mut r)?
        }
        Command::Unitize {
            algebra,
            element,
            scalar,
        } => {
            let a = ws.algebra(algebra)?;
            r = Report::new("unitize");
            commands::unitize_cmd(&a, element.as_deref(), scalar, &eps, &mut r)?
        }
        Command::MapCheck { map, action } => {
            let action: MapAction = action.parse().map_err(CliError::Usage)?;
            let (_, m) = ws.map(map)?;
            r = Report::new("map-check");
            commands::map_check(&m, action, &grid, &mut r)
        }
        Command::ExportDot { target, out } => {
            let space = ws.space(target)?;
            r = Report::new("export-dot");
            commands::export(space, out.as_deref(), &grid, &mut r)?
        }
        Command::List => {
            r = Report::new("list");
            let rows = ws.names().into_iter().map(|(n, k)| vec![n, k.to_string()]).collect();
            r.table("names", &["name", "kind"], rows);
            true
        }
    };
    Ok((r, holds))
}
