//! Command-line front end. `run` parses arguments, dispatches, and returns the
//! process exit code: 0 pass, 1 certification failure, 2 usage or parse error.

mod analyze;
mod construct;
pub mod file;
mod search;
mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::Value;

use crate::error::MufError;
use crate::linalg::Tolerance;

pub use file::{ConstellationFile, Kind};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "mufkit", version, about = "Build, verify and search unbiased vector constellations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify the constellation stored in a file.
    Verify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Write a constellation file.
    Construct {
        #[command(subcommand)]
        kind: construct::ConstructKind,
    },
    /// Numerically search for a Weyl-Heisenberg fiducial.
    Search(search::SearchArgs),
    /// Run an analysis on a single-state file.
    #[command(group(ArgGroup::new("mode").required(true).args(["uncertainty", "zauner", "params"])))]
    Analyze {
        file: PathBuf,
        /// Rényi-2 entropy certificate against d+1 bases.
        #[arg(long)]
        uncertainty: bool,
        /// Bases for --uncertainty (a mub_set or muf_system file).
        #[arg(long, requires = "uncertainty")]
        bases: Option<PathBuf>,
        /// Zauner-triplet certificate.
        #[arg(long)]
        zauner: bool,
        /// Reduced fiducial coordinates.
        #[arg(long)]
        params: bool,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        eps: Option<f64>,
    },
}

/// Output options shared by the construct subcommands.
#[derive(Args, Debug, Clone)]
struct OutputArgs {
    #[arg(short, long)]
    output: PathBuf,
    /// Tolerance recorded in the file.
    #[arg(long)]
    eps: Option<f64>,
}

/// Result of a command: pass/fail plus a structured and a human rendering.
struct Report {
    pass: bool,
    value: Value,
    text: String,
}

impl Report {
    fn emit(&self, json: bool, out: &mut dyn Write) {
        if json {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&self.value).expect("json value"));
        } else {
            let _ = write!(out, "{}", self.text);
        }
    }

    fn code(&self) -> i32 {
        if self.pass {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }
}

/// Error raised while running a command, carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(e: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }

    fn fail(e: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_FAIL,
            message: e.to_string(),
        }
    }
}

impl From<MufError> for Failure {
    fn from(e: MufError) -> Self {
        Self::usage(e)
    }
}

fn tolerance(eps: Option<f64>, file: Option<&ConstellationFile>) -> Result<Tolerance, Failure> {
    match (eps, file) {
        (Some(e), _) => Tolerance::new(e).map_err(Failure::usage),
        (None, Some(f)) => Ok(f.tolerance()),
        (None, None) => Ok(Tolerance::from_env()),
    }
}

fn read_file(path: &std::path::Path) -> Result<ConstellationFile, Failure> {
    ConstellationFile::read(path).map_err(Failure::usage)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    let (json, result) = match cli.command {
        Command::Verify { file, json, eps } => (json, verify::run(&file, eps)),
        Command::Construct { kind } => (false, construct::run(kind)),
        Command::Search(args) => (args.json, search::run(&args, err)),
        Command::Analyze {
            file,
            uncertainty,
            bases,
            zauner,
            params,
            json,
            eps,
        } => {
            let mode = if uncertainty {
                analyze::Mode::Uncertainty(bases)
            } else if zauner {
                analyze::Mode::Zauner
            } else {
                debug_assert!(params);
                analyze::Mode::Params
            };
            (json, analyze::run(&file, mode, eps))
        }
    };
    match result {
        Ok(report) => {
            report.emit(json, out);
            report.code()
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
