//! Command-line parsing and exit codes.
//!
//! Exit status 0 means every check passed, 1 that some check failed (the
//! report lists counterexamples) and 2 that the input was unusable; in the
//! last case a single JSON object describing the error goes to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::io::{parse_fraction, parse_lattice_file, InputError, SectorSpec};
use crate::jobs::{run_job, Command, JobError, JobSpec};
use crate::report::{write_atomic, Format};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "latvoa",
    version,
    about = "Exact checks for lattice vertex algebras and their modules"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Jacobi identity, Virasoro relations, vacuum, creation, derivative and grading axioms.
    CheckAxioms(Common),
    /// Character tables of every coset module against the partition count.
    Characters(Common),
    /// Irreducible modules of the tensor product of two lattice algebras.
    Classify(Common),
    /// Splits the dual lattice module into irreducible summands.
    Decompose(Common),
    /// Tensor mode expansion, slot commutation and character convolution.
    TensorCheck(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Lattice JSON file with a "gram" key; repeat for several lattices.
    #[arg(long = "lattice", value_name = "PATH", required = true)]
    lattices: Vec<PathBuf>,
    /// Window weight bound, an exact fraction such as 4 or 7/2.
    #[arg(long, value_name = "Q", default_value = "4")]
    max_weight: String,
    /// Sector box `radius:R` or explicit sectors such as `0,0;1,-1`.
    #[arg(long, value_name = "SPEC", default_value = "radius:1")]
    sectors: String,
    /// Report path; standard output when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Closure depth of operator samples.
    #[arg(long, default_value_t = latvoa_core::module::DEFAULT_DEPTH)]
    depth: usize,
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    error: &'a str,
    message: String,
}

fn usage(stderr: &mut impl Write, kind: &str, message: impl Into<String>) -> i32 {
    let body = ErrorJson {
        error: kind,
        message: message.into(),
    };
    let _ = writeln!(
        stderr,
        "{}",
        serde_json::to_string(&body).expect("error serializes")
    );
    EXIT_USAGE
}

fn spec_from(command: Command, c: &Common) -> Result<JobSpec, InputError> {
    let lattices = c
        .lattices
        .iter()
        .map(|p| parse_lattice_file(p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(JobSpec {
        command,
        lattices,
        max_weight: parse_fraction(&c.max_weight)?,
        sectors: c.sectors.parse::<SectorSpec>()?,
        seed: c.seed,
        depth: c.depth,
    })
}

/// Runs the command line `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_PASS;
            }
            return usage(stderr, "usage", e.render().to_string().trim_end());
        }
    };
    let (command, common) = match &cli.command {
        Sub::CheckAxioms(c) => (Command::CheckAxioms, c),
        Sub::Characters(c) => (Command::Characters, c),
        Sub::Classify(c) => (Command::Classify, c),
        Sub::Decompose(c) => (Command::Decompose, c),
        Sub::TensorCheck(c) => (Command::TensorCheck, c),
    };
    let spec = match spec_from(command, common) {
        Ok(s) => s,
        Err(e) => return usage(stderr, e.kind(), e.to_string()),
    };
    let report = match run_job(&spec) {
        Ok(r) => r,
        Err(JobError::Input(e)) => return usage(stderr, e.kind(), e.to_string()),
        Err(e @ JobError::Usage(_)) => return usage(stderr, "usage", e.to_string()),
    };
    let bytes = report.render(common.format);
    match &common.out {
        Some(path) => {
            if let Err(e) = write_atomic(path, &bytes) {
                return usage(
                    stderr,
                    "io",
                    format!("{}: cannot write report: {e}", path.display()),
                );
            }
        }
        None => {
            let _ = stdout.write_all(&bytes);
        }
    }
    if report.passed {
        EXIT_PASS
    } else {
        EXIT_FAILURE
    }
}
