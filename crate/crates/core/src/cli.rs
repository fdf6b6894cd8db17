//! Command-line front end.
//!
//! Exit codes: 0 success, 1 domain, parse or I/O failure, 2 usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::domains::{from_spec, validate};
use crate::error::Error;
use crate::io::{write_csv, write_json, write_obj_surface, write_vtk};
use crate::lattice::OctantSet;
use crate::mesh_builder::{build, extract_surface};
use crate::quality::{quality_report, replicate_table, TableId};

/// Meshes above this many tetrahedra need `--force-large`.
pub const LARGE_MESH_TETS: u64 = 2_000_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "spheromesh", version, about = "Structured tetrahedral meshes of star-shaped domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OctantArg {
    /// The positive octant only.
    Nu,
    /// The whole domain.
    All,
}

impl From<OctantArg> for OctantSet {
    fn from(o: OctantArg) -> Self {
        match o {
            OctantArg::Nu => OctantSet::NU,
            OctantArg::All => OctantSet::ALL,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MeshFormat {
    /// Legacy ASCII VTK unstructured grid.
    Vtk,
    /// Boundary surface as Wavefront OBJ.
    Obj,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a mesh and write it to a file.
    Generate {
        /// sphere, ellipsoid:a=<x>, fourlobe:b=<x> or expr:<expression>
        #[arg(long)]
        domain: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        p: u32,
        #[arg(long, value_enum, default_value = "all")]
        octant: OctantArg,
        #[arg(long, value_enum, default_value = "vtk")]
        format: MeshFormat,
        #[arg(long)]
        out: PathBuf,
        /// Allow meshes with more than two million tetrahedra.
        #[arg(long)]
        force_large: bool,
    },
    /// Print volume-ratio and Joe–Liu quality as JSON.
    Quality {
        #[arg(long)]
        domain: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        p: u32,
        #[arg(long, value_enum, default_value = "nu")]
        octant: OctantArg,
    },
    /// Recompute a study table as CSV.
    Tables {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        id: u8,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample a boundary function and report its range.
    Validate {
        #[arg(long)]
        domain: String,
        #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u64).range(1..=100_000))]
        samples: u64,
    },
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Run(Error::Io(e))
    }
}

fn create(path: &PathBuf) -> Result<File, Failure> {
    File::create(path).map_err(|e| Failure::Run(Error::invalid(format!("cannot create {}: {e}", path.display()))))
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Generate { domain, p, octant, format, out, force_large } => {
            let octants = OctantSet::from(octant);
            let tets = 6 * u64::from(p).pow(3) * octants.len() as u64;
            if tets > LARGE_MESH_TETS && !force_large {
                return Err(Failure::Usage(format!(
                    "p={p} with octant {octants} gives {tets} tetrahedra; pass --force-large to write it"
                )));
            }
            let f = from_spec(&domain)?;
            let mesh = build(&f, p, octants)?;
            let file = create(&out)?;
            match format {
                MeshFormat::Vtk => write_vtk(&mesh, file)?,
                MeshFormat::Obj => write_obj_surface(&extract_surface(&mesh), file)?,
            }
            log::info!("wrote {} tetrahedra to {}", mesh.tets.len(), out.display());
        }
        Command::Quality { domain, p, octant } => {
            let f = from_spec(&domain)?;
            let mesh = build(&f, p, octant.into())?;
            write_json(&quality_report(&mesh)?, io::stdout().lock())?;
        }
        Command::Tables { id, out } => {
            let table = replicate_table(TableId::try_from(id)?)?;
            write_csv(&table, create(&out)?)?;
        }
        Command::Validate { domain, samples } => {
            let f = from_spec(&domain)?;
            let report = validate(&f, samples as usize)?;
            write_json(&report, io::stdout().lock())?;
            if !report.passed {
                return Err(Failure::Run(Error::invalid(report.issues.join("; "))));
            }
        }
    }
    Ok(())
}

fn init_logging() {
    let _ = env_logger::Builder::new()
        .filter_level(log::LevelFilter::Warn)
        .target(env_logger::Target::Stderr)
        .try_init();
}

/// Runs the command line given by `args` (program name first) and returns
/// the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(io::stderr(), "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Run(e)) => {
            let _ = writeln!(io::stderr(), "error: {e}");
            EXIT_FAILURE
        }
    }
}
