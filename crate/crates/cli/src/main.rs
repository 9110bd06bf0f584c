use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use inertia_cli::commands::{run, Command, Options};
use inertia_cli::input::{parse_input, WorkbenchInput};
use inertia_cli::table::Format;
use inertia_core::homology::Ring;

/// Exact workbench for finite groupoids: nerves, inertia, Hochschild, cyclic
/// and periodic homology, and Chen-Ruan ranks.
#[derive(Parser)]
#[command(name = "inertia", version)]
struct Cli {
    /// Definition file with groups, actions, groupoids and sector lists.
    #[arg(long, short, global = true)]
    input: Option<PathBuf>,
    /// Coefficient ring (default Z, or the document's `ring`).
    #[arg(long, global = true, value_parser = parse_ring)]
    ring: Option<Ring>,
    /// Top degree of the truncated complexes (default 6, or the document's `cap`).
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Plain)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Plain,
    Tsv,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the entities of the input file and check them.
    Validate,
    /// Connected components of the inertia groupoid.
    Inertia { entity: Option<String> },
    /// Homology of the nerve.
    Homology { entity: String },
    /// Hochschild homology of the cyclic nerve.
    Hh { entity: String },
    /// Cyclic homology of the cyclic nerve.
    Hc { entity: String },
    /// Periodic homology of the cyclic nerve over Q.
    Hp {
        entity: String,
        /// Degree above which Hochschild homology vanishes.
        #[arg(long, default_value_t = 0)]
        dim_bound: usize,
    },
    /// Run every identity, isomorphism, equivariance and homology suite.
    Verify { entity: String },
    /// Chen-Ruan orbifold cohomology ranks of a sector list.
    Cr {
        sectors: String,
        /// Compare even and odd totals with periodic homology of this entity.
        #[arg(long)]
        against: Option<String>,
    },
}

fn parse_ring(s: &str) -> Result<Ring, String> {
    s.parse()
}

fn load(path: Option<&PathBuf>) -> Result<WorkbenchInput> {
    let Some(path) = path else {
        return Ok(WorkbenchInput::default());
    };
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_input(&text).with_context(|| format!("parsing {}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: Cli) -> Result<bool> {
    let input = load(cli.input.as_ref())?;
    let command = match cli.command {
        Cmd::Validate => Command::Validate,
        Cmd::Inertia { entity } => Command::Inertia { entity },
        Cmd::Homology { entity } => Command::Homology { entity },
        Cmd::Hh { entity } => Command::Hh { entity },
        Cmd::Hc { entity } => Command::Hc { entity },
        Cmd::Hp { entity, dim_bound } => Command::Hp { entity, dim_bound },
        Cmd::Verify { entity } => Command::Verify { entity },
        Cmd::Cr { sectors, against } => Command::Cr { sectors, against },
    };
    let opts = Options {
        ring: cli.ring,
        cap: cli.cap,
        format: match cli.format {
            OutputFormat::Plain => Format::Plain,
            OutputFormat::Tsv => Format::Tsv,
        },
    };
    let report = run(&command, &input, &opts)?;
    print!("{}", report.text);
    Ok(report.ok)
}
