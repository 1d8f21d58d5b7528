//! `umap`: closed-form counts, exhaustive censuses, identity checks and map
//! transformations from the command line.
//!
//! Exit codes: 0 success, 1 failed identity or transformation, 2 usage error.

mod apply;
mod count;
mod stats;
mod verify;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;
use umap_core::{CensusFilter, DEFAULT_CAP};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failure(String),
    /// A complete report with at least one failed check; printed to stdout.
    #[error("{0}")]
    Report(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) | CliError::Report(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "umap", version, about = "Unicellular maps on orientable and non-orientable surfaces")]
struct Cli {
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Largest edge count that may be enumerated.
    #[arg(long, global = true, env = "UMAP_MAX_EDGES", default_value_t = DEFAULT_CAP)]
    cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print closed-form counts as `family<TAB>twice_h<TAB>m<TAB>value`.
    Count(count::CountArgs),
    /// Enumerate every rooted unicellular map with a given number of edges.
    Enumerate(EnumerateArgs),
    /// Check identities against exhaustive enumeration.
    Verify(verify::VerifyArgs),
    /// Transform a UMAP v1 document read from stdin.
    Apply(apply::ApplyArgs),
    /// Intertwined-node, flavor and dominance distributions.
    Stats(stats::StatsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Ndjson,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Orientability {
    Yes,
    No,
    Any,
}

/// Census filter flags shared by `enumerate` and `stats`.
#[derive(Debug, Args)]
pub struct FilterArgs {
    /// Keep only precubic maps (degrees 1 and 3, root at a leaf).
    #[arg(long)]
    precubic: bool,
    /// Keep orientable maps, non-orientable maps, or both.
    #[arg(long, value_enum, default_value_t = Orientability::Any)]
    orientable: Orientability,
    /// Keep maps of these types, given as 2h (repeatable).
    #[arg(long = "type")]
    types: Vec<u32>,
    /// Keep maps whose root vertex is a leaf.
    #[arg(long)]
    root_leaf: bool,
}

impl FilterArgs {
    pub fn filter(&self) -> CensusFilter {
        CensusFilter {
            precubic: self.precubic,
            orientable: match self.orientable {
                Orientability::Yes => Some(true),
                Orientability::No => Some(false),
                Orientability::Any => None,
            },
            twice_h: self.types.clone(),
            root_at_leaf: self.root_leaf,
        }
    }
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    /// Number of edges.
    #[arg(long, short = 'n')]
    edges: usize,
    #[command(flatten)]
    filter: FilterArgs,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Also write every map passing the filter as UMAP v1 documents to this file.
    #[arg(long)]
    dump: Option<std::path::PathBuf>,
}

pub fn check_cap(n: usize, cap: usize) -> CliResult<()> {
    if n > cap {
        return Err(CliError::Usage(format!(
            "{n} edges exceeds the enumeration cap of {cap}; raise it with --cap or UMAP_MAX_EDGES"
        )));
    }
    Ok(())
}

fn run_enumerate(args: &EnumerateArgs, cap: usize) -> CliResult<String> {
    check_cap(args.edges, cap)?;
    let filter = args.filter.filter();
    let table: umap_core::CountTable = umap_core::enumerate(args.edges, &filter, cap)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(path) = &args.dump {
        let maps = umap_core::collect_maps(args.edges, &filter, cap)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let text: String = maps.iter().map(umap_core::write_map).collect();
        std::fs::write(path, text)
            .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(match args.format {
        Format::Tsv => table.to_tsv(),
        Format::Ndjson => table.to_ndjson(),
    })
}

fn dispatch(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Count(args) => count::run(args),
        Command::Enumerate(args) => run_enumerate(args, cli.cap),
        Command::Verify(args) => verify::run(args, cli.cap),
        Command::Apply(args) => apply::run(args),
        Command::Stats(args) => stats::run(args, cli.cap),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match cli.jobs {
        Some(0) => {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(1);
        }
    };
    let result = pool.install(|| dispatch(&cli));
    let mut stdout = std::io::stdout().lock();
    match result {
        Ok(out) => {
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(CliError::Report(out)) => {
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
