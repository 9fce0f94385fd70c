mod cache;
mod commands;
mod inputs;
mod output;

use cache::Cache;
use clap::{Args, Parser, Subcommand};
use opbar::exactla::Ring;
use output::Format;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("bad input: {0}")]
    Input(String),
    #[error(transparent)]
    Opalg(#[from] opbar::opalg::OpalgError),
    #[error(transparent)]
    Barcobar(#[from] opbar::barcobar::BarcobarError),
    #[error(transparent)]
    Partition(#[from] opbar::partition::PartitionError),
    #[error(transparent)]
    Tree(#[from] opbar::trees::TreeError),
    #[error(transparent)]
    Linear(#[from] opbar::exactla::LinAlgError),
    #[error("cache: {0}")]
    Cache(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// Exact bar and cobar complexes of operads, with homology over Z or Q.
#[derive(Debug, Parser)]
#[command(name = "opbar", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,
    /// Directory for cached results.
    #[arg(long, global = true, env = "OPBAR_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Compute everything afresh and store nothing.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate trees on {1..n}, or count them.
    Trees {
        #[arg(long, value_parser = parse_arity)]
        n: usize,
        /// standard, generalized, root or leaf.
        #[arg(long, default_value = "standard")]
        species: String,
        #[arg(long)]
        count: bool,
    },
    /// Homology of the bar construction B(I, P, L).
    Bar {
        /// com, ass or an operad file.
        #[arg(long, default_value = "com")]
        operad: String,
        #[command(flatten)]
        common: Construct,
    },
    /// Homology of the cobar construction Ω(I, Q, L).
    Cobar {
        /// cocom, coass or a cooperad file.
        #[arg(long, default_value = "cocom")]
        cooperad: String,
        #[command(flatten)]
        common: Construct,
    },
    /// Koszul test: concentration of the bar homology and the dual's dimensions.
    Koszul {
        #[arg(long, default_value = "com")]
        operad: String,
        #[arg(long, value_parser = parse_arity, default_value_t = 4)]
        max_arity: usize,
    },
    /// Homology of the partition poset complex, or its character.
    Partition {
        #[arg(long, value_parser = parse_arity)]
        n: usize,
        #[arg(long)]
        character: bool,
        #[arg(long, value_parser = parse_ring, default_value = "Z")]
        ring: Ring,
    },
    /// Homology of the derivatives of the identity and the Jacobi relation.
    Derivatives {
        #[arg(long, value_parser = parse_arity, default_value_t = 4)]
        max_arity: usize,
    },
    /// Homology of the one-sided cobar with coefficients in a sphere or coalgebra.
    ModuleMx {
        #[arg(long, conflicts_with = "coalgebra", required_unless_present = "coalgebra")]
        sphere: Option<i64>,
        #[arg(long)]
        coalgebra: Option<PathBuf>,
        #[arg(long, value_parser = parse_arity, default_value_t = 4)]
        max_arity: usize,
    },
    /// Ranks of a composition product M ∘ N.
    Compose {
        /// com, ass, sphere:R or a structure file.
        #[arg(long)]
        outer: String,
        #[arg(long)]
        inner: String,
        #[arg(long, value_parser = parse_arity)]
        arity: usize,
    },
    /// Run the acceptance suite.
    Verify {
        #[arg(long, value_parser = parse_arity, default_value_t = 5)]
        max_arity: usize,
        /// Run only these criteria.
        #[arg(long)]
        criterion: Vec<u8>,
    },
}

#[derive(Debug, Args)]
pub struct Construct {
    /// A single arity.
    #[arg(long, value_parser = parse_arity, conflicts_with = "max_arity")]
    arity: Option<usize>,
    /// All arities from 1 up to this one.
    #[arg(long, value_parser = parse_arity, default_value_t = 4)]
    max_arity: usize,
    #[arg(long, value_parser = parse_ring, default_value = "Z")]
    ring: Ring,
    /// Coefficients in the r-sphere on the left.
    #[arg(long)]
    sphere: Option<i64>,
    /// Also write the complex (needs a single arity).
    #[arg(long, requires = "arity")]
    export: Option<PathBuf>,
}

impl Construct {
    fn arities(&self) -> std::ops::RangeInclusive<usize> {
        match self.arity {
            Some(n) => n..=n,
            None => 1..=self.max_arity,
        }
    }
}

fn parse_arity(s: &str) -> Result<usize, String> {
    let max = opbar::opalg::MAX_ARITY;
    match s.parse::<usize>() {
        Ok(n) if (1..=max).contains(&n) => Ok(n),
        _ => Err(format!("expected an integer in 1..={max}")),
    }
}

fn parse_ring(s: &str) -> Result<Ring, String> {
    s.parse().map_err(|e: opbar::exactla::LinAlgError| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache = match (&cli.cache_dir, cli.no_cache) {
        (Some(dir), false) => Some(Cache::new(dir.clone())),
        _ => None,
    };
    match commands::run(&cli.command, cache.as_ref()) {
        Ok(out) => {
            print!("{}", out.doc.render(cli.format));
            for (id, title) in &out.failed {
                eprintln!("opbar: criterion {id} ({title}) failed");
            }
            if out.failed.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("opbar: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
