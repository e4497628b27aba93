//! `symcomp`: batch front end for the symcomp-core computations.
//!
//! Exit status: 0 when every requested check passes, 1 on a verification
//! failure (itemized on stderr), 2 on malformed input.

mod commands;
mod output;
mod suite;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{Emitter, Format};

#[derive(Debug, Parser)]
#[command(name = "symcomp", version, about = "Exact computations and checks for configuration spaces with summable labels")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write report files into this directory instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Report format; defaults to CSV for tables and JSON otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Print progress to stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(flatten)]
    caps: Caps,
}

/// Resource caps; each may be set from the environment.
#[derive(Debug, Clone, Copy, Args)]
pub struct Caps {
    /// Largest partition weight accepted.
    #[arg(long, global = true, env = "SYMCOMP_MAX_WEIGHT", default_value_t = symcomp_core::partitions::DEFAULT_MAX_WEIGHT,
          value_parser = positive)]
    pub max_weight: usize,

    /// Largest number of sites in a configuration model.
    #[arg(long, global = true, env = "SYMCOMP_MAX_SITES", default_value_t = 8, value_parser = positive)]
    pub max_sites: usize,

    /// Largest group order expanded when averaging.
    #[arg(long, global = true, env = "SYMCOMP_ORDER_CAP", default_value_t = symcomp_core::exactlin::DEFAULT_ORDER_CAP,
          value_parser = positive)]
    pub order_cap: usize,

    /// Largest weight handled by the built-in plane oracle.
    #[arg(long, global = true, env = "SYMCOMP_PLANE_CAP", default_value_t = symcomp_core::strata::DEFAULT_PLANE_CAP,
          value_parser = positive)]
    pub plane_cap: usize,

    /// Largest particle count for coset enumeration.
    #[arg(long, global = true, env = "SYMCOMP_COSET_CAP", default_value_t = symcomp_core::transfer::DEFAULT_COSET_CAP,
          value_parser = positive)]
    pub coset_cap: usize,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("cap must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Collapse layers of the stratification filtration of a partition.
    Collapses {
        #[arg(long)]
        lambda: String,
    },
    /// Stability range f(j) for a manifold class.
    Ranges {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        orientable: bool,
        /// The manifold is the interior of a manifold with nonempty boundary.
        #[arg(long)]
        open: bool,
        /// Connectivity: reduced homology vanishes through this degree.
        #[arg(long, default_value_t = 0)]
        a: u32,
        #[arg(long, default_value_t = 0)]
        punctures: u32,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        jmax: u64,
    },
    /// Rational Betti numbers of a chain complex file.
    Homology { file: PathBuf },
    /// Spectral sequence of a filtered complex file.
    Ss { file: PathBuf },
    /// Page maps induced by a filtered chain map, with the comparison verdict.
    Compare { file: PathBuf },
    /// Totalize a semisimplicial chain complex and compute its spectral sequence.
    Totalize {
        file: PathBuf,
        /// Include the augmentation as level −1.
        #[arg(long)]
        augmented: bool,
    },
    /// Truncated flag-set homology of a symmetric relation.
    Flag {
        #[command(flatten)]
        relation: FlagSource,
        /// Vertex count for `--edges`.
        #[arg(long)]
        vertices: Option<usize>,
        /// Highest simplicial level built.
        #[arg(long, default_value_t = 3)]
        truncation: usize,
    },
    /// First page of the stratification spectral sequence.
    E1 {
        #[command(flatten)]
        strata: StrataArgs,
    },
    /// Range certificate for one window.
    Certificate {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        j: u32,
        #[arg(long, value_enum)]
        case: CaseArg,
        /// Connectivity parameter for the connectivity case.
        #[arg(long, default_value_t = 1)]
        a: u32,
        /// Lower the threshold by this much; positive values weaken the window.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        slack: i64,
    },
    /// Euler characteristic consistency of strata against the first page.
    Euler {
        #[command(flatten)]
        strata: StrataArgs,
        /// Reference Betti numbers to compare against, comma separated.
        #[arg(long, value_delimiter = ',')]
        reference: Option<Vec<usize>>,
    },
    /// Look up or export oracle entries.
    Oracle {
        /// Partition to look up; all built-in entries through the cap if absent.
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long, default_value = "plane")]
        class: String,
        #[arg(long, default_value = "builtin")]
        oracle: String,
    },
    /// Stabilization and transfer maps of a site model, checked against the
    /// algebraic relations.
    Transfer {
        #[arg(long)]
        sites: usize,
        #[arg(long, value_enum, default_value_t = SitesArg::Component)]
        kind: SitesArg,
        /// Highest total particle count.
        #[arg(long, default_value_t = 4)]
        top: usize,
    },
    /// Verify an input file against its defining relations.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Orientation signs and monodromy characters of a loop datum.
    Monodromy { file: PathBuf },
    /// Run the seeded property battery.
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// Stabilization/transfer system file.
    Dold { file: PathBuf },
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct FlagSource {
    /// Edges `a-b,c-d` on vertices 0..n, with `--vertices n`.
    #[arg(long, requires = "vertices")]
    pub edges: Option<String>,
    #[arg(long)]
    pub complete: Option<usize>,
    /// Star with this many leaves; vertex 0 is the center.
    #[arg(long)]
    pub star: Option<usize>,
    /// JSON file `{"vertices": n, "edges": [[a, b], ...]}`.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct StrataArgs {
    #[arg(long)]
    pub lambda: String,
    /// `plane`, `euclidean:<d>`, or a manifold class JSON file.
    #[arg(long, default_value = "plane")]
    pub class: String,
    /// `builtin`, `none`, or a JSON file of entries layered over the built-in ones.
    #[arg(long, default_value = "builtin")]
    pub oracle: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CaseArg {
    High,
    Orientable,
    NonOrientable,
    Connectivity,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SitesArg {
    Component,
    Point,
    /// One component followed by point sites.
    Mixed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let emitter = Emitter { format: cli.format, output: cli.output.clone() };
    match commands::run(&cli.command, &cli.caps, cli.verbose, &emitter) {
        Ok(failures) if failures.is_empty() => ExitCode::SUCCESS,
        Ok(failures) => {
            eprintln!("verification failed:");
            for f in failures {
                eprintln!("  FAIL {f}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
