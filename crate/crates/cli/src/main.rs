mod commands;
mod input;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use graphon_core::Mode;

/// Homomorphism densities, metrics, spectra and symmetries of step graphons.
///
/// A graphon is read from `--graphon FILE` (JSON with `weights`, `matrix`
/// and optional `mode`) or built with `--generate SPEC`, where SPEC is one
/// of `constant:P`, `bipartite`, `cyclic:N:ALPHA`, `circle:Q:ALPHA`,
/// `dyadic:N`, `nonlip:EPS`, `random:Q:SEED` or `graph:NAME`.
/// Steps are numbered from 0.
#[derive(Parser, Debug)]
#[command(name = "graphon", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Numeric mode: exact rationals or f64. Defaults to the input's mode, else exact
    #[arg(long, global = true, value_parser = parse_mode)]
    pub mode: Option<Mode>,

    /// Tolerance for float comparisons and twin merging
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Node cap for enumerated test graphs
    #[arg(long, global = true)]
    pub max_nodes: Option<usize>,

    /// Worker threads (defaults to the number of cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Seed for every randomized step
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Emit JSON instead of tables
    #[arg(long, global = true)]
    pub json: bool,

    /// Graphon JSON file
    #[arg(long, short = 'g', global = true, conflicts_with = "generate")]
    pub graphon: Option<PathBuf>,

    /// Generator spec, e.g. `nonlip:1/100` or `cyclic:40:1/4`
    #[arg(long, global = true)]
    pub generate: Option<String>,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: graphon_core::Error| e.to_string())
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Homomorphism density of a graph, labeled graph or quantum graph
    Density(DensityArgs),
    /// Neighborhood (r), squared L2 (d2) and similarity (rbar) distances between steps
    Metrics {
        /// r, d2, rbar or all
        #[arg(long, default_value = "all")]
        metric: String,
    },
    /// Merge twin steps and drop zero-weight steps
    Purify,
    /// Eigenvalues and eigenfunctions of the kernel operator
    Spectral {
        /// Also report the embedding of steps with |eigenvalue| >= threshold
        #[arg(long)]
        threshold: Option<f64>,
        /// Eigenvalues with absolute value at most this are dropped
        #[arg(long)]
        rank_tol: Option<f64>,
    },
    /// L1 error of the U_n reconstruction from the distance kernel.
    ///
    /// The input is purified first. Table mode prints CSV with columns
    /// `n,l1_error`.
    Approx {
        /// Comma-separated exponents
        #[arg(long, default_value = "1,2,4,8,16,32,64")]
        ns: String,
    },
    /// Automorphism group of the purified graphon
    Aut,
    /// Orbits of k-tuples of steps under the automorphism group
    Orbits(OrbitArgs),
    /// The five node-transitivity conditions
    Transitive,
    /// Rank of the k-th connection matrix and dimension of the k-labeled algebra
    Connrank {
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Only graphs whose labeled nodes are pairwise non-adjacent
        #[arg(long)]
        independent: bool,
    },
    /// Build a Cayley graphon, or recover a group from a node-transitive graphon
    Cayley(CayleyArgs),
    /// Worked examples
    #[command(subcommand)]
    Examples(Example),
    /// Density series of a graph family against its limit.
    ///
    /// Output is CSV with columns:
    ///   n                 size of the graph in the family
    ///   motif             motif name
    ///   density           t(motif, G_n), exact rational or float
    ///   limit_density     t(motif, limit graphon)
    ///   gap               |density - limit_density| as a float
    ///   product_residual  max |t(F^2)t(H^2) - t(FH)^2| over 1-labeled F, H
    #[command(verbatim_doc_comment)]
    Converge(ConvergeArgs),
    /// Sample a W-random graph
    Sample {
        /// Number of nodes
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    /// Graph file: text format (`n k [simple|multi]` then 1-based edges) or JSON
    #[arg(long, group = "target")]
    pub graph: Option<PathBuf>,
    /// Named motif such as K3, P4, C5, S3, petersen
    #[arg(long, group = "target")]
    pub motif: Option<String>,
    /// Quantum graph JSON file: a list of {coef, graph}
    #[arg(long, group = "target")]
    pub quantum: Option<PathBuf>,
    /// Built-in quantum graph: h or f
    #[arg(long, group = "target")]
    pub builtin: Option<String>,
    /// Steps assigned to the labeled nodes, comma-separated. All anchors when omitted
    #[arg(long)]
    pub anchor: Option<String>,
}

#[derive(Args, Debug)]
pub struct OrbitArgs {
    /// Tuple length
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Compare with the partition induced by k-labeled densities
    #[arg(long)]
    pub oracle: bool,
    /// First tuple for a single density-oracle query
    #[arg(long, requires = "b")]
    pub a: Option<String>,
    /// Second tuple for a single density-oracle query
    #[arg(long, requires = "a")]
    pub b: Option<String>,
}

#[derive(Args, Debug)]
pub struct CayleyArgs {
    /// Group spec: cyclic:N, dihedral:N, symmetric:N or product:SPEC,SPEC
    #[arg(long, group = "source")]
    pub group: Option<String>,
    /// Group table JSON file: {order, table, names?}
    #[arg(long, group = "source")]
    pub group_file: Option<PathBuf>,
    /// Recover a group from the input graphon instead
    #[arg(long, group = "source")]
    pub from_graphon: bool,
    /// Values of the inverse-symmetric function f, comma-separated
    #[arg(long, conflicts_with = "random_f")]
    pub f: Option<String>,
    /// Draw f at random with this denominator (uses --seed)
    #[arg(long)]
    pub random_f: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum Example {
    /// Pendant-edge densities and distances of two steps of the non-Lipschitz example
    Nonlip {
        #[arg(long, default_value = "1/100")]
        eps: String,
    },
    /// Double-edge densities and similarity distances on the dyadic example
    Dyadic {
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Densities of the cyclic graph G_n and of its circle limit
    Cyclic {
        #[arg(long, default_value_t = 40)]
        n: usize,
        #[arg(long, default_value = "1/4")]
        alpha: String,
        #[arg(long, default_value = "K2,P3,C4")]
        motifs: String,
        /// Steps of the circle graphon
        #[arg(long, default_value_t = 256)]
        limit_steps: usize,
    },
}

#[derive(Args, Debug)]
pub struct ConvergeArgs {
    /// Graph family; only `cyclic` is available
    #[arg(long, default_value = "cyclic")]
    pub family: String,
    #[arg(long, default_value = "1/4")]
    pub alpha: String,
    /// Comma-separated sizes
    #[arg(long, default_value = "40,80,160")]
    pub ns: String,
    #[arg(long, default_value = "K2,P3,C4")]
    pub motifs: String,
    /// Steps of the circle graphon
    #[arg(long, default_value_t = 256)]
    pub limit_steps: usize,
    /// Write the CSV here instead of standard output
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
