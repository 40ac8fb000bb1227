//! `ramsey-forge`: generate, certify, extract, embed and measure from the
//! command line. Reports are JSON (or flattened CSV) on stdout or `--out`.
//!
//! Exit codes: 0 success, 1 usage or IO error, 2 a valid run whose claim was
//! not met (the report still describes what happened).

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable fixing the worker thread count.
const THREADS_ENV: &str = "RAMSEY_FORGE_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "ramsey-forge",
    version,
    about = "Induced-Ramsey, density-extraction and discrepancy toolkit"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Settings shared by every subcommand. Every randomized output is a pure
/// function of the inputs and these values.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Vertex orders tried per pair-finder call in `ramsey`.
    #[arg(long, global = true)]
    pub budget_retries: Option<usize>,
    /// Work cap for exhaustive oracles (enumerated maps or subsets).
    #[arg(long, global = true, default_value_t = 1u128 << 32)]
    pub oracle_cap: u128,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a graph as an edge list (or matrix).
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(long, default_value = "edgelist", global = true)]
        graph_format: String,
    },
    /// Check pseudo-randomness properties of a graph.
    Certify {
        #[command(subcommand)]
        kind: CertifyKind,
    },
    /// Sparse-or-dense subset of an H-free graph.
    Extract(PatternArgs),
    /// Equitable partition into sparse or dense parts.
    Partition(PatternArgs),
    /// Homogeneous set of an H-free graph.
    Hom {
        #[command(flatten)]
        input: GraphArg,
        #[arg(long)]
        pattern: String,
    },
    /// Induced blue copy of a pattern in a coloured host with few red edges
    /// between equal consecutive parts.
    Embed {
        #[command(flatten)]
        input: GraphArg,
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        pattern: String,
        /// Host density `p`, as `a/b`.
        #[arg(long)]
        p: String,
    },
    /// Monochromatic induced copy of H1 in red or H2 in blue.
    Ramsey(RamseyArgs),
    /// Half-set discrepancy witnesses and constructions.
    Discrepancy {
        #[command(subcommand)]
        kind: DiscrepancyKind,
    },
    /// Exhaustive reference computations.
    Oracle {
        #[command(subcommand)]
        op: OracleOp,
    },
}

#[derive(Args, Debug, Clone)]
pub struct GraphArg {
    /// Graph file (edge list or 0/1 matrix); `-` reads stdin.
    #[arg(long)]
    pub graph: PathBuf,
}

#[derive(Args, Debug)]
pub struct PatternArgs {
    #[command(flatten)]
    pub input: GraphArg,
    /// Pattern name (`p4`, `k3`, `c5`, `k2,3`, ...) or edge-list file.
    #[arg(long)]
    pub pattern: String,
    #[arg(long)]
    pub eps: String,
}

#[derive(Subcommand, Debug)]
pub enum GenKind {
    Paley {
        #[arg(long)]
        q: usize,
    },
    Dgt {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        t: usize,
    },
    Gnp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: String,
    },
    Blowup {
        #[command(flatten)]
        input: GraphArg,
        #[arg(long)]
        m: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckModeArg {
    Exhaustive,
    Sampled,
    Spectral,
}

#[derive(Subcommand, Debug)]
pub enum CertifyKind {
    /// `|d(A,B) − p| ≤ λ/√(|A||B|)` over disjoint pairs.
    Mixing {
        #[command(flatten)]
        input: GraphArg,
        #[arg(long)]
        p: String,
        /// `sqrt` (meaning √n), `sqrt(x)` or a rational `a/b`.
        #[arg(long)]
        lambda: String,
        #[arg(long, value_enum, default_value_t = CheckModeArg::Exhaustive)]
        mode: CheckModeArg,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
    /// `d(A,B) > q` for all disjoint pairs of size at least `δn`.
    Bidense {
        #[command(flatten)]
        input: GraphArg,
        #[arg(long)]
        q: String,
        #[arg(long)]
        delta: String,
        #[arg(long, value_enum, default_value_t = CheckModeArg::Exhaustive)]
        mode: CheckModeArg,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
    /// Adjacency spectrum.
    Spectrum {
        #[command(flatten)]
        input: GraphArg,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresetArg {
    Paley,
    Dgt,
}

#[derive(Args, Debug)]
pub struct RamseyArgs {
    /// Host graph; omit when using `--preset`.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub preset: Option<PresetArg>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    /// Red/blue colouring of the host (colours 2 and 3); a seeded random
    /// colouring with `--red` red edges is used when absent.
    #[arg(long)]
    pub coloring: Option<PathBuf>,
    #[arg(long, default_value = "1/2")]
    pub red: String,
    #[arg(long)]
    pub h1: String,
    #[arg(long)]
    pub h2: String,
    /// Host density; defaults to the measured edge density.
    #[arg(long)]
    pub p: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum DiscrepancyKind {
    /// Half-set deviating from `n²/16` in a graph with few copies of H.
    Witness {
        #[command(flatten)]
        input: GraphArg,
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        eps: String,
    },
    /// `K_k`-free blow-up with all half-sets close to `n²/16`; with
    /// `--format csv` the measured envelope table.
    Construct {
        /// One or more clique orders.
        #[arg(long, required = true, num_args = 1..)]
        k: Vec<usize>,
        #[arg(long)]
        n: usize,
        /// `ε` for the envelope's witness runs.
        #[arg(long, default_value = "1/2")]
        eps: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum OracleOp {
    /// Labelled induced copies of a pattern.
    Count {
        #[command(flatten)]
        input: GraphArg,
        #[arg(long)]
        pattern: String,
    },
    /// Largest clique or independent set.
    Homogeneous {
        #[command(flatten)]
        input: GraphArg,
    },
    /// Largest set with density at most `ε` or at least `1 − ε`.
    SparseDense {
        #[command(flatten)]
        input: GraphArg,
        #[arg(long)]
        eps: String,
    },
    /// Half-set maximising `|e(S) − n²/16|`.
    HalfSet {
        #[command(flatten)]
        input: GraphArg,
    },
    /// Whether every red/blue colouring has a monochromatic induced copy.
    Ramsey {
        #[command(flatten)]
        input: GraphArg,
        #[arg(long)]
        pattern: String,
    },
    /// Whether every graph on at most `k` vertices occurs induced.
    Universal {
        #[command(flatten)]
        input: GraphArg,
        #[arg(long)]
        k: usize,
    },
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| format!("{THREADS_ENV} must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n.max(1))
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version go to stdout and succeed; clap's own usage
            // code 2 would collide with the unmet-claim code.
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match commands::run(&cli) {
        Ok(report) => match output::emit(&cli.config, &report) {
            Ok(()) => ExitCode::from(if report.met { 0 } else { 2 }),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
