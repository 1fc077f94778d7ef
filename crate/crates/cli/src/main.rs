//! hyperspec: build r-uniform hypergraphs, certify p-spectral radii, check
//! forbidden patterns, and run partition stability diagnostics.
//!
//! Reports are flat `key = value` text. Runs with identical flags and input
//! files render byte-identical reports; wall time goes to stderr only.
//!
//! Exit codes: 0 done (and converged, where that applies), 2 solver did not
//! converge, 3 bad input, 4 a search cap was exceeded.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use commands::{CliError, EXIT_INPUT};
use manifest::RunManifest;

#[derive(Parser)]
#[command(name = "hyperspec", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for every randomized component of the run
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker cap for parallel sections (default: HYPERSPEC_JOBS or 1)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Write the report here instead of stdout (construct writes its graph
    /// to --out and always reports to stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a hypergraph and write it as an HGR v1 file
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Estimate the p-spectral radius with a stationarity certificate
    Spectral(SpectralArgs),
    /// Decide whether a forbidden pattern embeds into the graph
    Check(CheckArgs),
    /// Partition quality, closeness to the balanced partite graph, and
    /// pair classification
    Stability(StabilityArgs),
    /// Desk-scale exhaustive and comparative searches
    Lab {
        #[command(subcommand)]
        command: LabCommand,
    },
}

#[derive(Subcommand)]
enum ConstructKind {
    /// Complete r-graph on n vertices
    Complete {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
    /// Complete multipartite r-graph with the given part sizes
    Multipartite {
        /// Comma-separated part sizes, e.g. 4,3,3
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        parts: Vec<usize>,
        #[arg(long)]
        r: usize,
    },
    /// Balanced complete k-partite r-graph on n vertices
    Turan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
    },
    /// Join of two graphs: both edge sets plus every edge meeting both sides
    Join { a: PathBuf, b: PathBuf },
    /// Disjoint union of two graphs
    Union { a: PathBuf, b: PathBuf },
    /// t vertex-disjoint copies of a graph
    Tcopies {
        a: PathBuf,
        #[arg(long)]
        t: usize,
    },
    /// Expansion of a complete graph: r-2 fresh vertices per edge
    Expansion {
        /// Number of vertices of the complete graph being expanded
        #[arg(long)]
        clique: usize,
        #[arg(long)]
        r: usize,
    },
    /// The pair shadow, written as a 2-uniform HGR file
    Shadow { a: PathBuf },
}

#[derive(Args)]
struct SolverFlags {
    /// Residual tolerance for convergence
    #[arg(long)]
    tolerance: Option<f64>,

    /// Number of random restarts
    #[arg(long)]
    restarts: Option<usize>,

    /// Iteration cap per restart
    #[arg(long)]
    max_iterations: Option<usize>,

    /// Fixed-point mixing weight in (0, 1]
    #[arg(long)]
    damping: Option<f64>,
}

#[derive(Args)]
struct SpectralArgs {
    /// HGR v1 input file
    input: PathBuf,

    /// Norm exponent: a real > 1, or `inf`
    #[arg(long, value_parser = parse_exponent, conflicts_with = "lagrangian")]
    p: Option<f64>,

    /// Maximize over the probability simplex instead (the p = 1 endpoint)
    #[arg(long)]
    lagrangian: bool,

    #[command(flatten)]
    solver: SolverFlags,
}

#[derive(Args)]
struct CheckArgs {
    /// HGR v1 input file
    input: PathBuf,

    /// Pattern spec: none, expansion:Kk, family:k, or disjoint:txKk
    #[arg(long)]
    pattern: String,
}

#[derive(Args)]
struct StabilityArgs {
    /// HGR v1 input file
    input: PathBuf,

    /// Number of partition classes
    #[arg(long)]
    k: usize,

    /// Edit-density parameter; defaults to the measured closeness
    #[arg(long)]
    epsilon: Option<f64>,

    /// Dominant-pair vertex threshold (validated against epsilon)
    #[arg(long, default_value_t = 0.75)]
    theta: f64,

    /// Number of forbidden disjoint copies the thresholds refer to
    #[arg(long, default_value_t = 1)]
    t: usize,

    /// Move budget for the heuristic partition search (above 12 vertices)
    #[arg(long, default_value_t = 20_000)]
    budget: usize,
}

#[derive(Subcommand)]
enum LabCommand {
    /// Exact maximum edge count over pattern-free graphs
    MaxEdges {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value = "none")]
        pattern: String,
        /// Write witness HGR files into this directory
        #[arg(long)]
        witness_dir: Option<PathBuf>,
    },
    /// Certified-lower-bound spectral maximum over pattern-free graphs
    MaxLambda {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value = "none")]
        pattern: String,
        #[command(flatten)]
        solver: SolverFlags,
        /// Write witness HGR files into this directory
        #[arg(long)]
        witness_dir: Option<PathBuf>,
    },
    /// Spectral radius of an apex clique joined to every k-part composition
    CompositionSweep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Solve every pattern-free edit of a graph within a small radius
    Probe {
        input: PathBuf,
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        #[command(flatten)]
        solver: SolverFlags,
    },
}

fn parse_exponent(text: &str) -> Result<f64, String> {
    if text.eq_ignore_ascii_case("inf") {
        return Ok(f64::INFINITY);
    }
    text.parse::<f64>().map_err(|e| e.to_string())
}

fn effective_jobs(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(j) = flag {
        return Ok(j);
    }
    match std::env::var("HYPERSPEC_JOBS") {
        Ok(v) => v
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("HYPERSPEC_JOBS is not a count: {v:?}"))),
        Err(_) => Ok(1),
    }
}

fn run(cli: &Cli) -> Result<(hyperspec_core::Report, u8), CliError> {
    let jobs = effective_jobs(cli.jobs)?;
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be positive".into()));
    }
    let manifest = RunManifest::new(cli.seed, jobs);
    match &cli.command {
        Command::Construct { kind } => {
            let out = cli.out.as_deref().ok_or_else(|| {
                CliError::Usage("construct needs --out <file> for the graph".into())
            })?;
            commands::cmd_construct(kind, out, manifest)
        }
        Command::Spectral(args) => commands::cmd_spectral(args, cli.seed, jobs, manifest),
        Command::Check(args) => commands::cmd_check(args, manifest),
        Command::Stability(args) => commands::cmd_stability(args, cli.seed, manifest),
        Command::Lab { command } => commands::cmd_lab(command, cli.seed, jobs, manifest),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_INPUT,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let started = Instant::now();
    match run(&cli) {
        Ok((report, code)) => {
            let text = report.render();
            let written = match &cli.command {
                // construct's --out holds the graph, so its report stays on
                // stdout no matter what
                Command::Construct { .. } => None,
                _ => cli.out.as_deref(),
            };
            if let Some(path) = written {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(EXIT_INPUT);
                }
            } else {
                print!("{text}");
            }
            eprintln!("wall_time_ms = {}", started.elapsed().as_millis());
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
