//! `qmak`: reproducible experiments for the unentangled multi-prover
//! coloring-state verifiers.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use qmak_core::adversary::StrategyClass;
use qmak_core::bounds::ZRule;
use qmak_core::csp::BadEdgeShape;
use qmak_core::{EdgeMode, Protocol, DEFAULT_ENUMERATION_CAP};

const SCHEMAS: &str = "\
FILE FORMATS (JSON)

Instance:
  {\"name\": \"...\", \"n_vertices\": N, \"alphabet_size\": K,
   \"edges\": [{\"u\": 0, \"v\": 1, \"allowed\": [[1,0,...], ...]}, ...]}
  `allowed` is a K x K table of 0/1 (or booleans); row a, column b says
  whether color a on u and color b on v satisfy the edge. Self-loops (u = v)
  are allowed.

Coloring:
  {\"colors\": [c_0, ..., c_{N-1}]}    with 0 <= c_v < K

Proof state (graph coloring state sum_v a_v |v> sum_j b_vj |j>):
  {\"n_vertices\": N, \"alphabet_size\": K,
   \"vertex_amp\": [[re, im], ...],             N entries
   \"color_amp\": [[[re, im], ...], ...]}       N rows of K entries
  A plain number is accepted for a real amplitude. The vertex register and
  every color row must have unit norm (tolerance 1e-9).

OUTPUTS
  Every command writes manifest.json (command, config, seed, input hashes,
  version, output list) to --out before any other file. Probabilities are
  printed with 12 significant digits. Scaling tables are CSV with columns
  N,K,kappa,test,exact,sampled,stderr,seed preceded by a '#' config line.

EXIT CODES
  0 success, 1 an experiment check failed, 2 input error, 3 budget refusal.";

#[derive(Parser, Debug)]
#[command(name = "qmak", version, about = "Simulate unentangled multi-prover verifiers for graph coloring", after_long_help = SCHEMAS)]
struct Cli {
    /// Output directory.
    #[arg(long, global = true, default_value = "qmak-out")]
    out: PathBuf,

    /// Cap on exact enumeration sizes (colorings, outcome tuples).
    #[arg(long, global = true, env = "QMAK_ENUM_CAP", default_value_t = DEFAULT_ENUMERATION_CAP)]
    enum_cap: u64,

    /// Cap on Monte Carlo samples per estimate.
    #[arg(long, global = true, env = "QMAK_SAMPLE_CAP", default_value_t = 100_000_000)]
    sample_cap: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
struct VerifierArgs {
    #[arg(long, default_value = "bt09")]
    protocol: Protocol,

    /// Number of provers (BT09: 2; CD10: defaults to the number of proofs).
    #[arg(long)]
    kappa: Option<usize>,

    /// CondUnif threshold as an absolute count of zero-color outcomes.
    #[arg(long)]
    z: Option<f64>,

    /// Threshold rule used when --z is absent: literal, scaled, fraction:<c>.
    #[arg(long, default_value = "scaled")]
    z_rule: ZRule,

    /// as-listed, symmetrized or prover-ordered.
    #[arg(long, default_value = "as-listed")]
    edge_mode: EdgeMode,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Run a verifier on an instance and proof files.
    Simulate {
        instance: PathBuf,
        /// One proof file per prover.
        #[arg(required = true)]
        proofs: Vec<PathBuf>,
        #[command(flatten)]
        verifier: VerifierArgs,
        /// Monte Carlo runs of the whole verifier (0 = exact only).
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write honest proofs encoding a coloring.
    Honest {
        instance: PathBuf,
        #[arg(long, conflicts_with = "best_oracle", required_unless_present = "best_oracle")]
        coloring: Option<PathBuf>,
        /// Use the brute-force best coloring.
        #[arg(long)]
        best_oracle: bool,
        #[arg(long, default_value_t = 2)]
        kappa: usize,
    },
    /// Search for proofs with high acceptance.
    Attack {
        instance: PathBuf,
        #[command(flatten)]
        verifier: VerifierArgs,
        #[arg(long, default_value = "general-product")]
        class: StrategyClass,
        /// Enumerate the whole (discrete) strategy class instead of searching.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 200)]
        max_iters: usize,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[arg(long, default_value_t = 0.5)]
        decay: f64,
        #[arg(long, default_value_t = 1e-5)]
        fd_step: f64,
        /// Random product proofs evaluated besides the restarts.
        #[arg(long, default_value_t = 0)]
        probes: usize,
        /// Samples per evaluation when the exact objective is over budget.
        #[arg(long, default_value_t = 20_000)]
        fallback_samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Two-prover soundness constants for given N and K.
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
    },
    /// Two-prover rejection on one-bad-edge instances against N.
    RemarkBt09 {
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Restrict to one edge mode (default: all).
        #[arg(long)]
        edge_mode: Option<EdgeMode>,
        /// Restrict to one bad-edge shape: distinct or self-loop (default: both).
        #[arg(long)]
        shape: Option<BadEdgeShape>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// κ-prover Cons rejection against κ on a near-satisfiable instance.
    RemarkCd10 {
        #[arg(long, default_value_t = 256)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,32")]
        kappas: Vec<usize>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        /// Frustrated edges (default N/16).
        #[arg(long)]
        frustrated: Option<usize>,
        #[arg(long, default_value = "as-listed")]
        edge_mode: EdgeMode,
        /// Also rerun this κ at 2N to check the 1/N dependence.
        #[arg(long)]
        doubling: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Honest-proof κ-prover acceptance against κ under a threshold rule.
    Completeness {
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
        kappas: Vec<usize>,
        #[arg(long, default_value = "scaled")]
        z_rule: ZRule,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
