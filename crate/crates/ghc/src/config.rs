use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ghc_core::sl2_rep::Part;

/// Explicit constructions on manifolds with an SU(2)-action on the tangent
/// bundle: sl2 tables, the Quillen split, k-Eguchi-Hanson fibres, Nahm-type
/// Lax flows and monopole flatness residuals.
#[derive(Debug, Clone, Parser)]
#[command(name = "ghc", version)]
pub struct RunConfig {
    /// Seed of the ChaCha stream used for all random sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Residual tolerance for pass/fail lines and fibre solves; must be
    /// positive. Default 1e-10.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol: Option<f64>,

    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Clebsch-Gordan multiplicities, projector ranks and the invariant pairing.
    Rep {
        #[arg(long)]
        k: u32,
        /// Second factor; defaults to `k`.
        #[arg(long)]
        k2: Option<u32>,
        /// full, sym2 or alt2.
        #[arg(long, default_value = "full", value_parser = parse_part)]
        part: Part,
    },
    /// Split verification report and dimension tables.
    Quillen {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Only the dimension table, as CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Fibres of the moment map z1 w1 + z2 w2.
    Eh {
        #[command(subcommand)]
        action: EhAction,
    },
    /// Lax-pair flow of (alpha, beta, gamma).
    Nahm {
        #[command(subcommand)]
        action: NahmAction,
    },
    /// Flatness on alpha-surfaces of fields on C^5.
    Monopole {
        #[command(subcommand)]
        action: MonopoleAction,
    },
    /// Run acceptance criteria; all of them without `--criterion`.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=11))]
        criterion: Option<u32>,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum EhAction {
    /// Random points of the fibre as JSON lines.
    Sample {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        level: PathBuf,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Residual of a point against a level.
    Check {
        #[arg(long)]
        point: PathBuf,
        #[arg(long)]
        level: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
pub struct NahmInput {
    /// JSON with square matrices alpha, beta, gamma.
    #[arg(long)]
    pub init: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    /// Largest power m of trace(B^m) to track; defaults to n.
    #[arg(long)]
    pub invariants: Option<usize>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum NahmAction {
    /// CSV time series and JSON summary.
    Run {
        #[command(flatten)]
        input: NahmInput,
        /// JSON array of [re, im] sample points for the Lax residual.
        #[arg(long)]
        zetas: Option<PathBuf>,
    },
    /// Drift at N and 2N steps.
    Convergence {
        #[command(flatten)]
        input: NahmInput,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum MonopoleAction {
    /// Per-q residuals and their maximum.
    Residual {
        #[arg(long)]
        fields: PathBuf,
        /// JSON array of [re, im] or "inf"; defaults to 25 fixed samples.
        #[arg(long)]
        q_samples: Option<PathBuf>,
    },
    /// Random pure-gauge fields, flat on all of C^5.
    PureGauge {
        #[arg(long)]
        m: usize,
    },
}

fn parse_part(s: &str) -> Result<Part, String> {
    s.parse().map_err(|e: ghc_core::Error| e.to_string())
}
