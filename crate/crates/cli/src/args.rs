use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "genhilbert", version, about = "Generalized Hilbert operators between Dirichlet spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Measure specification (JSON)
    #[arg(long, global = true)]
    pub measure: Option<PathBuf>,

    #[arg(long, global = true, allow_negative_numbers = true)]
    pub alpha: Option<f64>,

    #[arg(long, global = true, allow_negative_numbers = true)]
    pub beta: Option<f64>,

    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gamma: Option<f64>,

    /// Admissible range for alpha
    #[arg(long, global = true, value_enum, default_value_t = AlphaRangeArg::Strict)]
    pub alpha_range: AlphaRangeArg,

    /// Power-iteration tolerance on the relative change of the estimate
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    #[arg(long, global = true)]
    pub max_iter: Option<usize>,

    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaRangeArg {
    /// 0 < alpha < 2
    Strict,
    /// 0 <= alpha < 2
    ClosedBelow,
    /// 0 < alpha <= 2
    ClosedAbove,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moments mu_0 .. mu_{M-1} of the measure
    Moments {
        #[arg(long)]
        count: Option<usize>,
    },
    /// Dyadic s-Carleson quotient trace and verdict
    Carleson {
        /// Carleson exponent; defaults to gamma - (beta - alpha)/2
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Norm growth of the conjugated operator S over increasing truncations
    Bound {
        /// Comma-separated truncation sizes
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
    },
    /// Tail norms ||S - S_m|| of one truncation
    Compact {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        ms: Option<Vec<usize>>,
    },
    /// Schur constant by quadrature and the random l2 kernel inequality test
    Kernel {
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seq_len: Option<usize>,
        #[arg(long)]
        quad_nodes: Option<usize>,
    },
    /// Extremal-function lower bound: ||H f_t|| against the Carleson quotient
    Chain {
        #[arg(long, value_delimiter = ',')]
        ts: Option<Vec<f64>>,
    },
    /// Bound and compact runs over an (alpha, beta, gamma, c) grid of
    /// densities (1-t)^(c-1) dt with c = s + offset
    Sweep {
        #[arg(long, value_delimiter = ',')]
        alphas: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        betas: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        gammas: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        c_offsets: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        ms: Option<Vec<usize>>,
        /// Previous JSON sweep report; its completed rows are reused
        #[arg(long)]
        resume: Option<PathBuf>,
    },
}
