//! Defaults and the resolved run configuration.
//!
//! Every numeric option is checked here, before any computation starts.

use std::path::Path;

use genhilbert::measure::DEFAULT_MOMENT_CAP;
use genhilbert::operator::{default_tail_cuts, doubling_dims};
use genhilbert::{AlphaRange, MeasureSpec, PowerOptions, SpaceParams};
use serde::Serialize;

use crate::args::{AlphaRangeArg, Cli, Command, Common, Format};
use crate::error::CliError;

/// Defaults for every option the CLI exposes.
///
/// | option        | default                |
/// |---------------|------------------------|
/// | moments count | 16                     |
/// | depth         | 24                     |
/// | dims          | 64, 128, ..., 1024     |
/// | n             | 1024                   |
/// | ms            | N/128, N/64, ..., N/8  |
/// | tol           | 1e-8                   |
/// | max-iter      | 5000                   |
/// | trials        | 200                    |
/// | seq-len       | 512                    |
/// | quad-nodes    | 20                     |
/// | ts            | 0.9, 0.99, 0.999       |
/// | seed          | 42                     |
/// | sweep grid    | alpha 1, beta 2, gamma 2, c offsets -0.5, 0, 0.5 |
pub mod defaults {
    pub const MOMENT_COUNT: usize = 16;
    pub const DEPTH: u32 = 24;
    pub const DIM_START: usize = 64;
    pub const DIM_MAX: usize = 1024;
    pub const N: usize = 1024;
    pub const TOL: f64 = 1e-8;
    pub const MAX_ITER: usize = 5000;
    pub const TRIALS: usize = 200;
    pub const SEQ_LEN: usize = 512;
    pub const QUAD_NODES: usize = 20;
    pub const TS: [f64; 3] = [0.9, 0.99, 0.999];
    pub const SEED: u64 = 42;
    pub const ALPHAS: [f64; 1] = [1.0];
    pub const BETAS: [f64; 1] = [2.0];
    pub const GAMMAS: [f64; 1] = [2.0];
    pub const C_OFFSETS: [f64; 3] = [-0.5, 0.0, 0.5];
}

/// Largest truncation accepted; an N x N matrix of f64 is 8 N^2 bytes.
pub const MAX_DIM: usize = 8192;
pub const MAX_SEQ_LEN: usize = 8192;
pub const MAX_QUAD_NODES: usize = 200;
/// The Carleson trace uses t_j = 1 - 2^-j; beyond 52 t rounds to 1.
const DEPTH_RANGE: std::ops::RangeInclusive<u32> = 4..=52;

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub measure_path: Option<String>,
    pub measure: Option<MeasureSpec>,
    pub measure_id: Option<String>,
    pub params: Option<SpaceParams>,
    pub alpha_range: AlphaRange,
    pub power: PowerOptions,
    pub seed: u64,
    pub format: Format,
    pub options: Options,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Options {
    Moments { count: usize },
    Carleson { s: f64, depth: u32 },
    Bound { dims: Vec<usize> },
    Compact { n: usize, ms: Vec<usize> },
    Kernel { trials: usize, seq_len: usize, quad_nodes: usize },
    Chain { ts: Vec<f64> },
    Sweep(SweepGrid),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub gammas: Vec<f64>,
    pub c_offsets: Vec<f64>,
    pub dims: Vec<usize>,
    pub n: usize,
    pub ms: Vec<usize>,
    #[serde(skip)]
    pub resume: Option<std::path::PathBuf>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn read_measure(path: &Path) -> Result<MeasureSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read measure spec {}: {e}", path.display())))?;
    MeasureSpec::from_json(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn alpha_range(arg: AlphaRangeArg) -> AlphaRange {
    match arg {
        AlphaRangeArg::Strict => AlphaRange::Strict,
        AlphaRangeArg::ClosedBelow => AlphaRange::ClosedBelow,
        AlphaRangeArg::ClosedAbove => AlphaRange::ClosedAbove,
    }
}

fn read_params(common: &Common) -> Result<Option<SpaceParams>, CliError> {
    let range = alpha_range(common.alpha_range);
    match (common.alpha, common.beta, common.gamma) {
        (None, None, None) => Ok(None),
        (Some(a), Some(b), Some(g)) => Ok(Some(SpaceParams::with_range(a, b, g, range)?)),
        _ => Err(invalid("--alpha, --beta and --gamma must be given together")),
    }
}

fn require<T>(value: Option<T>, what: &str, command: &str) -> Result<T, CliError> {
    value.ok_or_else(|| invalid(format!("{command} needs {what}")))
}

fn check_dims(dims: &[usize]) -> Result<(), CliError> {
    if dims.len() < 3 {
        return Err(invalid(format!("--dims needs at least three sizes, got {dims:?}")));
    }
    if dims[0] == 0 || dims.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid(format!("--dims must be positive and strictly increasing, got {dims:?}")));
    }
    check_size("dims", *dims.last().unwrap(), MAX_DIM)
}

fn check_size(what: &'static str, requested: usize, cap: usize) -> Result<(), CliError> {
    if requested > cap {
        return Err(genhilbert::Error::Resource { what, requested, cap }.into());
    }
    Ok(())
}

fn check_cuts(n: usize, ms: &[usize]) -> Result<(), CliError> {
    if n < 2 {
        return Err(invalid(format!("--n must be at least 2, got {n}")));
    }
    check_size("n", n, MAX_DIM)?;
    if ms.is_empty() {
        return Err(invalid("--ms needs at least one cut"));
    }
    if ms.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid(format!("--ms must be strictly increasing, got {ms:?}")));
    }
    if let Some(m) = ms.iter().find(|&&m| m + 1 >= n) {
        return Err(invalid(format!("cut m = {m} leaves no rows below N = {n}")));
    }
    Ok(())
}

fn check_axis(name: &str, values: &[f64]) -> Result<(), CliError> {
    if values.is_empty() {
        return Err(invalid(format!("--{name} needs at least one value")));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(invalid(format!("--{name} values must be finite")));
    }
    Ok(())
}

impl RunConfig {
    pub fn resolve(cli: Cli) -> Result<RunConfig, CliError> {
        let common = cli.common;
        let power = PowerOptions {
            tol: common.tol.unwrap_or(defaults::TOL),
            max_iter: common.max_iter.unwrap_or(defaults::MAX_ITER),
        };
        if !(power.tol > 0.0 && power.tol < 1.0) {
            return Err(invalid(format!("--tol must lie in (0, 1), got {}", power.tol)));
        }
        if power.max_iter == 0 {
            return Err(invalid("--max-iter must be at least 1"));
        }
        let measure = common.measure.as_deref().map(read_measure).transpose()?;
        let params = read_params(&common)?;

        let (command, options) = match cli.command {
            Command::Moments { count } => {
                let count = count.unwrap_or(defaults::MOMENT_COUNT);
                if count == 0 {
                    return Err(invalid("--count must be at least 1"));
                }
                check_size("moment count", count, DEFAULT_MOMENT_CAP)?;
                require(measure.as_ref(), "--measure", "moments")?;
                ("moments", Options::Moments { count })
            }
            Command::Carleson { s, depth } => {
                let s = match (s, params) {
                    (Some(s), _) => s,
                    (None, Some(p)) => p.s,
                    (None, None) => return Err(invalid("carleson needs --s or --alpha/--beta/--gamma")),
                };
                if !(s > 0.0 && s.is_finite()) {
                    return Err(invalid(format!("--s must be positive, got {s}")));
                }
                let depth = depth.unwrap_or(defaults::DEPTH);
                if !DEPTH_RANGE.contains(&depth) {
                    return Err(invalid(format!("--depth must lie in 4..=52, got {depth}")));
                }
                require(measure.as_ref(), "--measure", "carleson")?;
                ("carleson", Options::Carleson { s, depth })
            }
            Command::Bound { dims } => {
                let dims = dims.unwrap_or_else(|| doubling_dims(defaults::DIM_START, defaults::DIM_MAX));
                check_dims(&dims)?;
                require(params, "--alpha/--beta/--gamma", "bound")?.require_schur()?;
                require(measure.as_ref(), "--measure", "bound")?;
                ("bound", Options::Bound { dims })
            }
            Command::Compact { n, ms } => {
                let n = n.unwrap_or(defaults::N);
                let ms = ms.unwrap_or_else(|| default_tail_cuts(n));
                check_cuts(n, &ms)?;
                require(params, "--alpha/--beta/--gamma", "compact")?;
                require(measure.as_ref(), "--measure", "compact")?;
                ("compact", Options::Compact { n, ms })
            }
            Command::Kernel {
                trials,
                seq_len,
                quad_nodes,
            } => {
                let trials = trials.unwrap_or(defaults::TRIALS);
                let seq_len = seq_len.unwrap_or(defaults::SEQ_LEN);
                let quad_nodes = quad_nodes.unwrap_or(defaults::QUAD_NODES);
                if trials == 0 {
                    return Err(invalid("--trials must be at least 1"));
                }
                if seq_len == 0 {
                    return Err(invalid("--seq-len must be at least 1"));
                }
                check_size("seq-len", seq_len, MAX_SEQ_LEN)?;
                if quad_nodes < 2 {
                    return Err(invalid(format!("--quad-nodes must be at least 2, got {quad_nodes}")));
                }
                check_size("quad-nodes", quad_nodes, MAX_QUAD_NODES)?;
                require(params, "--alpha/--beta/--gamma", "kernel")?.require_schur()?;
                (
                    "kernel",
                    Options::Kernel {
                        trials,
                        seq_len,
                        quad_nodes,
                    },
                )
            }
            Command::Chain { ts } => {
                let ts = ts.unwrap_or_else(|| defaults::TS.to_vec());
                if ts.is_empty() || ts.iter().any(|t| !(*t > 0.0 && *t < 1.0)) {
                    return Err(invalid(format!("--ts values must lie in (0, 1), got {ts:?}")));
                }
                require(params, "--alpha/--beta/--gamma", "chain")?;
                require(measure.as_ref(), "--measure", "chain")?;
                ("chain", Options::Chain { ts })
            }
            Command::Sweep {
                alphas,
                betas,
                gammas,
                c_offsets,
                dims,
                n,
                ms,
                resume,
            } => {
                let n = n.unwrap_or(defaults::N);
                let grid = SweepGrid {
                    alphas: alphas.unwrap_or_else(|| defaults::ALPHAS.to_vec()),
                    betas: betas.unwrap_or_else(|| defaults::BETAS.to_vec()),
                    gammas: gammas.unwrap_or_else(|| defaults::GAMMAS.to_vec()),
                    c_offsets: c_offsets.unwrap_or_else(|| defaults::C_OFFSETS.to_vec()),
                    dims: dims.unwrap_or_else(|| doubling_dims(defaults::DIM_START, defaults::DIM_MAX)),
                    ms: ms.unwrap_or_else(|| default_tail_cuts(n)),
                    n,
                    resume,
                };
                check_axis("alphas", &grid.alphas)?;
                check_axis("betas", &grid.betas)?;
                check_axis("gammas", &grid.gammas)?;
                check_axis("c-offsets", &grid.c_offsets)?;
                check_dims(&grid.dims)?;
                check_cuts(grid.n, &grid.ms)?;
                if measure.is_some() || params.is_some() {
                    return Err(invalid(
                        "sweep builds its own (alpha, beta, gamma) grid and power densities; \
                         drop --measure and --alpha/--beta/--gamma",
                    ));
                }
                ("sweep", Options::Sweep(grid))
            }
        };

        // A measure given to a command that does not use it would only
        // clutter the report.
        let measure = if command == "kernel" { None } else { measure };
        Ok(RunConfig {
            command,
            measure_path: measure
                .as_ref()
                .and(common.measure.as_ref())
                .map(|p| p.display().to_string()),
            measure_id: measure.as_ref().map(MeasureSpec::id),
            measure,
            params,
            alpha_range: alpha_range(common.alpha_range),
            power,
            seed: common.seed.unwrap_or(defaults::SEED),
            format: common.format,
            options,
        })
    }
}
