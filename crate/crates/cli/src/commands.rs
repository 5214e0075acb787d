use genhilbert::measure::{carleson_report, moments, CarlesonVerdict};
use genhilbert::operator::{
    boundedness_experiment, compactness_experiment, kernel_constant, kernel_inequality_test,
    lower_bound_chain, BoundednessOptions, CompactnessOptions,
};
use genhilbert::{BoundednessVerdict, CompactnessVerdict, MeasureSpec, SpaceParams};
use serde::Serialize;
use serde_json::json;

use crate::config::{Options, RunConfig};
use crate::error::CliError;
use crate::report::Outcome;
use crate::sweep;

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    match &config.options {
        Options::Moments { count } => cmd_moments(config, *count),
        Options::Carleson { s, depth } => cmd_carleson(config, *s, *depth),
        Options::Bound { dims } => cmd_bound(config, dims),
        Options::Compact { n, ms } => cmd_compact(config, *n, ms),
        Options::Kernel {
            trials,
            seq_len,
            quad_nodes,
        } => cmd_kernel(config, *trials, *seq_len, *quad_nodes),
        Options::Chain { ts } => cmd_chain(config, ts),
        Options::Sweep(grid) => sweep::run(config, grid),
    }
}

// resolve() has already checked that the command has what it needs
fn measure(config: &RunConfig) -> &MeasureSpec {
    config.measure.as_ref().expect("measure checked during resolution")
}

fn params(config: &RunConfig) -> &SpaceParams {
    config.params.as_ref().expect("params checked during resolution")
}

#[derive(Serialize)]
struct MomentRow {
    n: usize,
    mu: f64,
}

fn cmd_moments(config: &RunConfig, count: usize) -> Result<Outcome, CliError> {
    let seq = moments(measure(config), count)?;
    let rows: Vec<MomentRow> = seq.values.iter().enumerate().map(|(n, &mu)| MomentRow { n, mu }).collect();
    Outcome::new(&json!({ "method": seq.method, "moments": rows }), &rows)
}

#[derive(Serialize)]
struct TraceRow {
    exponent: f64,
    verdict: CarlesonVerdict,
    j: usize,
    t: f64,
    quotient: f64,
}

fn cmd_carleson(config: &RunConfig, s: f64, depth: u32) -> Result<Outcome, CliError> {
    let report = carleson_report(measure(config), s, depth)?;
    let rows: Vec<TraceRow> = report
        .quotient_trace
        .iter()
        .enumerate()
        .map(|(j, p)| TraceRow {
            exponent: report.exponent,
            verdict: report.verdict,
            j,
            t: p.t,
            quotient: p.quotient,
        })
        .collect();
    let mut out = Outcome::new(&report, &rows)?;
    if report.verdict == CarlesonVerdict::Inconclusive {
        out.warnings.push(format!("Carleson trace at depth {depth} is inconclusive"));
    }
    Ok(out)
}

#[derive(Serialize)]
struct BoundRow {
    dim: usize,
    norm: f64,
    iterations: usize,
    converged: bool,
    per_doubling: Option<f64>,
    verdict: BoundednessVerdict,
}

fn cmd_bound(config: &RunConfig, dims: &[usize]) -> Result<Outcome, CliError> {
    let opts = BoundednessOptions {
        dims: dims.to_vec(),
        power: config.power,
        ..BoundednessOptions::default()
    };
    let report = boundedness_experiment(measure(config), params(config), &opts)?;
    let rows: Vec<BoundRow> = report
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| BoundRow {
            dim: r.dim,
            norm: r.norm.value,
            iterations: r.norm.iterations,
            converged: r.norm.converged,
            per_doubling: i.checked_sub(1).map(|g| report.growth[g].per_doubling),
            verdict: report.verdict,
        })
        .collect();
    let mut out = Outcome::new(&report, &rows)?;
    for r in report.rows.iter().filter(|r| !r.norm.converged) {
        out.warnings.push(non_converged(r.dim, r.norm.iterations, r.norm.residual));
    }
    if report.verdict == BoundednessVerdict::Inconclusive {
        out.warnings.push("norm growth is neither flat nor persistent; verdict inconclusive".into());
    }
    Ok(out)
}

pub(crate) fn non_converged(dim: usize, iterations: usize, residual: f64) -> String {
    format!("power iteration at N = {dim} stopped after {iterations} iterations with relative change {residual:e}")
}

#[derive(Serialize)]
struct TailRow {
    m: usize,
    tail_norm: f64,
    relative_tail: f64,
    iterations: usize,
    converged: bool,
    full_norm: f64,
    verdict: CompactnessVerdict,
}

fn cmd_compact(config: &RunConfig, n: usize, ms: &[usize]) -> Result<Outcome, CliError> {
    let opts = CompactnessOptions {
        ms: ms.to_vec(),
        power: config.power,
        ..CompactnessOptions::new(n)
    };
    let report = compactness_experiment(measure(config), params(config), &opts)?;
    let full = report.full_norm.value;
    let rows: Vec<TailRow> = report
        .tail_norms
        .iter()
        .map(|t| TailRow {
            m: t.m,
            tail_norm: t.norm.value,
            relative_tail: t.norm.value / full,
            iterations: t.norm.iterations,
            converged: t.norm.converged,
            full_norm: full,
            verdict: report.verdict,
        })
        .collect();
    let mut out = Outcome::new(&report, &rows)?;
    if !report.full_norm.converged {
        out.warnings.push(non_converged(n, report.full_norm.iterations, report.full_norm.residual));
    }
    for t in report.tail_norms.iter().filter(|t| !t.norm.converged) {
        out.warnings.push(format!(
            "tail norm at m = {}: {}",
            t.m,
            non_converged(n, t.norm.iterations, t.norm.residual)
        ));
    }
    Ok(out)
}

#[derive(Serialize)]
struct KernelRow {
    schur: f64,
    x_integral: f64,
    y_integral: f64,
    max_relative_error: f64,
    quad_nodes: usize,
    max_ratio: f64,
    trials: usize,
    seq_len: usize,
    seed: u64,
    holds: bool,
}

fn cmd_kernel(config: &RunConfig, trials: usize, seq_len: usize, quad_nodes: usize) -> Result<Outcome, CliError> {
    let p = params(config);
    let constant = kernel_constant(p, quad_nodes)?;
    let test = kernel_inequality_test(p, trials, seq_len, config.seed)?;
    let row = KernelRow {
        schur: constant.schur,
        x_integral: constant.x_integral,
        y_integral: constant.y_integral,
        max_relative_error: constant.max_relative_error(),
        quad_nodes,
        max_ratio: test.max_ratio,
        trials,
        seq_len,
        seed: config.seed,
        holds: test.holds,
    };
    let results = json!({
        "constant": constant,
        "max_relative_error": row.max_relative_error,
        "inequality": test,
    });
    let mut out = Outcome::new(&results, &[row])?;
    if !test.holds {
        out.warnings.push(format!("kernel inequality exceeded: max ratio {}", test.max_ratio));
    }
    Ok(out)
}

fn cmd_chain(config: &RunConfig, ts: &[f64]) -> Result<Outcome, CliError> {
    let records = lower_bound_chain(measure(config), params(config), ts)?;
    let positive: Vec<f64> = records.iter().map(|r| r.ratio).filter(|&r| r > 0.0).collect();
    let spread = if positive.len() == records.len() {
        let hi = positive.iter().cloned().fold(f64::MIN, f64::max);
        let lo = positive.iter().cloned().fold(f64::MAX, f64::min);
        Some(hi / lo)
    } else {
        None
    };
    let mut out = Outcome::new(&json!({ "records": records, "ratio_spread": spread }), &records)?;
    if spread.is_none() {
        out.warnings.push("measure has no mass near 1 for some t; ratio spread undefined".into());
    }
    Ok(out)
}
