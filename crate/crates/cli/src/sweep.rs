//! Grid runs over (alpha, beta, gamma, c) with the power densities
//! (1-t)^(c-1) dt, c = s + offset.
//!
//! Rows are computed in parallel and merged in grid order. With `--resume`
//! the completed rows of a previous JSON report for the same grid are copied
//! into the new report verbatim and only the rest are recomputed.

use std::collections::BTreeMap;
use std::path::Path;

use genhilbert::operator::{boundedness_experiment, compactness_experiment, BoundednessOptions, CompactnessOptions};
use genhilbert::{BoundednessVerdict, CompactnessVerdict, MeasureSpec, SpaceParams};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{RunConfig, SweepGrid};
use crate::error::CliError;
use crate::report::{to_value, Outcome};

#[derive(Debug, Clone, Copy)]
struct GridPoint {
    index: usize,
    alpha: f64,
    beta: f64,
    gamma: f64,
    c_offset: f64,
}

fn grid_points(grid: &SweepGrid) -> Vec<GridPoint> {
    let mut points = Vec::new();
    for &alpha in &grid.alphas {
        for &beta in &grid.betas {
            for &gamma in &grid.gammas {
                for &c_offset in &grid.c_offsets {
                    points.push(GridPoint {
                        index: points.len(),
                        alpha,
                        beta,
                        gamma,
                        c_offset,
                    });
                }
            }
        }
    }
    points
}

#[derive(Debug, Serialize)]
struct SweepRow {
    index: usize,
    alpha: f64,
    beta: f64,
    gamma: f64,
    s: Option<f64>,
    c_offset: f64,
    c: Option<f64>,
    class: &'static str,
    status: &'static str,
    measure_id: Option<String>,
    bound_verdict: Option<BoundednessVerdict>,
    largest_norm: Option<f64>,
    last_growth: Option<f64>,
    proxy_ratio: Option<f64>,
    compact_verdict: Option<CompactnessVerdict>,
    last_relative_tail: Option<f64>,
    converged: Option<bool>,
    error: Option<String>,
}

fn class(offset: f64) -> &'static str {
    if offset < 0.0 {
        "below"
    } else if offset > 0.0 {
        "above"
    } else {
        "boundary"
    }
}

fn run_point(p: GridPoint, grid: &SweepGrid, config: &RunConfig) -> SweepRow {
    let mut row = SweepRow {
        index: p.index,
        alpha: p.alpha,
        beta: p.beta,
        gamma: p.gamma,
        s: None,
        c_offset: p.c_offset,
        c: None,
        class: class(p.c_offset),
        status: "error",
        measure_id: None,
        bound_verdict: None,
        largest_norm: None,
        last_growth: None,
        proxy_ratio: None,
        compact_verdict: None,
        last_relative_tail: None,
        converged: None,
        error: None,
    };
    let params = match SpaceParams::with_range(p.alpha, p.beta, p.gamma, config.alpha_range) {
        Ok(params) => params,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let c = params.s + p.c_offset;
    row.s = Some(params.s);
    row.c = Some(c);
    let spec = MeasureSpec::power_density(c);
    row.measure_id = Some(spec.id());

    let bound_opts = BoundednessOptions {
        dims: grid.dims.clone(),
        power: config.power,
        ..BoundednessOptions::default()
    };
    let compact_opts = CompactnessOptions {
        ms: grid.ms.clone(),
        power: config.power,
        ..CompactnessOptions::new(grid.n)
    };
    let result = spec.validate().and_then(|_| {
        let bound = boundedness_experiment(&spec, &params, &bound_opts)?;
        let compact = compactness_experiment(&spec, &params, &compact_opts)?;
        Ok((bound, compact))
    });
    match result {
        Ok((bound, compact)) => {
            row.status = "ok";
            row.bound_verdict = Some(bound.verdict);
            row.largest_norm = Some(bound.largest_norm());
            row.last_growth = bound.growth.last().map(|g| g.per_doubling);
            row.proxy_ratio = Some(bound.proxy_ratio);
            row.compact_verdict = Some(compact.verdict);
            row.last_relative_tail = compact.relative_tails().last().map(|&(_, r)| r);
            row.converged = Some(
                bound.rows.iter().all(|r| r.norm.converged)
                    && compact.full_norm.converged
                    && compact.tail_norms.iter().all(|t| t.norm.converged),
            );
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Completed rows of a previous report, keyed by grid index. The previous
/// report must come from the same grid and solver settings.
fn load_resume(path: &Path, config: &RunConfig) -> Result<BTreeMap<usize, Value>, CliError> {
    let invalid = |m: String| CliError::Validation(format!("resume file {}: {m}", path.display()));
    let text = std::fs::read_to_string(path).map_err(|e| invalid(e.to_string()))?;
    let prior: Value = serde_json::from_str(&text).map_err(|e| invalid(format!("not a JSON report: {e}")))?;
    let current = to_value(config)?;
    for key in ["command", "options", "power", "alpha_range"] {
        if prior["config"][key] != current[key] {
            return Err(invalid(format!("its `{key}` differs from this run")));
        }
    }
    let rows = prior["results"]["rows"]
        .as_array()
        .ok_or_else(|| invalid("no results.rows array".into()))?;
    let mut done = BTreeMap::new();
    for row in rows {
        if row["status"] == "ok" {
            let index = row["index"]
                .as_u64()
                .ok_or_else(|| invalid("row without an integer index".into()))?;
            done.insert(index as usize, row.clone());
        }
    }
    Ok(done)
}

pub fn run(config: &RunConfig, grid: &SweepGrid) -> Result<Outcome, CliError> {
    let mut reused = match &grid.resume {
        Some(path) => load_resume(path, config)?,
        None => BTreeMap::new(),
    };
    let points = grid_points(grid);
    let fresh: Vec<Option<SweepRow>> = points
        .par_iter()
        .map(|&p| (!reused.contains_key(&p.index)).then(|| run_point(p, grid, config)))
        .collect();

    let mut rows = Vec::with_capacity(points.len());
    let mut warnings = Vec::new();
    for (p, row) in points.iter().zip(fresh) {
        let value = match row {
            Some(row) => {
                if let Some(e) = &row.error {
                    warnings.push(format!("row {}: {e}", row.index));
                } else if row.converged == Some(false) {
                    warnings.push(format!("row {}: power iteration did not converge everywhere", row.index));
                }
                to_value(&row)?
            }
            None => reused.remove(&p.index).expect("reused row present"),
        };
        rows.push(value);
    }
    let failed = rows.iter().filter(|r| r["status"] != "ok").count();
    let mut out = Outcome::new(&json!({ "rows": rows }), &rows)?;
    out.warnings = warnings;
    out.partial_failure = failed > 0;
    Ok(out)
}
