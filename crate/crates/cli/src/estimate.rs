//! Sampling campaigns over the inequality registry.

use std::path::Path;

use fbl_core::commutator_lab::{estimate_constant, EstimateReport};
use serde::Serialize;

use crate::config::EstimatePlan;
use crate::error::{RunError, RunResult};
use crate::output::{num, write_json, Table};

#[derive(Serialize)]
struct SpecJson<'a> {
    label: &'a str,
    id: &'a str,
    ensemble: &'a str,
    canary: bool,
    near_boundary: bool,
    min_margin: f64,
    c_hat_per_grid: Vec<f64>,
    c_hat: f64,
    growth: &'a [f64],
    verdict: &'a str,
    passed: bool,
}

/// The lower-order twin of a spec measured next to it.
#[derive(Serialize)]
struct TwinJson<'a> {
    label: &'a str,
    twin: &'a str,
    c_hat: f64,
    twin_c_hat: f64,
    /// The twin keeps the easier term, so its constant should not exceed
    /// the original one.
    twin_not_larger: bool,
}

#[derive(Serialize)]
struct SummaryJson<'a> {
    note: &'a str,
    seed: u64,
    trials: usize,
    grids: &'a [usize],
    passed: bool,
    specs: Vec<SpecJson<'a>>,
    lower_order: Vec<TwinJson<'a>>,
}

/// Runs every planned spec and writes `estimates.csv` (one row per spec and
/// grid), `ratios.csv` (every sampled ratio) and `estimate_summary.json`.
/// A non-canary spec whose constant drifts with resolution is an invariant
/// failure, reported after all artifacts are written.
pub fn run_estimates(plan: &EstimatePlan, seed: u64, out: &Path) -> RunResult<Vec<EstimateReport>> {
    let reports = plan
        .specs
        .iter()
        .map(|s| estimate_constant(s, plan.trials, &plan.grids, seed))
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = Table::new(&[
        "label",
        "id",
        "ensemble",
        "canary",
        "near_boundary",
        "n",
        "trials",
        "valid",
        "resampled",
        "c_hat",
        "seed",
    ])?;
    let mut ratios = Table::new(&["label", "n", "sample", "ratio"])?;
    for r in &reports {
        for g in &r.grids {
            table.row([
                r.spec.label.clone(),
                r.spec.id.name().to_string(),
                r.spec.ensemble.name().to_string(),
                r.spec.canary.to_string(),
                r.near_boundary.to_string(),
                g.n.to_string(),
                r.trials.to_string(),
                g.ratios.len().to_string(),
                g.resampled.to_string(),
                num(g.c_hat),
                seed.to_string(),
            ])?;
            for (i, x) in g.ratios.iter().enumerate() {
                ratios.row([r.spec.label.clone(), g.n.to_string(), i.to_string(), num(*x)])?;
            }
        }
    }
    table.save(&out.join("estimates.csv"))?;
    ratios.save(&out.join("ratios.csv"))?;

    let specs = reports
        .iter()
        .map(|r| SpecJson {
            label: &r.spec.label,
            id: r.spec.id.name(),
            ensemble: r.spec.ensemble.name(),
            canary: r.spec.canary,
            near_boundary: r.near_boundary,
            min_margin: r.spec.min_margin(),
            c_hat_per_grid: r.grids.iter().map(|g| g.c_hat).collect(),
            c_hat: r.c_hat,
            growth: &r.growth,
            verdict: r.verdict(),
            passed: r.passed(),
        })
        .collect();
    let lower_order = reports
        .iter()
        .filter_map(|r| {
            let twin_label = format!("{}-lower", r.spec.label);
            let t = reports.iter().find(|t| t.spec.label == twin_label)?;
            Some(TwinJson {
                label: &r.spec.label,
                twin: &t.spec.label,
                c_hat: r.c_hat,
                twin_c_hat: t.c_hat,
                twin_not_larger: t.c_hat <= r.c_hat,
            })
        })
        .collect();
    let passed = reports.iter().all(EstimateReport::passed);
    write_json(
        &out.join("estimate_summary.json"),
        &SummaryJson {
            note: EstimateReport::NOTE,
            seed,
            trials: plan.trials,
            grids: &plan.grids,
            passed,
            specs,
            lower_order,
        },
    )?;
    if !passed {
        let bad: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.spec.label.as_str()).collect();
        return Err(RunError::Invariant(format!("constants drift with resolution for {}", bad.join(", "))));
    }
    Ok(reports)
}
