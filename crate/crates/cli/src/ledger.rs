//! Energy ledgers over stored trajectories, inline or replayed.

use std::path::Path;

use fbl_core::diagnostics::{criteria_monitor, ledger_run, CriteriaReport, LedgerConfig, LedgerReport};
use fbl_core::model::{SimState, Variable};
use serde::Serialize;

use crate::error::{RunError, RunResult};
use crate::output::{num, write_json, Table};

const PIECES: [&str; 3] = ["s", "kappa", "p"];

fn to_f(states: &[SimState]) -> RunResult<Vec<SimState>> {
    states
        .iter()
        .map(|s| match s.variable {
            Variable::F => Ok(s.clone()),
            _ => Ok(s.to_variable(Variable::F)?),
        })
        .collect()
}

#[derive(Serialize)]
struct VerdictJson<'a> {
    config: &'a str,
    s: f64,
    kappa: f64,
    p: u32,
    passed: bool,
    rows: usize,
    failing_rows: usize,
    worst_excess: f64,
    running_sup: [f64; 3],
    bounded: bool,
    dissipation_integrals: [f64; 3],
    integrals_finite: bool,
    rate_warning: bool,
    gronwall_fit: f64,
    gronwall_measured: f64,
}

#[derive(Serialize)]
struct CriteriaJson {
    sup_f_l6: f64,
    sup_u_f_linf: f64,
    sup_grad_u_f_linf: f64,
    sup_besov_f: f64,
    sup_grad_theta_linf: f64,
    embedding_ratio: f64,
    besov_regularity: f64,
    besov_integrability: f64,
    finite: bool,
}

impl From<&CriteriaReport> for CriteriaJson {
    fn from(c: &CriteriaReport) -> Self {
        CriteriaJson {
            sup_f_l6: c.sup_f_l6,
            sup_u_f_linf: c.sup_u_f_linf,
            sup_grad_u_f_linf: c.sup_grad_u_f_linf,
            sup_besov_f: c.sup_besov_f,
            sup_grad_theta_linf: c.sup_grad_theta_linf,
            embedding_ratio: c.embedding_ratio,
            besov_regularity: c.besov_regularity,
            besov_integrability: c.besov_integrability,
            finite: c.is_finite(),
        }
    }
}

#[derive(Serialize)]
struct SummaryJson<'a> {
    passed: bool,
    cadence: f64,
    outputs: usize,
    verdicts: Vec<VerdictJson<'a>>,
    criteria: CriteriaJson,
}

/// Runs the ledger on `states`, writing `ledger.csv` (one row per output
/// time and configuration) and `ledger_summary.json`.
pub fn write_ledger(states: &[SimState], configs: &[LedgerConfig], out: &Path) -> RunResult<LedgerReport> {
    if states.len() < 3 {
        return Err(RunError::Validation(format!(
            "a ledger needs at least three stored states, got {} (lengthen the run or lower the stride)",
            states.len()
        )));
    }
    let f_states = to_f(states)?;
    let report = ledger_run(&f_states, configs)?;

    let term_names: Vec<String> = report
        .rows
        .first()
        .map(|r| r.terms.iter().map(|(n, _)| n.clone()).collect())
        .unwrap_or_default();
    let mut header: Vec<String> = ["time", "config", "s", "kappa", "p"].iter().map(|s| s.to_string()).collect();
    for group in ["functional", "rate", "dissipation", "bound", "tolerance"] {
        header.extend(PIECES.iter().map(|p| format!("{group}_{p}")));
    }
    header.push("holds".into());
    header.extend(term_names.iter().cloned());
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut table = Table::new(&header_refs)?;
    for row in &report.rows {
        let cfg = configs.iter().find(|c| c.id == row.config).expect("row of a known configuration");
        let mut rec = vec![num(row.time), row.config.clone(), num(cfg.s), num(cfg.kappa), cfg.p.to_string()];
        for group in [&row.functionals, &row.rates, &row.dissipation, &row.bounds, &row.tolerance] {
            rec.extend(group.iter().map(|v| num(*v)));
        }
        rec.push(row.holds.to_string());
        rec.extend(row.terms.iter().map(|(_, v)| num(*v)));
        table.row(rec)?;
    }
    table.save(&out.join("ledger.csv"))?;

    let verdicts = report
        .verdicts
        .iter()
        .map(|v| {
            let cfg = configs.iter().find(|c| c.id == v.config).expect("verdict of a known configuration");
            VerdictJson {
                config: &v.config,
                s: cfg.s,
                kappa: cfg.kappa,
                p: cfg.p,
                passed: v.passed(),
                rows: v.rows,
                failing_rows: v.failing_rows,
                worst_excess: v.worst_excess,
                running_sup: v.running_sup,
                bounded: v.bounded,
                dissipation_integrals: v.dissipation_integrals,
                integrals_finite: v.integrals_finite,
                rate_warning: v.rate_warning,
                gronwall_fit: v.gronwall_fit,
                gronwall_measured: v.gronwall_measured,
            }
        })
        .collect();
    let criteria = criteria_monitor(&f_states);
    write_json(
        &out.join("ledger_summary.json"),
        &SummaryJson {
            passed: report.passed(),
            cadence: report.cadence,
            outputs: states.len(),
            verdicts,
            criteria: CriteriaJson::from(&criteria),
        },
    )?;
    Ok(report)
}
