//! Configuration-driven runs of the fractional Boussinesq laboratory:
//! simulations, energy ledgers, constant estimates and a self-test, each
//! writing deterministic CSV and JSON artifacts.

pub mod config;
pub mod error;
pub mod estimate;
pub mod ledger;
pub mod output;
pub mod selftest;
pub mod simulate;

use config::{Mode, Overrides, RunConfig};
use error::{RunError, RunResult};

/// Loads (or defaults) the configuration, applies overrides and runs `mode`.
/// With `replay`, a ledger reads stored snapshots instead of integrating.
pub fn run(mode: Mode, config: Option<&std::path::Path>, overrides: &Overrides, replay: Option<&std::path::Path>) -> RunResult<()> {
    let mut cfg = match config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    cfg.apply(overrides);
    let plan = cfg.plan(mode)?;
    match mode {
        Mode::Selftest => selftest::selftest(plan.seed),
        Mode::Estimate => {
            let est = plan.estimates.as_ref().expect("estimate plan");
            std::fs::create_dir_all(&plan.out)?;
            let reports = estimate::run_estimates(est, plan.seed, &plan.out)?;
            for r in &reports {
                println!("{:<14} c_hat = {:.4e}  {}", r.spec.label, r.c_hat, r.verdict());
            }
            Ok(())
        }
        Mode::Simulate => {
            let sim = plan.sim.as_ref().expect("simulation plan");
            std::fs::create_dir_all(&plan.out)?;
            let outcome = simulate::simulate(sim, &plan.out)?;
            println!("stored {} states, dt = {:e}", outcome.states.len(), outcome.dt);
            outcome.failure.map_or(Ok(()), Err)
        }
        Mode::Ledger => {
            let sim = plan.sim.as_ref().expect("simulation plan");
            std::fs::create_dir_all(&plan.out)?;
            let (states, failure) = match replay {
                Some(dir) => (simulate::read_snapshot_set(dir, &sim.initial_state()?)?, None),
                None => {
                    let o = simulate::simulate(sim, &plan.out)?;
                    (o.states, o.failure)
                }
            };
            if let Some(e) = failure {
                return Err(e);
            }
            let report = ledger::write_ledger(&states, &plan.levels, &plan.out)?;
            for v in &report.verdicts {
                println!(
                    "{:<12} {} (worst excess {:.3e})",
                    v.config,
                    if v.passed() { "holds" } else { "FAILS" },
                    v.worst_excess
                );
            }
            if !report.passed() {
                return Err(RunError::Invariant("an energy ledger row failed its bound".into()));
            }
            Ok(())
        }
    }
}
