//! Quick identities across every layer, for checking an installation.

use std::f64::consts::PI;

use fbl_core::commutator_lab::{
    canary_registry, commutator_field, estimate_constant, random_divfree_field, Band, InequalityId, InequalitySpec,
};
use fbl_core::diagnostics::{ledger_run, ExponentTable, LedgerConfig, DEFAULT_RHO};
use fbl_core::littlewood_paley::{paraproduct_split, DyadicPartition, DEFAULT_OFFSET};
use fbl_core::model::{
    random_state, transform_to_f, transform_to_vorticity, zero_state, Integrator, ModelParams, Spectrum, Variable,
    DEFAULT_CFL,
};
use fbl_core::spectral::{apply_multiplier, make_grid, product, MultiplierSpec, SpectralField, VectorField};

use crate::error::{RunError, RunResult};

/// One named check with its measured defect.
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, value: f64, limit: f64) -> Check {
    Check {
        name,
        passed: value <= limit,
        detail: format!("{value:.3e} (limit {limit:.0e})"),
    }
}

fn flag(name: &'static str, ok: bool, detail: impl Into<String>) -> Check {
    Check {
        name,
        passed: ok,
        detail: detail.into(),
    }
}

fn sample_field(grid: &std::sync::Arc<fbl_core::spectral::Grid>) -> SpectralField {
    SpectralField::from_fn(grid, |x, y| (x + 2.0 * y).sin() + 0.5 * (3.0 * x).cos() * y.sin() + 0.2 * (5.0 * y).cos())
}

/// Runs all checks; never panics on a failed check.
pub fn run_checks(seed: u64) -> RunResult<Vec<Check>> {
    let grid = make_grid(32, 2.0 * PI)?;
    let f = sample_field(&grid);
    let g = SpectralField::from_fn(&grid, |x, y| (2.0 * x - y).cos() + 0.3 * (x + y).sin());
    let mut out = Vec::new();

    let round = apply_multiplier(&apply_multiplier(&f, &MultiplierSpec::lambda(0.7))?, &MultiplierSpec::lambda(-0.7))?;
    out.push(check("spectral: fractional powers invert", round.max_coeff_diff(&f), 1e-13));
    let quad = (f.samples().iter().map(|v| v * v).sum::<f64>() * grid.dx() * grid.dx()).sqrt();
    out.push(check("spectral: Parseval", (quad - f.l2()).abs() / f.l2(), 1e-13));

    let part = DyadicPartition::for_grid(&grid);
    out.push(check(
        "littlewood-paley: blocks reconstruct",
        part.blocks(&f)?.reconstruct().max_coeff_diff(&f),
        1e-13,
    ));
    let k = part.jmin() + 2;
    let pieces = paraproduct_split(&part, &f, &g, k, DEFAULT_OFFSET)?;
    let direct = part.block(&product(&f, &g), k)?;
    out.push(check("littlewood-paley: paraproduct sums to block", pieces.total().max_coeff_diff(&direct), 1e-12));

    let params = ModelParams::new(0.75)?;
    let spec = Spectrum::new(2.0, 1.0, 6.0);
    let s = random_state(&grid, params, Variable::Omega, seed, spec, spec)?;
    let fv = transform_to_f(&s.primary, &s.theta, params.alpha())?;
    let back = transform_to_vorticity(&fv, &s.theta, params.alpha())?;
    out.push(check("model: vorticity/f round trip", back.max_coeff_diff(&s.primary), 1e-12));
    let z = zero_state(&grid, params, Variable::F)?;
    let zi = Integrator::for_state(&z, DEFAULT_CFL)?;
    let z1 = zi.step(&z, 0.01)?;
    out.push(check("model: zero data stays zero", z1.primary.coeff_max().max(z1.theta.coeff_max()), 0.0));

    let table = ExponentTable::new(0.7, DEFAULT_RHO);
    out.push(flag(
        "diagnostics: exponent table at alpha=0.7",
        table.q0_at_least_one() && table.delta_in_unit_interval() && table.six_in_window(),
        format!("q0 = {:.4}, delta = {:.4}", table.q0, table.delta),
    ));
    let sf = random_state(&grid, params, Variable::F, seed, spec, spec)?;
    let integ = Integrator::for_state(&sf, DEFAULT_CFL)?;
    let dt = 0.5 * integ.stability_bound(&sf);
    let traj = integ.trajectory(&sf, dt, 12, 2)?;
    let report = ledger_run(&traj, &[LedgerConfig::l4_level(params.alpha())?])?;
    out.push(flag(
        "diagnostics: short L4 ledger closes",
        report.passed(),
        format!("{} rows", report.rows.len()),
    ));

    let c = VectorField::constant(&grid, 0.4, -1.1);
    let zero = commutator_field(&MultiplierSpec::riesz(0.75), &c, &f)?;
    out.push(check("commutator: constant velocity commutes", zero.coeff_max(), 1e-13));
    let v = random_divfree_field(&grid, seed, Band::new(1, 3), 1.0)?;
    out.push(check("commutator: sampled velocity is divergence-free", v.relative_divergence(), 1e-12));
    let canaries_invalid = canary_registry().iter().all(|c| c.validate().is_err());
    out.push(flag("commutator: canaries violate their hypotheses", canaries_invalid, ""));
    let est = estimate_constant(&InequalitySpec::default_for(InequalityId::F10), 8, &[32, 64], seed)?;
    out.push(flag(
        "commutator: small campaign is finite",
        est.c_hat.is_finite() && est.c_hat > 0.0,
        format!("c_hat = {:.3e}", est.c_hat),
    ));
    Ok(out)
}

/// Prints one line per check; an invariant error if any fails.
pub fn selftest(seed: u64) -> RunResult<()> {
    let checks = run_checks(seed)?;
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(RunError::Invariant(format!("{failed} self-test check(s) failed")));
    }
    Ok(())
}
