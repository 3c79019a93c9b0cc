//! Fixed-step runs with a time series, snapshots and a norm table.

use std::path::Path;

use fbl_core::diagnostics::besov_indices;
use fbl_core::littlewood_paley::DyadicPartition;
use fbl_core::model::{g_to_f, transform_to_f, Integrator, Model, SimState, Variable};
use fbl_core::spectral::{
    biot_savart, homogeneous_sobolev_norm, lp_norm, read_snapshot, sup_norm_refined, write_snapshot, SpectralField,
    VectorField,
};

use crate::config::SimPlan;
use crate::error::{RunError, RunResult};
use crate::output::{num, Table};

/// Fraction of the Courant bound of the initial state used for the step.
pub const STEP_SAFETY: f64 = 0.5;

/// Refuses runs longer than this many steps.
pub const MAX_STEPS: usize = 10_000_000;

pub const TIMESERIES_HEADER: [&str; 13] = [
    "step",
    "time",
    "status",
    "theta_l2",
    "theta_linf",
    "f_l2",
    "f_l4",
    "f_l6",
    "f_half_dissipation_l2",
    "u_f_linf",
    "grad_u_f_linf",
    "besov_f",
    "detail",
];

/// Rebuilds a state from physical samples. Inline diagnostics and
/// snapshot replays both go through here, so both see identical bits.
pub fn restore(time: f64, theta: &[f64], primary: &[f64], template: &SimState) -> RunResult<SimState> {
    let grid = template.grid();
    let t = SpectralField::from_samples(grid, theta)?;
    let p = SpectralField::from_samples(grid, primary)?;
    Ok(SimState::new(time, t, p, template.variable, template.params)?)
}

fn normalised(state: &SimState) -> RunResult<SimState> {
    restore(state.time, state.theta.samples(), state.primary.samples(), state)
}

/// `(dt, steps)` covering `[0, t_final]` with a multiple of the stride.
pub fn schedule(plan: &SimPlan, integrator: &Integrator, initial: &SimState) -> RunResult<(f64, usize)> {
    if plan.t_final == 0.0 {
        return Ok((plan.dt.unwrap_or(1.0), 0));
    }
    let dt0 = plan
        .dt
        .unwrap_or_else(|| STEP_SAFETY * integrator.stability_bound(initial));
    let raw = (plan.t_final / dt0 * (1.0 - 1e-12)).ceil();
    if !(raw.is_finite() && raw <= MAX_STEPS as f64) {
        return Err(RunError::Numerical(format!(
            "reaching t = {} needs more than {MAX_STEPS} steps of {dt0:e}",
            plan.t_final
        )));
    }
    let steps = (raw as usize).max(1).next_multiple_of(plan.stride);
    let dt = match plan.dt {
        Some(dt) => dt,
        None => plan.t_final / steps as f64,
    };
    Ok((dt, steps))
}

/// The `f` companion of a state and its velocity `u_f`.
pub fn f_view(state: &SimState) -> RunResult<(SpectralField, VectorField)> {
    let alpha = state.params.alpha();
    Ok(match state.variable {
        Variable::F => {
            let model = Model::for_state(state)?;
            let (uf, _) = model.velocity_parts(&state.primary, &state.theta);
            (state.primary.clone(), uf)
        }
        Variable::Omega => {
            let f = transform_to_f(&state.primary, &state.theta, alpha)?;
            let u = biot_savart(&f)?;
            (f, u)
        }
        Variable::G => {
            let f = g_to_f(&state.primary, &state.theta, alpha)?;
            let u = biot_savart(&f)?;
            (f, u)
        }
    })
}

fn series_row(step: usize, state: &SimState, partition: &DyadicPartition) -> RunResult<Vec<String>> {
    let alpha = state.params.alpha();
    let (f, uf) = f_view(state)?;
    let (reg, integ) = besov_indices(alpha);
    let grad = uf.gradient_magnitude_samples().into_iter().fold(0.0, f64::max);
    Ok(vec![
        step.to_string(),
        num(state.time),
        "ok".into(),
        num(state.theta.l2()),
        num(sup_norm_refined(&state.theta)),
        num(f.l2()),
        num(lp_norm(&f, 4.0)?),
        num(lp_norm(&f, 6.0)?),
        num(homogeneous_sobolev_norm(&f, alpha / 2.0, 2.0)?),
        num(uf.sup_norm()),
        num(grad),
        num(partition.besov_norm(&f, reg, integ)?),
        String::new(),
    ])
}

fn failure_row(step: usize, time: f64, status: &str, detail: &str) -> Vec<String> {
    let mut row = vec![step.to_string(), num(time), status.to_string()];
    row.extend(std::iter::repeat_n(String::new(), TIMESERIES_HEADER.len() - 4));
    row.push(detail.to_string());
    row
}

/// A finished or halted run.
pub struct SimOutcome {
    /// Stored states, already passed through their samples.
    pub states: Vec<SimState>,
    pub steps: Vec<usize>,
    pub dt: f64,
    /// Set when the run halted early.
    pub failure: Option<RunError>,
}

/// Integrates, writing `timeseries.csv`, `norms.csv` and (optionally)
/// `snapshots/` with its index `snapshots.csv` under `out`.
pub fn simulate(plan: &SimPlan, out: &Path) -> RunResult<SimOutcome> {
    let initial = normalised(&plan.initial_state()?)?;
    let integrator = Integrator::for_state(&initial, plan.cfl)?;
    let (dt, steps) = schedule(plan, &integrator, &initial)?;
    let partition = DyadicPartition::for_grid(&plan.grid);

    let mut series = Table::new(&TIMESERIES_HEADER)?;
    let mut states = vec![initial.clone()];
    let mut stored_steps = vec![0];
    series.row(series_row(0, &initial, &partition)?)?;
    let mut failure = None;
    let mut cur = initial;
    for i in 1..=steps {
        match integrator.step(&cur, dt) {
            Ok(next) => cur = next,
            Err(e) => {
                let status = match e {
                    fbl_core::Error::StepTooLarge { .. } => "step-too-large",
                    _ => "numerical-failure",
                };
                series.row(failure_row(i, cur.time + dt, status, &e.to_string()))?;
                failure = Some(RunError::from(e));
                break;
            }
        }
        if i % plan.stride == 0 {
            let stored = normalised(&cur)?;
            series.row(series_row(i, &stored, &partition)?)?;
            states.push(stored);
            stored_steps.push(i);
        }
    }
    series.save(&out.join("timeseries.csv"))?;
    write_norms(plan, states.last().expect("initial state is stored"), &partition, out)?;
    if plan.snapshots {
        write_snapshots(&states, &stored_steps, out)?;
    }
    Ok(SimOutcome {
        states,
        steps: stored_steps,
        dt,
        failure,
    })
}

/// `quantity, parameter, value, n, seed` rows for the final state.
fn write_norms(plan: &SimPlan, state: &SimState, partition: &DyadicPartition, out: &Path) -> RunResult<()> {
    let mut t = Table::new(&["quantity", "parameter", "value", "n", "seed"])?;
    let n = plan.grid.n().to_string();
    let seed = plan.seed.to_string();
    let (f, _) = f_view(state)?;
    for (name, field) in [("theta", &state.theta), ("f", &f)] {
        for p in [2.0, 4.0, 6.0, f64::INFINITY] {
            let label = if p.is_infinite() { "inf".to_string() } else { format!("p={p}") };
            t.row([format!("lp_{name}"), label, num(lp_norm(field, p)?), n.clone(), seed.clone()])?;
        }
        let blocks = partition.blocks(field)?;
        for j in partition.jmin()..=partition.jmax() {
            let b = blocks.get(j).expect("block in range");
            t.row([format!("block_l2_{name}"), format!("j={j}"), num(b.l2()), n.clone(), seed.clone()])?;
        }
    }
    let (reg, integ) = besov_indices(state.params.alpha());
    let besov = if f.is_mean_free() { partition.besov_norm(&f, reg, integ)? } else { f64::NAN };
    t.row(["besov_f".to_string(), format!("s={reg};r={integ}"), num(besov), n, seed])?;
    t.save(&out.join("norms.csv"))
}

pub fn snapshot_name(index: usize) -> String {
    format!("snapshots/{index:05}.fbl")
}

fn write_snapshots(states: &[SimState], steps: &[usize], out: &Path) -> RunResult<()> {
    let mut index = Table::new(&["index", "step", "time", "file"])?;
    for (i, (s, step)) in states.iter().zip(steps).enumerate() {
        let name = snapshot_name(i);
        let mut bytes = Vec::new();
        write_snapshot(&mut bytes, &[("theta", &s.theta), (s.variable.name(), &s.primary)])?;
        crate::output::write_atomic(&out.join(&name), &bytes)?;
        index.row([i.to_string(), step.to_string(), num(s.time), name])?;
    }
    index.save(&out.join("snapshots.csv"))
}

/// Reads a snapshot set written by [`simulate`]; `template` supplies the
/// parameters, which snapshots do not store.
pub fn read_snapshot_set(dir: &Path, template: &SimState) -> RunResult<Vec<SimState>> {
    let index = dir.join("snapshots.csv");
    let mut reader = csv::Reader::from_path(&index)
        .map_err(|e| RunError::Validation(format!("cannot read {}: {e}", index.display())))?;
    let mut states = Vec::new();
    for record in reader.records() {
        let record = record?;
        let field = |i: usize| record.get(i).unwrap_or_default().to_string();
        let time: f64 = field(2)
            .parse()
            .map_err(|_| RunError::Validation(format!("bad time `{}` in {}", field(2), index.display())))?;
        let path = dir.join(field(3));
        let mut file = std::fs::File::open(&path)
            .map_err(|e| RunError::Validation(format!("cannot open {}: {e}", path.display())))?;
        let snap = read_snapshot(&mut file)?;
        if !snap.grid.same_as(template.grid()) {
            return Err(RunError::Validation(format!("{} was written on another grid", path.display())));
        }
        let theta = snap.field("theta");
        let primary = snap.field(template.variable.name());
        let (Some(theta), Some(primary)) = (theta, primary) else {
            return Err(RunError::Validation(format!(
                "{} lacks `theta` or `{}`",
                path.display(),
                template.variable.name()
            )));
        };
        states.push(restore(time, theta.samples(), primary.samples(), template)?);
    }
    if states.is_empty() {
        return Err(RunError::Validation(format!("{} lists no snapshots", index.display())));
    }
    Ok(states)
}
