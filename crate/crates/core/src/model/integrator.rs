use super::system::{Model, SimState};
use crate::spectral::{SpectralField, VectorField};
use crate::{Error, Result};

/// Default Courant factor.
pub const DEFAULT_CFL: f64 = 0.4;

/// Integrating-factor (Lawson) RK4: the diagonal dissipation is propagated
/// exactly by `e^{−dt·d(ξ)}`, everything else by classical RK4.
pub struct Integrator {
    model: Model,
    cfl: f64,
}

type Pair = (SpectralField, SpectralField);

fn combine(a: &Pair, wa: f64, b: &Pair, wb: f64) -> Pair {
    (a.0.lincomb(wa, &b.0, wb), a.1.lincomb(wa, &b.1, wb))
}

impl Integrator {
    pub fn new(model: Model, cfl: f64) -> Result<Self> {
        if !(cfl > 0.0 && cfl.is_finite()) {
            return Err(Error::InvalidParameter(format!("Courant factor {cfl} must be positive")));
        }
        Ok(Integrator { model, cfl })
    }

    pub fn for_state(state: &SimState, cfl: f64) -> Result<Self> {
        Integrator::new(Model::for_state(state)?, cfl)
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn cfl(&self) -> f64 {
        self.cfl
    }

    /// Largest admissible step, `c·min(Δx/‖u‖_∞, Δx^α)`.
    pub fn stability_bound(&self, state: &SimState) -> f64 {
        let u = self.model.transport_velocity(&state.primary, &state.theta);
        self.bound_for(&u)
    }

    fn bound_for(&self, u: &VectorField) -> f64 {
        let dx = self.model.grid().dx();
        let speed = u.sup_norm();
        let advective = if speed > 0.0 { dx / speed } else { f64::INFINITY };
        self.cfl * advective.min(dx.powf(self.model.params().alpha()))
    }

    fn check_finite(state: &SimState, when: &str) -> Result<()> {
        for (name, f) in [("theta", &state.theta), (state.variable.name(), &state.primary)] {
            if !f.is_finite() {
                return Err(Error::NumericalFailure {
                    time: state.time,
                    detail: format!("non-finite coefficients in {name} {when}"),
                });
            }
        }
        Ok(())
    }

    pub fn step(&self, state: &SimState, dt: f64) -> Result<SimState> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("time step {dt} must be positive")));
        }
        Self::check_finite(state, "before the step")?;
        let bound = self.stability_bound(state);
        if dt > bound * (1.0 + 1e-12) {
            return Err(Error::StepTooLarge { dt, bound });
        }
        let (dp, dt_) = self.model.decay_rates();
        let half: (Vec<f64>, Vec<f64>) = (
            dp.iter().map(|d| (-d * dt * 0.5).exp()).collect(),
            dt_.iter().map(|d| (-d * dt * 0.5).exp()).collect(),
        );
        let full: (Vec<f64>, Vec<f64>) = (
            half.0.iter().map(|e| e * e).collect(),
            half.1.iter().map(|e| e * e).collect(),
        );
        let prop = |w: &Pair, e: &(Vec<f64>, Vec<f64>)| -> Pair { (w.0.mul_real(&e.0), w.1.mul_real(&e.1)) };
        let n = |w: &Pair| self.model.nonlinear(&w.0, &w.1);

        let w: Pair = (state.primary.clone(), state.theta.clone());
        let k1 = n(&w);
        let k2 = n(&prop(&combine(&w, 1.0, &k1, 0.5 * dt), &half));
        let hw = prop(&w, &half);
        let k3 = n(&combine(&hw, 1.0, &k2, 0.5 * dt));
        let k4 = n(&combine(&prop(&w, &full), 1.0, &prop(&k3, &half), dt));

        let mut acc = combine(&prop(&k1, &full), 1.0, &k4, 1.0);
        acc = combine(&acc, 1.0, &prop(&combine(&k2, 1.0, &k3, 1.0), &half), 2.0);
        let next = combine(&prop(&w, &full), 1.0, &acc, dt / 6.0);

        let out = SimState {
            time: state.time + dt,
            theta: next.1,
            primary: next.0,
            variable: state.variable,
            params: state.params,
        };
        Self::check_finite(&out, "after the step")?;
        Ok(out)
    }

    /// `steps` fixed steps of size `dt`, keeping every `stride`-th state
    /// (the initial state included).
    pub fn trajectory(&self, state: &SimState, dt: f64, steps: usize, stride: usize) -> Result<Vec<SimState>> {
        let stride = stride.max(1);
        let mut out = vec![state.clone()];
        let mut cur = state.clone();
        for i in 1..=steps {
            cur = self.step(&cur, dt)?;
            if i % stride == 0 {
                out.push(cur.clone());
            }
        }
        Ok(out)
    }

    /// One RK4 step of pure transport; `dt` may be negative.
    pub fn transport_step(&self, state: &SimState, dt: f64) -> Result<SimState> {
        Self::check_finite(state, "before the transport step")?;
        let n = |w: &Pair| self.model.transport(&w.0, &w.1);
        let w: Pair = (state.primary.clone(), state.theta.clone());
        let k1 = n(&w);
        let k2 = n(&combine(&w, 1.0, &k1, 0.5 * dt));
        let k3 = n(&combine(&w, 1.0, &k2, 0.5 * dt));
        let k4 = n(&combine(&w, 1.0, &k3, dt));
        let mut acc = combine(&k1, 1.0, &k4, 1.0);
        acc = combine(&acc, 1.0, &combine(&k2, 1.0, &k3, 1.0), 2.0);
        let next = combine(&w, 1.0, &acc, dt / 6.0);
        let out = SimState {
            time: state.time + dt,
            theta: next.1,
            primary: next.0,
            variable: state.variable,
            params: state.params,
        };
        Self::check_finite(&out, "after the transport step")?;
        Ok(out)
    }
}

/// One integrating-factor RK4 step with Courant factor `cfl`.
pub fn step(state: &SimState, dt: f64, cfl: f64) -> Result<SimState> {
    Integrator::for_state(state, cfl)?.step(state, dt)
}
