use std::sync::Arc;

use super::params::ModelParams;
use super::transforms::{g_to_vorticity, transform_to_f, transform_to_g, transform_to_vorticity};
use crate::spectral::{
    theta_vorticity_kind, Advector, Axis, Grid, MultiplierKind, MultiplierSpec, SpectralField,
    SymbolTable, VectorField,
};
use crate::{Error, Result};

/// Which unknown accompanies the temperature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variable {
    Omega,
    G,
    F,
}

impl Variable {
    pub fn name(self) -> &'static str {
        match self {
            Variable::Omega => "omega",
            Variable::G => "g",
            Variable::F => "f",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "omega" => Some(Variable::Omega),
            "g" | "G" => Some(Variable::G),
            "f" => Some(Variable::F),
            _ => None,
        }
    }
}

/// Temperature plus one companion unknown at a given time.
///
/// With `ε₀ < 1` the pair is the rescaled `(F, Θ)` and the clock is the
/// rescaled time.
#[derive(Clone, Debug)]
pub struct SimState {
    pub time: f64,
    pub theta: SpectralField,
    pub primary: SpectralField,
    pub variable: Variable,
    pub params: ModelParams,
}

impl SimState {
    pub fn new(
        time: f64,
        theta: SpectralField,
        primary: SpectralField,
        variable: Variable,
        params: ModelParams,
    ) -> Result<Self> {
        if !theta.grid().same_as(primary.grid()) {
            return Err(Error::GridMismatch);
        }
        if !(theta.is_real() && primary.is_real()) {
            return Err(Error::InvalidParameter("state fields must be real".into()));
        }
        theta.require_mean_free()?;
        primary.require_mean_free()?;
        validate_pairing(variable, &params)?;
        Ok(SimState {
            time,
            theta,
            primary,
            variable,
            params,
        })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.theta.grid()
    }

    pub fn is_finite(&self) -> bool {
        self.theta.is_finite() && self.primary.is_finite()
    }

    /// Vorticity in the state's own coordinates.
    pub fn vorticity(&self) -> Result<SpectralField> {
        let a = self.params.alpha();
        match self.variable {
            Variable::Omega => Ok(self.primary.clone()),
            Variable::G => g_to_vorticity(&self.primary, &self.theta, a),
            Variable::F => {
                let eps = self.params.eps0();
                if eps == 1.0 {
                    transform_to_vorticity(&self.primary, &self.theta, a)
                } else {
                    let carrier = scaled_carrier(self.grid(), &self.params)?;
                    Ok(&self.primary + &carrier.apply(&self.theta))
                }
            }
        }
    }

    /// The same physical state expressed through another unknown.
    pub fn to_variable(&self, target: Variable) -> Result<SimState> {
        if target == self.variable {
            return Ok(self.clone());
        }
        if self.params.eps0() != 1.0 {
            return Err(Error::InvalidParameter(
                "rescaled states cannot change unknown; set eps0 = 1".into(),
            ));
        }
        let omega = self.vorticity()?;
        let a = self.params.alpha();
        let primary = match target {
            Variable::Omega => omega,
            Variable::G => transform_to_g(&omega, &self.theta, a)?,
            Variable::F => transform_to_f(&omega, &self.theta, a)?,
        };
        SimState::new(self.time, self.theta.clone(), primary, target, self.params)
    }
}

fn validate_pairing(variable: Variable, params: &ModelParams) -> Result<()> {
    if variable != Variable::Omega {
        params.require_canonical()?;
    }
    if variable != Variable::F && params.eps0() != 1.0 {
        return Err(Error::InvalidParameter(
            "rescaling (eps0 < 1) is only defined for the f unknown".into(),
        ));
    }
    Ok(())
}

/// `ε^β R_α + ε^{2β−α} R_αΛ^{β−α}`, the rescaled temperature part of the
/// vorticity.
fn scaled_carrier(grid: &Arc<Grid>, params: &ModelParams) -> Result<SymbolTable> {
    let (a, b, e) = (params.alpha(), params.beta(), params.eps0());
    let r = SymbolTable::new(grid, &MultiplierSpec::riesz(a))?;
    let rl = SymbolTable::new(
        grid,
        &MultiplierSpec::composite(vec![MultiplierKind::RieszAlpha(a), MultiplierKind::LambdaPow(b - a)]),
    )?;
    Ok(r.scaled(e.powf(b)).plus(&rl.scaled(e.powf(2.0 * b - a))))
}

/// Raw pieces of the `f` equation for a prescribed velocity, without the
/// scaling prefactors.
pub struct FTerms {
    /// `P(U·∇F)`.
    pub adv_f: SpectralField,
    /// `P(U·∇Θ)`.
    pub adv_theta: SpectralField,
    /// `[R_α, U·∇]Θ`.
    pub comm_riesz: SpectralField,
    /// `[Λ^{β−2α}∂₁, U·∇]Θ`.
    pub comm_lower: SpectralField,
}

/// Scalar prefactors of the rescaled `f` equation.
#[derive(Clone, Copy, Debug)]
pub struct Coefficients {
    pub advection: f64,
    pub dissipation: f64,
    pub source: f64,
    pub riesz: f64,
    pub lower: f64,
}

impl Coefficients {
    pub fn for_params(p: &ModelParams) -> Self {
        let (a, b, e) = (p.alpha(), p.beta(), p.eps0());
        Coefficients {
            advection: e.powf(a),
            dissipation: e.powf(a - b),
            source: e.powf(2.0 - 3.0 * a),
            riesz: e,
            lower: e.powf(2.0 * b),
        }
    }
}

/// Precomputed operators for one grid, parameter set and unknown.
pub struct Model {
    grid: Arc<Grid>,
    params: ModelParams,
    variable: Variable,
    coef: Coefficients,
    decay_primary: Vec<f64>,
    decay_theta: Vec<f64>,
    u_primary: [SymbolTable; 2],
    u_theta: Option<[SymbolTable; 2]>,
    source: SymbolTable,
    riesz: SymbolTable,
    lower: SymbolTable,
}

impl Model {
    pub fn new(grid: &Arc<Grid>, params: ModelParams, variable: Variable) -> Result<Self> {
        validate_pairing(variable, &params)?;
        let (a, b) = (params.alpha(), params.beta());
        let coef = Coefficients::for_params(&params);
        let table = |spec: MultiplierSpec| SymbolTable::new(grid, &spec);
        let lambda = |s: f64| table(MultiplierSpec::lambda(s));
        let d1 = MultiplierKind::Partial(Axis::X1);
        let bs = [
            table(MultiplierSpec::inv_lap_perp_grad(Axis::X1))?,
            table(MultiplierSpec::inv_lap_perp_grad(Axis::X2))?,
        ];
        let riesz = table(MultiplierSpec::riesz(a))?;
        let lower = table(MultiplierSpec::composite(vec![MultiplierKind::LambdaPow(b - 2.0 * a), d1.clone()]))?;

        let (diss_p, diss_t) = match variable {
            Variable::F => (coef.dissipation, 1.0),
            _ => (params.nu(), params.kappa()),
        };
        let decay_primary = lambda(a)?.scaled(diss_p).real_parts();
        let decay_theta = lambda(b)?.scaled(diss_t).real_parts();

        let (u_primary, u_theta, source) = match variable {
            Variable::Omega => (bs, None, table(MultiplierSpec::partial(Axis::X1))?),
            Variable::G => {
                let ut = [bs[0].compose(&riesz), bs[1].compose(&riesz)];
                let src = table(MultiplierSpec::composite(vec![MultiplierKind::LambdaPow(b - a), d1.clone()]))?;
                (bs, Some(ut), src)
            }
            Variable::F => {
                let inv = 1.0 / params.eps0();
                let carrier = if params.eps0() == 1.0 {
                    table(MultiplierSpec::new(theta_vorticity_kind(a)))?
                } else {
                    scaled_carrier(grid, &params)?
                };
                let up = [bs[0].scaled(inv), bs[1].scaled(inv)];
                let ut = [up[0].compose(&carrier), up[1].compose(&carrier)];
                let src = table(MultiplierSpec::composite(vec![
                    MultiplierKind::LambdaPow(2.0 * (b - a)),
                    d1.clone(),
                ]))?;
                (up, Some(ut), src)
            }
        };
        Ok(Model {
            grid: grid.clone(),
            params,
            variable,
            coef,
            decay_primary,
            decay_theta,
            u_primary,
            u_theta,
            source,
            riesz,
            lower,
        })
    }

    pub fn for_state(state: &SimState) -> Result<Self> {
        Model::new(state.grid(), state.params, state.variable)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn variable(&self) -> Variable {
        self.variable
    }

    pub fn coefficients(&self) -> Coefficients {
        self.coef
    }

    /// Diagonal decay rates of the primary unknown and of the temperature.
    pub fn decay_rates(&self) -> (&[f64], &[f64]) {
        (&self.decay_primary, &self.decay_theta)
    }

    /// Velocity split into the part carried by the primary unknown and the
    /// part carried by the temperature.
    pub fn velocity_parts(&self, primary: &SpectralField, theta: &SpectralField) -> (VectorField, VectorField) {
        let up = VectorField([self.u_primary[0].apply(primary), self.u_primary[1].apply(primary)]);
        let ut = match &self.u_theta {
            Some(t) => VectorField([t[0].apply(theta), t[1].apply(theta)]),
            None => VectorField::zeros(&self.grid),
        };
        (up, ut)
    }

    pub fn velocity(&self, primary: &SpectralField, theta: &SpectralField) -> VectorField {
        let (a, b) = self.velocity_parts(primary, theta);
        a.lincomb(1.0, &b, 1.0)
    }

    /// Velocity that actually transports the fields (`ε₀^α U` when rescaled).
    pub fn transport_velocity(&self, primary: &SpectralField, theta: &SpectralField) -> VectorField {
        let u = self.velocity(primary, theta);
        match self.variable {
            Variable::F => u.scale(self.coef.advection),
            _ => u,
        }
    }

    /// Pieces of the `f` equation for an arbitrary divergence-free velocity.
    pub fn f_terms(&self, u: &VectorField, f: &SpectralField, theta: &SpectralField) -> FTerms {
        let adv = Advector::new(u);
        let adv_theta = adv.advect(theta);
        let r_theta = self.riesz.apply(theta);
        let q_theta = self.lower.apply(theta);
        let comm_riesz = &self.riesz.apply(&adv_theta) - &adv.advect(&r_theta);
        let comm_lower = &self.lower.apply(&adv_theta) - &adv.advect(&q_theta);
        FTerms {
            adv_f: adv.advect(f),
            adv_theta,
            comm_riesz,
            comm_lower,
        }
    }

    /// Forcing of the primary unknown by the temperature, without prefactor.
    pub fn source(&self, theta: &SpectralField) -> SpectralField {
        self.source.apply(theta)
    }

    /// Everything except the diagonal dissipation.
    pub fn nonlinear(&self, primary: &SpectralField, theta: &SpectralField) -> (SpectralField, SpectralField) {
        let u = self.velocity(primary, theta);
        match self.variable {
            Variable::Omega => {
                let adv = Advector::new(&u);
                let dp = &self.source.apply(theta) - &adv.advect(primary);
                (dp, -&adv.advect(theta))
            }
            Variable::G => {
                let t = self.f_terms(&u, primary, theta);
                let forcing = &self.source.apply(theta) + &t.comm_riesz;
                (&forcing - &t.adv_f, -&t.adv_theta)
            }
            Variable::F => {
                let c = self.coef;
                let t = self.f_terms(&u, primary, theta);
                let mut dp = self.source.apply(theta).scale(c.source);
                dp = dp.lincomb(1.0, &t.adv_f, -c.advection);
                dp = dp.lincomb(1.0, &t.comm_riesz, c.riesz);
                dp = dp.lincomb(1.0, &t.comm_lower, c.lower);
                (dp, t.adv_theta.scale(-c.advection))
            }
        }
    }

    /// Full time derivative of `(primary, θ)`.
    pub fn rhs(&self, primary: &SpectralField, theta: &SpectralField) -> (SpectralField, SpectralField) {
        let (np, nt) = self.nonlinear(primary, theta);
        (
            &np - &primary.mul_real(&self.decay_primary),
            &nt - &theta.mul_real(&self.decay_theta),
        )
    }

    /// Pure transport `(−P(u·∇p), −P(u·∇θ))` with the transporting velocity.
    pub fn transport(&self, primary: &SpectralField, theta: &SpectralField) -> (SpectralField, SpectralField) {
        let adv = Advector::new(&self.transport_velocity(primary, theta));
        (-&adv.advect(primary), -&adv.advect(theta))
    }
}

fn rhs_for(state: &SimState, variable: Variable) -> Result<(SpectralField, SpectralField)> {
    if state.variable != variable {
        return Err(Error::InvalidParameter(format!(
            "state holds `{}`, expected `{}`",
            state.variable.name(),
            variable.name()
        )));
    }
    let model = Model::for_state(state)?;
    Ok(model.rhs(&state.primary, &state.theta))
}

/// `(∂_tω, ∂_tθ)` for a vorticity state.
pub fn rhs_vorticity(state: &SimState) -> Result<(SpectralField, SpectralField)> {
    rhs_for(state, Variable::Omega)
}

/// `(∂_tG, ∂_tθ)` with `G_t + u·∇G + Λ^αG = Λ^{β−α}∂₁θ + [R_α, u·∇]θ`.
pub fn rhs_g(state: &SimState) -> Result<(SpectralField, SpectralField)> {
    rhs_for(state, Variable::G)
}

/// `(∂_tf, ∂_tθ)` for an unscaled `f` state.
pub fn rhs_f_system(state: &SimState) -> Result<(SpectralField, SpectralField)> {
    if state.params.eps0() != 1.0 {
        return Err(Error::InvalidParameter("the unscaled f system needs eps0 = 1".into()));
    }
    rhs_for(state, Variable::F)
}

/// `(∂_τF, ∂_τΘ)` for the rescaled system with the state's `ε₀`.
pub fn rhs_scaled(state: &SimState) -> Result<(SpectralField, SpectralField)> {
    rhs_for(state, Variable::F)
}

/// Leray projection `v − ∇Δ^{−1}∇·v`; the mean of `v` is kept.
pub fn leray(v: &VectorField) -> VectorField {
    let grid = v.grid().clone();
    let (a, b) = (v.0[0].coeffs(), v.0[1].coeffs());
    let mut out = [Vec::with_capacity(grid.len()), Vec::with_capacity(grid.len())];
    let n = grid.n();
    for idx in 0..grid.len() {
        let m2 = grid.modulus(idx).powi(2);
        if m2 == 0.0 {
            out[0].push(a[idx]);
            out[1].push(b[idx]);
            continue;
        }
        let (mut x1, mut x2) = grid.xi(idx);
        // the gradient/divergence pair vanishes on Nyquist lines
        if grid.is_nyquist(idx % n) {
            x1 = 0.0;
        }
        if grid.is_nyquist(idx / n) {
            x2 = 0.0;
        }
        let proj = (a[idx] * x1 + b[idx] * x2) / m2;
        out[0].push(a[idx] - proj * x1);
        out[1].push(b[idx] - proj * x2);
    }
    let [o1, o2] = out;
    VectorField([
        SpectralField::from_parts(grid.clone(), o1, true),
        SpectralField::from_parts(grid, o2, true),
    ])
}

/// Primitive-variable right-hand side
/// `u_t = −P_L(u·∇u) − νΛ^αu + P_L(θe₂)`, `θ_t = −u·∇θ − κΛ^βθ`.
pub fn rhs_primitive(u: &VectorField, theta: &SpectralField, params: &ModelParams) -> Result<(VectorField, SpectralField)> {
    let grid = u.grid();
    let lam_a = SymbolTable::new(grid, &MultiplierSpec::lambda(params.alpha()))?;
    let lam_b = SymbolTable::new(grid, &MultiplierSpec::lambda(params.beta()))?;
    let adv = Advector::new(u);
    let transport = u.map(|c| adv.advect(c));
    let buoyancy = VectorField([SpectralField::zeros(grid), theta.clone()]);
    let forcing = leray(&buoyancy.lincomb(1.0, &transport, -1.0));
    let du = forcing.lincomb(1.0, &u.map(|c| lam_a.apply(c)), -params.nu());
    let dtheta = &adv.advect(theta).scale(-1.0) - &lam_b.apply(theta).scale(params.kappa());
    Ok((du, dtheta))
}
