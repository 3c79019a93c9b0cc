use std::sync::Arc;

use crate::model::{FTerms, Model, ModelParams, SimState, Variable};
use crate::spectral::{Grid, MultiplierSpec, SpectralField, SymbolTable, VectorField};
use crate::{Error, Result};

/// One `(s, κ, p)` choice: `Λ^s` on `F`, `Λ^κ` on `Θ`, and `‖F‖_{L^p}^p`.
#[derive(Clone, Debug, PartialEq)]
pub struct LedgerConfig {
    pub id: String,
    pub s: f64,
    pub kappa: f64,
    pub p: u32,
}

impl LedgerConfig {
    pub fn new(id: impl Into<String>, s: f64, kappa: f64, p: u32) -> Result<Self> {
        if !(s >= 0.0 && kappa >= 0.0 && s.is_finite() && kappa.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "ledger derivatives s = {s}, kappa = {kappa} must be finite and non-negative"
            )));
        }
        if p < 2 || !p.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "ledger exponent p = {p} must be an even integer >= 2"
            )));
        }
        Ok(LedgerConfig {
            id: id.into(),
            s,
            kappa,
            p,
        })
    }

    /// `L²` level: `s = γ`, `κ = 0`, `p = 2`, with `γ = β/2 − 2ρ`.
    pub fn l2_level(alpha: f64, rho: f64) -> Result<Self> {
        let gamma = super::exponents::gamma(1.0 - alpha, rho);
        Self::new("l2", gamma, 0.0, 2)
    }

    /// `L²` level with the derivative moved to the temperature (`s = 0`,
    /// `κ = γ`), matching the functional `‖Λ^γΘ‖² + ‖F‖²`.
    pub fn l2_level_swapped(alpha: f64, rho: f64) -> Result<Self> {
        let gamma = super::exponents::gamma(1.0 - alpha, rho);
        Self::new("l2-swapped", 0.0, gamma, 2)
    }

    /// `L⁴` level: `κ = α/2`, `s = 3β/2`, `p = 4`.
    pub fn l4_level(alpha: f64) -> Result<Self> {
        Self::new("l4", 1.5 * (1.0 - alpha), alpha / 2.0, 4)
    }

    /// `L⁴` level with `s` and `κ` exchanged, matching the stated growth of
    /// `‖Λ^{3β/2}θ‖` and `‖Λ^{α/2}f‖`.
    pub fn l4_level_swapped(alpha: f64) -> Result<Self> {
        Self::new("l4-swapped", alpha / 2.0, 1.5 * (1.0 - alpha), 4)
    }

    /// `L⁶` level: `p = 6`, `s = (1+β)/2`, `κ = 5β/2`.
    pub fn l6_level(alpha: f64) -> Result<Self> {
        let beta = 1.0 - alpha;
        Self::new("l6", (1.0 + beta) / 2.0, 2.5 * beta, 6)
    }

    /// The three levels in their literal form.
    pub fn levels(alpha: f64, rho: f64) -> Result<Vec<Self>> {
        Ok(vec![Self::l2_level(alpha, rho)?, Self::l4_level(alpha)?, Self::l6_level(alpha)?])
    }

    /// The literal levels followed by the two exchanged readings.
    pub fn all_levels(alpha: f64, rho: f64) -> Result<Vec<Self>> {
        let mut out = Self::levels(alpha, rho)?;
        out.push(Self::l2_level_swapped(alpha, rho)?);
        out.push(Self::l4_level_swapped(alpha)?);
        Ok(out)
    }
}

/// Right-hand-side contributions, each with the sign it carries in the
/// time derivative of its functional.
///
/// `i1..i4` belong to `½‖Λ^sF‖²`, `i5` to `½‖Λ^κΘ‖²`, `k0..k3` to
/// `(1/p)‖F‖_{L^p}^p`. `k0` is the transport pairing `⟨P(U·∇F), F^{p−1}⟩`,
/// which vanishes for the continuum equation but not for the truncated one
/// once `p > 2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Terms {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    pub i5: f64,
    pub k0: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
}

impl Terms {
    pub const NAMES: [&'static str; 9] = ["I1", "I2", "I3", "I4", "I5", "K0", "K1", "K2", "K3"];

    pub fn values(&self) -> [f64; 9] {
        [self.i1, self.i2, self.i3, self.i4, self.i5, self.k0, self.k1, self.k2, self.k3]
    }

    fn abs_sum(xs: &[f64]) -> f64 {
        xs.iter().map(|x| x.abs()).sum()
    }

    /// `Σ|·|` per functional piece: `(Λ^sF, Λ^κΘ, L^p)`.
    pub fn bounds(&self) -> [f64; 3] {
        [
            Self::abs_sum(&[self.i1, self.i2, self.i3, self.i4]),
            self.i5.abs(),
            Self::abs_sum(&[self.k0, self.k1, self.k2, self.k3]),
        ]
    }

    /// Signed sums per functional piece.
    pub fn signed_sums(&self) -> [f64; 3] {
        [
            self.i1 + self.i2 + self.i3 + self.i4,
            self.i5,
            self.k0 + self.k1 + self.k2 + self.k3,
        ]
    }
}

/// Every quantity of the three energy relations at one time.
#[derive(Clone, Debug)]
pub struct EnergyTerms {
    pub time: f64,
    /// `½‖Λ^sF‖², ½‖Λ^κΘ‖², (1/p)‖F‖_{L^p}^p`.
    pub functionals: [f64; 3],
    /// `ε₀^{α−β}‖Λ^{s+α/2}F‖², ‖Λ^{κ+β/2}Θ‖², ε₀^{α−β}∫F^{p−1}Λ^αF`.
    pub dissipation: [f64; 3],
    pub signed: Terms,
    /// Same terms with the velocity restricted to `U_F`; the velocity-free
    /// terms `i2` and `k1` are zero in both splits.
    pub split_f: Terms,
    /// Same terms with the velocity restricted to `U_Θ`.
    pub split_theta: Terms,
}

impl EnergyTerms {
    /// `Σ` of the three functionals.
    pub fn functional(&self) -> f64 {
        self.functionals.iter().sum()
    }

    /// Magnitudes keyed by name, including the split variants.
    pub fn named_magnitudes(&self) -> Vec<(String, f64)> {
        let mut out = Vec::with_capacity(27);
        for (name, v) in Terms::NAMES.iter().zip(self.signed.values()) {
            out.push((name.to_string(), v.abs()));
        }
        for (name, v) in Terms::NAMES.iter().zip(self.split_f.values()) {
            out.push((format!("{name}_f"), v.abs()));
        }
        for (name, v) in Terms::NAMES.iter().zip(self.split_theta.values()) {
            out.push((format!("{name}_theta"), v.abs()));
        }
        out
    }
}

fn power_weights(grid: &Grid, exponent: f64) -> Vec<f64> {
    grid.moduli()
        .iter()
        .map(|&m| if m == 0.0 { if exponent == 0.0 { 1.0 } else { 0.0 } } else { m.powf(exponent) })
        .collect()
}

/// `L² Σ w Re(a conj b)`.
fn weighted_dot(a: &SpectralField, b: &SpectralField, w: &[f64]) -> f64 {
    let s: f64 = a
        .coeffs()
        .iter()
        .zip(b.coeffs())
        .zip(w)
        .map(|((x, y), w)| w * (x.re * y.re + x.im * y.im))
        .sum();
    s * a.grid().length().powi(2)
}

struct ConfigTables {
    config: LedgerConfig,
    w_s: Vec<f64>,
    w_kappa: Vec<f64>,
    w_s_diss: Vec<f64>,
    w_kappa_diss: Vec<f64>,
}

/// Evaluates the energy relations of one model for a fixed list of
/// configurations.
pub struct EnergyEvaluator {
    model: Model,
    lam_alpha: SymbolTable,
    configs: Vec<ConfigTables>,
}

impl EnergyEvaluator {
    pub fn new(grid: &Arc<Grid>, params: ModelParams, configs: &[LedgerConfig]) -> Result<Self> {
        let model = Model::new(grid, params, Variable::F)?;
        let (a, b) = (params.alpha(), params.beta());
        let configs = configs
            .iter()
            .map(|c| ConfigTables {
                config: c.clone(),
                w_s: power_weights(grid, 2.0 * c.s),
                w_kappa: power_weights(grid, 2.0 * c.kappa),
                w_s_diss: power_weights(grid, 2.0 * c.s + a),
                w_kappa_diss: power_weights(grid, 2.0 * c.kappa + b),
            })
            .collect();
        Ok(EnergyEvaluator {
            lam_alpha: SymbolTable::new(grid, &MultiplierSpec::lambda(a))?,
            model,
            configs,
        })
    }

    pub fn for_state(state: &SimState, configs: &[LedgerConfig]) -> Result<Self> {
        require_f(state)?;
        Self::new(state.grid(), state.params, configs)
    }

    pub fn configs(&self) -> impl Iterator<Item = &LedgerConfig> {
        self.configs.iter().map(|c| &c.config)
    }

    fn pieces(&self, u: &VectorField, state: &SimState) -> FTerms {
        self.model.f_terms(u, &state.primary, &state.theta)
    }

    /// Terms for every configuration at `state`, in configuration order.
    pub fn evaluate(&self, state: &SimState) -> Result<Vec<EnergyTerms>> {
        require_f(state)?;
        if !state.grid().same_as(self.model.grid()) {
            return Err(Error::GridMismatch);
        }
        if state.params != *self.model.params() {
            return Err(Error::InvalidParameter("state parameters differ from the evaluator's".into()));
        }
        let c = self.model.coefficients();
        let (f, theta) = (&state.primary, &state.theta);
        let (uf, ut) = self.model.velocity_parts(f, theta);
        let u = uf.lincomb(1.0, &ut, 1.0);
        let full = self.pieces(&u, state);
        let part_f = self.pieces(&uf, state);
        let part_t = self.pieces(&ut, state);
        let source = self.model.source(theta);
        let lam_f = self.lam_alpha.apply(f);
        let grid = state.grid();
        let n = grid.n();

        let mut out = Vec::with_capacity(self.configs.len());
        for ct in &self.configs {
            let p = ct.config.p as usize;
            let m = p * n / 2;
            let weight = (grid.length() / m as f64).powi(2);
            let f_m = f.resample(m);
            let fp1: Vec<f64> = f_m.iter().map(|v| v.powi(p as i32 - 1)).collect();
            // exact for band-limited X: the product has degree below m
            let pair = |x: &SpectralField| -> f64 {
                x.resample(m).iter().zip(&fp1).map(|(a, b)| a * b).sum::<f64>() * weight
            };
            let lp = f_m.iter().zip(&fp1).map(|(a, b)| a * b).sum::<f64>() * weight / p as f64;

            let terms = |pc: &FTerms, with_free: bool| -> Terms {
                let free = if with_free { 1.0 } else { 0.0 };
                Terms {
                    i1: -c.advection * weighted_dot(&pc.adv_f, f, &ct.w_s),
                    i2: free * c.source * weighted_dot(&source, f, &ct.w_s),
                    i3: c.riesz * weighted_dot(&pc.comm_riesz, f, &ct.w_s),
                    i4: c.lower * weighted_dot(&pc.comm_lower, f, &ct.w_s),
                    i5: -c.advection * weighted_dot(&pc.adv_theta, theta, &ct.w_kappa),
                    k0: -c.advection * pair(&pc.adv_f),
                    k1: free * c.source * pair(&source),
                    k2: c.riesz * pair(&pc.comm_riesz),
                    k3: c.lower * pair(&pc.comm_lower),
                }
            };
            out.push(EnergyTerms {
                time: state.time,
                functionals: [
                    0.5 * weighted_dot(f, f, &ct.w_s),
                    0.5 * weighted_dot(theta, theta, &ct.w_kappa),
                    lp,
                ],
                dissipation: [
                    c.dissipation * weighted_dot(f, f, &ct.w_s_diss),
                    weighted_dot(theta, theta, &ct.w_kappa_diss),
                    c.dissipation * pair(&lam_f),
                ],
                signed: terms(&full, true),
                split_f: terms(&part_f, false),
                split_theta: terms(&part_t, false),
            });
        }
        Ok(out)
    }
}

fn require_f(state: &SimState) -> Result<()> {
    if state.variable != Variable::F {
        return Err(Error::InvalidParameter(format!(
            "energy terms need an f state, got `{}`",
            state.variable.name()
        )));
    }
    Ok(())
}

/// Every term of the three energy relations for one `(s, κ, p)`.
pub fn energy_terms(state: &SimState, s: f64, kappa: f64, p: u32) -> Result<EnergyTerms> {
    let config = LedgerConfig::new("adhoc", s, kappa, p)?;
    let eval = EnergyEvaluator::for_state(state, std::slice::from_ref(&config))?;
    Ok(eval.evaluate(state)?.remove(0))
}
