//! Run configuration: a TOML file whose sections mirror the library layers.
//!
//! ```toml
//! seed = 7
//!
//! [model]
//! alpha = 0.75
//! n = 64
//! formulation = "f"      # omega | g | f | scaled
//! t_final = 0.5
//! cfl = 0.4              # or a fixed `dt`
//!
//! [initial]
//! kind = "random"        # random | gaussian | zero
//!
//! [diagnostics]
//! levels = ["l2", "l4", "l6"]
//!
//! [estimates]
//! trials = 200
//! grids = [64, 128]
//! [[estimates.specs]]
//! id = "eq20"
//! params = { q = 4.0, r = 4.0 }
//!
//! [output]
//! dir = "out"
//! stride = 5
//! ```
//!
//! Every field has a default. [`RunConfig::plan`] checks all of it, lemma
//! hypotheses included, before anything is computed.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use fbl_core::commutator_lab::{canary_registry, default_registry, Ensemble, InequalityId, InequalitySpec};
use fbl_core::diagnostics::{LedgerConfig, DEFAULT_RHO};
use fbl_core::model::{gaussian_pair, random_state, zero_state, ModelParams, SimState, Spectrum, Variable};
use fbl_core::spectral::{make_grid, Grid};
use serde::{Deserialize, Serialize};

use crate::error::{RunError, RunResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Simulate,
    Ledger,
    Estimate,
    Selftest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formulation {
    Omega,
    G,
    F,
    /// `(F, Θ)` with the configured `eps0`.
    Scaled,
}

impl Formulation {
    pub fn variable(self) -> Variable {
        match self {
            Formulation::Omega => Variable::Omega,
            Formulation::G => Variable::G,
            Formulation::F | Formulation::Scaled => Variable::F,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub alpha: f64,
    pub nu: f64,
    pub kappa: f64,
    pub eps0: f64,
    pub n: usize,
    pub length: f64,
    pub formulation: Formulation,
    pub t_final: f64,
    /// Fixed step; when absent the step follows from `cfl`.
    pub dt: Option<f64>,
    pub cfl: f64,
}

impl Default for ModelSection {
    fn default() -> Self {
        ModelSection {
            alpha: 0.75,
            nu: 1.0,
            kappa: 1.0,
            eps0: 1.0,
            n: 64,
            length: 2.0 * std::f64::consts::PI,
            formulation: Formulation::F,
            t_final: 0.5,
            dt: None,
            cfl: fbl_core::model::DEFAULT_CFL,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialKind {
    Random,
    Gaussian,
    Zero,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialSection {
    pub kind: InitialKind,
    pub theta_amplitude: f64,
    pub omega_amplitude: f64,
    /// Power-law exponent of random spectra.
    pub decay: f64,
    /// Largest lattice radius of random spectra.
    pub cutoff: f64,
}

impl Default for InitialSection {
    fn default() -> Self {
        InitialSection {
            kind: InitialKind::Random,
            theta_amplitude: 1.0,
            omega_amplitude: 1.0,
            decay: 2.0,
            cutoff: 8.0,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelEntry {
    pub id: String,
    pub s: f64,
    pub kappa: f64,
    pub p: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnosticsSection {
    /// Named presets: `l2`, `l2-swapped`, `l4`, `l4-swapped`, `l6`.
    pub levels: Vec<String>,
    pub rho: f64,
    /// Extra `(s, κ, p)` configurations.
    pub custom: Vec<LevelEntry>,
}

impl Default for DiagnosticsSection {
    fn default() -> Self {
        DiagnosticsSection {
            levels: vec!["l2".into(), "l4".into(), "l6".into()],
            rho: DEFAULT_RHO,
            custom: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecEntry {
    pub id: String,
    pub label: Option<String>,
    pub ensemble: Option<String>,
    /// Marks a deliberate violation of the hypotheses; skips validation.
    #[serde(default)]
    pub canary: bool,
    /// Only for `eq200`: also measure the lower-order twin.
    #[serde(default)]
    pub with_lower: bool,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimatesSection {
    pub trials: usize,
    pub grids: Vec<usize>,
    /// Empty means the whole registry.
    pub specs: Vec<SpecEntry>,
    /// Adds the registry canaries when the whole registry runs.
    pub canaries: bool,
}

impl Default for EstimatesSection {
    fn default() -> Self {
        EstimatesSection {
            trials: 200,
            grids: vec![64, 128],
            specs: Vec::new(),
            canaries: true,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
    /// Steps between stored states.
    pub stride: usize,
    pub snapshots: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: PathBuf::from("fbl-out"),
            stride: 2,
            snapshots: true,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Option<Mode>,
    pub seed: u64,
    pub model: ModelSection,
    pub initial: InitialSection,
    pub diagnostics: DiagnosticsSection,
    pub estimates: EstimatesSection,
    pub output: OutputSection,
}

/// Command-line overrides.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub grids: Option<Vec<usize>>,
}

/// Parses `"64,128"`.
pub fn parse_grids(text: &str) -> RunResult<Vec<usize>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| RunError::Validation(format!("grid list `{text}` is not a comma-separated list of sizes")))
        })
        .collect()
}

impl RunConfig {
    pub fn from_toml(text: &str) -> RunResult<Self> {
        toml::from_str(text).map_err(|e| RunError::Validation(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> RunResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunError::Validation(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if let Some(out) = &o.out {
            self.output.dir = out.clone();
        }
        if let Some(grids) = &o.grids {
            self.estimates.grids = grids.clone();
        }
    }

    /// Validates everything `mode` needs.
    pub fn plan(&self, mode: Mode) -> RunResult<Plan> {
        if let Some(m) = self.mode {
            if m != mode {
                return Err(RunError::Validation(format!(
                    "config is for mode `{}` but `{}` was requested",
                    mode_name(m),
                    mode_name(mode)
                )));
            }
        }
        let sim = match mode {
            Mode::Simulate | Mode::Ledger => Some(self.sim_plan()?),
            _ => None,
        };
        let levels = match mode {
            Mode::Ledger => self.levels()?,
            _ => Vec::new(),
        };
        let estimates = match mode {
            Mode::Estimate => Some(self.estimate_plan()?),
            _ => None,
        };
        Ok(Plan {
            seed: self.seed,
            out: self.output.dir.clone(),
            sim,
            levels,
            estimates,
        })
    }

    fn sim_plan(&self) -> RunResult<SimPlan> {
        let m = &self.model;
        let mut params = ModelParams::new(m.alpha)?.with_dissipation(m.nu, m.kappa)?;
        match m.formulation {
            Formulation::Scaled => params = params.with_eps0(m.eps0)?,
            _ if m.eps0 != 1.0 => {
                return Err(RunError::Validation(
                    "eps0 applies only to the scaled formulation".into(),
                ))
            }
            _ => {}
        }
        if matches!(m.formulation, Formulation::G | Formulation::F | Formulation::Scaled) && !params.is_canonical() {
            return Err(RunError::Validation(format!(
                "the {:?} formulation requires nu = kappa = 1",
                m.formulation
            )));
        }
        let grid = make_grid(m.n, m.length)?;
        if !(m.t_final >= 0.0 && m.t_final.is_finite()) {
            return Err(RunError::Validation(format!("t_final = {} must be finite and non-negative", m.t_final)));
        }
        if let Some(dt) = m.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(RunError::Validation(format!("dt = {dt} must be positive")));
            }
        }
        if !(m.cfl > 0.0 && m.cfl.is_finite()) {
            return Err(RunError::Validation(format!("cfl = {} must be positive", m.cfl)));
        }
        if self.output.stride == 0 {
            return Err(RunError::Validation("output stride must be at least 1".into()));
        }
        let i = &self.initial;
        if !(i.cutoff >= 1.0 && i.theta_amplitude.is_finite() && i.omega_amplitude.is_finite() && i.decay.is_finite())
        {
            return Err(RunError::Validation("initial spectrum needs finite amplitudes and cutoff ≥ 1".into()));
        }
        Ok(SimPlan {
            grid,
            params,
            variable: m.formulation.variable(),
            t_final: m.t_final,
            dt: m.dt,
            cfl: m.cfl,
            stride: self.output.stride,
            snapshots: self.output.snapshots,
            initial: i.clone(),
            seed: self.seed,
        })
    }

    fn levels(&self) -> RunResult<Vec<LedgerConfig>> {
        let d = &self.diagnostics;
        let alpha = self.model.alpha;
        let mut out = Vec::new();
        for name in &d.levels {
            let c = match name.as_str() {
                "l2" => LedgerConfig::l2_level(alpha, d.rho)?,
                "l2-swapped" => LedgerConfig::l2_level_swapped(alpha, d.rho)?,
                "l4" => LedgerConfig::l4_level(alpha)?,
                "l4-swapped" => LedgerConfig::l4_level_swapped(alpha)?,
                "l6" => LedgerConfig::l6_level(alpha)?,
                other => {
                    return Err(RunError::Validation(format!(
                        "unknown ledger level `{other}` (expected l2, l2-swapped, l4, l4-swapped, l6)"
                    )))
                }
            };
            out.push(c);
        }
        for c in &d.custom {
            out.push(LedgerConfig::new(c.id.clone(), c.s, c.kappa, c.p)?);
        }
        if out.is_empty() {
            return Err(RunError::Validation("the ledger needs at least one configuration".into()));
        }
        let mut ids: Vec<&str> = out.iter().map(|c| c.id.as_str()).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(RunError::Validation("ledger configuration ids must be distinct".into()));
        }
        Ok(out)
    }

    fn estimate_plan(&self) -> RunResult<EstimatePlan> {
        let e = &self.estimates;
        if e.grids.len() < 2 {
            return Err(RunError::Validation("estimates need at least two grids".into()));
        }
        for &n in &e.grids {
            make_grid(n, 2.0 * std::f64::consts::PI)?;
        }
        if e.trials == 0 {
            return Err(RunError::Validation("estimates need at least one trial".into()));
        }
        let mut specs = Vec::new();
        if e.specs.is_empty() {
            for spec in default_registry() {
                let twin = spec.lower_order_twin();
                specs.push(spec);
                specs.extend(twin);
            }
            if e.canaries {
                specs.extend(canary_registry());
            }
        }
        for entry in &e.specs {
            let id = InequalityId::from_name(&entry.id)
                .ok_or_else(|| RunError::Validation(format!("unknown inequality `{}`", entry.id)))?;
            let params = fbl_core::commutator_lab::SpecParams::from_named(id, &entry.params)?;
            let mut spec = if entry.canary {
                let label = entry.label.clone().unwrap_or_else(|| format!("{}-canary", id.name()));
                InequalitySpec::canary(params, label)?
            } else {
                InequalitySpec::new(params)?
            };
            if let Some(label) = &entry.label {
                spec = spec.with_label(label.clone());
            }
            if let Some(name) = &entry.ensemble {
                let ens = Ensemble::from_name(name)
                    .ok_or_else(|| RunError::Validation(format!("unknown ensemble `{name}`")))?;
                spec = spec.with_ensemble(ens);
            }
            let twin = if entry.with_lower { spec.lower_order_twin() } else { None };
            if entry.with_lower && twin.is_none() {
                return Err(RunError::Validation(format!("{} has no lower-order twin", id.name())));
            }
            specs.push(spec);
            specs.extend(twin);
        }
        Ok(EstimatePlan {
            specs,
            trials: e.trials,
            grids: e.grids.clone(),
        })
    }
}

pub fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Simulate => "simulate",
        Mode::Ledger => "ledger",
        Mode::Estimate => "estimate",
        Mode::Selftest => "selftest",
    }
}

/// A validated run.
pub struct Plan {
    pub seed: u64,
    pub out: PathBuf,
    pub sim: Option<SimPlan>,
    pub levels: Vec<LedgerConfig>,
    pub estimates: Option<EstimatePlan>,
}

pub struct SimPlan {
    pub grid: Arc<Grid>,
    pub params: ModelParams,
    pub variable: Variable,
    pub t_final: f64,
    pub dt: Option<f64>,
    pub cfl: f64,
    pub stride: usize,
    pub snapshots: bool,
    pub initial: InitialSection,
    pub seed: u64,
}

impl SimPlan {
    pub fn initial_state(&self) -> RunResult<SimState> {
        let i = &self.initial;
        let state = match i.kind {
            InitialKind::Zero => zero_state(&self.grid, self.params, self.variable)?,
            InitialKind::Gaussian => {
                gaussian_pair(&self.grid, self.params, self.variable, i.theta_amplitude, i.omega_amplitude)?
            }
            InitialKind::Random => random_state(
                &self.grid,
                self.params,
                self.variable,
                self.seed,
                Spectrum::new(i.decay, i.theta_amplitude, i.cutoff),
                Spectrum::new(i.decay, i.omega_amplitude, i.cutoff),
            )?,
        };
        Ok(state)
    }
}

pub struct EstimatePlan {
    pub specs: Vec<InequalitySpec>,
    pub trials: usize,
    pub grids: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_plan_every_mode() {
        let c = RunConfig::default();
        for mode in [Mode::Simulate, Mode::Ledger, Mode::Estimate, Mode::Selftest] {
            assert!(c.plan(mode).is_ok(), "{mode:?}");
        }
        let p = c.plan(Mode::Estimate).unwrap().estimates.unwrap();
        // ten registered specs, one lower-order twin, one canary
        assert_eq!(p.specs.len(), 12);
    }

    #[test]
    fn violated_hypotheses_are_named() {
        let c = RunConfig::from_toml("[[estimates.specs]]\nid = \"eq20\"\nparams = { q = 2.0 }\n").unwrap();
        let err = c.plan(Mode::Estimate).err().unwrap();
        assert_eq!(err.to_string(), "eq20 requires 2<q<∞");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn unknown_keys_and_ids_are_rejected() {
        assert!(RunConfig::from_toml("[model]\nalfa = 0.7\n").is_err());
        let c = RunConfig::from_toml("[[estimates.specs]]\nid = \"eq99\"\n").unwrap();
        assert!(c.plan(Mode::Estimate).is_err());
        let c = RunConfig::from_toml("[diagnostics]\nlevels = [\"l3\"]\n").unwrap();
        assert!(c.plan(Mode::Ledger).is_err());
    }

    #[test]
    fn reduced_formulations_need_unit_dissipation() {
        let c = RunConfig::from_toml("[model]\nnu = 0.5\nformulation = \"f\"\n").unwrap();
        assert!(c.plan(Mode::Simulate).is_err());
        let c = RunConfig::from_toml("[model]\nnu = 0.5\nformulation = \"omega\"\n").unwrap();
        assert!(c.plan(Mode::Simulate).is_ok());
    }

    #[test]
    fn overrides_win() {
        let mut c = RunConfig::from_toml("seed = 3\n").unwrap();
        c.apply(&Overrides {
            seed: Some(9),
            out: Some("x".into()),
            grids: Some(parse_grids("32, 64").unwrap()),
        });
        assert_eq!((c.seed, c.estimates.grids.clone()), (9, vec![32, 64]));
        assert!(parse_grids("64;128").is_err());
    }
}
