//! Initial data: seeded random fields with power-law spectra and
//! deterministic Gaussian bumps.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::params::ModelParams;
use super::system::{SimState, Variable};
use crate::spectral::{Complex64, Grid, SpectralField};
use crate::{Error, Result};

/// Random spectrum `|c_k| ∝ |k|^{−decay}` on `0 < |k| ≤ cutoff`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spectrum {
    /// Power-law exponent of the coefficient envelope.
    pub decay: f64,
    /// Root-mean-square value of the field over the box.
    pub amplitude: f64,
    /// Largest lattice radius carrying energy.
    pub cutoff: f64,
}

impl Spectrum {
    pub fn new(decay: f64, amplitude: f64, cutoff: f64) -> Self {
        Spectrum {
            decay,
            amplitude,
            cutoff,
        }
    }
}

/// Mean-free random real field; identical for identical seeds.
pub fn random_field(grid: &Arc<Grid>, seed: u64, spec: Spectrum) -> Result<SpectralField> {
    if !(spec.cutoff >= 1.0 && spec.amplitude >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "spectrum needs cutoff ≥ 1 and amplitude ≥ 0 (got {}, {})",
            spec.cutoff, spec.amplitude
        )));
    }
    let n = grid.n();
    let half = (n / 2) as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = vec![Complex64::default(); grid.len()];
    for i2 in 0..n {
        for i1 in 0..n {
            let (k1, k2) = (grid.lattice(i1), grid.lattice(i2));
            // one representative per ±k pair, Nyquist lines left empty
            let upper = k2 > 0 || (k2 == 0 && k1 > 0);
            if !upper || k1 == -half || k2 == -half {
                continue;
            }
            let r = ((k1 * k1 + k2 * k2) as f64).sqrt();
            if r > spec.cutoff {
                continue;
            }
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            let c = Complex64::new(re, im) * r.powf(-spec.decay);
            coeffs[i2 * n + i1] = c;
            coeffs[grid.mode_index(-k1, -k2).expect("mirror mode exists")] = c.conj();
        }
    }
    let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        coeffs.iter_mut().for_each(|c| *c *= spec.amplitude / norm);
    }
    SpectralField::from_coeffs(grid, coeffs, true)
}

/// Random vorticity and temperature, converted to `variable`.
pub fn random_state(
    grid: &Arc<Grid>,
    params: ModelParams,
    variable: Variable,
    seed: u64,
    theta_spec: Spectrum,
    omega_spec: Spectrum,
) -> Result<SimState> {
    let theta = random_field(grid, seed.wrapping_mul(2), theta_spec)?;
    let omega = random_field(grid, seed.wrapping_mul(2).wrapping_add(1), omega_spec)?;
    from_vorticity(params, variable, theta, omega)
}

/// Periodic Gaussian of width `sigma` centred at `(c1, c2)`, mean removed.
pub fn gaussian_bump(grid: &Arc<Grid>, amplitude: f64, centre: (f64, f64), sigma: f64) -> SpectralField {
    let l = grid.length();
    let wrap = |d: f64| d - l * (d / l).round();
    let f = SpectralField::from_fn(grid, |x, y| {
        let (dx, dy) = (wrap(x - centre.0), wrap(y - centre.1));
        amplitude * (-(dx * dx + dy * dy) / (2.0 * sigma * sigma)).exp()
    });
    f.without_mean()
}

/// Warm bubble with a counter-rotating vortex pair beside it.
pub fn gaussian_pair(
    grid: &Arc<Grid>,
    params: ModelParams,
    variable: Variable,
    theta_amplitude: f64,
    omega_amplitude: f64,
) -> Result<SimState> {
    let l = grid.length();
    let sigma = l / 10.0;
    let theta = gaussian_bump(grid, theta_amplitude, (0.5 * l, 0.4 * l), sigma);
    let plus = gaussian_bump(grid, omega_amplitude, (0.35 * l, 0.6 * l), sigma);
    let minus = gaussian_bump(grid, omega_amplitude, (0.65 * l, 0.6 * l), sigma);
    from_vorticity(params, variable, theta, &plus - &minus)
}

/// The zero state.
pub fn zero_state(grid: &Arc<Grid>, params: ModelParams, variable: Variable) -> Result<SimState> {
    SimState::new(0.0, SpectralField::zeros(grid), SpectralField::zeros(grid), variable, params)
}

fn from_vorticity(params: ModelParams, variable: Variable, theta: SpectralField, omega: SpectralField) -> Result<SimState> {
    let unscaled = ModelParams::new(params.alpha())?.with_dissipation(params.nu(), params.kappa())?;
    let state = SimState::new(0.0, theta, omega, Variable::Omega, unscaled)?.to_variable(variable)?;
    if params.eps0() == 1.0 {
        Ok(state)
    } else {
        // the sampled pair is read directly as rescaled (F, Θ)
        SimState::new(0.0, state.theta, state.primary, variable, params)
    }
}
