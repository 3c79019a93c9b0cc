use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;

use crate::spectral::{derivative, Axis, Grid, MultiplierSpec, SpectralField, SymbolTable, VectorField};
use crate::{Error, Result};

/// Dyadic shells `jlo..=jhi`; shell `j` holds `2^j ≤ |ξ| < 2^{j+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Band {
    pub jlo: i32,
    pub jhi: i32,
}

impl Band {
    pub fn new(jlo: i32, jhi: i32) -> Self {
        Band { jlo, jhi }
    }

    pub fn shell(j: i32) -> Self {
        Band { jlo: j, jhi: j }
    }

    fn contains(&self, r: f64) -> bool {
        r >= 2f64.powi(self.jlo) && r < 2f64.powi(self.jhi + 1)
    }
}

/// Lowest shell that contains a lattice wavenumber.
pub fn bottom_shell(grid: &Grid) -> i32 {
    grid.kappa0().log2().floor() as i32
}

/// Highest shell lying entirely inside the resolved square.
pub fn top_shell(grid: &Grid) -> i32 {
    (grid.kappa0() * (grid.n() / 2) as f64).log2().floor() as i32 - 1
}

/// Mean-free real field with Gaussian coefficients of size `|ξ|^{−decay}`
/// on the modes of `band`, normalised to unit coefficient norm. Nyquist
/// lines are never populated.
pub fn band_field(grid: &Arc<Grid>, rng: &mut impl Rng, band: Band, decay: f64) -> Result<SpectralField> {
    if band.jlo > band.jhi {
        return Err(Error::InvalidParameter(format!(
            "empty band: jlo = {} exceeds jhi = {}",
            band.jlo, band.jhi
        )));
    }
    let n = grid.n();
    let half = (n / 2) as i64;
    let mut coeffs = vec![Complex64::default(); grid.len()];
    let mut populated = false;
    for i2 in 0..n {
        for i1 in 0..n {
            let (k1, k2) = (grid.lattice(i1), grid.lattice(i2));
            let upper = k2 > 0 || (k2 == 0 && k1 > 0);
            if !upper || k1 == -half || k2 == -half {
                continue;
            }
            let r = grid.modulus(i2 * n + i1);
            if !band.contains(r) {
                continue;
            }
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let c = Complex64::new(re, im) * r.powf(-decay);
            coeffs[i2 * n + i1] = c;
            coeffs[grid.mode_index(-k1, -k2).expect("mirror mode exists")] = c.conj();
            populated = true;
        }
    }
    if !populated {
        return Err(Error::InvalidParameter(format!(
            "band {}..={} holds no resolved wavenumber",
            band.jlo, band.jhi
        )));
    }
    let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    coeffs.iter_mut().for_each(|c| *c /= norm);
    SpectralField::from_coeffs(grid, coeffs, true)
}

/// `V = ∇⊥Λ^{−1}ψ = (−∂₂Λ^{−1}ψ, ∂₁Λ^{−1}ψ)`.
pub fn perp_gradient_of(psi: &SpectralField) -> VectorField {
    let inv = SymbolTable::new(psi.grid(), &MultiplierSpec::lambda(-1.0))
        .expect("annihilating rule is valid")
        .apply(psi);
    VectorField::new(derivative(&inv, Axis::X2).scale(-1.0), derivative(&inv, Axis::X1))
}

/// Divergence-free field `∇⊥Λ^{−1}ψ` for a random `ψ` supported in `band`
/// with amplitude `|ξ|^{−decay}`; identical for identical seeds.
pub fn random_divfree_field(grid: &Arc<Grid>, seed: u64, band: Band, decay: f64) -> Result<VectorField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(perp_gradient_of(&band_field(grid, &mut rng, band, decay)?))
}

/// How `(V, φ)` are drawn for a trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ensemble {
    /// Rotates through independent, low-high, high-high and dual-aligned
    /// draws by trial index.
    Mixed,
    /// Random bands and decays for each field.
    Independent,
    /// `V` in the two lowest shells, `φ` in one of the two highest.
    LowHigh,
    /// `V` and `φ` in the same high shell.
    HighHigh,
    /// Independent draws with the test function aligned to the commutator.
    DualAligned,
    /// Constant `V`, random `φ`.
    ConstantVelocity,
}

impl Ensemble {
    pub fn name(self) -> &'static str {
        match self {
            Ensemble::Mixed => "mixed",
            Ensemble::Independent => "independent",
            Ensemble::LowHigh => "low-high",
            Ensemble::HighHigh => "high-high",
            Ensemble::DualAligned => "dual-aligned",
            Ensemble::ConstantVelocity => "constant-velocity",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [
            Ensemble::Mixed,
            Ensemble::Independent,
            Ensemble::LowHigh,
            Ensemble::HighHigh,
            Ensemble::DualAligned,
            Ensemble::ConstantVelocity,
        ]
        .into_iter()
        .find(|e| e.name() == name)
    }

    /// Concrete draw kind for a trial.
    pub fn for_trial(self, trial: usize) -> Ensemble {
        match self {
            Ensemble::Mixed => [
                Ensemble::Independent,
                Ensemble::LowHigh,
                Ensemble::HighHigh,
                Ensemble::DualAligned,
            ][trial % 4],
            e => e,
        }
    }
}

/// One trial's fields. `aux` is the third function of trilinear forms; it
/// is `None` when the caller must align it with the commutator.
pub struct Draw {
    pub velocity: VectorField,
    pub phi: SpectralField,
    pub aux: Option<SpectralField>,
}

fn random_band(rng: &mut impl Rng, lo: i32, hi: i32) -> Band {
    let a = rng.random_range(lo..=hi);
    let b = rng.random_range(a..=hi);
    Band::new(a, b)
}

/// Draws the fields of one trial on `grid`.
pub fn draw(grid: &Arc<Grid>, kind: Ensemble, rng: &mut ChaCha8Rng) -> Result<Draw> {
    let (lo, hi) = (bottom_shell(grid), top_shell(grid));
    if hi < lo + 1 {
        return Err(Error::InvalidGrid(format!("grid n = {} is too coarse for ensembles", grid.n())));
    }
    let random_field = |rng: &mut ChaCha8Rng| -> Result<SpectralField> {
        let b = random_band(rng, lo, hi);
        let d = rng.random_range(0.0..2.0);
        band_field(grid, rng, b, d)
    };
    let sub = rng;
    let (velocity, phi) = match kind {
        Ensemble::Independent | Ensemble::DualAligned | Ensemble::Mixed => {
            let v = perp_gradient_of(&random_field(sub)?);
            (v, random_field(sub)?)
        }
        Ensemble::LowHigh => {
            let v = perp_gradient_of(&band_field(grid, sub, Band::new(lo, lo + 1), 0.0)?);
            let j = sub.random_range(hi - 1..=hi);
            (v, band_field(grid, sub, Band::shell(j), 0.0)?)
        }
        Ensemble::HighHigh => {
            let j = sub.random_range(hi - 1..=hi);
            let v = perp_gradient_of(&band_field(grid, sub, Band::shell(j), 0.0)?);
            (v, band_field(grid, sub, Band::shell(j), 0.0)?)
        }
        Ensemble::ConstantVelocity => {
            let (a, b): (f64, f64) = (sub.sample(StandardNormal), sub.sample(StandardNormal));
            let v = VectorField::constant(grid, a, b);
            let bp = random_band(sub, lo, hi);
            (v, band_field(grid, sub, bp, 1.0)?)
        }
    };
    let aux = match kind {
        Ensemble::DualAligned => None,
        _ => Some(random_field(sub)?),
    };
    Ok(Draw { velocity, phi, aux })
}
