use std::sync::Arc;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::commutator::{require_divergence_free, CommutatorOp};
use super::ensemble::{draw, Draw};
use super::registry::{InequalitySpec, RieszVariant, SpecParams};
use crate::littlewood_paley::maximal_of_samples;
use crate::spectral::{
    lp_of_samples, make_grid, Grid, MultiplierKind, MultiplierSpec, SpectralField, SymbolTable, VectorField,
};
use crate::{Error, Result};

/// Right-hand sides at or below this are treated as underflow.
pub const RHS_FLOOR: f64 = 1e-300;

/// Redraws allowed per trial before it is abandoned.
pub const MAX_RESAMPLES: usize = 10;

/// Growth factor of `c_hat` between consecutive grids still counted stable.
pub const STABLE_GROWTH: f64 = 2.0;

/// One evaluation of both sides.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub lhs: f64,
    pub rhs: f64,
}

impl Sample {
    pub fn is_degenerate(&self) -> bool {
        !(self.rhs.is_finite() && self.rhs > RHS_FLOOR && self.lhs.is_finite())
    }

    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }
}

fn lam(grid: &Arc<Grid>, s: f64) -> Result<SymbolTable> {
    SymbolTable::new(grid, &MultiplierSpec::lambda(s))
}

fn da(grid: &Grid) -> f64 {
    grid.dx() * grid.dx()
}

fn norm(f: &SpectralField, p: f64) -> Result<f64> {
    lp_of_samples(f.samples(), p, da(f.grid()))
}

/// `‖Λ^s f‖_{L^p}`.
fn lam_norm(f: &SpectralField, s: f64, p: f64) -> Result<f64> {
    norm(&lam(f.grid(), s)?.apply(f), p)
}

/// `‖Λ^s V‖_{L^p}` of the pointwise magnitude.
fn lam_norm_vector(v: &VectorField, s: f64, p: f64) -> Result<f64> {
    let t = lam(v.grid(), s)?;
    let w = v.map(|c| t.apply(c));
    lp_of_samples(&w.magnitude_samples(), p, da(v.grid()))
}

fn grad_norm(v: &VectorField, p: f64) -> Result<f64> {
    lp_of_samples(&v.gradient_magnitude_samples(), p, da(v.grid()))
}

fn pairing(a: &[f64], b: &[f64], da: f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * da
}

/// `sign(c)|c|^{p'−1}` with `1/p + 1/p' = 1`: the extremal test function
/// for `⟨c, ·⟩` in `L^p`.
fn dual_of(c: &[f64], p: f64) -> Vec<f64> {
    let e = if p.is_infinite() { 0.0 } else { 1.0 / (p - 1.0) };
    c.iter()
        .map(|&v| if v == 0.0 { 0.0 } else { v.signum() * v.abs().powf(e) })
        .collect()
}

fn commutator(grid: &Arc<Grid>, op: MultiplierSpec, v: &VectorField, phi: &SpectralField) -> Result<SpectralField> {
    CommutatorOp::new(grid, &op)?.apply(v, phi)
}

/// Evaluates `(LHS, RHS)` of `spec` on one draw. When the draw has no third
/// function, trilinear forms use `h = C` and pairings use the dual of `C`.
pub fn evaluate(spec: &InequalitySpec, d: &Draw) -> Result<Sample> {
    let grid = d.phi.grid().clone();
    let (v, phi) = (&d.velocity, &d.phi);
    require_divergence_free(v)?;
    let area = da(&grid);
    let trilinear = |c: &SpectralField| -> SpectralField { d.aux.clone().unwrap_or_else(|| c.clone()) };
    let sample = match spec.params {
        SpecParams::Aaa { s, s1, s2, s3, p1, p2, p3 } => {
            let c = commutator(&grid, MultiplierSpec::lambda(s), v, phi)?;
            let h = trilinear(&c);
            Sample {
                lhs: pairing(h.samples(), c.samples(), area).abs(),
                rhs: lam_norm(phi, s1, p1)? * lam_norm(&h, s2, p2)? * lam_norm_vector(v, s3, p3)?,
            }
        }
        SpecParams::Fazel5 { alpha, s1, s2, p1, p2, p3 } => {
            let c = commutator(&grid, MultiplierSpec::riesz(alpha), v, phi)?;
            let h = trilinear(&c);
            Sample {
                lhs: pairing(h.samples(), c.samples(), area).abs(),
                rhs: lam_norm(phi, s1, p1)? * lam_norm(&h, s2, p2)? * grad_norm(v, p3)?,
            }
        }
        SpecParams::Fazel6 { s, s2, s3, p1, p2, p3 } => {
            let c = commutator(&grid, MultiplierSpec::lambda(s), v, phi)?;
            let h = trilinear(&c);
            Sample {
                lhs: pairing(h.samples(), c.samples(), area).abs(),
                rhs: norm(phi, p1)? * lam_norm(&h, s2, p2)? * lam_norm_vector(v, s3, p3)?,
            }
        }
        SpecParams::Eq20 { s1, s2, a, p, q, r } => {
            let c = lam(&grid, -s1)?.apply(&commutator(&grid, MultiplierSpec::lambda(s2), v, phi)?);
            Sample {
                lhs: norm(&c, p)?,
                rhs: lam_norm_vector(v, a, q)? * lam_norm(phi, s2 - s1 + 1.0 - a, r)?,
            }
        }
        SpecParams::Eq25 { s1, s2, s3 } => {
            let t = lam(&grid, -s3)?;
            let w = v.map(|c| t.apply(c));
            let c = lam(&grid, -s1)?.apply(&commutator(&grid, MultiplierSpec::lambda(s2), &w, phi)?);
            Sample {
                lhs: c.l2(),
                rhs: lp_of_samples(&v.magnitude_samples(), f64::INFINITY, area)?
                    * lam(&grid, s2 - s1 + 1.0 - s3)?.apply(phi).l2(),
            }
        }
        SpecParams::F10 { s, p1, p2, p3 } | SpecParams::F20 { s, p1, p2, p3, .. } => {
            let c = commutator(&grid, MultiplierSpec::lambda(s), v, phi)?;
            let psi = match &d.aux {
                Some(f) => f.samples().to_vec(),
                None => dual_of(c.samples(), p3),
            };
            let velocity_factor = match spec.params {
                SpecParams::F20 { a, .. } => lam_norm_vector(v, a, p1)?,
                _ => grad_norm(v, p1)?,
            };
            let phi_order = match spec.params {
                SpecParams::F20 { a, .. } => s + 1.0 - a,
                _ => s,
            };
            Sample {
                lhs: pairing(c.samples(), &psi, area).abs(),
                rhs: velocity_factor * lam_norm(phi, phi_order, p2)? * lp_of_samples(&psi, p3, area)?,
            }
        }
        SpecParams::Eq200 { alpha, s, a, q, r, variant } => {
            let beta = 1.0 - alpha;
            let op = match variant {
                RieszVariant::Riesz => MultiplierSpec::riesz(alpha),
                RieszVariant::Lower => MultiplierSpec::composite(vec![
                    MultiplierKind::LambdaPow(beta - 2.0 * alpha),
                    MultiplierKind::Partial(crate::spectral::Axis::X1),
                ]),
            };
            let c = lam(&grid, s)?.apply(&commutator(&grid, op, v, phi)?);
            Sample {
                lhs: c.l2(),
                rhs: lam_norm_vector(v, a, q)? * lam_norm(phi, 1.0 + beta + s - a, r)?,
            }
        }
        SpecParams::Eq201 { s1, s2, a, p, q, r } => {
            let c = lam(&grid, s1)?.apply(&commutator(&grid, MultiplierSpec::lambda(s2), v, phi)?);
            Sample {
                lhs: norm(&c, p)?,
                rhs: lam_norm_vector(v, a, q)? * lam_norm(phi, 1.0 + s2 + s1 - a, r)?,
            }
        }
        SpecParams::G50 { k, p1, q1 } => pointwise_sample(k, p1, q1, v, phi)?,
    };
    Ok(sample)
}

/// `max_x |[Δ_k, V·∇]φ|(x) / (M[|∇V|^{q₁}]^{1/q₁} M[|φ|^{p₁}]^{1/p₁})(x)`,
/// returned as the two sides at the maximising point.
fn pointwise_sample(k: i32, p1: f64, q1: f64, v: &VectorField, phi: &SpectralField) -> Result<Sample> {
    let grid = phi.grid();
    if 2f64.powi(k - 1) >= grid.max_modulus() {
        return Err(Error::InvalidParameter(format!(
            "block {k} lies above the resolved wavenumbers of n = {}",
            grid.n()
        )));
    }
    let c = commutator(grid, MultiplierSpec::bump(k), v, phi)?;
    let n = grid.n();
    let powered = |s: &[f64], e: f64| -> Vec<f64> { s.iter().map(|x| x.abs().powf(e)).collect() };
    let mg = maximal_of_samples(&powered(&v.gradient_magnitude_samples(), q1), n);
    let mf = maximal_of_samples(&powered(phi.samples(), p1), n);
    let mut best = Sample { lhs: 0.0, rhs: 0.0 };
    let mut best_ratio = -1.0;
    for ((cx, g), f) in c.samples().iter().zip(&mg).zip(&mf) {
        let rhs = g.powf(1.0 / q1) * f.powf(1.0 / p1);
        if rhs > RHS_FLOOR {
            let ratio = cx.abs() / rhs;
            if ratio > best_ratio {
                best_ratio = ratio;
                best = Sample { lhs: cx.abs(), rhs };
            }
        }
    }
    Ok(best)
}

/// Estimates on one grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridEstimate {
    pub n: usize,
    /// Largest sampled ratio.
    pub c_hat: f64,
    /// One ratio per trial that produced a usable right-hand side.
    pub ratios: Vec<f64>,
    /// Redraws caused by underflowing right-hand sides.
    pub resampled: usize,
}

/// Outcome of a sampling campaign.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateReport {
    pub spec: InequalitySpec,
    pub trials: usize,
    pub seed: u64,
    pub grids: Vec<GridEstimate>,
    /// Largest ratio over every grid.
    pub c_hat: f64,
    /// `c_hat` of each grid over that of the previous one.
    pub growth: Vec<f64>,
    /// Every growth factor at most [`STABLE_GROWTH`].
    pub stable: bool,
    pub near_boundary: bool,
}

impl EstimateReport {
    pub const NOTE: &'static str =
        "sampled lower bounds of the best torus constant; no inequality is verified universally";

    pub fn verdict(&self) -> &'static str {
        match (self.stable, self.spec.canary) {
            (true, _) => "resolution-stable",
            (false, true) => "unstable (canary, expected)",
            (false, false) => "unstable",
        }
    }

    /// Stable, or a canary whose instability is never a failure.
    pub fn passed(&self) -> bool {
        self.stable || self.spec.canary
    }
}

fn growth_factor(prev: f64, next: f64) -> f64 {
    if prev == 0.0 && next == 0.0 {
        1.0
    } else {
        next / prev
    }
}

fn run_trial(spec: &InequalitySpec, grid: &Arc<Grid>, seed: u64, trial: usize) -> Result<(Option<f64>, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(grid.n() as u64));
    rng.set_stream(trial as u64);
    let kind = spec.ensemble.for_trial(trial);
    let mut redraws = 0;
    loop {
        let sample = evaluate(spec, &draw(grid, kind, &mut rng)?)?;
        if !sample.is_degenerate() {
            return Ok((Some(sample.ratio()), redraws));
        }
        if redraws == MAX_RESAMPLES {
            return Ok((None, redraws));
        }
        redraws += 1;
    }
}

/// Samples `trials` draws on each grid of side `n ∈ grids` (box `2π`),
/// records `LHS/RHS` and the per-grid maximum. Trials run in parallel with
/// per-trial streams, so the report depends only on `(spec, trials, grids,
/// seed)`.
pub fn estimate_constant(spec: &InequalitySpec, trials: usize, grids: &[usize], seed: u64) -> Result<EstimateReport> {
    if grids.len() < 2 {
        return Err(Error::InvalidParameter("the scaling table needs at least two grids".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is required".into()));
    }
    if !spec.canary {
        spec.validate()?;
    }
    let mut out = Vec::with_capacity(grids.len());
    for &n in grids {
        let grid = make_grid(n, 2.0 * std::f64::consts::PI)?;
        let results = (0..trials)
            .into_par_iter()
            .map(|t| run_trial(spec, &grid, seed, t))
            .collect::<Result<Vec<_>>>()?;
        let resampled = results.iter().map(|r| r.1).sum();
        let ratios: Vec<f64> = results.into_iter().filter_map(|r| r.0).collect();
        if ratios.is_empty() {
            return Err(Error::DegenerateEnsemble);
        }
        let c_hat = ratios.iter().copied().fold(0.0, f64::max);
        out.push(GridEstimate { n, c_hat, ratios, resampled });
    }
    let growth: Vec<f64> = out.windows(2).map(|w| growth_factor(w[0].c_hat, w[1].c_hat)).collect();
    Ok(EstimateReport {
        spec: spec.clone(),
        trials,
        seed,
        c_hat: out.iter().map(|g| g.c_hat).fold(0.0, f64::max),
        stable: growth.iter().all(|g| *g <= STABLE_GROWTH),
        growth,
        near_boundary: spec.near_boundary(),
        grids: out,
    })
}
