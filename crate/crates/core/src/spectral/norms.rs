use rustfft::num_complex::Complex64;
use rayon::prelude::*;

use super::field::SpectralField;
use super::grid::signed_index;
use super::multiplier::{apply_multiplier, MultiplierSpec};
use super::vector::VectorField;
use crate::{Error, Result};

fn check_exponent(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("Lebesgue exponent p = {p} must be at least 1")))
    }
}

/// Rectangle-rule `L^p` norm of grid samples with cell area `da`;
/// `p = ∞` gives the largest magnitude.
pub fn lp_of_samples(samples: &[f64], p: f64, da: f64) -> Result<f64> {
    check_exponent(p)?;
    if p.is_infinite() {
        return Ok(samples.iter().fold(0.0, |m, v| m.max(v.abs())));
    }
    let sum: f64 = if p == 2.0 {
        samples.iter().map(|v| v * v).sum()
    } else {
        samples.iter().map(|v| v.abs().powf(p)).sum()
    };
    Ok((sum * da).powf(1.0 / p))
}

/// `‖f‖_{L^p}` over the box. Exact for band-limited `|f|^p` when `p` is an
/// even integer; the `L^∞` value is the grid maximum, a lower bound of the
/// continuum supremum.
pub fn lp_norm(field: &SpectralField, p: f64) -> Result<f64> {
    let dx = field.grid().dx();
    lp_of_samples(field.samples(), p, dx * dx)
}

/// `L^p` norm of the pointwise Euclidean magnitude.
pub fn lp_norm_vector(v: &VectorField, p: f64) -> Result<f64> {
    let dx = v.grid().dx();
    lp_of_samples(&v.magnitude_samples(), p, dx * dx)
}

/// `‖Λ^s f‖_{L^p}`; negative `s` needs a mean-free field.
pub fn homogeneous_sobolev_norm(field: &SpectralField, s: f64, p: f64) -> Result<f64> {
    if s < 0.0 {
        field.require_mean_free()?;
    }
    lp_norm(&apply_multiplier(field, &MultiplierSpec::lambda(s))?, p)
}

/// `‖f‖_{W^{s,p}} = ‖Λ^s f‖_{L^p} + ‖f‖_{L^p}`.
pub fn sobolev_norm(field: &SpectralField, s: f64, p: f64) -> Result<f64> {
    Ok(homogeneous_sobolev_norm(field, s, p)? + lp_norm(field, p)?)
}

/// Supremum of `|f|` for the trigonometric interpolant: the grid maximum
/// polished by Newton iterations started at the largest local maxima.
pub fn sup_norm_refined(field: &SpectralField) -> f64 {
    let grid = field.grid();
    let n = grid.n();
    let samples = field.samples();
    let grid_max = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if grid_max == 0.0 {
        return 0.0;
    }
    let at = |j1: usize, j2: usize| samples[(j2 % n) * n + (j1 % n)].abs();
    let mut candidates: Vec<(f64, usize)> = Vec::new();
    for j2 in 0..n {
        for j1 in 0..n {
            let v = at(j1, j2);
            let is_peak = [(n - 1, n - 1), (0, n - 1), (1, n - 1), (n - 1, 0), (1, 0), (n - 1, 1), (0, 1), (1, 1)]
                .iter()
                .all(|&(d1, d2)| at(j1 + d1, j2 + d2) <= v);
            if is_peak {
                candidates.push((v, j2 * n + j1));
            }
        }
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
    candidates.truncate(16);
    let poly = TrigPoly::new(field);
    candidates
        .par_iter()
        .map(|&(_, idx)| {
            let x0 = [grid.coordinate(idx % n), grid.coordinate(idx / n)];
            poly.climb(x0, samples[idx].signum(), grid.dx())
        })
        .reduce(|| grid_max, f64::max)
}

/// Real trigonometric interpolant with value, gradient and Hessian evaluation.
struct TrigPoly {
    kappa0: f64,
    modes: Vec<(f64, f64, Complex64)>,
}

impl TrigPoly {
    fn new(field: &SpectralField) -> Self {
        let grid = field.grid();
        let n = grid.n();
        let half = (n / 2) as i64;
        let split = |i: usize| -> Vec<(f64, f64)> {
            let k = signed_index(i, n);
            if k == -half {
                vec![(-half as f64, 0.5), (half as f64, 0.5)]
            } else {
                vec![(k as f64, 1.0)]
            }
        };
        let mut modes = Vec::new();
        for (idx, &c) in field.coeffs().iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            for (k2, w2) in split(idx / n) {
                for (k1, w1) in split(idx % n) {
                    modes.push((k1, k2, c * (w1 * w2)));
                }
            }
        }
        TrigPoly { kappa0: grid.kappa0(), modes }
    }

    /// Value, gradient and Hessian at `x`.
    fn eval(&self, x: [f64; 2]) -> (f64, [f64; 2], [f64; 3]) {
        let (mut v, mut g, mut h) = (0.0, [0.0; 2], [0.0; 3]);
        for &(k1, k2, c) in &self.modes {
            let (a, b) = (k1 * self.kappa0, k2 * self.kappa0);
            let e = c * Complex64::from_polar(1.0, a * x[0] + b * x[1]);
            v += e.re;
            // ∂ e^{iξx} = iξ e^{iξx}; Re(i z) = −Im z
            g[0] -= a * e.im;
            g[1] -= b * e.im;
            h[0] -= a * a * e.re;
            h[1] -= a * b * e.re;
            h[2] -= b * b * e.re;
        }
        (v, g, h)
    }

    /// Newton ascent of `sign·f` from `x`, steps capped at `cap`.
    fn climb(&self, mut x: [f64; 2], sign: f64, cap: f64) -> f64 {
        let (v0, _, _) = self.eval(x);
        let mut best = sign * v0;
        for _ in 0..30 {
            let (v, g, h) = self.eval(x);
            let (v, g, h) = (sign * v, [sign * g[0], sign * g[1]], [sign * h[0], sign * h[1], sign * h[2]]);
            best = best.max(v);
            let det = h[0] * h[2] - h[1] * h[1];
            if !(h[0] < 0.0 && det > 0.0) {
                break;
            }
            let mut d = [-(h[2] * g[0] - h[1] * g[1]) / det, -(-h[1] * g[0] + h[0] * g[1]) / det];
            let len = d[0].hypot(d[1]);
            if len > cap {
                d = [d[0] * cap / len, d[1] * cap / len];
            }
            x = [x[0] + d[0], x[1] + d[1]];
            // quadratic convergence: the value is settled to roundoff
            if len < 1e-12 * cap {
                break;
            }
        }
        let (v, _, _) = self.eval(x);
        best.max(sign * v)
    }
}
