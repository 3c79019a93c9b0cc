use rayon::prelude::*;

use super::energy::{EnergyEvaluator, EnergyTerms, LedgerConfig};
use crate::model::SimState;
use crate::{Error, Result};

/// One `(t, configuration)` line of a ledger.
///
/// The three pieces are `½‖Λ^sF‖²`, `½‖Λ^κΘ‖²` and `(1/p)‖F‖_{L^p}^p`; each
/// obeys `rate + dissipation ≤ Σ|terms|` on its own.
#[derive(Clone, Debug)]
pub struct EnergyLedgerRow {
    pub time: f64,
    pub config: String,
    pub functionals: [f64; 3],
    pub rates: [f64; 3],
    pub dissipation: [f64; 3],
    pub bounds: [f64; 3],
    /// `|I_j|`, `|K_j|` and their split variants.
    pub terms: Vec<(String, f64)>,
    /// Per-piece allowance `5·max(h², 10⁻¹²)·scale`.
    pub tolerance: [f64; 3],
    pub holds: bool,
}

impl EnergyLedgerRow {
    /// Tracked functional `J(t)`.
    pub fn functional(&self) -> f64 {
        self.functionals.iter().sum()
    }

    pub fn lhs_rate(&self) -> f64 {
        self.rates.iter().sum()
    }

    pub fn total_dissipation(&self) -> f64 {
        self.dissipation.iter().sum()
    }

    /// Largest `(rate + dissipation − bound)/scale` over the pieces.
    pub fn excess(&self) -> f64 {
        (0..3)
            .map(|i| {
                let scale = row_scale(self.rates[i], self.dissipation[i], self.bounds[i]);
                if scale == 0.0 {
                    0.0
                } else {
                    (self.rates[i] + self.dissipation[i] - self.bounds[i]) / scale
                }
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn row_scale(rate: f64, diss: f64, bound: f64) -> f64 {
    rate.abs().max(diss.abs()).max(bound.abs())
}

/// Summary checks for one configuration over the whole trajectory.
#[derive(Clone, Debug)]
pub struct LedgerVerdict {
    pub config: String,
    pub rows: usize,
    pub failing_rows: usize,
    pub worst_excess: f64,
    /// Final running suprema of the three pieces.
    pub running_sup: [f64; 3],
    pub bounded: bool,
    /// Simpson integrals of the three dissipation terms.
    pub dissipation_integrals: [f64; 3],
    pub integrals_finite: bool,
    /// Set when second- and fourth-order rates disagree beyond the row
    /// tolerance, or when too few outputs allow only second order.
    pub rate_warning: bool,
    /// Smallest `C` with `J(t) ≤ J(t₀)e^{C(t−t₀)}` on the outputs.
    pub gronwall_fit: f64,
    /// `sup_t Σ|terms| / J`, which bounds the fitted constant.
    pub gronwall_measured: f64,
}

impl LedgerVerdict {
    pub fn passed(&self) -> bool {
        self.failing_rows == 0 && self.bounded && self.integrals_finite
    }

    /// Whether the fitted growth rate respects the measured constant, with
    /// the same relative slack as the rows.
    pub fn gronwall_consistent(&self, slack: f64) -> bool {
        self.gronwall_fit <= self.gronwall_measured + slack * self.gronwall_measured.abs().max(1e-300)
    }
}

#[derive(Clone, Debug)]
pub struct LedgerReport {
    pub cadence: f64,
    /// Ordered by time, then by configuration.
    pub rows: Vec<EnergyLedgerRow>,
    pub verdicts: Vec<LedgerVerdict>,
}

impl LedgerReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(LedgerVerdict::passed)
    }

    pub fn rows_for<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a EnergyLedgerRow> + 'a {
        self.rows.iter().filter(move |r| r.config == id)
    }

    pub fn verdict(&self, id: &str) -> Option<&LedgerVerdict> {
        self.verdicts.iter().find(|v| v.config == id)
    }
}

/// Fourth-order finite-difference derivative of uniformly spaced values
/// (five-point stencils, one-sided at the ends). Needs at least five values.
pub fn rates_fourth_order(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 5, "fourth-order rates need five values");
    let f = values;
    (0..n)
        .map(|i| {
            let d = match i {
                0 => -25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4],
                1 => -3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4],
                _ if i == n - 2 => {
                    3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]
                }
                _ if i == n - 1 => {
                    25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]
                }
                _ => f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2],
            };
            d / (12.0 * h)
        })
        .collect()
}

/// Second-order finite-difference derivative. Needs at least three values.
pub fn rates_second_order(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 3, "second-order rates need three values");
    let f = values;
    (0..n)
        .map(|i| match i {
            0 => (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h),
            _ if i == n - 1 => (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h),
            _ => (f[i + 1] - f[i - 1]) / (2.0 * h),
        })
        .collect()
}

/// Composite Simpson rule on uniform samples; an odd interval count closes
/// with the three-eighths rule, a single interval with the trapezoid.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (values[0] + values[1]),
        _ => {
            let intervals = n - 1;
            let (even_end, tail) = if intervals.is_multiple_of(2) { (n - 1, false) } else { (n - 4, true) };
            let mut s = 0.0;
            let mut i = 0;
            while i + 2 <= even_end {
                s += h / 3.0 * (values[i] + 4.0 * values[i + 1] + values[i + 2]);
                i += 2;
            }
            if tail {
                let v = &values[n - 4..];
                s += 3.0 * h / 8.0 * (v[0] + 3.0 * v[1] + 3.0 * v[2] + v[3]);
            }
            s
        }
    }
}

/// Uniform output spacing of a trajectory.
pub fn cadence(trajectory: &[SimState]) -> Result<f64> {
    if trajectory.len() < 3 {
        return Err(Error::InvalidParameter("a ledger needs at least three outputs".into()));
    }
    let h = trajectory[1].time - trajectory[0].time;
    if !(h > 0.0) {
        return Err(Error::InvalidParameter("output times must increase".into()));
    }
    for w in trajectory.windows(2) {
        let d = w[1].time - w[0].time;
        if (d - h).abs() > 1e-9 * h {
            return Err(Error::InvalidParameter(format!(
                "output cadence must be uniform: found spacings {h} and {d}"
            )));
        }
    }
    Ok(h)
}

/// Evaluates every configuration along a uniformly sampled `f` trajectory
/// and checks the three energy relations row by row.
pub fn ledger_run(trajectory: &[SimState], configs: &[LedgerConfig]) -> Result<LedgerReport> {
    let h = cadence(trajectory)?;
    let first = &trajectory[0];
    for s in trajectory {
        if !s.grid().same_as(first.grid()) {
            return Err(Error::GridMismatch);
        }
        if s.params != first.params || s.variable != first.variable {
            return Err(Error::InvalidParameter("trajectory mixes parameters or unknowns".into()));
        }
    }
    let eval = EnergyEvaluator::for_state(first, configs)?;
    let per_time: Vec<Vec<EnergyTerms>> = trajectory
        .par_iter()
        .map(|s| eval.evaluate(s))
        .collect::<Result<_>>()?;

    let allowance = 5.0 * (h * h).max(1e-12);
    let nt = trajectory.len();
    let mut rows: Vec<Vec<EnergyLedgerRow>> = (0..nt).map(|_| Vec::with_capacity(configs.len())).collect();
    let mut verdicts = Vec::with_capacity(configs.len());

    for (ci, config) in configs.iter().enumerate() {
        let series = |piece: usize| -> Vec<f64> { per_time.iter().map(|e| e[ci].functionals[piece]).collect() };
        let mut rates = [vec![], vec![], vec![]];
        let mut rate_warning = nt < 5;
        for (piece, slot) in rates.iter_mut().enumerate() {
            let v = series(piece);
            let second = rates_second_order(&v, h);
            if nt >= 5 {
                let fourth = rates_fourth_order(&v, h);
                for t in 0..nt {
                    let e = &per_time[t][ci];
                    let scale = row_scale(fourth[t], e.dissipation[piece], e.signed.bounds()[piece]);
                    if (fourth[t] - second[t]).abs() > allowance * scale {
                        rate_warning = true;
                    }
                }
                *slot = fourth;
            } else {
                *slot = second;
            }
        }

        let mut failing = 0;
        let mut worst = f64::NEG_INFINITY;
        let mut sup = [0.0f64; 3];
        let mut bounded = true;
        let mut gronwall_measured = 0.0f64;
        let mut gronwall_fit = f64::NEG_INFINITY;
        let j0 = per_time[0][ci].functional();
        for t in 0..nt {
            let e = &per_time[t][ci];
            let bounds = e.signed.bounds();
            let r = [rates[0][t], rates[1][t], rates[2][t]];
            let mut tolerance = [0.0; 3];
            let mut holds = true;
            for i in 0..3 {
                tolerance[i] = allowance * row_scale(r[i], e.dissipation[i], bounds[i]);
                if !(r[i] + e.dissipation[i] <= bounds[i] + tolerance[i]) {
                    holds = false;
                }
            }
            for i in 0..3 {
                sup[i] = sup[i].max(e.functionals[i]);
                bounded &= e.functionals[i].is_finite();
            }
            let j = e.functional();
            if j > 0.0 {
                gronwall_measured = gronwall_measured.max(bounds.iter().sum::<f64>() / j);
            }
            if t > 0 && j0 > 0.0 && j > 0.0 {
                gronwall_fit = gronwall_fit.max((j / j0).ln() / (e.time - first.time));
            }
            let row = EnergyLedgerRow {
                time: e.time,
                config: config.id.clone(),
                functionals: e.functionals,
                rates: r,
                dissipation: e.dissipation,
                bounds,
                terms: e.named_magnitudes(),
                tolerance,
                holds,
            };
            worst = worst.max(row.excess());
            if !holds {
                failing += 1;
            }
            rows[t].push(row);
        }
        let integrals: [f64; 3] = std::array::from_fn(|i| {
            let d: Vec<f64> = per_time.iter().map(|e| e[ci].dissipation[i]).collect();
            simpson(&d, h)
        });
        verdicts.push(LedgerVerdict {
            config: config.id.clone(),
            rows: nt,
            failing_rows: failing,
            worst_excess: worst,
            running_sup: sup,
            bounded,
            dissipation_integrals: integrals,
            integrals_finite: integrals.iter().all(|v| v.is_finite()),
            rate_warning,
            gronwall_fit: if gronwall_fit.is_finite() { gronwall_fit } else { 0.0 },
            gronwall_measured,
        });
    }
    Ok(LedgerReport {
        cadence: h,
        rows: rows.into_iter().flatten().collect(),
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_difference_orders() {
        let h = 0.05;
        let v: Vec<f64> = (0..12).map(|i| (i as f64 * h).sin()).collect();
        let r4 = rates_fourth_order(&v, h);
        let r2 = rates_second_order(&v, h);
        let e4 = (0..12).map(|i| (r4[i] - (i as f64 * h).cos()).abs()).fold(0.0, f64::max);
        let e2 = (0..12).map(|i| (r2[i] - (i as f64 * h).cos()).abs()).fold(0.0, f64::max);
        assert!(e4 < 2e-6, "{e4}");
        assert!(e2 < 2e-3 && e2 > 1e-5, "{e2}");
        // quartics are differentiated exactly
        let q: Vec<f64> = (0..7).map(|i| (i as f64).powi(4)).collect();
        let rq = rates_fourth_order(&q, 1.0);
        for (i, r) in rq.iter().enumerate() {
            assert!((r - 4.0 * (i as f64).powi(3)).abs() < 1e-9);
        }
    }

    #[test]
    fn simpson_handles_both_parities() {
        for n in [2usize, 3, 4, 5, 8, 11] {
            let h = 1.0 / (n - 1) as f64;
            let v: Vec<f64> = (0..n).map(|i| (i as f64 * h).powi(if n == 2 { 1 } else { 3 })).collect();
            let exact = if n == 2 { 0.5 } else { 0.25 };
            assert!((simpson(&v, h) - exact).abs() < 1e-14, "n = {n}");
        }
    }
}
