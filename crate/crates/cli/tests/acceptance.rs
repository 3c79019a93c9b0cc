//! Acceptance suite: one PASS/FAIL line per criterion with pinned
//! tolerances. Runs without the libtest harness so the lines print in
//! order; the process fails if any gating line fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use fbl_core::commutator_lab::{
    band_field, canary_registry, commutator_field, default_registry, estimate_constant, perp_gradient_of,
    random_divfree_field, representation_check, top_shell, Band,
};
use fbl_core::diagnostics::{
    besov_indices, delta, gamma, interpolation_weight, ledger_run, q0, simpson, ExponentTable, LedgerConfig,
    DEFAULT_RHO,
};
use fbl_core::littlewood_paley::{paraproduct_split, DyadicPartition};
use fbl_core::model::{
    random_field, random_state, transform_to_vorticity, Integrator, Model, ModelParams, SimState, Spectrum, Variable,
    DEFAULT_CFL,
};
use fbl_core::spectral::{
    advect, apply_multiplier, homogeneous_sobolev_norm, make_grid, product, sup_norm_refined, Axis, Complex64, Grid,
    MultiplierSpec, SpectralField, VectorField,
};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Res<T> = Result<T, Box<dyn std::error::Error>>;

/// Verdict of one criterion.
struct Line {
    passed: bool,
    detail: String,
    /// A failure that follows from the mathematics itself and is logged as
    /// a known conflict; printed as FAIL but does not gate the exit status.
    known_conflict: bool,
}

impl Line {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Line {
            passed,
            detail: detail.into(),
            known_conflict: false,
        }
    }
}

const TWO_PI: f64 = 2.0 * PI;

fn smooth() -> Spectrum {
    Spectrum::new(2.0, 1.0, 8.0)
}

fn rel(a: &SpectralField, b: &SpectralField) -> f64 {
    a.lincomb(1.0, b, -1.0).l2() / b.l2()
}

fn max_sample_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Uniform step from the Courant bound of the initial state, shrunk by
/// `safety`, covering `[0, t]` exactly.
fn uniform_steps(integ: &Integrator, s: &SimState, t: f64, safety: f64) -> (f64, usize) {
    let steps = (t / (safety * integ.stability_bound(s))).ceil() as usize;
    (t / steps as f64, steps)
}

fn ac1() -> Res<Line> {
    let start = Instant::now();
    let g = make_grid(128, TWO_PI)?;
    let f = random_field(&g, 1, Spectrum::new(1.0, 1.0, 60.0))?;
    let mut worst: f64 = 0.0;
    for (a, b) in [(0.3, 0.45), (-0.7, 1.2), (0.75, -0.75), (1.5, 0.5)] {
        let ab = apply_multiplier(&apply_multiplier(&f, &MultiplierSpec::lambda(a))?, &MultiplierSpec::lambda(b))?;
        let direct = apply_multiplier(&f, &MultiplierSpec::lambda(a + b))?;
        worst = worst.max(ab.max_coeff_diff(&direct) / direct.coeff_max().max(f.coeff_max()));
    }
    let composition = worst;

    // single modes against their symbols evaluated by hand
    let mut single: f64 = 0.0;
    for (k1, k2) in [(3i64, -5i64), (17, 4), (-40, 61), (63, 0)] {
        let (x1, x2) = (k1 as f64, k2 as f64);
        let r = x1.hypot(x2);
        let wave = SpectralField::from_fn(&g, |x, y| (x1 * x + x2 * y + 0.3).cos());
        let sine: Vec<f64> = (0..g.len())
            .map(|i| (x1 * g.coordinate(i % 128) + x2 * g.coordinate(i / 128) + 0.3).sin())
            .collect();
        let cosine = wave.samples();
        let cases: [(MultiplierSpec, Vec<f64>); 3] = [
            (MultiplierSpec::lambda(0.6), cosine.iter().map(|c| r.powf(0.6) * c).collect()),
            (MultiplierSpec::riesz(0.75), sine.iter().map(|s| -x1 * r.powf(-0.75) * s).collect()),
            (MultiplierSpec::partial(Axis::X2), sine.iter().map(|s| -x2 * s).collect()),
        ];
        for (spec, expect) in cases {
            if k1.abs() == 64 || k2.abs() == 64 {
                continue;
            }
            let got = apply_multiplier(&wave, &spec)?;
            let scale = expect.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            single = single.max(max_sample_diff(got.samples(), &expect) / scale);
        }
    }

    let dx = g.dx();
    let quad = f.samples().iter().map(|v| v * v).sum::<f64>() * dx * dx;
    let parseval = (quad - f.l2().powi(2)).abs() / quad;
    let elapsed = start.elapsed();
    let passed = composition <= 1e-12 && single <= 1e-12 && parseval <= 1e-12 && elapsed < Duration::from_secs(5);
    Ok(Line::new(
        passed,
        format!(
            "composition {composition:.2e}, single modes {single:.2e}, Parseval {parseval:.2e} (limit 1e-12); {:.2} s (limit 5 s)",
            elapsed.as_secs_f64()
        ),
    ))
}

fn ac2() -> Res<Line> {
    let g = make_grid(256, TWO_PI)?;
    let p = DyadicPartition::for_grid(&g);
    let sum = p.partition_sum();
    let dev = sum.iter().skip(1).map(|s| (s - 1.0).abs()).fold(0.0, f64::max);
    Ok(Line::new(
        dev <= 1e-12,
        format!("max |Σζ − 1| over {} nonzero modes = {dev:.2e} (limit 1e-12)", sum.len() - 1),
    ))
}

fn ac3() -> Res<Line> {
    let g = make_grid(128, TWO_PI)?;
    let p = DyadicPartition::for_grid(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for trial in 0..20u64 {
        let f = random_field(&g, 100 + trial, Spectrum::new(1.0, 1.0, 60.0))?;
        let h = random_field(&g, 200 + trial, Spectrum::new(0.5, 1.0, 60.0))?;
        let k = p.jmin() + (rng.next_u64() % (p.jmax() - p.jmin() + 1) as u64) as i32;
        let offset = 2 + (rng.next_u64() % 3) as i32;
        let pieces = paraproduct_split(&p, &f, &h, k, offset)?;
        let direct = p.block(&product(&f, &h), k)?;
        if direct.l2() > 0.0 {
            worst = worst.max(rel(&pieces.total(), &direct));
        }
    }
    Ok(Line::new(
        worst <= 1e-11,
        format!("worst relative residual over 20 draws = {worst:.2e} (limit 1e-11)"),
    ))
}

fn ac4() -> Res<Line> {
    let start = Instant::now();
    let g = make_grid(128, TWO_PI)?;
    let params = ModelParams::new(0.75)?;
    let beta = params.beta();
    let s0 = random_state(&g, params, Variable::F, 4, smooth(), smooth())?;
    let integ = Integrator::for_state(&s0, DEFAULT_CFL)?;
    let (dt, steps) = uniform_steps(&integ, &s0, 2.0, 0.5);
    let mut sup = vec![sup_norm_refined(&s0.theta)];
    let mut diss = vec![homogeneous_sobolev_norm(&s0.theta, beta / 2.0, 2.0)?.powi(2)];
    let mut s = s0.clone();
    for _ in 0..steps {
        s = integ.step(&s, dt)?;
        sup.push(sup_norm_refined(&s.theta));
        diss.push(homogeneous_sobolev_norm(&s.theta, beta / 2.0, 2.0)?.powi(2));
    }
    let rise = sup.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
    // ½‖θ(T)‖² − ½‖θ(0)‖² = −∫‖Λ^{β/2}θ‖²
    let lost = 0.5 * (s0.theta.l2().powi(2) - s.theta.l2().powi(2));
    let integral = simpson(&diss, dt);
    let balance = (lost - integral).abs() / integral;
    let elapsed = start.elapsed();
    let passed = rise <= 1e-8 && balance <= 1e-6 && elapsed < Duration::from_secs(120);
    Ok(Line::new(
        passed,
        format!(
            "{steps} steps of {dt:.3e}: largest rise of sup|θ| {rise:.2e} (limit 1e-8), L2 balance {balance:.2e} (limit 1e-6); {:.1} s (limit 120 s)",
            elapsed.as_secs_f64()
        ),
    ))
}

fn ac5() -> Res<Line> {
    let g = make_grid(128, TWO_PI)?;
    let params = ModelParams::new(0.75)?;
    let w0 = random_state(&g, params, Variable::Omega, 5, smooth(), smooth())?;
    let f0 = w0.to_variable(Variable::F)?;
    let iw = Integrator::for_state(&w0, DEFAULT_CFL)?;
    let iff = Integrator::for_state(&f0, DEFAULT_CFL)?;
    let (dt, steps) = uniform_steps(&iw, &w0, 1.0, 1.0);
    let (mut w, mut f) = (w0, f0);
    for _ in 0..steps {
        w = iw.step(&w, dt)?;
        f = iff.step(&f, dt)?;
    }
    let omega_from_f = transform_to_vorticity(&f.primary, &f.theta, params.alpha())?;
    let err = rel(&omega_from_f, &w.primary);
    Ok(Line::new(
        err <= 1e-5,
        format!("{steps} steps of {dt:.3e}: relative L2 gap {err:.2e} (limit 1e-5)"),
    ))
}

fn ac6() -> Res<Line> {
    let g = make_grid(64, TWO_PI)?;
    let mut parts = Vec::new();
    let mut passed = true;
    for alpha in [0.70, 0.75, 0.85] {
        let params = ModelParams::new(alpha)?;
        let configs = vec![
            LedgerConfig::l2_level(alpha, DEFAULT_RHO)?,
            LedgerConfig::l4_level(alpha)?,
            LedgerConfig::l6_level(alpha)?,
        ];
        let mut worst = f64::NEG_INFINITY;
        let mut rows = 0;
        for seed in [1u64, 2, 3] {
            let s = random_state(&g, params, Variable::F, seed, smooth(), smooth())?;
            let integ = Integrator::for_state(&s, DEFAULT_CFL)?;
            let (dt, steps) = uniform_steps(&integ, &s, 0.5, 0.5);
            let traj = integ.trajectory(&s, dt, steps, 1)?;
            let report = ledger_run(&traj, &configs)?;
            passed &= report.passed();
            rows += report.rows.len();
            worst = report.verdicts.iter().map(|v| v.worst_excess).fold(worst, f64::max);
        }
        parts.push(format!("alpha {alpha}: {rows} rows, worst excess {worst:.1e}"));
    }
    Ok(Line::new(passed, format!("{} (every row within its tolerance)", parts.join("; "))))
}

fn ac7() -> Res<Line> {
    let g = make_grid(64, TWO_PI)?;
    let mut worst: f64 = 0.0;
    for seed in 0..50u64 {
        let alpha = 0.7 + 0.15 * (seed % 4) as f64 / 3.0;
        let params = ModelParams::new(alpha)?;
        let s = random_state(&g, params, Variable::F, 1000 + seed, Spectrum::new(1.0, 1.0, 30.0), smooth())?;
        let u = Model::for_state(&s)?.velocity(&s.primary, &s.theta);
        let pairing = advect(&u, &s.primary).dot(&s.primary).abs();
        worst = worst.max(pairing / (s.primary.l2().powi(2) * u.sup_norm()));
    }
    Ok(Line::new(
        worst <= 1e-12,
        format!("max |<u.grad F, F>| / (|F|^2 |u|_inf) over 50 states = {worst:.2e} (limit 1e-12)"),
    ))
}

fn modes(f: &SpectralField, expect: &[(i64, i64, Complex64)]) -> f64 {
    let g = f.grid();
    let mut dense = f.coeffs().to_vec();
    for &(k1, k2, c) in expect {
        match g.mode_index(k1, k2) {
            Some(i) => dense[i] -= c,
            None => return f64::INFINITY,
        }
    }
    dense.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn four_mode_gap(g: &Arc<Grid>) -> Res<f64> {
    let (k, l) = ((2i64, 1i64), (-1i64, 3i64));
    let psi = SpectralField::from_fn(g, |x, y| (k.0 as f64 * x + k.1 as f64 * y).cos());
    let v = perp_gradient_of(&psi);
    let phi = SpectralField::from_fn(g, |x, y| (l.0 as f64 * x + l.1 as f64 * y + 0.4).cos());
    let r = (k.0 as f64).hypot(k.1 as f64);
    let lam = |s: f64| move |x: f64, y: f64| Complex64::from(x.hypot(y).powf(s));
    let riesz = |a: f64| move |x: f64, y: f64| Complex64::new(0.0, x * x.hypot(y).powf(-a));
    let cases: Vec<(MultiplierSpec, Box<dyn Fn(f64, f64) -> Complex64>)> = vec![
        (MultiplierSpec::lambda(0.5), Box::new(lam(0.5))),
        (MultiplierSpec::lambda(-0.3), Box::new(lam(-0.3))),
        (MultiplierSpec::riesz(0.75), Box::new(riesz(0.75))),
    ];
    let mut worst: f64 = 0.0;
    for (op, sigma) in cases {
        let mut expect = Vec::new();
        for sa in [1.0, -1.0] {
            for sb in [1.0, -1.0] {
                // V̂(a) = (−iξ₂, iξ₁)/|ξ|·½, φ̂(b) = ½e^{±0.4i}
                let (a1, a2) = (sa * k.0 as f64, sa * k.1 as f64);
                let (b1, b2) = (sb * l.0 as f64, sb * l.1 as f64);
                let va = (Complex64::new(0.0, -a2 / r) * 0.5, Complex64::new(0.0, a1 / r) * 0.5);
                let grad = va.0 * Complex64::new(0.0, b1) + va.1 * Complex64::new(0.0, b2);
                let c = (sigma(a1 + b1, a2 + b2) - sigma(b1, b2)) * grad * Complex64::from_polar(0.5, sb * 0.4);
                expect.push(((a1 + b1) as i64, (a2 + b2) as i64, c));
            }
        }
        worst = worst.max(modes(&commutator_field(&op, &v, &phi)?, &expect));
    }
    Ok(worst)
}

fn ac8() -> Res<Line> {
    let g = make_grid(32, TWO_PI)?;
    let hi = top_shell(&g);
    let ops = [
        MultiplierSpec::lambda(0.5),
        MultiplierSpec::lambda(-0.3),
        MultiplierSpec::riesz(0.75),
        MultiplierSpec::bump(2),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let v1 = random_divfree_field(&g, 1, Band::new(0, hi), 0.5)?;
    let v2 = random_divfree_field(&g, 2, Band::new(0, hi), 0.5)?;
    let p1 = band_field(&g, &mut rng, Band::new(0, hi), 1.0)?;
    let p2 = band_field(&g, &mut rng, Band::new(0, hi), 1.0)?;
    let (mut null, mut bilinear): (f64, f64) = (0.0, 0.0);
    for op in &ops {
        let c = |v: &VectorField, p: &SpectralField| commutator_field(op, v, p);
        null = null.max(c(&VectorField::constant(&g, 1.7, -0.4), &p1)?.coeff_max() / p1.coeff_max());
        null = null.max(c(&v1, &SpectralField::constant(&g, 3.0))?.coeff_max());
        let (a, b) = (0.8, -1.9);
        let lhs = c(&v1.lincomb(a, &v2, b), &p1)?;
        let rhs = c(&v1, &p1)?.lincomb(a, &c(&v2, &p1)?, b);
        bilinear = bilinear.max(lhs.max_coeff_diff(&rhs) / rhs.coeff_max().max(1.0));
        let lhs = c(&v1, &p1.lincomb(a, &p2, b))?;
        let rhs = c(&v1, &p1)?.lincomb(a, &c(&v1, &p2)?, b);
        bilinear = bilinear.max(lhs.max_coeff_diff(&rhs) / rhs.coeff_max().max(1.0));
    }
    let closed = four_mode_gap(&make_grid(16, TWO_PI)?)?;
    Ok(Line::new(
        null <= 1e-12 && bilinear <= 1e-12 && closed <= 1e-13,
        format!(
            "null cases {null:.2e} (limit 1e-12), bilinearity {bilinear:.2e} (limit 1e-12), four-mode closed form {closed:.2e} (limit 1e-13)"
        ),
    ))
}

fn ac9() -> Res<Line> {
    let start = Instant::now();
    let (trials, grids, seed) = (200, [64usize, 128], 7);
    let mut parts = Vec::new();
    let mut passed = true;
    for spec in default_registry() {
        let r = estimate_constant(&spec, trials, &grids, seed)?;
        passed &= r.stable;
        parts.push(format!("{} {:.2}", spec.label, r.growth[0]));
        if let Some(twin) = spec.lower_order_twin() {
            let t = estimate_constant(&twin, trials, &grids, seed)?;
            parts.push(format!("[{} {:.2}, c_hat {:.2e} vs {:.2e}]", twin.label, t.growth[0], t.c_hat, r.c_hat));
        }
    }
    for canary in canary_registry() {
        let r = estimate_constant(&canary, trials, &grids, seed)?;
        parts.push(format!("[canary {} {:.2}: {}]", canary.label, r.growth[0], r.verdict()));
    }
    let elapsed = start.elapsed();
    passed &= elapsed < Duration::from_secs(1800);
    Ok(Line::new(
        passed,
        format!(
            "growth c_hat(128)/c_hat(64) (limit 2): {}; bracketed entries do not gate; {:.0} s (limit 1800 s)",
            parts.join(", "),
            elapsed.as_secs_f64()
        ),
    ))
}

fn ac10() -> Res<Line> {
    let g = make_grid(128, TWO_PI)?;
    let mut worst: f64 = 0.0;
    let mut limited = true;
    for seed in 0..10u64 {
        let v = random_divfree_field(&g, 500 + seed, Band::new(0, 4), 1.0)?;
        let mut rng = ChaCha8Rng::seed_from_u64(600 + seed);
        let f = band_field(&g, &mut rng, Band::new(0, 4), 0.5)?;
        let r = representation_check(1 + (seed % 4) as i32, &v, &f)?;
        limited &= r.band_limited;
        worst = worst.max(r.relative);
    }
    Ok(Line::new(
        worst <= 1e-8 && limited,
        format!("worst relative residual over 10 pairs = {worst:.2e} (limit 1e-8)"),
    ))
}

fn ac11() -> Res<Line> {
    let mut exact = true;
    let mut q0_ok = true;
    let mut delta_bad = Vec::new();
    for alpha in [0.70, 0.75, 0.80, 0.85] {
        let beta = 1.0 - alpha;
        let t = ExponentTable::new(alpha, DEFAULT_RHO);
        exact &= t.gamma == beta / 2.0 - 2.0 * DEFAULT_RHO
            && t.gamma == gamma(beta, DEFAULT_RHO)
            && t.a == (3.0 - 4.0 * alpha) / (2.0 * beta)
            && t.a == interpolation_weight(alpha)
            && t.q0 == 4.0 * (2.0 * alpha - 1.0) / (3.0 * alpha * beta + 6.0 * alpha - 4.0)
            && t.q0 == q0(alpha)
            && t.delta == (3.0 - 4.0 * alpha) / (alpha / 2.0)
            && t.delta == delta(alpha)
            && t.besov == (3.0 * alpha - 2.0, 6.0 / (3.0 * alpha - 2.0))
            && t.besov == besov_indices(alpha);
        q0_ok &= t.q0 >= 1.0;
        if !(t.delta > 0.0 && t.delta < 1.0) {
            delta_bad.push(format!("{alpha} (delta = {:.4})", t.delta));
        }
    }
    let mut line = Line::new(
        exact && q0_ok && delta_bad.is_empty(),
        format!(
            "formulas reproduced exactly: {exact}; q0 >= 1: {q0_ok}; delta outside (0,1) at alpha = [{}]",
            delta_bad.join(", ")
        ),
    );
    // δ = (3−4α)/(α/2) lies in (0,1) only for 2/3 < α < 3/4, so the
    // asserted range cannot hold at 0.75, 0.80, 0.85
    line.known_conflict = exact && q0_ok;
    if !delta_bad.is_empty() {
        line.detail.push_str("; known conflict: delta in (0,1) requires 2/3 < alpha < 3/4");
    }
    Ok(line)
}

fn run_fbl(args: &[&str]) -> Res<std::process::Output> {
    Ok(Command::new(env!("CARGO_BIN_EXE_fbl")).args(args).output()?)
}

fn ac12() -> Res<Line> {
    let tmp = tempfile::tempdir()?;
    let cfg = tmp.path().join("run.toml");
    std::fs::write(
        &cfg,
        "seed = 21\n[model]\nn = 32\nt_final = 0.1\n[output]\nstride = 1\n[estimates]\ntrials = 10\ngrids = [32, 64]\n",
    )?;
    let cfg = cfg.to_str().ok_or("path")?;
    let dirs = [tmp.path().join("a"), tmp.path().join("b")];
    for d in &dirs {
        let out = d.to_str().ok_or("path")?;
        for mode in ["ledger", "estimate"] {
            let o = run_fbl(&[mode, "--config", cfg, "--out", out])?;
            if !o.status.success() {
                return Ok(Line::new(false, format!("{mode} failed: {}", String::from_utf8_lossy(&o.stderr))));
            }
        }
    }
    let csvs = ["timeseries.csv", "norms.csv", "snapshots.csv", "ledger.csv", "estimates.csv", "ratios.csv"];
    let read = |d: &Path, name: &str| std::fs::read(d.join(name));
    let mut identical = true;
    for name in csvs {
        identical &= read(&dirs[0], name)? == read(&dirs[1], name)?;
    }
    let start = Instant::now();
    let o = run_fbl(&["selftest"])?;
    let elapsed = start.elapsed();
    let passed = identical && o.status.success() && elapsed < Duration::from_secs(60);
    Ok(Line::new(
        passed,
        format!(
            "{} CSVs byte-identical across runs: {identical}; selftest exit {:?} in {:.2} s (limit 60 s)",
            csvs.len(),
            o.status.code(),
            elapsed.as_secs_f64()
        ),
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Res<Line>); 12] = [
        ("spectral identities", ac1),
        ("partition of unity", ac2),
        ("paraproduct identity", ac3),
        ("maximum principle and L2 balance", ac4),
        ("vorticity and f formulations agree", ac5),
        ("energy ledgers close", ac6),
        ("advection skew-symmetry", ac7),
        ("commutator null, bilinear and closed-form cases", ac8),
        ("estimate stability", ac9),
        ("commutator representation formula", ac10),
        ("exponent arithmetic", ac11),
        ("determinism and selftest", ac12),
    ];
    let mut gating_failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let line = run().unwrap_or_else(|e| Line::new(false, format!("error: {e}")));
        let verdict = if line.passed { "PASS" } else { "FAIL" };
        println!("AC{} {verdict} {name}: {}", i + 1, line.detail);
        if !line.passed && !line.known_conflict {
            gating_failures += 1;
        }
    }
    if gating_failures > 0 {
        eprintln!("{gating_failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
