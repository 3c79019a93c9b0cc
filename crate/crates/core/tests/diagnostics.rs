mod common;

use std::f64::consts::PI;

use common::*;
use fbl_core::diagnostics::*;
use fbl_core::model::*;
use fbl_core::spectral::*;

fn smooth(amplitude: f64, cutoff: f64) -> Spectrum {
    Spectrum::new(3.0, amplitude, cutoff)
}

fn scaled(m: &Modes, a: f64) -> Modes {
    m.iter().map(|&(x, y, c)| (x, y, c * a)).collect()
}

/// `(∫ a·b^{p−1}, ∫ |a·b^{p−1}|)` by the rectangle rule on an `m × m` grid.
fn power_pairing(a: &Modes, b: &Modes, p: u32, m: usize, length: f64) -> (f64, f64) {
    let (sa, sb) = (synthesize(a, m), synthesize(b, m));
    let w = (length / m as f64).powi(2);
    let v = sa.iter().zip(&sb).map(|(x, y)| x * y.powi(p as i32 - 1));
    let (s, abs) = v.fold((0.0, 0.0), |(s, a), t| (s + t, a + t.abs()));
    (s * w, abs * w)
}

fn trajectory(alpha: f64, n: usize, seed: u64, amplitude: f64, t_end: f64, stride: usize) -> Vec<SimState> {
    let grid = make_grid(n, 2.0 * PI).unwrap();
    let p = ModelParams::new(alpha).unwrap();
    let s0 = random_state(&grid, p, Variable::F, seed, smooth(amplitude, 6.0), smooth(amplitude, 6.0)).unwrap();
    let integ = Integrator::for_state(&s0, DEFAULT_CFL).unwrap();
    let dt0 = 0.5 * integ.stability_bound(&s0);
    let steps = ((t_end / dt0).ceil() as usize).max(8).next_multiple_of(2);
    let dt = t_end / steps as f64;
    integ.trajectory(&s0, dt, steps, stride).unwrap()
}

#[test]
fn every_term_matches_direct_quadrature() {
    let n = 32;
    let length = 2.0 * PI;
    let grid = make_grid(n, length).unwrap();
    let (a, b, eps) = (0.75, 0.25, 0.5);
    let params = ModelParams::new(a).unwrap().with_eps0(eps).unwrap();
    let state = random_state(&grid, params, Variable::F, 11, smooth(1.0, 9.0), smooth(1.0, 9.0)).unwrap();
    let (sv, kv, p) = (0.4, 0.3, 4);
    let e = energy_terms(&state, sv, kv, p).unwrap();

    let k0 = grid.kappa0();
    let f = modes_of(&state.primary);
    let th = modes_of(&state.theta);
    let r_th = apply(&th, k0, riesz(a));
    let carrier = add(&scaled(&r_th, eps.powf(b)), &scaled(&apply(&r_th, k0, lam(b - a)), eps.powf(2.0 * b - a)), 1.0);
    let omega = scaled(&add(&f, &carrier, 1.0), 1.0 / eps);
    let (u1, u2) = (apply(&omega, k0, bs1), apply(&omega, k0, bs2));
    let q = |m: &Modes| apply(&apply(m, k0, dx1), k0, lam(b - 2.0 * a));
    let adv_f = transport(&u1, &u2, &f, k0, n);
    let adv_th = transport(&u1, &u2, &th, k0, n);
    let comm_r = add(&apply(&adv_th, k0, riesz(a)), &transport(&u1, &u2, &r_th, k0, n), -1.0);
    let comm_q = add(&q(&adv_th), &transport(&u1, &u2, &q(&th), k0, n), -1.0);
    let source = apply(&apply(&th, k0, dx1), k0, lam(2.0 * (b - a)));

    // values with the size of their integrand, which sets the tolerance
    let sob = |x: &Modes, y: &Modes, s: f64| {
        let v = dot(&apply(x, k0, lam(s)), &apply(y, k0, lam(s)), length);
        (v, v.abs())
    };
    let m = p as usize * n; // twice the exact-quadrature size
    let pair = |x: &Modes| power_pairing(x, &f, p, m, length);
    let times = |c: f64, (v, a): (f64, f64)| (c * v, c.abs() * a);
    let expect = [
        ("I1", times(-eps.powf(a), sob(&adv_f, &f, sv)), e.signed.i1),
        ("I2", times(eps.powf(2.0 - 3.0 * a), sob(&source, &f, sv)), e.signed.i2),
        ("I3", times(eps, sob(&comm_r, &f, sv)), e.signed.i3),
        ("I4", times(eps.powf(2.0 * b), sob(&comm_q, &f, sv)), e.signed.i4),
        ("I5", times(-eps.powf(a), sob(&adv_th, &th, kv)), e.signed.i5),
        ("K0", times(-eps.powf(a), pair(&adv_f)), e.signed.k0),
        ("K1", times(eps.powf(2.0 - 3.0 * a), pair(&source)), e.signed.k1),
        ("K2", times(eps, pair(&comm_r)), e.signed.k2),
        ("K3", times(eps.powf(2.0 * b), pair(&comm_q)), e.signed.k3),
        ("diss_f", times(eps.powf(a - b), sob(&f, &f, sv + a / 2.0)), e.dissipation[0]),
        ("diss_theta", sob(&th, &th, kv + b / 2.0), e.dissipation[1]),
        ("diss_lp", times(eps.powf(a - b), pair(&apply(&f, k0, lam(a)))), e.dissipation[2]),
        ("lp", times(1.0 / p as f64, power_pairing(&f, &f, p, m, length)), e.functionals[2]),
    ];
    for (name, (want, size), got) in expect {
        assert!((want - got).abs() <= 1e-10 * size, "{name}: {got} vs {want}");
    }
}

#[test]
fn transport_term_vanishes_without_derivative() {
    for seed in 0..5 {
        let grid = make_grid(32, 2.0 * PI).unwrap();
        let p = ModelParams::new(0.8).unwrap();
        let s = random_state(&grid, p, Variable::F, seed, smooth(2.0, 10.0), smooth(1.0, 10.0)).unwrap();
        let e = energy_terms(&s, 0.0, 0.0, 2).unwrap();
        let u = Model::for_state(&s).unwrap().velocity(&s.primary, &s.theta);
        let scale = s.primary.l2().powi(2) * u.sup_norm();
        assert!(e.signed.i1.abs() <= 1e-12 * scale, "{}", e.signed.i1 / scale);
        // the same pairing read through the L² piece
        assert!(e.signed.k0.abs() <= 1e-12 * scale);
    }
}

#[test]
fn zero_temperature_leaves_only_transport() {
    let grid = make_grid(32, 2.0 * PI).unwrap();
    let p = ModelParams::new(0.75).unwrap().with_eps0(0.7).unwrap();
    let f = random_field(&grid, 4, smooth(1.0, 8.0)).unwrap();
    let s = SimState::new(0.0, SpectralField::zeros(&grid), f, Variable::F, p).unwrap();
    let e = energy_terms(&s, 0.3, 0.2, 6).unwrap();
    let t = e.signed;
    for v in [t.i2, t.i3, t.i4, t.i5, t.k1, t.k2, t.k3] {
        assert_eq!(v, 0.0);
    }
    assert!(t.i1 != 0.0);
}

#[test]
fn rejects_other_unknowns() {
    let grid = make_grid(16, 2.0 * PI).unwrap();
    let p = ModelParams::new(0.75).unwrap();
    let s = random_state(&grid, p, Variable::Omega, 1, smooth(1.0, 4.0), smooth(1.0, 4.0)).unwrap();
    assert!(energy_terms(&s, 0.0, 0.0, 2).is_err());
    assert!(energy_terms(&s.to_variable(Variable::F).unwrap(), 0.0, 0.0, 2).is_ok());
}

#[test]
fn zero_data_gives_an_empty_ledger() {
    let grid = make_grid(16, 2.0 * PI).unwrap();
    let p = ModelParams::new(0.75).unwrap();
    let s0 = zero_state(&grid, p, Variable::F).unwrap();
    let integ = Integrator::for_state(&s0, DEFAULT_CFL).unwrap();
    let traj = integ.trajectory(&s0, 0.01, 6, 1).unwrap();
    let configs = LedgerConfig::all_levels(0.75, DEFAULT_RHO).unwrap();
    let report = ledger_run(&traj, &configs).unwrap();
    assert_eq!(report.rows.len(), 7 * configs.len());
    for row in &report.rows {
        assert!(row.holds);
        assert_eq!(row.functional(), 0.0);
        assert_eq!(row.lhs_rate(), 0.0);
        assert!(row.terms.iter().all(|(_, v)| *v == 0.0));
    }
    assert!(report.passed());
}

#[test]
fn rows_hold_on_a_moderate_run() {
    for alpha in [0.7, 0.85] {
        let traj = trajectory(alpha, 32, 5, 1.0, 0.3, 1);
        let report = ledger_run(&traj, &LedgerConfig::all_levels(alpha, DEFAULT_RHO).unwrap()).unwrap();
        for v in &report.verdicts {
            assert!(v.passed(), "alpha {alpha}: {v:?}");
            assert!(v.gronwall_consistent(1e-6), "{v:?}");
        }
    }
}

#[test]
fn small_amplitude_growth_respects_the_measured_constant() {
    let traj = trajectory(0.75, 32, 9, 1e-3, 0.5, 1);
    let report = ledger_run(&traj, &[LedgerConfig::new("l2-plain", 0.0, 0.0, 2).unwrap()]).unwrap();
    let v = &report.verdicts[0];
    assert!(v.passed());
    // ‖F‖ itself: ln(‖F(t)‖/‖F(0)‖)/t ≤ sup Σ|K|/‖F‖²
    let rows: Vec<_> = report.rows.iter().collect();
    let f0 = rows[0].functionals[2];
    let fit = rows[1..]
        .iter()
        .map(|r| 0.5 * (r.functionals[2] / f0).ln() / (r.time - rows[0].time))
        .fold(f64::NEG_INFINITY, f64::max);
    let measured = rows.iter().map(|r| r.bounds[2] / (2.0 * r.functionals[2])).fold(0.0, f64::max);
    assert!(fit <= measured, "{fit} vs {measured}");
    assert!(v.gronwall_fit <= v.gronwall_measured);
}

#[test]
fn dissipation_integral_is_cadence_stable() {
    let fine = trajectory(0.75, 32, 2, 1.0, 0.4, 1);
    let coarse: Vec<SimState> = fine.iter().step_by(2).cloned().collect();
    assert_eq!((fine.len() - 1) % 2, 0);
    let cfg = [LedgerConfig::new("diss", 0.0, 0.0, 2).unwrap()];
    let a = ledger_run(&fine, &cfg).unwrap().verdicts[0].dissipation_integrals[0];
    let b = ledger_run(&coarse, &cfg).unwrap().verdicts[0].dissipation_integrals[0];
    assert!(((a - b) / a).abs() < 0.01, "{a} vs {b}");
}

#[test]
fn uneven_cadence_is_rejected() {
    let mut traj = trajectory(0.75, 16, 1, 1.0, 0.1, 1);
    assert!(traj.len() >= 4);
    traj.remove(2);
    assert!(ledger_run(&traj, &LedgerConfig::levels(0.75, DEFAULT_RHO).unwrap()).is_err());
    assert!(ledger_run(&traj[..2], &LedgerConfig::levels(0.75, DEFAULT_RHO).unwrap()).is_err());
}

#[test]
fn short_trajectories_warn_about_rate_accuracy() {
    let traj = trajectory(0.75, 16, 1, 1.0, 0.1, 1);
    let report = ledger_run(&traj[..4], &LedgerConfig::levels(0.75, DEFAULT_RHO).unwrap()).unwrap();
    assert!(report.verdicts.iter().all(|v| v.rate_warning));
}

#[test]
fn criteria_on_a_short_run() {
    let traj = trajectory(0.75, 32, 3, 1.0, 0.1, 2);
    let r = criteria_monitor(&traj);
    assert!(r.is_finite());
    assert!(r.sup_f_l6 > 0.0 && r.sup_grad_u_f_linf > 0.0 && r.embedding_ratio > 0.0);
    // the vorticity formulation reports the same f
    let as_omega: Vec<SimState> = traj.iter().map(|s| s.to_variable(Variable::Omega).unwrap()).collect();
    let r2 = criteria_monitor(&as_omega);
    assert!((r.sup_f_l6 - r2.sup_f_l6).abs() <= 1e-12 * r.sup_f_l6);
    assert!((r.sup_besov_f - r2.sup_besov_f).abs() <= 1e-12 * r.sup_besov_f);
}

#[test]
fn exponent_table_for_the_admissible_range() {
    for alpha in [0.70, 0.75, 0.80, 0.85] {
        let t = ExponentTable::new(alpha, DEFAULT_RHO);
        let beta = 1.0 - alpha;
        assert_eq!(t.gamma, beta / 2.0 - 2.0 * DEFAULT_RHO);
        assert_eq!(t.a, (3.0 - 4.0 * alpha) / (2.0 * beta));
        assert_eq!(t.q0, 4.0 * (2.0 * alpha - 1.0) / (3.0 * alpha * beta + 6.0 * alpha - 4.0));
        assert!(t.q0_at_least_one());
        assert_eq!(t.besov, (3.0 * alpha - 2.0, 6.0 / (3.0 * alpha - 2.0)));
        assert!(t.six_in_window());
    }
}
