use super::exponents::besov_indices;
use crate::littlewood_paley::DyadicPartition;
use crate::model::{transform_to_f, Model, SimState, Variable};
use crate::spectral::{biot_savart, gradient, lp_norm, SpectralField, VectorField};

/// Running suprema of the quantities that control regularity.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CriteriaReport {
    pub sup_f_l6: f64,
    pub sup_u_f_linf: f64,
    pub sup_grad_u_f_linf: f64,
    /// `sup_t ‖f‖_{B^{3α−2}_{6/(3α−2),∞}}`.
    pub sup_besov_f: f64,
    pub sup_grad_theta_linf: f64,
    /// `sup_t ‖∇u_f‖_{L^∞} / ‖f‖_B`, a measured embedding constant
    /// (zero when `f` vanishes).
    pub embedding_ratio: f64,
    pub besov_regularity: f64,
    pub besov_integrability: f64,
}

impl CriteriaReport {
    pub fn is_finite(&self) -> bool {
        [
            self.sup_f_l6,
            self.sup_u_f_linf,
            self.sup_grad_u_f_linf,
            self.sup_besov_f,
            self.sup_grad_theta_linf,
            self.embedding_ratio,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

/// `f` and `u_f` in the state's own coordinates.
fn f_and_velocity(state: &SimState) -> (SpectralField, VectorField) {
    match state.variable {
        Variable::F => {
            let model = Model::for_state(state).expect("a valid state always has a model");
            let (uf, _) = model.velocity_parts(&state.primary, &state.theta);
            (state.primary.clone(), uf)
        }
        _ => {
            let omega = state.vorticity().expect("unscaled states reconstruct vorticity");
            let f = transform_to_f(&omega, &state.theta, state.params.alpha())
                .expect("validated states are mean-free with admissible alpha");
            let uf = biot_savart(&f).expect("f is mean-free");
            (f, uf)
        }
    }
}

/// Running suprema of `‖f‖_{L⁶}`, `‖u_f‖_{L^∞}`, `‖∇u_f‖_{L^∞}`,
/// `‖∇θ‖_{L^∞}` and the Besov norm of `f`, plus the measured ratio
/// `‖∇u_f‖_{L^∞}/‖f‖_B`. Sup norms are grid maxima.
pub fn criteria_monitor(trajectory: &[SimState]) -> CriteriaReport {
    let Some(first) = trajectory.first() else {
        return CriteriaReport::default();
    };
    let (bs, br) = besov_indices(first.params.alpha());
    let partition = DyadicPartition::for_grid(first.grid());
    let mut r = CriteriaReport {
        besov_regularity: bs,
        besov_integrability: br,
        ..Default::default()
    };
    for state in trajectory {
        let (f, uf) = f_and_velocity(state);
        let l6 = lp_norm(&f, 6.0).expect("p = 6 is admissible");
        let grad_u = uf.gradient_magnitude_samples().into_iter().fold(0.0, f64::max);
        let besov = partition.besov_norm(&f, bs, br).expect("f is mean-free");
        let grad_theta = gradient(&state.theta).sup_norm();
        r.sup_f_l6 = r.sup_f_l6.max(l6);
        r.sup_u_f_linf = r.sup_u_f_linf.max(uf.sup_norm());
        r.sup_grad_u_f_linf = r.sup_grad_u_f_linf.max(grad_u);
        r.sup_besov_f = r.sup_besov_f.max(besov);
        r.sup_grad_theta_linf = r.sup_grad_theta_linf.max(grad_theta);
        if besov > 0.0 {
            r.embedding_ratio = r.embedding_ratio.max(grad_u / besov);
        }
    }
    r
}
