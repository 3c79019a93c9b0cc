//! Changes of unknown between the vorticity `ω`, the first hybrid variable
//! `G = ω − R_αθ` and the second hybrid variable `f = ω − R_α(I + Λ^{β−α})θ`.

use crate::spectral::{
    apply_multiplier, check_alpha, theta_vorticity_kind, Axis, MultiplierKind, MultiplierSpec,
    SpectralField,
};
use crate::Result;

fn checked(omega: &SpectralField, theta: &SpectralField, alpha: f64) -> Result<()> {
    check_alpha(alpha)?;
    omega.require_mean_free()?;
    theta.require_mean_free()
}

fn riesz_theta(theta: &SpectralField, alpha: f64) -> Result<SpectralField> {
    apply_multiplier(theta, &MultiplierSpec::riesz(alpha))
}

fn carrier(theta: &SpectralField, alpha: f64) -> Result<SpectralField> {
    apply_multiplier(theta, &MultiplierSpec::new(theta_vorticity_kind(alpha)))
}

/// `G = ω − R_αθ`.
pub fn transform_to_g(omega: &SpectralField, theta: &SpectralField, alpha: f64) -> Result<SpectralField> {
    checked(omega, theta, alpha)?;
    Ok(omega - &riesz_theta(theta, alpha)?)
}

/// Inverse of [`transform_to_g`].
pub fn g_to_vorticity(g: &SpectralField, theta: &SpectralField, alpha: f64) -> Result<SpectralField> {
    checked(g, theta, alpha)?;
    Ok(g + &riesz_theta(theta, alpha)?)
}

/// `f = ω − R_α(I + Λ^{β−α})θ`.
pub fn transform_to_f(omega: &SpectralField, theta: &SpectralField, alpha: f64) -> Result<SpectralField> {
    checked(omega, theta, alpha)?;
    Ok(omega - &carrier(theta, alpha)?)
}

/// Inverse of [`transform_to_f`].
pub fn transform_to_vorticity(f: &SpectralField, theta: &SpectralField, alpha: f64) -> Result<SpectralField> {
    checked(f, theta, alpha)?;
    Ok(f + &carrier(theta, alpha)?)
}

/// `f = G − Λ^{β−2α}∂₁θ`, the second-generation correction applied to `G`.
pub fn g_to_f(g: &SpectralField, theta: &SpectralField, alpha: f64) -> Result<SpectralField> {
    checked(g, theta, alpha)?;
    let beta = 1.0 - alpha;
    let q = MultiplierSpec::composite(vec![
        MultiplierKind::LambdaPow(beta - 2.0 * alpha),
        MultiplierKind::Partial(Axis::X1),
    ]);
    Ok(g - &apply_multiplier(theta, &q)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use std::f64::consts::PI;

    #[test]
    fn unit_mode_examples() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let zero = SpectralField::zeros(&g);
        let theta = SpectralField::from_fn(&g, |x, _| x.sin());
        let cos = SpectralField::from_fn(&g, |x, _| x.cos());
        let gv = transform_to_g(&zero, &theta, 0.75).unwrap();
        assert!(gv.max_coeff_diff(&cos.scale(-1.0)) < 1e-15);
        let fv = transform_to_f(&zero, &theta, 0.75).unwrap();
        assert!(fv.max_coeff_diff(&cos.scale(-2.0)) < 1e-15);
    }

    #[test]
    fn zero_temperature_is_identity() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let w = SpectralField::from_fn(&g, |x, y| (x + 2.0 * y).sin());
        let z = SpectralField::zeros(&g);
        assert!(transform_to_g(&w, &z, 0.7).unwrap().max_coeff_diff(&w) == 0.0);
        assert!(transform_to_f(&w, &z, 0.7).unwrap().max_coeff_diff(&w) == 0.0);
    }

    #[test]
    fn alpha_checked() {
        let g = make_grid(8, 2.0 * PI).unwrap();
        let z = SpectralField::zeros(&g);
        assert!(transform_to_g(&z, &z, 0.4).is_err());
        assert!(transform_to_f(&z, &z, 1.2).is_err());
    }
}
