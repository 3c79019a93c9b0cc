use std::sync::Arc;

use super::field::SpectralField;
use super::grid::Grid;
use super::multiplier::{apply_multiplier, Axis, MultiplierKind, MultiplierSpec};
use crate::{Error, Result};

/// A planar vector field, one spectral field per component.
#[derive(Clone, Debug)]
pub struct VectorField(pub [SpectralField; 2]);

impl VectorField {
    pub fn new(c1: SpectralField, c2: SpectralField) -> Self {
        assert!(c1.grid().same_as(c2.grid()), "components on different grids");
        VectorField([c1, c2])
    }

    pub fn zeros(grid: &Arc<Grid>) -> Self {
        VectorField([SpectralField::zeros(grid), SpectralField::zeros(grid)])
    }

    /// Spatially constant vector `(a, b)`.
    pub fn constant(grid: &Arc<Grid>, a: f64, b: f64) -> Self {
        VectorField([SpectralField::constant(grid, a), SpectralField::constant(grid, b)])
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.0[0].grid()
    }

    pub fn component(&self, axis: Axis) -> &SpectralField {
        &self.0[axis.index()]
    }

    pub fn map(&self, f: impl Fn(&SpectralField) -> SpectralField) -> Self {
        VectorField([f(&self.0[0]), f(&self.0[1])])
    }

    pub fn try_map(&self, f: impl Fn(&SpectralField) -> Result<SpectralField>) -> Result<Self> {
        Ok(VectorField([f(&self.0[0])?, f(&self.0[1])?]))
    }

    pub fn lincomb(&self, a: f64, other: &VectorField, b: f64) -> Self {
        VectorField([
            self.0[0].lincomb(a, &other.0[0], b),
            self.0[1].lincomb(a, &other.0[1], b),
        ])
    }

    pub fn scale(&self, a: f64) -> Self {
        self.map(|c| c.scale(a))
    }

    pub fn divergence(&self) -> SpectralField {
        let d1 = derivative(&self.0[0], Axis::X1);
        let d2 = derivative(&self.0[1], Axis::X2);
        &d1 + &d2
    }

    /// Scalar curl `∂₁v₂ − ∂₂v₁`.
    pub fn curl(&self) -> SpectralField {
        let a = derivative(&self.0[1], Axis::X1);
        let b = derivative(&self.0[0], Axis::X2);
        &a - &b
    }

    /// Pointwise Euclidean magnitude on the grid.
    pub fn magnitude_samples(&self) -> Vec<f64> {
        let (a, b) = (self.0[0].samples(), self.0[1].samples());
        a.iter().zip(b).map(|(x, y)| x.hypot(*y)).collect()
    }

    /// Grid maximum of the pointwise magnitude.
    pub fn sup_norm(&self) -> f64 {
        self.magnitude_samples().into_iter().fold(0.0, f64::max)
    }

    /// `L²(box)` norm by Parseval.
    pub fn l2(&self) -> f64 {
        self.0[0].l2().hypot(self.0[1].l2())
    }

    /// Largest spectral divergence coefficient relative to `max |ξ||v̂|`.
    pub fn relative_divergence(&self) -> f64 {
        let div = self.divergence().coeff_max();
        if div == 0.0 {
            return 0.0;
        }
        let g = self.grid();
        let scale = (0..g.len())
            .map(|i| g.modulus(i) * self.0[0].coeffs()[i].norm().hypot(self.0[1].coeffs()[i].norm()))
            .fold(0.0, f64::max);
        div / scale.max(f64::MIN_POSITIVE)
    }

    /// Pointwise Frobenius norm of the velocity gradient.
    pub fn gradient_magnitude_samples(&self) -> Vec<f64> {
        let parts: Vec<SpectralField> = self
            .0
            .iter()
            .flat_map(|c| Axis::both().map(|ax| derivative(c, ax)))
            .collect();
        let samples: Vec<&[f64]> = parts.iter().map(|p| p.samples()).collect();
        (0..self.grid().len())
            .map(|i| samples.iter().map(|s| s[i] * s[i]).sum::<f64>().sqrt())
            .collect()
    }
}

/// `∂_j f` (zero on the Nyquist line of axis `j`).
pub fn derivative(f: &SpectralField, axis: Axis) -> SpectralField {
    let grid = f.grid().clone();
    let n = grid.n();
    f.map_coeffs(|idx, c| {
        let i = if axis == Axis::X1 { idx % n } else { idx / n };
        if grid.is_nyquist(i) {
            Default::default()
        } else {
            c * rustfft::num_complex::Complex64::new(0.0, grid.wavenumber(i))
        }
    })
}

pub fn gradient(f: &SpectralField) -> VectorField {
    VectorField([derivative(f, Axis::X1), derivative(f, Axis::X2)])
}

/// Velocity `u = ∇⊥Δ^{−1}ω` of a mean-free vorticity.
pub fn biot_savart(omega: &SpectralField) -> Result<VectorField> {
    omega.require_mean_free()?;
    Ok(biot_savart_unchecked(omega))
}

pub(crate) fn biot_savart_unchecked(omega: &SpectralField) -> VectorField {
    let comp = |ax| {
        apply_multiplier(omega, &MultiplierSpec::inv_lap_perp_grad(ax))
            .expect("annihilating rule is always valid")
    };
    VectorField([comp(Axis::X1), comp(Axis::X2)])
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.5 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("alpha = {alpha} must lie in (1/2, 1)")))
    }
}

/// Symbol `R_α(I + Λ^{β−α})` that maps temperature to the velocity-carrying
/// part of the vorticity.
pub fn theta_vorticity_kind(alpha: f64) -> MultiplierKind {
    let beta = 1.0 - alpha;
    MultiplierKind::Composite(vec![
        MultiplierKind::RieszAlpha(alpha),
        MultiplierKind::Sum(vec![
            MultiplierKind::LambdaPow(0.0),
            MultiplierKind::LambdaPow(beta - alpha),
        ]),
    ])
}

/// Splits the velocity into `u_f = ∇⊥Δ^{−1}f` and
/// `u_θ = ∇⊥Δ^{−1}R_α(I + Λ^{β−α})θ`.
pub fn velocity_decomposition(
    f: &SpectralField,
    theta: &SpectralField,
    alpha: f64,
) -> Result<(VectorField, VectorField)> {
    check_alpha(alpha)?;
    theta.require_mean_free()?;
    let u_f = biot_savart(f)?;
    let carrier = apply_multiplier(theta, &MultiplierSpec::new(theta_vorticity_kind(alpha)))?;
    Ok((u_f, biot_savart_unchecked(&carrier)))
}
