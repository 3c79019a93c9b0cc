use crate::spectral::check_alpha;
use crate::{Error, Result};

/// Physical parameters. `β = 1 − α` is always derived, never stored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    alpha: f64,
    nu: f64,
    kappa: f64,
    eps0: f64,
}

impl ModelParams {
    /// Canonical configuration `ν = κ = 1`, unscaled (`ε₀ = 1`).
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(ModelParams {
            alpha,
            nu: 1.0,
            kappa: 1.0,
            eps0: 1.0,
        })
    }

    pub fn with_dissipation(mut self, nu: f64, kappa: f64) -> Result<Self> {
        if !(nu >= 0.0 && kappa >= 0.0 && nu.is_finite() && kappa.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "dissipation coefficients nu = {nu}, kappa = {kappa} must be finite and non-negative"
            )));
        }
        self.nu = nu;
        self.kappa = kappa;
        Ok(self)
    }

    pub fn with_eps0(mut self, eps0: f64) -> Result<Self> {
        if !(eps0 > 0.0 && eps0 <= 1.0) {
            return Err(Error::InvalidParameter(format!("scaling eps0 = {eps0} must lie in (0, 1]")));
        }
        self.eps0 = eps0;
        Ok(self)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        1.0 - self.alpha
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn eps0(&self) -> f64 {
        self.eps0
    }

    /// The `G` and `f` equations rely on `ν = κ = 1` for their cancellations.
    pub fn is_canonical(&self) -> bool {
        self.nu == 1.0 && self.kappa == 1.0
    }

    pub(crate) fn require_canonical(&self) -> Result<()> {
        if self.is_canonical() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "the G and f formulations need nu = kappa = 1 (got {}, {})",
                self.nu, self.kappa
            )))
        }
    }
}
