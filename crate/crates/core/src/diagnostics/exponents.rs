//! Exponent bookkeeping used by the a-priori estimates.

/// Default for the small parameter `ρ` in `γ = β/2 − 2ρ`.
pub const DEFAULT_RHO: f64 = 0.01;

/// `γ = β/2 − 2ρ`.
pub fn gamma(beta: f64, rho: f64) -> f64 {
    beta / 2.0 - 2.0 * rho
}

/// Interpolation weight `a = (3 − 4α)/(2β)`.
pub fn interpolation_weight(alpha: f64) -> f64 {
    (3.0 - 4.0 * alpha) / (2.0 * (1.0 - alpha))
}

/// `q₀ = 4(2α − 1)/(3αβ + 6α − 4)`.
pub fn q0(alpha: f64) -> f64 {
    let beta = 1.0 - alpha;
    4.0 * (2.0 * alpha - 1.0) / (3.0 * alpha * beta + 6.0 * alpha - 4.0)
}

/// `δ = (3 − 4α)/(α/2)`.
pub fn delta(alpha: f64) -> f64 {
    (3.0 - 4.0 * alpha) / (alpha / 2.0)
}

/// Regularity and integrability `(3α − 2, 6/(3α − 2))` of the Besov
/// criterion for `f`.
pub fn besov_indices(alpha: f64) -> (f64, f64) {
    let s = 3.0 * alpha - 2.0;
    (s, 6.0 / s)
}

/// Open window `(2/α, 2/(1−α))` of Lebesgue exponents controlled by the
/// dissipation.
pub fn q_window(alpha: f64) -> (f64, f64) {
    (2.0 / alpha, 2.0 / (1.0 - alpha))
}

/// All exponents for one `α`, with the claimed validity ranges evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentTable {
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    pub gamma: f64,
    pub a: f64,
    pub q0: f64,
    pub delta: f64,
    pub besov: (f64, f64),
    pub q_window: (f64, f64),
}

impl ExponentTable {
    pub fn new(alpha: f64, rho: f64) -> Self {
        let beta = 1.0 - alpha;
        ExponentTable {
            alpha,
            beta,
            rho,
            gamma: gamma(beta, rho),
            a: interpolation_weight(alpha),
            q0: q0(alpha),
            delta: delta(alpha),
            besov: besov_indices(alpha),
            q_window: q_window(alpha),
        }
    }

    pub fn q0_at_least_one(&self) -> bool {
        self.q0 >= 1.0
    }

    /// `δ ∈ (0, 1)`; true only for `2/3 < α < 3/4`.
    pub fn delta_in_unit_interval(&self) -> bool {
        self.delta > 0.0 && self.delta < 1.0
    }

    /// Whether the `L⁶` criterion exponent lies in the dissipation window.
    pub fn six_in_window(&self) -> bool {
        self.q_window.0 < 6.0 && 6.0 < self.q_window.1
    }
}
