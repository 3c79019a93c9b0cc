//! The critical fractional Boussinesq system in four formulations.
//!
//! * vorticity: `ω_t + u·∇ω + νΛ^αω = ∂₁θ`, `θ_t + u·∇θ + κΛ^βθ = 0`;
//! * `G = ω − R_αθ`: `G_t + u·∇G + Λ^αG = Λ^{β−α}∂₁θ + [R_α, u·∇]θ`;
//! * `f = G − Λ^{β−2α}∂₁θ`:
//!   `f_t + u·∇f + Λ^αf = Λ^{2(β−α)}∂₁θ + [R_α, u·∇]θ + [Λ^{β−2α}∂₁, u·∇]θ`;
//! * the rescaled `(F, Θ)` pair, `θ(t, x) = Θ(ε₀^β t, ε₀x)`, whose equation
//!   carries the prefactors listed in [`Coefficients`].
//!
//! Velocity is always `u = ∇⊥Δ^{−1}ω`, with `ω` reconstructed from the
//! unknown; all products are dealiased, and the commutators are evaluated
//! literally as operator-of-product minus product-of-operator.

mod init;
mod integrator;
mod params;
mod system;
mod transforms;

pub use init::{gaussian_bump, gaussian_pair, random_field, random_state, zero_state, Spectrum};
pub use integrator::{step, Integrator, DEFAULT_CFL};
pub use params::ModelParams;
pub use system::{
    leray, rhs_f_system, rhs_g, rhs_primitive, rhs_scaled, rhs_vorticity, Coefficients, FTerms, Model,
    SimState, Variable,
};
pub use transforms::{g_to_f, g_to_vorticity, transform_to_f, transform_to_g, transform_to_vorticity};
