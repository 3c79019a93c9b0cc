//! Energy ledgers and regularity monitors along `f` trajectories.
//!
//! For a configuration `(s, κ, p)` three functionals are tracked:
//! `½‖Λ^sF‖²`, `½‖Λ^κΘ‖²` and `(1/p)‖F‖_{L^p}^p`. Each satisfies
//! `d/dt + dissipation = Σ signed terms`, hence
//! `d/dt + dissipation ≤ Σ|terms|`. All pairings are exact quadratures of
//! band-limited integrands: Parseval for the Sobolev pieces and an
//! `(pn/2)²` grid for the `L^p` piece. Rates come from finite differences of
//! stored values, never from the integrator.

mod criteria;
mod energy;
mod exponents;
mod ledger;

pub use criteria::{criteria_monitor, CriteriaReport};
pub use energy::{energy_terms, EnergyEvaluator, EnergyTerms, LedgerConfig, Terms};
pub use exponents::{
    besov_indices, delta, gamma, interpolation_weight, q0, q_window, ExponentTable, DEFAULT_RHO,
};
pub use ledger::{
    cadence, ledger_run, rates_fourth_order, rates_second_order, simpson, EnergyLedgerRow, LedgerReport,
    LedgerVerdict,
};
