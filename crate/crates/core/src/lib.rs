//! Pseudo-spectral laboratory for the two-dimensional Boussinesq system with
//! critical fractional dissipation `Λ^α` on the velocity and `Λ^β` on the
//! temperature (`α + β = 1`, `1/2 < α < 1`), posed on a periodic torus.
//!
//! The crate is organised in layers:
//!
//! * [`spectral`]: grids, Fourier multipliers, dealiased products, norms.
//! * [`littlewood_paley`]: dyadic blocks, square functions, Besov norms,
//!   paraproducts and a discrete maximal function.
//! * [`model`]: the vorticity, `G`, `f` and scaled formulations together with
//!   an integrating-factor RK4 integrator.
//! * [`diagnostics`]: energy ledgers and regularity-criterion monitors.
//! * [`commutator_lab`]: Monte-Carlo measurement of commutator constants.
//!
//! All constants measured by this crate are torus constants; they are
//! sampled lower bounds, never proofs.

pub mod commutator_lab;
pub mod diagnostics;
mod error;
pub mod littlewood_paley;
pub mod model;
pub mod spectral;

pub use error::{Error, Result};
