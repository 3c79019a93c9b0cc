//! Periodic grids, Fourier multipliers, alias-free products and norms.
//!
//! Fields live on the torus `[0, L)²`. Coefficients are normalised so that
//! `f(x) = Σ_k c_k e^{iξ_k·x}`, hence `‖f‖²_{L²} = L² Σ |c_k|²`. Every
//! singular symbol annihilates the zero mode; negative powers therefore act
//! on mean-free fields only.

mod field;
mod grid;
mod multiplier;
mod norms;
mod product;
mod snapshot;
mod vector;

pub use field::SpectralField;
pub use grid::{make_grid, Grid};
pub use multiplier::{
    apply_multiplier, Axis, MultiplierKind, MultiplierSpec, OriginValue, SymbolTable, ZeroModeRule,
};
pub use norms::{
    homogeneous_sobolev_norm, lp_norm, lp_norm_vector, lp_of_samples, sobolev_norm, sup_norm_refined,
};
pub use product::{advect, product, Advector};
pub use snapshot::{read_snapshot, write_snapshot, Snapshot};
pub use vector::{
    biot_savart, derivative, gradient, theta_vorticity_kind, velocity_decomposition, VectorField,
};

pub(crate) use vector::check_alpha;

pub use rustfft::num_complex::Complex64;
