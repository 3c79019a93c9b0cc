//! Monte-Carlo measurement of commutator constants.
//!
//! Commutators `[A, V·∇]φ = A(V·∇φ) − V·∇(Aφ)` are formed with dealiased
//! products. Each registered estimate has its exponents validated against
//! the hypotheses under which it is claimed; sampling then records
//! `LHS/RHS` over random divergence-free velocities and test functions on
//! two or more grids. The largest ratio is a lower bound of the best torus
//! constant, and growth between resolutions is what is judged.

mod commutator;
mod ensemble;
mod estimate;
mod registry;
mod representation;

pub use commutator::{commutator_field, CommutatorOp, DIVERGENCE_TOLERANCE};
pub use ensemble::{
    band_field, bottom_shell, draw, perp_gradient_of, random_divfree_field, top_shell, Band, Draw, Ensemble,
};
pub use estimate::{
    estimate_constant, evaluate, EstimateReport, GridEstimate, Sample, MAX_RESAMPLES, RHS_FLOOR, STABLE_GROWTH,
};
pub use registry::{
    canary_registry, default_registry, InequalityId, InequalitySpec, RieszVariant, SpecParams, NEAR_BOUNDARY,
};
pub use representation::{representation_check, RepresentationReport, KERNEL_TAIL_LIMIT};
