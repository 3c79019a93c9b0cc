use crate::spectral::{Advector, MultiplierSpec, SpectralField, SymbolTable, VectorField};
use crate::{Error, Result};

/// Largest relative spectral divergence accepted for a transporting field.
pub const DIVERGENCE_TOLERANCE: f64 = 1e-12;

pub(crate) fn require_divergence_free(v: &VectorField) -> Result<()> {
    let d = v.relative_divergence();
    if d > DIVERGENCE_TOLERANCE {
        Err(Error::NotDivergenceFree(d))
    } else {
        Ok(())
    }
}

/// A tabulated operator `A` ready to form `[A, V·∇]φ` repeatedly.
pub struct CommutatorOp {
    table: SymbolTable,
}

impl CommutatorOp {
    pub fn new(grid: &std::sync::Arc<crate::spectral::Grid>, op: &MultiplierSpec) -> Result<Self> {
        Ok(CommutatorOp {
            table: SymbolTable::new(grid, op)?,
        })
    }

    /// `A(P(V·∇φ)) − P(V·∇(Aφ))` for an already lifted velocity.
    pub fn apply_with(&self, adv: &Advector, phi: &SpectralField) -> SpectralField {
        let first = self.table.apply(&adv.advect(phi));
        let second = adv.advect(&self.table.apply(phi));
        &first - &second
    }

    pub fn apply(&self, v: &VectorField, phi: &SpectralField) -> Result<SpectralField> {
        require_divergence_free(v)?;
        if !v.grid().same_as(phi.grid()) {
            return Err(Error::GridMismatch);
        }
        Ok(self.apply_with(&Advector::new(v), phi))
    }
}

/// `[op, V·∇]φ = op(V·∇φ) − V·∇(op φ)` with dealiased products; bilinear
/// in `(V, φ)`.
pub fn commutator_field(op: &MultiplierSpec, v: &VectorField, phi: &SpectralField) -> Result<SpectralField> {
    CommutatorOp::new(phi.grid(), op)?.apply(v, phi)
}
