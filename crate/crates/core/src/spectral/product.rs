//! Alias-free products. Factors are zero-padded to a `3n/2` grid, multiplied
//! pointwise and truncated back, which yields the exact product restricted
//! to the modes `|k_i| < n/2`.

use std::sync::Arc;

use rustfft::num_complex::Complex64;

use super::field::{truncate_spectrum, SpectralField};
use super::grid::Grid;
use super::vector::{gradient, VectorField};

pub(crate) fn padded_size(n: usize) -> usize {
    3 * n / 2
}

/// Samples of `field` on the dealiasing grid.
pub(crate) fn lift(field: &SpectralField) -> Vec<f64> {
    field.resample(padded_size(field.grid().n()))
}

/// Projects padded-grid samples back onto `grid`.
pub(crate) fn project(grid: &Arc<Grid>, values: &[f64]) -> SpectralField {
    let n = grid.n();
    let m = padded_size(n);
    let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    grid.plan(m).analyse(&mut data);
    SpectralField::from_parts(grid.clone(), truncate_spectrum(&data, m, n), true)
}

/// Dealiased product `P(a·b)`.
pub fn product(a: &SpectralField, b: &SpectralField) -> SpectralField {
    assert!(a.grid().same_as(b.grid()), "fields on different grids");
    let (pa, pb) = (lift(a), lift(b));
    let values: Vec<f64> = pa.iter().zip(&pb).map(|(x, y)| x * y).collect();
    project(a.grid(), &values)
}

/// Dealiased transport term `P(u·∇g)`.
pub fn advect(u: &VectorField, g: &SpectralField) -> SpectralField {
    Advector::new(u).advect(g)
}

/// Holds a lifted velocity so that several scalars can be transported by
/// the same field without re-lifting it.
pub struct Advector {
    grid: Arc<Grid>,
    lifted: [Vec<f64>; 2],
}

impl Advector {
    pub fn new(u: &VectorField) -> Self {
        Advector {
            grid: u.grid().clone(),
            lifted: [lift(&u.0[0]), lift(&u.0[1])],
        }
    }

    pub fn advect(&self, g: &SpectralField) -> SpectralField {
        let grad = gradient(g);
        let (g1, g2) = (lift(&grad.0[0]), lift(&grad.0[1]));
        let values: Vec<f64> = (0..g1.len())
            .map(|i| self.lifted[0][i] * g1[i] + self.lifted[1][i] * g2[i])
            .collect();
        project(&self.grid, &values)
    }

    /// Velocity component samples on the dealiasing grid.
    pub fn lifted(&self) -> &[Vec<f64>; 2] {
        &self.lifted
    }
}
