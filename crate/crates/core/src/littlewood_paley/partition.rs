use std::sync::Arc;

use rustfft::num_complex::Complex64;

use super::zeta;
use crate::spectral::{lp_of_samples, Grid, SpectralField};
use crate::{Error, Result};

/// Block symbols `ζ(2^{−j}ξ)` for `jmin ≤ j ≤ jmax` tabulated on a grid.
pub struct DyadicPartition {
    grid: Arc<Grid>,
    jmin: i32,
    jmax: i32,
    tables: Vec<Vec<f64>>,
}

/// Tabulates the partition after checking that it covers every nonzero
/// lattice wavenumber, `2^{jmin} ≤ 2π/L` and `max|ξ| ≤ 2^{jmax}`.
pub fn build_partition(grid: &Arc<Grid>, jmin: i32, jmax: i32) -> Result<DyadicPartition> {
    if jmin > jmax {
        return Err(Error::InvalidParameter(format!("jmin = {jmin} exceeds jmax = {jmax}")));
    }
    if 2f64.powi(jmax) < grid.max_modulus() {
        return Err(Error::InvalidParameter(format!(
            "jmax = {jmax} does not reach the largest wavenumber {:.3}",
            grid.max_modulus()
        )));
    }
    if 2f64.powi(jmin) > grid.kappa0() {
        return Err(Error::InvalidParameter(format!(
            "jmin = {jmin} starts above the smallest wavenumber {:.3}",
            grid.kappa0()
        )));
    }
    let tables = (jmin..=jmax)
        .map(|j| {
            let s = 2f64.powi(-j);
            grid.moduli().iter().map(|&m| if m == 0.0 { 0.0 } else { zeta(s * m) }).collect()
        })
        .collect();
    Ok(DyadicPartition {
        grid: grid.clone(),
        jmin,
        jmax,
        tables,
    })
}

impl DyadicPartition {
    /// Tightest covering partition for `grid`.
    pub fn for_grid(grid: &Arc<Grid>) -> Self {
        let jmin = grid.kappa0().log2().floor() as i32;
        let jmax = grid.max_modulus().log2().ceil() as i32;
        build_partition(grid, jmin, jmax).expect("tight bounds cover the lattice")
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn jmin(&self) -> i32 {
        self.jmin
    }

    pub fn jmax(&self) -> i32 {
        self.jmax
    }

    fn check(&self, j: i32) -> Result<()> {
        if j < self.jmin || j > self.jmax {
            Err(Error::OutOfRange {
                what: "dyadic block",
                index: j as i64,
                lo: self.jmin as i64,
                hi: self.jmax as i64,
            })
        } else {
            Ok(())
        }
    }

    /// Symbol values of block `j`.
    pub fn symbol(&self, j: i32) -> Result<&[f64]> {
        self.check(j)?;
        Ok(&self.tables[(j - self.jmin) as usize])
    }

    /// `Σ_j ζ(2^{−j}ξ)` at every lattice point.
    pub fn partition_sum(&self) -> Vec<f64> {
        let mut total = vec![0.0; self.grid.len()];
        for t in &self.tables {
            total.iter_mut().zip(t).for_each(|(s, z)| *s += z);
        }
        total
    }

    /// `Δ_j f`.
    pub fn block(&self, f: &SpectralField, j: i32) -> Result<SpectralField> {
        let table = self.symbol(j)?;
        if !f.grid().same_as(&self.grid) {
            return Err(Error::GridMismatch);
        }
        let coeffs: Vec<Complex64> = f.coeffs().iter().zip(table).map(|(c, z)| c * z).collect();
        SpectralField::from_coeffs(&self.grid, coeffs, f.is_real())
    }

    pub fn blocks(&self, f: &SpectralField) -> Result<BlockSet> {
        let blocks = (self.jmin..=self.jmax)
            .map(|j| self.block(f, j))
            .collect::<Result<Vec<_>>>()?;
        let mut remainder = f.clone();
        for b in &blocks {
            remainder = &remainder - b;
        }
        Ok(BlockSet {
            jmin: self.jmin,
            blocks,
            remainder,
        })
    }

    /// Pointwise `(Σ_j 2^{2j·w}|Δ_j f|²)^{1/2}` on the grid.
    pub fn square_function(&self, f: &SpectralField, weight: f64) -> Result<Vec<f64>> {
        f.require_mean_free()?;
        let mut acc = vec![0.0; self.grid.len()];
        for j in self.jmin..=self.jmax {
            let b = self.block(f, j)?;
            let w = 2f64.powf(2.0 * j as f64 * weight);
            acc.iter_mut().zip(b.samples()).for_each(|(a, v)| *a += w * v * v);
        }
        Ok(acc.into_iter().map(f64::sqrt).collect())
    }

    /// `‖f‖_{B^s_{r,∞}} = sup_j 2^{js}‖Δ_j f‖_{L^r}`.
    pub fn besov_norm(&self, f: &SpectralField, s: f64, r: f64) -> Result<f64> {
        if r < 1.0 {
            return Err(Error::InvalidParameter(format!("integrability r = {r} must be at least 1")));
        }
        f.require_mean_free()?;
        let da = self.grid.dx().powi(2);
        let mut best = 0.0f64;
        for j in self.jmin..=self.jmax {
            let b = self.block(f, j)?;
            best = best.max(2f64.powf(j as f64 * s) * lp_of_samples(b.samples(), r, da)?);
        }
        Ok(best)
    }
}

/// All blocks of one field plus the low remainder.
pub struct BlockSet {
    jmin: i32,
    blocks: Vec<SpectralField>,
    remainder: SpectralField,
}

impl BlockSet {
    /// Smallest index, the remainder at `jmin − 1`.
    pub fn lowest(&self) -> i32 {
        self.jmin - 1
    }

    pub fn highest(&self) -> i32 {
        self.jmin + self.blocks.len() as i32 - 1
    }

    /// Block `j`; index `jmin − 1` is the low remainder.
    pub fn get(&self, j: i32) -> Option<&SpectralField> {
        if j == self.jmin - 1 {
            Some(&self.remainder)
        } else if j >= self.jmin && j <= self.highest() {
            Some(&self.blocks[(j - self.jmin) as usize])
        } else {
            None
        }
    }

    pub fn remainder(&self) -> &SpectralField {
        &self.remainder
    }

    /// `Σ_{lo ≤ j ≤ hi} Δ_j f`, clipped to the available blocks.
    pub fn sum_range(&self, lo: i32, hi: i32) -> SpectralField {
        let mut acc = SpectralField::zeros(self.remainder.grid());
        for j in lo.max(self.lowest())..=hi.min(self.highest()) {
            acc = &acc + self.get(j).expect("index within range");
        }
        acc
    }

    /// `f_{<k}`, remainder included.
    pub fn below(&self, k: i32) -> SpectralField {
        self.sum_range(i32::MIN / 2, k - 1)
    }

    /// `f_{∼k}` with the given offset.
    pub fn near(&self, k: i32, offset: i32) -> SpectralField {
        self.sum_range(k - offset, k + offset)
    }

    pub fn reconstruct(&self) -> SpectralField {
        self.sum_range(self.lowest(), self.highest())
    }
}
