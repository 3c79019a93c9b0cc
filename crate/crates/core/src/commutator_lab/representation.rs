use rayon::prelude::*;

use super::commutator::commutator_field;
use crate::spectral::{derivative, Axis, MultiplierSpec, SpectralField, SymbolTable, VectorField};
use crate::{Error, Result};

/// Kernel magnitude at the box edge, relative to its peak, above which the
/// periodised kernel is reported as aliased.
pub const KERNEL_TAIL_LIMIT: f64 = 1e-10;

/// Spectral commutator against its physical-space kernel form.
#[derive(Clone, Debug, PartialEq)]
pub struct RepresentationReport {
    pub k: i32,
    /// `max_x |spectral − quadrature|`.
    pub residual: f64,
    /// `max |f| · max |∇g|`.
    pub scale: f64,
    pub relative: f64,
    /// Largest `|K|` on the box edge over `max |K|`.
    pub kernel_tail: f64,
    pub kernel_aliased: bool,
    /// Both inputs live below a quarter of the grid, where the quadrature
    /// is exact.
    pub band_limited: bool,
}

fn below_quarter(f: &SpectralField) -> bool {
    let g = f.grid();
    let n = g.n();
    let quarter = (n / 4) as i64;
    let floor = 1e-14 * f.coeff_max();
    f.coeffs().iter().enumerate().all(|(i, c)| {
        c.norm() <= floor || (g.lattice(i % n).abs() < quarter && g.lattice(i / n).abs() < quarter)
    })
}

/// Compares `[Δ_k, g·∇]f` computed spectrally with the kernel form
/// `∫∇K(x−y)·[g(y) − g(x)] f(y) dy`, where `K` is the periodic kernel of
/// the block symbol `ζ(2^{−k}ξ)`, evaluated by direct quadrature over the
/// grid. The identity needs `∇·g = 0`.
pub fn representation_check(k: i32, g: &VectorField, f: &SpectralField) -> Result<RepresentationReport> {
    let grid = f.grid().clone();
    if !grid.same_as(g.grid()) {
        return Err(Error::GridMismatch);
    }
    let spectral = commutator_field(&MultiplierSpec::bump(k), g, f)?;
    let n = grid.n();
    let area = grid.length().powi(2);
    let symbol = SymbolTable::new(&grid, &MultiplierSpec::bump(k))?;
    let coeffs = symbol.values().iter().map(|z| z / area).collect();
    let kernel = SpectralField::from_coeffs(&grid, coeffs, true)?;
    let kx = derivative(&kernel, Axis::X1);
    let ky = derivative(&kernel, Axis::X2);
    let (kx, ky) = (kx.samples(), ky.samples());
    let (g1, g2, fs) = (g.0[0].samples(), g.0[1].samples(), f.samples());
    let cell = grid.dx() * grid.dx();
    let quadrature: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|x| {
            let (x1, x2) = (x % n, x / n);
            let mut acc = 0.0;
            for y2 in 0..n {
                let row = ((x2 + n - y2) % n) * n;
                for y1 in 0..n {
                    let y = y2 * n + y1;
                    let d = row + (x1 + n - y1) % n;
                    acc += (kx[d] * (g1[y] - g1[x]) + ky[d] * (g2[y] - g2[x])) * fs[y];
                }
            }
            acc * cell
        })
        .collect();
    let residual = spectral
        .samples()
        .iter()
        .zip(&quadrature)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let f_max = fs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let grad_max = g.gradient_magnitude_samples().into_iter().fold(0.0, f64::max);
    let scale = f_max * grad_max;
    let ks = kernel.samples();
    let peak = ks.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let edge = (0..n)
        .flat_map(|j| [(n / 2) * n + j, j * n + n / 2])
        .map(|i| ks[i].abs())
        .fold(0.0, f64::max);
    let kernel_tail = if peak > 0.0 { edge / peak } else { 0.0 };
    Ok(RepresentationReport {
        k,
        residual,
        scale,
        relative: if scale > 0.0 { residual / scale } else { residual },
        kernel_tail,
        kernel_aliased: kernel_tail > KERNEL_TAIL_LIMIT,
        band_limited: g.0.iter().all(below_quarter) && below_quarter(f),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use std::f64::consts::PI;

    #[test]
    fn trivial_inputs_give_zero_on_both_sides() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let f = SpectralField::from_fn(&g, |x, y| (2.0 * x - y).cos());
        let v = VectorField::constant(&g, 0.3, -0.8);
        let r = representation_check(1, &v, &f).unwrap();
        assert!(r.residual < 1e-13);
        let w = VectorField::new(
            SpectralField::from_fn(&g, |_, y| y.sin()),
            SpectralField::from_fn(&g, |x, _| (2.0 * x).cos()),
        );
        let r = representation_check(1, &w, &SpectralField::constant(&g, 2.0)).unwrap();
        assert!(r.residual < 1e-13);
        assert!(r.band_limited);
    }
}
