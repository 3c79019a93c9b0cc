use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::{Error, Result};

/// Square 2D FFT of side `m`, realised as row transforms and transposes.
pub(crate) struct Plan2d {
    m: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Plan2d {
    fn new(m: usize) -> Self {
        let mut planner = FftPlanner::new();
        Plan2d {
            m,
            forward: planner.plan_fft_forward(m),
            inverse: planner.plan_fft_inverse(m),
        }
    }

    fn run(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        debug_assert_eq!(data.len(), self.m * self.m);
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(data, &mut scratch);
        transpose(data, self.m);
        fft.process_with_scratch(data, &mut scratch);
        transpose(data, self.m);
    }

    /// Physical samples to Fourier coefficients `c_k = m^{-2} Σ f e^{-ik·x}`.
    pub(crate) fn analyse(&self, data: &mut [Complex64]) {
        self.run(data, &self.forward);
        let scale = 1.0 / (self.m * self.m) as f64;
        data.iter_mut().for_each(|c| *c *= scale);
    }

    /// Fourier coefficients to physical samples `f = Σ c_k e^{ik·x}`.
    pub(crate) fn synthesise(&self, data: &mut [Complex64]) {
        self.run(data, &self.inverse);
    }
}

/// In-place square transpose in cache-sized tiles.
fn transpose(data: &mut [Complex64], m: usize) {
    const TILE: usize = 16;
    for bi in (0..m).step_by(TILE) {
        for bj in (bi..m).step_by(TILE) {
            for i in bi..(bi + TILE).min(m) {
                let start = if bi == bj { i + 1 } else { bj };
                for j in start..(bj + TILE).min(m) {
                    data.swap(i * m + j, j * m + i);
                }
            }
        }
    }
}

/// Signed integer wavenumber stored at FFT index `i` of an `m`-point axis.
pub(crate) fn signed_index(i: usize, m: usize) -> i64 {
    if i < m.div_ceil(2) {
        i as i64
    } else {
        i as i64 - m as i64
    }
}

/// Periodic grid on the box `[0, L)²` with `n` points per axis.
///
/// Arrays are row-major with `x₁` on the fast axis: entry `i₂·n + i₁`
/// holds the sample at `(i₁Δx, i₂Δx)` or the mode `(k₁(i₁), k₂(i₂))`.
/// Wavenumbers are `κ₀·k` with `κ₀ = 2π/L` and integer `k ∈ [−n/2, n/2)`.
pub struct Grid {
    n: usize,
    length: f64,
    kappa0: f64,
    axis: Vec<f64>,
    modulus: Vec<f64>,
    plans: Mutex<HashMap<usize, Arc<Plan2d>>>,
}

impl std::fmt::Debug for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.n)
            .field("length", &self.length)
            .finish()
    }
}

/// Builds a shared grid; see [`Grid`] for conventions.
pub fn make_grid(n: usize, length: f64) -> Result<Arc<Grid>> {
    Grid::new(n, length)
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Arc<Grid>> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n = {n} must be a power of two and at least 8"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!("length = {length} must be positive")));
        }
        let kappa0 = 2.0 * PI / length;
        let axis: Vec<f64> = (0..n).map(|i| kappa0 * signed_index(i, n) as f64).collect();
        let mut modulus = Vec::with_capacity(n * n);
        for i2 in 0..n {
            for i1 in 0..n {
                modulus.push(axis[i1].hypot(axis[i2]));
            }
        }
        Ok(Arc::new(Grid {
            n,
            length,
            kappa0,
            axis,
            modulus,
            plans: Mutex::new(HashMap::new()),
        }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Lattice spacing `2π/L`, also the smallest nonzero `|ξ|`.
    pub fn kappa0(&self) -> f64 {
        self.kappa0
    }

    /// Number of samples, `n²`.
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Physical wavenumber carried by index `i` along either axis.
    pub fn wavenumber(&self, i: usize) -> f64 {
        self.axis[i]
    }

    /// Integer lattice coordinate of index `i`.
    pub fn lattice(&self, i: usize) -> i64 {
        signed_index(i, self.n)
    }

    /// Index along an axis of the integer wavenumber `k`, if representable.
    pub fn index_of(&self, k: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if k < -half || k >= half {
            None
        } else {
            Some(k.rem_euclid(self.n as i64) as usize)
        }
    }

    /// Flat index of the integer mode `(k₁, k₂)`.
    pub fn mode_index(&self, k1: i64, k2: i64) -> Option<usize> {
        Some(self.index_of(k2)? * self.n + self.index_of(k1)?)
    }

    /// `|ξ|` at flat index `idx`.
    pub fn modulus(&self, idx: usize) -> f64 {
        self.modulus[idx]
    }

    pub fn moduli(&self) -> &[f64] {
        &self.modulus
    }

    /// Wavenumber components `(ξ₁, ξ₂)` at flat index `idx`.
    pub fn xi(&self, idx: usize) -> (f64, f64) {
        (self.axis[idx % self.n], self.axis[idx / self.n])
    }

    /// Whether the axis index is the unpaired Nyquist line `k = −n/2`.
    pub fn is_nyquist(&self, i: usize) -> bool {
        i == self.n / 2
    }

    /// Largest `|ξ|` on the lattice (the corner `(n/2, n/2)·κ₀`).
    pub fn max_modulus(&self) -> f64 {
        self.kappa0 * (self.n / 2) as f64 * std::f64::consts::SQRT_2
    }

    /// Physical coordinate of axis index `j`.
    pub fn coordinate(&self, j: usize) -> f64 {
        j as f64 * self.dx()
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        self.n == other.n && self.length == other.length
    }

    /// Cached FFT plan for an `m × m` array on the same box.
    pub(crate) fn plan(&self, m: usize) -> Arc<Plan2d> {
        let mut plans = self.plans.lock().unwrap_or_else(|e| e.into_inner());
        plans
            .entry(m)
            .or_insert_with(|| Arc::new(Plan2d::new(m)))
            .clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_lattice_for_two_pi_box() {
        let g = make_grid(8, 2.0 * PI).unwrap();
        let ks: Vec<i64> = (0..8).map(|i| g.wavenumber(i).round() as i64).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        for i in 0..8 {
            assert!((g.wavenumber(i) - g.lattice(i) as f64).abs() < 1e-15);
        }
        assert_eq!(g.moduli().iter().filter(|&&m| m == 0.0).count(), 1);
    }

    #[test]
    fn spacing_follows_box_length() {
        let g = make_grid(16, PI).unwrap();
        assert!((g.wavenumber(1) - 2.0).abs() < 1e-15);
        assert!((g.kappa0() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(make_grid(7, 2.0 * PI).is_err());
        assert!(make_grid(4, 2.0 * PI).is_err());
        assert!(make_grid(16, 0.0).is_err());
        assert!(make_grid(16, -1.0).is_err());
    }

    #[test]
    fn mode_lookup_round_trips() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        for k1 in -8..8 {
            for k2 in -8..8 {
                let idx = g.mode_index(k1, k2).unwrap();
                let (x1, x2) = g.xi(idx);
                assert_eq!((x1 as i64, x2 as i64), (k1, k2));
            }
        }
        assert!(g.mode_index(8, 0).is_none());
    }
}
