use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use rustfft::num_complex::Complex64;

use super::grid::{signed_index, Grid};
use crate::{Error, Result};

/// A scalar field held by its Fourier coefficients.
///
/// Coefficients follow `f(x) = Σ_k c_k e^{iξ_k·x}`. When the `real` flag is
/// set the coefficients are kept exactly Hermitian, `c(−k) = conj c(k)`,
/// and physical samples are computed lazily and cached.
#[derive(Clone)]
pub struct SpectralField {
    grid: Arc<Grid>,
    coeffs: Vec<Complex64>,
    real: bool,
    samples: OnceLock<Vec<f64>>,
}

impl std::fmt::Debug for SpectralField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralField")
            .field("grid", &self.grid)
            .field("real", &self.real)
            .finish_non_exhaustive()
    }
}

impl SpectralField {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Self::from_parts(grid.clone(), vec![Complex64::default(); grid.len()], true)
    }

    pub fn constant(grid: &Arc<Grid>, value: f64) -> Self {
        let mut coeffs = vec![Complex64::default(); grid.len()];
        coeffs[0] = Complex64::new(value, 0.0);
        Self::from_parts(grid.clone(), coeffs, true)
    }

    /// Real field from row-major physical samples (`x₁` fastest); the
    /// samples are kept as given.
    pub fn from_samples(grid: &Arc<Grid>, samples: &[f64]) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} samples, got {}",
                grid.len(),
                samples.len()
            )));
        }
        let mut data: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        grid.plan(grid.n()).analyse(&mut data);
        let field = Self::from_parts(grid.clone(), data, true);
        // the given samples stay authoritative, so snapshots round-trip bit for bit
        let _ = field.samples.set(samples.to_vec());
        Ok(field)
    }

    /// Real field sampled from a closure of the physical coordinates.
    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = grid.n();
        let mut samples = Vec::with_capacity(grid.len());
        for j2 in 0..n {
            for j1 in 0..n {
                samples.push(f(grid.coordinate(j1), grid.coordinate(j2)));
            }
        }
        Self::from_samples(grid, &samples).expect("sample count matches grid")
    }

    /// Field from explicit coefficients. A real field must be Hermitian to
    /// relative `1e−12`; the residual asymmetry is projected away.
    pub fn from_coeffs(grid: &Arc<Grid>, coeffs: Vec<Complex64>, real: bool) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                coeffs.len()
            )));
        }
        if real {
            let defect = hermitian_defect(&coeffs, grid.n());
            let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
            if defect > 1e-12 * scale.max(f64::MIN_POSITIVE) {
                return Err(Error::InvalidParameter(format!(
                    "coefficients are not Hermitian (defect {defect:e})"
                )));
            }
        }
        Ok(Self::from_parts(grid.clone(), coeffs, real))
    }

    /// Internal constructor; Hermitian symmetry is re-imposed exactly.
    pub(crate) fn from_parts(grid: Arc<Grid>, mut coeffs: Vec<Complex64>, real: bool) -> Self {
        if real {
            symmetrize(&mut coeffs, grid.n());
        }
        SpectralField {
            grid,
            coeffs,
            real,
            samples: OnceLock::new(),
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    /// Coefficient of the integer mode `(k₁, k₂)`; zero if not on the lattice.
    pub fn coeff(&self, k1: i64, k2: i64) -> Complex64 {
        self.grid
            .mode_index(k1, k2)
            .map_or(Complex64::default(), |i| self.coeffs[i])
    }

    /// Real physical samples (the real part for a complex field).
    pub fn samples(&self) -> &[f64] {
        self.samples.get_or_init(|| {
            self.samples_complex().into_iter().map(|z| z.re).collect()
        })
    }

    pub fn samples_complex(&self) -> Vec<Complex64> {
        let mut data = self.coeffs.clone();
        self.grid.plan(self.grid.n()).synthesise(&mut data);
        data
    }

    /// Box average, the real part of the zero mode.
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    pub fn is_mean_free(&self) -> bool {
        let c0 = self.coeffs[0].norm();
        c0 == 0.0 || c0 <= 1e-12 * self.coeff_norm()
    }

    pub(crate) fn require_mean_free(&self) -> Result<()> {
        if self.is_mean_free() {
            Ok(())
        } else {
            Err(Error::NotMeanFree(self.coeffs[0].norm()))
        }
    }

    pub fn without_mean(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] = Complex64::default();
        Self::from_parts(self.grid.clone(), coeffs, self.real)
    }

    /// `ℓ²` norm of the coefficient array.
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest coefficient modulus.
    pub fn coeff_max(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `L²(box)` inner product by Parseval, `L² Σ c_k conj d_k`.
    pub fn dot(&self, other: &SpectralField) -> f64 {
        debug_assert!(self.grid.same_as(&other.grid));
        let s: Complex64 = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b.conj())
            .sum();
        s.re * self.grid.length().powi(2)
    }

    /// `L²(box)` norm by Parseval.
    pub fn l2(&self) -> f64 {
        self.coeff_norm() * self.grid.length()
    }

    pub fn scale(&self, a: f64) -> Self {
        self.map_coeffs(|_, c| c * a)
    }

    /// `a·self + b·other`.
    pub fn lincomb(&self, a: f64, other: &SpectralField, b: f64) -> Self {
        assert!(self.grid.same_as(&other.grid), "fields on different grids");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x * a + y * b)
            .collect();
        Self::from_parts(self.grid.clone(), coeffs, self.real && other.real)
    }

    /// Coefficientwise map `c_k ↦ g(idx, c_k)`; the caller keeps parity.
    pub(crate) fn map_coeffs(&self, g: impl Fn(usize, Complex64) -> Complex64) -> Self {
        let coeffs = self.coeffs.iter().enumerate().map(|(i, &c)| g(i, c)).collect();
        Self::from_parts(self.grid.clone(), coeffs, self.real)
    }

    /// Coefficientwise product with a tabulated symbol.
    pub(crate) fn mul_table(&self, table: &[Complex64]) -> Self {
        let coeffs = self.coeffs.iter().zip(table).map(|(c, m)| c * m).collect();
        Self::from_parts(self.grid.clone(), coeffs, self.real)
    }

    /// Coefficientwise product with real weights.
    pub(crate) fn mul_real(&self, weights: &[f64]) -> Self {
        let coeffs = self.coeffs.iter().zip(weights).map(|(c, w)| c * w).collect();
        Self::from_parts(self.grid.clone(), coeffs, self.real)
    }

    /// Whether every coefficient is finite.
    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Samples of the trigonometric interpolant on a finer `m × m` grid.
    pub fn resample(&self, m: usize) -> Vec<f64> {
        let mut data = pad_spectrum(&self.coeffs, self.grid.n(), m);
        self.grid.plan(m).synthesise(&mut data);
        data.into_iter().map(|z| z.re).collect()
    }

    /// Largest Hermitian asymmetry of the coefficients.
    pub fn hermitian_defect(&self) -> f64 {
        hermitian_defect(&self.coeffs, self.grid.n())
    }

    /// Largest coefficientwise difference to another field.
    pub fn max_coeff_diff(&self, other: &SpectralField) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl<'a> Add<&'a SpectralField> for &'a SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        self.lincomb(1.0, rhs, 1.0)
    }
}

impl<'a> Sub<&'a SpectralField> for &'a SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        self.lincomb(1.0, rhs, -1.0)
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, a: f64) -> SpectralField {
        self.scale(a)
    }
}

fn partner(idx: usize, n: usize) -> usize {
    let (i1, i2) = (idx % n, idx / n);
    ((n - i2) % n) * n + (n - i1) % n
}

fn hermitian_defect(coeffs: &[Complex64], n: usize) -> f64 {
    (0..coeffs.len())
        .map(|i| (coeffs[i] - coeffs[partner(i, n)].conj()).norm())
        .fold(0.0, f64::max)
}

fn symmetrize(coeffs: &mut [Complex64], n: usize) {
    for i2 in 0..n {
        let p2 = (n - i2) % n;
        for i1 in 0..n {
            let (i, j) = (i2 * n + i1, p2 * n + (n - i1) % n);
            if j < i {
                continue;
            }
            let avg = (coeffs[i] + coeffs[j].conj()) * 0.5;
            coeffs[i] = avg;
            coeffs[j] = avg.conj();
        }
    }
}

/// Embeds an `n`-grid spectrum into an `m`-grid one (`m ≥ n`). A Nyquist
/// coefficient is split evenly between `±n/2`, so the padded spectrum is
/// the real trigonometric interpolant of a real field.
pub(crate) fn pad_spectrum(coeffs: &[Complex64], n: usize, m: usize) -> Vec<Complex64> {
    assert!(m >= n);
    if m == n {
        return coeffs.to_vec();
    }
    let half = (n / 2) as i64;
    let mut out = vec![Complex64::default(); m * m];
    let targets = |i: usize| -> Vec<(usize, f64)> {
        let k = signed_index(i, n);
        if k == -half {
            vec![(i_mod(-half, m), 0.5), (i_mod(half, m), 0.5)]
        } else {
            vec![(i_mod(k, m), 1.0)]
        }
    };
    let table: Vec<Vec<(usize, f64)>> = (0..n).map(targets).collect();
    for (i2, t2) in table.iter().enumerate() {
        for (i1, t1) in table.iter().enumerate() {
            let c = coeffs[i2 * n + i1];
            if c == Complex64::default() {
                continue;
            }
            for &(j2, w2) in t2 {
                for &(j1, w1) in t1 {
                    out[j2 * m + j1] += c * (w1 * w2);
                }
            }
        }
    }
    out
}

/// Restricts an `m`-grid spectrum to the `n`-grid modes `|k_i| < n/2`;
/// the Nyquist lines of the result are zero.
pub(crate) fn truncate_spectrum(data: &[Complex64], m: usize, n: usize) -> Vec<Complex64> {
    let half = (n / 2) as i64;
    let mut out = vec![Complex64::default(); n * n];
    for i2 in 0..n {
        let k2 = signed_index(i2, n);
        if k2 == -half {
            continue;
        }
        for i1 in 0..n {
            let k1 = signed_index(i1, n);
            if k1 == -half {
                continue;
            }
            out[i2 * n + i1] = data[i_mod(k2, m) * m + i_mod(k1, m)];
        }
    }
    out
}

fn i_mod(k: i64, m: usize) -> usize {
    k.rem_euclid(m as i64) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use std::f64::consts::PI;

    #[test]
    fn round_trip_reproduces_samples() {
        let g = make_grid(32, 2.0 * PI).unwrap();
        let f = SpectralField::from_fn(&g, |x, y| (x.sin() * 3.0).exp() + (2.0 * y).cos() * x.cos());
        let back = SpectralField::from_samples(&g, f.samples()).unwrap();
        let scale = f.samples().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (a, b) in f.samples().iter().zip(back.samples()) {
            assert!((a - b).abs() <= 1e-12 * scale);
        }
        assert_eq!(f.hermitian_defect(), 0.0);
    }

    #[test]
    fn single_mode_coefficients() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let f = SpectralField::from_fn(&g, |x, _| (2.0 * x).cos());
        assert!((f.coeff(2, 0).re - 0.5).abs() < 1e-15);
        assert!((f.coeff(-2, 0).re - 0.5).abs() < 1e-15);
        assert!(f.coeff(1, 0).norm() < 1e-15);
    }

    #[test]
    fn resample_interpolates_nyquist_symmetrically() {
        let g = make_grid(8, 2.0 * PI).unwrap();
        let f = SpectralField::from_fn(&g, |x, y| (4.0 * x).cos() + (4.0 * y).cos() + x.sin());
        let fine = f.resample(16);
        for j2 in 0..8 {
            for j1 in 0..8 {
                let a = f.samples()[j2 * 8 + j1];
                let b = fine[(2 * j2) * 16 + 2 * j1];
                assert!((a - b).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn rejects_non_hermitian_coefficients() {
        let g = make_grid(8, 2.0 * PI).unwrap();
        let mut c = vec![Complex64::default(); 64];
        c[g.mode_index(1, 0).unwrap()] = Complex64::new(1.0, 0.0);
        assert!(SpectralField::from_coeffs(&g, c.clone(), true).is_err());
        assert!(SpectralField::from_coeffs(&g, c, false).is_ok());
    }

    #[test]
    fn parseval_matches_quadrature() {
        let g = make_grid(16, 3.0).unwrap();
        let f = SpectralField::from_fn(&g, |x, _| (2.0 * PI * x / 3.0).sin() + 0.3);
        let quad: f64 = f.samples().iter().map(|v| v * v).sum::<f64>() * g.dx() * g.dx();
        assert!((f.l2().powi(2) - quad).abs() < 1e-12 * quad);
    }
}
