//! Independent reference computations: explicit trigonometric sums and
//! explicit DFTs with hand-written symbols. Nothing here touches the FFT
//! code under test.
#![allow(dead_code)]

use std::f64::consts::PI;

use fbl_core::spectral::{Complex64, SpectralField};

/// Sparse spectrum: (k1, k2, coefficient) in integer lattice units.
pub type Modes = Vec<(i64, i64, Complex64)>;

pub fn modes_of(f: &SpectralField) -> Modes {
    let g = f.grid();
    let n = g.n();
    f.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(i, &c)| (g.lattice(i % n), g.lattice(i / n), c))
        .collect()
}

/// Samples of `Σ c e^{iκ₀k·x}` on an `m × m` grid of the box `[0, L)²`.
pub fn synthesize(modes: &Modes, m: usize) -> Vec<f64> {
    let mut out = vec![0.0; m * m];
    for &(k1, k2, c) in modes {
        for j2 in 0..m {
            for j1 in 0..m {
                let phase = 2.0 * PI * ((k1 * j1 as i64 + k2 * j2 as i64) as f64) / m as f64;
                out[j2 * m + j1] += (c * Complex64::from_polar(1.0, phase)).re;
            }
        }
    }
    out
}

/// Explicit DFT `c_k = m^{−2} Σ f e^{−ik·x}` restricted to `|k_i| < n/2`.
pub fn analyse(samples: &[f64], m: usize, n: usize) -> Modes {
    let half = (n / 2) as i64;
    let mut out = Vec::new();
    let row_twiddle = |k: i64, j: usize| Complex64::from_polar(1.0, -2.0 * PI * (k * j as i64) as f64 / m as f64);
    for k2 in -half + 1..half {
        // partial sums over x₁ first keep this O(m³)
        for k1 in -half + 1..half {
            let mut s = Complex64::default();
            for j2 in 0..m {
                let mut row = Complex64::default();
                for j1 in 0..m {
                    row += row_twiddle(k1, j1) * samples[j2 * m + j1];
                }
                s += row * row_twiddle(k2, j2);
            }
            out.push((k1, k2, s / (m * m) as f64));
        }
    }
    out
}

/// Applies a symbol `σ(ξ₁, ξ₂)` given in physical wavenumbers.
pub fn apply(modes: &Modes, kappa0: f64, symbol: impl Fn(f64, f64) -> Complex64) -> Modes {
    modes
        .iter()
        .map(|&(k1, k2, c)| (k1, k2, c * symbol(k1 as f64 * kappa0, k2 as f64 * kappa0)))
        .collect()
}

pub fn add(a: &Modes, b: &Modes, wb: f64) -> Modes {
    let mut out = a.clone();
    for &(k1, k2, c) in b {
        match out.iter_mut().find(|(x, y, _)| *x == k1 && *y == k2) {
            Some(e) => e.2 += c * wb,
            None => out.push((k1, k2, c * wb)),
        }
    }
    out
}

pub fn modulus(x: f64, y: f64) -> f64 {
    (x * x + y * y).sqrt()
}

pub fn lam(s: f64) -> impl Fn(f64, f64) -> Complex64 {
    move |x, y| {
        let r = modulus(x, y);
        if r == 0.0 { Complex64::default() } else { Complex64::from(r.powf(s)) }
    }
}

pub fn riesz(alpha: f64) -> impl Fn(f64, f64) -> Complex64 {
    move |x, y| {
        let r = modulus(x, y);
        if r == 0.0 { Complex64::default() } else { Complex64::new(0.0, x * r.powf(-alpha)) }
    }
}

pub fn dx1(x: f64, _: f64) -> Complex64 {
    Complex64::new(0.0, x)
}

pub fn dx2(_: f64, y: f64) -> Complex64 {
    Complex64::new(0.0, y)
}

/// Components of `∇⊥Δ^{−1}`.
pub fn bs1(x: f64, y: f64) -> Complex64 {
    let r2 = x * x + y * y;
    if r2 == 0.0 { Complex64::default() } else { Complex64::new(0.0, y / r2) }
}

pub fn bs2(x: f64, y: f64) -> Complex64 {
    let r2 = x * x + y * y;
    if r2 == 0.0 { Complex64::default() } else { Complex64::new(0.0, -x / r2) }
}

/// Truncated product `P(Σ a_i b_i)` of pairs of band-limited fields,
/// evaluated pointwise on a grid of `2n` points (alias-free for `|k| < n/2`).
pub fn product_sum(pairs: &[(&Modes, &Modes)], n: usize) -> Modes {
    let m = 2 * n;
    let mut acc = vec![0.0; m * m];
    for (a, b) in pairs {
        let (sa, sb) = (synthesize(a, m), synthesize(b, m));
        acc.iter_mut().zip(sa.iter().zip(&sb)).for_each(|(o, (x, y))| *o += x * y);
    }
    analyse(&acc, m, n)
}

/// `P(u·∇g)` with `u = (u1, u2)`.
pub fn transport(u1: &Modes, u2: &Modes, g: &Modes, kappa0: f64, n: usize) -> Modes {
    let g1 = apply(g, kappa0, dx1);
    let g2 = apply(g, kappa0, dx2);
    product_sum(&[(u1, &g1), (u2, &g2)], n)
}

/// Largest coefficient difference between a field and a sparse spectrum.
pub fn max_diff(f: &SpectralField, modes: &Modes) -> f64 {
    let mut dense = f.coeffs().to_vec();
    let g = f.grid();
    for &(k1, k2, c) in modes {
        if let Some(i) = g.mode_index(k1, k2) {
            dense[i] -= c;
        } else if c.norm() > 0.0 {
            return f64::INFINITY;
        }
    }
    dense.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// L²(box) inner product of two sparse spectra.
pub fn dot(a: &Modes, b: &Modes, length: f64) -> f64 {
    let mut s = 0.0;
    for &(k1, k2, c) in a {
        for &(l1, l2, d) in b {
            if k1 == l1 && k2 == l2 {
                s += (c * d.conj()).re;
            }
        }
    }
    s * length * length
}
