use super::partition::DyadicPartition;
use crate::spectral::{lp_of_samples, SpectralField};
use crate::Result;

/// Periodic sums of `values` over windows `[j−r, j+r]` along each row.
fn row_window_sums(values: &[f64], n: usize, r: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    if 2 * r + 1 >= n {
        for (row, dst) in values.chunks_exact(n).zip(out.chunks_exact_mut(n)) {
            let s: f64 = row.iter().sum();
            dst.iter_mut().for_each(|d| *d = s);
        }
        return out;
    }
    let mut prefix = vec![0.0; 3 * n + 1];
    for (row, dst) in values.chunks_exact(n).zip(out.chunks_exact_mut(n)) {
        for t in 0..3 * n {
            prefix[t + 1] = prefix[t] + row[t % n];
        }
        for (j, d) in dst.iter_mut().enumerate() {
            // window [j−r, j+r] shifted by n into the tripled row
            *d = prefix[n + j + r + 1] - prefix[n + j - r];
        }
    }
    out
}

fn transpose(values: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = values[i * n + j];
        }
    }
    out
}

/// Discrete maximal function of grid samples: the largest average of `|f|`
/// over centred square windows of radius `0, 1, 2, 4, …` cells, up to half
/// the box (where the window is the whole box).
pub fn maximal_of_samples(samples: &[f64], n: usize) -> Vec<f64> {
    let abs: Vec<f64> = samples.iter().map(|v| v.abs()).collect();
    let mut best = abs.clone();
    let mut r = 1;
    while r <= n / 2 {
        let side = (2 * r + 1).min(n) as f64;
        let rows = row_window_sums(&abs, n, r);
        let boxes = transpose(&row_window_sums(&transpose(&rows, n), n, r), n);
        let area = side * side;
        best.iter_mut().zip(&boxes).for_each(|(b, s)| *b = b.max(s / area));
        r *= 2;
    }
    best
}

pub fn maximal_function(f: &SpectralField) -> Vec<f64> {
    maximal_of_samples(f.samples(), f.grid().n())
}

/// Largest ratio `max(|Δ_k f|, |Δ_{<k} f|)(x) / M[f](x)` over all blocks
/// and grid points, a measured domination constant.
pub fn pointwise_domination_constant(partition: &DyadicPartition, f: &SpectralField) -> Result<f64> {
    let m = maximal_function(f);
    let blocks = partition.blocks(f)?;
    let mut worst = 0.0f64;
    for k in partition.jmin()..=partition.jmax() {
        for piece in [blocks.get(k).expect("in range").clone(), blocks.below(k)] {
            for (v, mv) in piece.samples().iter().zip(&m) {
                if *mv > 0.0 {
                    worst = worst.max(v.abs() / mv);
                }
            }
        }
    }
    Ok(worst)
}

/// `‖(Σ_k (M g_k)²)^{1/2}‖_{L^p} / ‖(Σ_k |g_k|²)^{1/2}‖_{L^p}` for a family.
pub fn fefferman_stein_ratio(family: &[SpectralField], p: f64) -> Result<f64> {
    let grid = family[0].grid();
    let n = grid.n();
    let mut lhs = vec![0.0; grid.len()];
    let mut rhs = vec![0.0; grid.len()];
    for g in family {
        let m = maximal_function(g);
        lhs.iter_mut().zip(&m).for_each(|(a, v)| *a += v * v);
        rhs.iter_mut().zip(g.samples()).for_each(|(a, v)| *a += v * v);
    }
    let da = grid.dx().powi(2);
    let root = |v: Vec<f64>| v.into_iter().map(f64::sqrt).collect::<Vec<_>>();
    let num = lp_of_samples(&root(lhs), p, da)?;
    let den = lp_of_samples(&root(rhs), p, da)?;
    debug_assert!(n > 0);
    Ok(num / den)
}
