use super::partition::DyadicPartition;
use crate::spectral::{product, SpectralField};
use crate::{Error, Result};

/// Default block offset `N` in `f_{<k−N}` and `f_{∼k}`.
pub const DEFAULT_OFFSET: i32 = 10;

/// The three interaction pieces of `Δ_k(fg)`.
#[derive(Clone, Debug)]
pub struct Paraproduct {
    /// `Δ_k(f_{<k−N} g_{∼k})`.
    pub low_high: SpectralField,
    /// `Δ_k(f_{∼k} g_{≤k+N})`.
    pub high_low: SpectralField,
    /// `Δ_k(Σ f_l g_m)` over pairs with `|l−m| ≤ N` and `max(l, m) > k+N`.
    pub high_high: SpectralField,
}

impl Paraproduct {
    pub fn total(&self) -> SpectralField {
        &(&self.low_high + &self.high_low) + &self.high_high
    }
}

/// Splits `Δ_k(fg)` into low-high, high-low and high-high interactions.
///
/// Block index sets are chosen so that every pair `(l, m)` of blocks is
/// counted at most once and every omitted pair has product spectrum
/// disjoint from the `k`-th annulus; the pieces then sum to `Δ_k(fg)`
/// exactly. This requires `offset ≥ 2`.
pub fn paraproduct_split(
    partition: &DyadicPartition,
    f: &SpectralField,
    g: &SpectralField,
    k: i32,
    offset: i32,
) -> Result<Paraproduct> {
    if offset < 2 {
        return Err(Error::InvalidParameter(format!("block offset {offset} must be at least 2")));
    }
    partition.symbol(k)?;
    let fb = partition.blocks(f)?;
    let gb = partition.blocks(g)?;
    let n = offset;

    let low_high = product(&fb.below(k - n), &gb.near(k, n));
    let high_low = product(&fb.near(k, n), &gb.sum_range(gb.lowest(), k + n));

    let mut high = SpectralField::zeros(f.grid());
    for l in fb.lowest()..=fb.highest() {
        let (lo, hi) = if l > k + n { (l - n, l + n) } else { (k + n + 1, l + n) };
        if lo > hi || lo > gb.highest() {
            continue;
        }
        let fl = fb.get(l).expect("index within range");
        high = &high + &product(fl, &gb.sum_range(lo, hi));
    }

    Ok(Paraproduct {
        low_high: partition.block(&low_high, k)?,
        high_low: partition.block(&high_low, k)?,
        high_high: partition.block(&high, k)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use std::f64::consts::PI;

    #[test]
    fn constant_factor_passes_through() {
        let g = make_grid(64, 2.0 * PI).unwrap();
        let p = DyadicPartition::for_grid(&g);
        let f = SpectralField::from_fn(&g, |x, y| (3.0 * x).sin() + (5.0 * y + x).cos() + (11.0 * x).cos());
        let c = SpectralField::constant(&g, 2.5);
        for k in p.jmin()..=p.jmax() {
            for offset in [2, 3, DEFAULT_OFFSET] {
                let split = paraproduct_split(&p, &f, &c, k, offset).unwrap();
                assert!(split.high_high.coeff_max() < 1e-15);
                let expect = p.block(&f, k).unwrap().scale(2.5);
                assert!(split.total().max_coeff_diff(&expect) < 1e-14);
            }
        }
    }

    #[test]
    fn disjoint_supports_give_nothing() {
        let g = make_grid(128, 2.0 * PI).unwrap();
        let p = DyadicPartition::for_grid(&g);
        let f = SpectralField::from_fn(&g, |x, _| (32.0 * x).cos());
        let split = paraproduct_split(&p, &f, &f, 2, 2).unwrap();
        assert!(split.low_high.coeff_max() < 1e-15);
        assert!(split.high_low.coeff_max() < 1e-15);
        assert!(split.high_high.coeff_max() < 1e-15);
    }

    #[test]
    fn rejects_bad_arguments() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let p = DyadicPartition::for_grid(&g);
        let f = SpectralField::zeros(&g);
        assert!(paraproduct_split(&p, &f, &f, p.jmax() + 1, 3).is_err());
        assert!(paraproduct_split(&p, &f, &f, 1, 1).is_err());
    }
}
