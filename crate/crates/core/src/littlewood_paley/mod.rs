//! Littlewood–Paley analysis on the torus.
//!
//! The radial cutoff `Υ` equals one on `[0, 1]`, vanishes beyond `2`, and
//! bridges the two with the C^∞ gluing `g(2−t)/(g(2−t)+g(t−1))`,
//! `g(x) = e^{−1/x}`. Blocks use `ζ(ξ) = Υ(|ξ|) − Υ(2|ξ|)`, supported in
//! `1/2 < |ξ| < 2`, so that `Δ_j` keeps `2^{j−1} < |ξ| < 2^{j+1}`.
//! Whatever the blocks miss (only the zero mode on a covering partition) is
//! the low remainder, indexed as block `jmin − 1`.

mod maximal;
mod paraproduct;
mod partition;

pub use maximal::{
    fefferman_stein_ratio, maximal_function, maximal_of_samples, pointwise_domination_constant,
};
pub use paraproduct::{paraproduct_split, Paraproduct, DEFAULT_OFFSET};
pub use partition::{build_partition, BlockSet, DyadicPartition};

/// Radial cutoff `Υ(t)`.
pub fn upsilon(t: f64) -> f64 {
    let t = t.abs();
    if t <= 1.0 {
        1.0
    } else if t >= 2.0 {
        0.0
    } else {
        let g = |x: f64| (-1.0 / x).exp();
        let (a, b) = (g(2.0 - t), g(t - 1.0));
        a / (a + b)
    }
}

/// Annular bump `ζ` evaluated at radius `r = |ξ|`.
pub fn zeta(r: f64) -> f64 {
    upsilon(r) - upsilon(2.0 * r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cutoff_shape() {
        assert_eq!(upsilon(0.0), 1.0);
        assert_eq!(upsilon(1.0), 1.0);
        assert_eq!(upsilon(-1.0), 1.0);
        assert_eq!(upsilon(2.0), 0.0);
        assert_eq!(upsilon(3.0), 0.0);
        assert!((upsilon(1.5) - 0.5).abs() < 1e-15);
        assert_eq!(zeta(1.5), upsilon(1.5));
        assert_eq!(zeta(1.0), 1.0);
    }

    proptest! {
        #[test]
        fn cutoff_monotone(a in 0.0f64..3.0, b in 0.0f64..3.0) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(upsilon(lo) >= upsilon(hi));
        }

        #[test]
        fn bump_support(r in 0.0f64..5.0) {
            let z = zeta(r);
            prop_assert!((0.0..=1.0).contains(&z));
            if r <= 0.5 || r >= 2.0 {
                prop_assert_eq!(z, 0.0);
            }
        }
    }
}
