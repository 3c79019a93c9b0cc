use std::sync::Arc;

use rustfft::num_complex::Complex64;

use super::field::SpectralField;
use super::grid::Grid;
use crate::littlewood_paley::zeta;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X1,
    X2,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X1 => 0,
            Axis::X2 => 1,
        }
    }

    pub fn both() -> [Axis; 2] {
        [Axis::X1, Axis::X2]
    }
}

/// Fourier symbols used throughout the crate.
#[derive(Clone, Debug, PartialEq)]
pub enum MultiplierKind {
    /// `|ξ|^s`.
    LambdaPow(f64),
    /// `iξ₁|ξ|^{−α}`, the operator `∂₁Λ^{−α}`.
    RieszAlpha(f64),
    /// `iξ_j`.
    Partial(Axis),
    /// Component of `∇⊥Δ^{−1}`: `iξ₂/|ξ|²` for `X1`, `−iξ₁/|ξ|²` for `X2`.
    InvLapPerpGrad(Axis),
    /// Littlewood–Paley bump `ζ(2^{−j}ξ)`.
    DyadicBump(i32),
    /// Product of symbols.
    Composite(Vec<MultiplierKind>),
    /// Sum of symbols, e.g. `I + Λ^s`.
    Sum(Vec<MultiplierKind>),
}

/// Treatment of the `ξ = 0` coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroModeRule {
    Annihilate,
    Identity,
}

/// Behaviour of a symbol as `ξ → 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OriginValue {
    Zero,
    One,
    Other,
    Singular,
}

impl OriginValue {
    fn describe(self) -> &'static str {
        match self {
            OriginValue::Zero => "zero",
            OriginValue::One => "one",
            OriginValue::Other => "neither zero nor one",
            OriginValue::Singular => "singular",
        }
    }
}

impl MultiplierKind {
    pub fn origin(&self) -> OriginValue {
        use OriginValue::*;
        match self {
            MultiplierKind::LambdaPow(s) if *s > 0.0 => Zero,
            MultiplierKind::LambdaPow(s) if *s == 0.0 => One,
            MultiplierKind::LambdaPow(_) => Singular,
            MultiplierKind::RieszAlpha(a) if *a < 1.0 => Zero,
            MultiplierKind::RieszAlpha(_) => Singular,
            MultiplierKind::Partial(_) | MultiplierKind::DyadicBump(_) => Zero,
            MultiplierKind::InvLapPerpGrad(_) => Singular,
            MultiplierKind::Composite(parts) => {
                let vals: Vec<_> = parts.iter().map(|p| p.origin()).collect();
                if vals.contains(&Singular) {
                    Singular
                } else if vals.contains(&Zero) {
                    Zero
                } else if vals.contains(&Other) {
                    Other
                } else {
                    One
                }
            }
            MultiplierKind::Sum(parts) => {
                let vals: Vec<_> = parts.iter().map(|p| p.origin()).collect();
                if vals.contains(&Singular) {
                    Singular
                } else if vals.contains(&Other) {
                    Other
                } else {
                    match vals.iter().filter(|&&v| v == One).count() {
                        0 => Zero,
                        1 => One,
                        _ => Other,
                    }
                }
            }
        }
    }

    /// Symbol at a nonzero lattice point. Odd factors vanish on the Nyquist
    /// line of the axis they differentiate, which keeps real fields real.
    fn eval(&self, p: &Point) -> Complex64 {
        let i = Complex64::i();
        match self {
            MultiplierKind::LambdaPow(s) => Complex64::from(p.modulus.powf(*s)),
            MultiplierKind::RieszAlpha(a) => {
                if p.nyquist[0] {
                    Complex64::default()
                } else {
                    i * p.xi[0] * p.modulus.powf(-a)
                }
            }
            MultiplierKind::Partial(ax) => {
                let k = ax.index();
                if p.nyquist[k] {
                    Complex64::default()
                } else {
                    i * p.xi[k]
                }
            }
            MultiplierKind::InvLapPerpGrad(ax) => {
                let m2 = p.modulus * p.modulus;
                match ax {
                    Axis::X1 if !p.nyquist[1] => i * p.xi[1] / m2,
                    Axis::X2 if !p.nyquist[0] => -i * p.xi[0] / m2,
                    _ => Complex64::default(),
                }
            }
            MultiplierKind::DyadicBump(j) => Complex64::from(zeta(p.modulus * 2f64.powi(-j))),
            MultiplierKind::Composite(parts) => parts
                .iter()
                .fold(Complex64::new(1.0, 0.0), |acc, k| acc * k.eval(p)),
            MultiplierKind::Sum(parts) => parts.iter().map(|k| k.eval(p)).sum(),
        }
    }
}

struct Point {
    xi: [f64; 2],
    modulus: f64,
    nyquist: [bool; 2],
}

/// A symbol together with its zero-mode rule.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierSpec {
    pub kind: MultiplierKind,
    pub zero_mode: ZeroModeRule,
}

impl MultiplierSpec {
    /// Picks `Identity` only when the symbol tends to one at the origin.
    pub fn new(kind: MultiplierKind) -> Self {
        let zero_mode = if kind.origin() == OriginValue::One {
            ZeroModeRule::Identity
        } else {
            ZeroModeRule::Annihilate
        };
        MultiplierSpec { kind, zero_mode }
    }

    pub fn with_rule(kind: MultiplierKind, zero_mode: ZeroModeRule) -> Self {
        MultiplierSpec { kind, zero_mode }
    }

    pub fn lambda(s: f64) -> Self {
        Self::new(MultiplierKind::LambdaPow(s))
    }

    pub fn riesz(alpha: f64) -> Self {
        Self::new(MultiplierKind::RieszAlpha(alpha))
    }

    pub fn partial(axis: Axis) -> Self {
        Self::new(MultiplierKind::Partial(axis))
    }

    pub fn inv_lap_perp_grad(axis: Axis) -> Self {
        Self::new(MultiplierKind::InvLapPerpGrad(axis))
    }

    pub fn bump(j: i32) -> Self {
        Self::new(MultiplierKind::DyadicBump(j))
    }

    pub fn composite(parts: Vec<MultiplierKind>) -> Self {
        Self::new(MultiplierKind::Composite(parts))
    }

    pub fn sum(parts: Vec<MultiplierKind>) -> Self {
        Self::new(MultiplierKind::Sum(parts))
    }

    pub fn validate(&self) -> Result<()> {
        let origin = self.kind.origin();
        if self.zero_mode == ZeroModeRule::Identity && origin != OriginValue::One {
            return Err(Error::ZeroModeRule(origin.describe()));
        }
        Ok(())
    }

    /// Symbol values on every lattice point of `grid`.
    pub fn tabulate(&self, grid: &Grid) -> Result<Vec<Complex64>> {
        self.validate()?;
        let n = grid.n();
        let mut table = Vec::with_capacity(grid.len());
        for idx in 0..grid.len() {
            let (i1, i2) = (idx % n, idx / n);
            if idx == 0 {
                table.push(match self.zero_mode {
                    ZeroModeRule::Identity => Complex64::new(1.0, 0.0),
                    ZeroModeRule::Annihilate => Complex64::default(),
                });
                continue;
            }
            let (x1, x2) = grid.xi(idx);
            let p = Point {
                xi: [x1, x2],
                modulus: grid.modulus(idx),
                nyquist: [grid.is_nyquist(i1), grid.is_nyquist(i2)],
            };
            table.push(self.kind.eval(&p));
        }
        Ok(table)
    }
}

/// A symbol tabulated on one grid, reusable across many fields.
#[derive(Clone)]
pub struct SymbolTable {
    grid: Arc<Grid>,
    values: Vec<Complex64>,
}

impl SymbolTable {
    pub fn new(grid: &Arc<Grid>, spec: &MultiplierSpec) -> Result<Self> {
        Ok(SymbolTable {
            grid: grid.clone(),
            values: spec.tabulate(grid)?,
        })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn apply(&self, field: &SpectralField) -> SpectralField {
        assert!(self.grid.same_as(field.grid()), "symbol and field on different grids");
        field.mul_table(&self.values)
    }

    /// Scalar multiple of the operator.
    pub fn scaled(&self, a: f64) -> SymbolTable {
        SymbolTable {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * a).collect(),
        }
    }

    /// Sum of two operators.
    pub fn plus(&self, other: &SymbolTable) -> SymbolTable {
        SymbolTable {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    /// Real parts of the symbol, for diagonal decay rates.
    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    /// Pointwise product of two tables (operator composition).
    pub fn compose(&self, other: &SymbolTable) -> SymbolTable {
        SymbolTable {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        }
    }
}

/// Applies a Fourier multiplier coefficientwise.
pub fn apply_multiplier(field: &SpectralField, spec: &MultiplierSpec) -> Result<SpectralField> {
    let table = spec.tabulate(field.grid())?;
    Ok(field.mul_table(&table))
}
