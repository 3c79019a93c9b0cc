use std::collections::BTreeMap;

use super::ensemble::Ensemble;
use crate::{Error, Result};

/// The commutator estimates under test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InequalityId {
    /// `|∫h[Λ^S, g·∇]ψ| ≤ C‖Λ^{S₁}ψ‖_{p₁}‖Λ^{S₂}h‖_{p₂}‖Λ^{S₃}g‖_{p₃}`.
    Aaa,
    /// `|∫h[R_α, V·∇]ψ| ≤ C‖Λ^{s₁}ψ‖_{p₁}‖Λ^{s₂}h‖_{p₂}‖∇V‖_{p₃}`.
    Fazel5,
    /// `|∫h[Λ^S, V·∇]ψ| ≤ C‖ψ‖_{p₁}‖Λ^{s₂}h‖_{p₂}‖Λ^{s₃}V‖_{p₃}`.
    Fazel6,
    /// `‖Λ^{−s₁}[Λ^{s₂}, V·∇]φ‖_p ≤ C‖Λ^aV‖_q‖Λ^{s₂−s₁+1−a}φ‖_r`.
    Eq20,
    /// `‖Λ^{−s₁}[Λ^{s₂}, Λ^{−s₃}V·∇]φ‖₂ ≤ C‖V‖_∞‖Λ^{s₂−s₁+1−s₃}φ‖₂`.
    Eq25,
    /// `|⟨[Λ^s, V·∇]φ, ψ⟩| ≤ C‖∇V‖_{p₁}‖Λ^sφ‖_{p₂}‖ψ‖_{p₃}`.
    F10,
    /// `|⟨[Λ^s, V·∇]φ, ψ⟩| ≤ C‖Λ^aV‖_{p₁}‖Λ^{s+1−a}φ‖_{p₂}‖ψ‖_{p₃}`.
    F20,
    /// `‖Λ^s[R_α, V·∇]φ‖₂ ≤ C‖Λ^aV‖_q‖Λ^{1+β+s−a}φ‖_r`.
    Eq200,
    /// `‖Λ^{s₁}[Λ^{s₂}, V·∇]φ‖_p ≤ C‖Λ^aV‖_q‖Λ^{1+s₂+s₁−a}φ‖_r`.
    Eq201,
    /// Pointwise `|[Δ_k, g·∇]f| ≤ C M[|∇g|^{q₁}]^{1/q₁} M[|f|^{p₁}]^{1/p₁}`.
    G50,
}

impl InequalityId {
    pub const ALL: [InequalityId; 10] = [
        InequalityId::Aaa,
        InequalityId::Fazel5,
        InequalityId::Fazel6,
        InequalityId::Eq20,
        InequalityId::Eq25,
        InequalityId::F10,
        InequalityId::F20,
        InequalityId::Eq200,
        InequalityId::Eq201,
        InequalityId::G50,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InequalityId::Aaa => "aaa",
            InequalityId::Fazel5 => "fazel5",
            InequalityId::Fazel6 => "fazel6",
            InequalityId::Eq20 => "eq20",
            InequalityId::Eq25 => "eq25",
            InequalityId::F10 => "f10",
            InequalityId::F20 => "f20",
            InequalityId::Eq200 => "eq200",
            InequalityId::Eq201 => "eq201",
            InequalityId::G50 => "g50",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|i| i.name() == name)
    }
}

/// Operator inside the `R_α`-type commutator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RieszVariant {
    /// `R_α = ∂₁Λ^{−α}`.
    Riesz,
    /// `Λ^{β−2α}∂₁`, of order `β − α` below `R_α`.
    Lower,
}

/// Exponents of one estimate.
#[derive(Clone, Debug, PartialEq)]
pub enum SpecParams {
    Aaa { s: f64, s1: f64, s2: f64, s3: f64, p1: f64, p2: f64, p3: f64 },
    Fazel5 { alpha: f64, s1: f64, s2: f64, p1: f64, p2: f64, p3: f64 },
    Fazel6 { s: f64, s2: f64, s3: f64, p1: f64, p2: f64, p3: f64 },
    Eq20 { s1: f64, s2: f64, a: f64, p: f64, q: f64, r: f64 },
    Eq25 { s1: f64, s2: f64, s3: f64 },
    F10 { s: f64, p1: f64, p2: f64, p3: f64 },
    F20 { s: f64, a: f64, p1: f64, p2: f64, p3: f64 },
    Eq200 { alpha: f64, s: f64, a: f64, q: f64, r: f64, variant: RieszVariant },
    Eq201 { s1: f64, s2: f64, a: f64, p: f64, q: f64, r: f64 },
    G50 { k: i32, p1: f64, q1: f64 },
}

fn holder_p(q: f64, r: f64) -> f64 {
    1.0 / (1.0 / q + 1.0 / r)
}

impl SpecParams {
    pub fn id(&self) -> InequalityId {
        match self {
            SpecParams::Aaa { .. } => InequalityId::Aaa,
            SpecParams::Fazel5 { .. } => InequalityId::Fazel5,
            SpecParams::Fazel6 { .. } => InequalityId::Fazel6,
            SpecParams::Eq20 { .. } => InequalityId::Eq20,
            SpecParams::Eq25 { .. } => InequalityId::Eq25,
            SpecParams::F10 { .. } => InequalityId::F10,
            SpecParams::F20 { .. } => InequalityId::F20,
            SpecParams::Eq200 { .. } => InequalityId::Eq200,
            SpecParams::Eq201 { .. } => InequalityId::Eq201,
            SpecParams::G50 { .. } => InequalityId::G50,
        }
    }

    /// Registry defaults; every one satisfies its hypotheses.
    pub fn default_for(id: InequalityId) -> Self {
        match id {
            InequalityId::Aaa => SpecParams::Aaa { s: 0.5, s1: 0.6, s2: 0.5, s3: 0.5, p1: 4.0, p2: 2.0, p3: 4.0 },
            InequalityId::Fazel5 => SpecParams::Fazel5 { alpha: 0.75, s1: 0.2, s2: 0.2, p1: 4.0, p2: 2.0, p3: 4.0 },
            InequalityId::Fazel6 => {
                SpecParams::Fazel6 { s: 0.25, s2: 0.7, s3: 0.7, p1: f64::INFINITY, p2: 2.0, p3: 2.0 }
            }
            InequalityId::Eq20 => SpecParams::Eq20 { s1: 0.0, s2: 0.25, a: 1.0, p: 2.0, q: 4.0, r: 4.0 },
            InequalityId::Eq25 => SpecParams::Eq25 { s1: 0.125, s2: 0.375, s3: 0.75 },
            InequalityId::F10 => SpecParams::F10 { s: 0.25, p1: 4.0, p2: 4.0, p3: 2.0 },
            InequalityId::F20 => SpecParams::F20 { s: 0.25, a: 0.5, p1: 4.0, p2: 4.0, p3: 2.0 },
            InequalityId::Eq200 => SpecParams::Eq200 {
                alpha: 0.75,
                s: 0.25,
                a: 1.0,
                q: 6.0,
                r: 3.0,
                variant: RieszVariant::Riesz,
            },
            InequalityId::Eq201 => SpecParams::Eq201 { s1: 0.1, s2: 0.3, a: 0.8, p: 2.0, q: 4.0, r: 4.0 },
            // q₁ = q − ε with q = 4.25, ε = 0.25
            InequalityId::G50 => SpecParams::G50 { k: 3, p1: 4.0 / 3.0, q1: 4.0 },
        }
    }

    /// Builds parameters from named values; missing names keep defaults.
    /// For `eq20` and `eq201`, `p` follows from `q` and `r` unless given.
    pub fn from_named(id: InequalityId, values: &BTreeMap<String, f64>) -> Result<Self> {
        let allowed: &[&str] = match id {
            InequalityId::Aaa => &["S", "S1", "S2", "S3", "p1", "p2", "p3"],
            InequalityId::Fazel5 => &["alpha", "s1", "s2", "p1", "p2", "p3"],
            InequalityId::Fazel6 => &["S", "s2", "s3", "p1", "p2", "p3"],
            InequalityId::Eq20 | InequalityId::Eq201 => &["s1", "s2", "a", "p", "q", "r"],
            InequalityId::Eq25 => &["s1", "s2", "s3"],
            InequalityId::F10 => &["s", "p1", "p2", "p3"],
            InequalityId::F20 => &["s", "a", "p1", "p2", "p3"],
            InequalityId::Eq200 => &["alpha", "s", "a", "q", "r", "lower"],
            InequalityId::G50 => &["k", "p1", "q1"],
        };
        if let Some(bad) = values.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::InvalidParameter(format!(
                "{} has no exponent `{bad}` (expected one of {})",
                id.name(),
                allowed.join(", ")
            )));
        }
        let mut p = Self::default_for(id);
        let get = |k: &str, d: f64| values.get(k).copied().unwrap_or(d);
        match &mut p {
            SpecParams::Aaa { s, s1, s2, s3, p1, p2, p3 } => {
                *s = get("S", *s);
                *s1 = get("S1", *s1);
                *s2 = get("S2", *s2);
                *s3 = get("S3", *s3);
                *p1 = get("p1", *p1);
                *p2 = get("p2", *p2);
                *p3 = get("p3", *p3);
            }
            SpecParams::Fazel5 { alpha, s1, s2, p1, p2, p3 } => {
                *alpha = get("alpha", *alpha);
                *s1 = get("s1", *s1);
                *s2 = get("s2", *s2);
                *p1 = get("p1", *p1);
                *p2 = get("p2", *p2);
                *p3 = get("p3", *p3);
            }
            SpecParams::Fazel6 { s, s2, s3, p1, p2, p3 } => {
                *s = get("S", *s);
                *s2 = get("s2", *s2);
                *s3 = get("s3", *s3);
                *p1 = get("p1", *p1);
                *p2 = get("p2", *p2);
                *p3 = get("p3", *p3);
            }
            SpecParams::Eq20 { s1, s2, a, p, q, r } | SpecParams::Eq201 { s1, s2, a, p, q, r } => {
                *s1 = get("s1", *s1);
                *s2 = get("s2", *s2);
                *a = get("a", *a);
                *q = get("q", *q);
                *r = get("r", *r);
                *p = get("p", holder_p(*q, *r));
            }
            SpecParams::Eq25 { s1, s2, s3 } => {
                *s1 = get("s1", *s1);
                *s2 = get("s2", *s2);
                *s3 = get("s3", *s3);
            }
            SpecParams::F10 { s, p1, p2, p3 } => {
                *s = get("s", *s);
                *p1 = get("p1", *p1);
                *p2 = get("p2", *p2);
                *p3 = get("p3", *p3);
            }
            SpecParams::F20 { s, a, p1, p2, p3 } => {
                *s = get("s", *s);
                *a = get("a", *a);
                *p1 = get("p1", *p1);
                *p2 = get("p2", *p2);
                *p3 = get("p3", *p3);
            }
            SpecParams::Eq200 { alpha, s, a, q, r, variant } => {
                *alpha = get("alpha", *alpha);
                *s = get("s", *s);
                *a = get("a", *a);
                *q = get("q", *q);
                *r = get("r", *r);
                if get("lower", 0.0) != 0.0 {
                    *variant = RieszVariant::Lower;
                }
            }
            SpecParams::G50 { k, p1, q1 } => {
                let kv = get("k", *k as f64);
                if kv.fract() != 0.0 {
                    return Err(Error::InvalidParameter(format!("g50 block index k = {kv} must be an integer")));
                }
                *k = kv as i32;
                *p1 = get("p1", *p1);
                *q1 = get("q1", *q1);
            }
        }
        Ok(p)
    }

    /// Hypotheses of the estimate: violated conditions and the slack of
    /// every strict inequality.
    pub fn check(&self) -> (Vec<&'static str>, Vec<f64>) {
        let mut c = Checks::default();
        match *self {
            SpecParams::Aaa { s, s1, s2, s3, p1, p2, p3 } => {
                c.open("0<S<1", s, 0.0, 1.0);
                c.trilinear_exponents(p1, p2, p3);
                c.closed("0≤S1≤1", s1, 0.0, 1.0);
                c.closed("0≤S2≤1", s2, 0.0, 1.0);
                c.closed("0≤S3≤1", s3, 0.0, 1.0);
                c.greater("S1+S2+S3>1+S", s1 + s2 + s3, 1.0 + s);
            }
            SpecParams::Fazel5 { alpha, s1, s2, p1, p2, p3 } => {
                c.open("0<alpha<1", alpha, 0.0, 1.0);
                c.trilinear_exponents(p1, p2, p3);
                c.require("p3<∞", p3.is_finite());
                c.closed("0≤s1≤1", s1, 0.0, 1.0);
                c.closed("0≤s2≤1", s2, 0.0, 1.0);
                c.greater("s1+s2>1−alpha", s1 + s2, 1.0 - alpha);
            }
            SpecParams::Fazel6 { s, s2, s3, p1, p2, p3 } => {
                c.open("0<S<1", s, 0.0, 1.0);
                c.trilinear_exponents(p1, p2, p3);
                c.require("p3<∞", p3.is_finite());
                c.half_open("0≤s2<1", s2, 0.0, 1.0);
                c.half_open("0≤s3<1", s3, 0.0, 1.0);
                c.greater("s2+s3>1+S", s2 + s3, 1.0 + s);
            }
            SpecParams::Eq20 { s1, s2, a, p, q, r } => {
                c.require("0≤s1", s1 >= 0.0);
                c.closed("0≤s2−s1≤1", s2 - s1, 0.0, 1.0);
                c.closed("a∈[s2−s1,1]", a, s2 - s1, 1.0);
                c.open("2<q<∞", q, 2.0, f64::INFINITY);
                c.open("1<p<∞", p, 1.0, f64::INFINITY);
                c.open("1<r<∞", r, 1.0, f64::INFINITY);
                c.holder("1/p=1/q+1/r", 1.0 / p, 1.0 / q + 1.0 / r);
            }
            SpecParams::Eq25 { s1, s2, s3 } => {
                c.open("0<s1<1", s1, 0.0, 1.0);
                c.greater("0<s2", s2, 0.0);
                c.open("0<s3<1", s3, 0.0, 1.0);
                c.greater("s2<s1+s3", s1 + s3, s2);
            }
            SpecParams::F10 { s, p1, p2, p3 } => {
                c.corollary_exponents(p1, p2, p3);
                c.closed("0≤s≤1", s, 0.0, 1.0);
            }
            SpecParams::F20 { s, a, p1, p2, p3 } => {
                c.corollary_exponents(p1, p2, p3);
                c.closed("0≤s≤1", s, 0.0, 1.0);
                c.closed("a∈[s,1]", a, s, 1.0);
            }
            SpecParams::Eq200 { alpha, s, a, q, r, .. } => {
                let beta = 1.0 - alpha;
                c.open("1/2<alpha<1", alpha, 0.5, 1.0);
                c.half_open("0≤s<alpha", s, 0.0, alpha);
                c.require("a≤1", a <= 1.0);
                c.greater("beta+s<a", a, beta + s);
                c.open("2<q<∞", q, 2.0, f64::INFINITY);
                c.open("2<r<∞", r, 2.0, f64::INFINITY);
                c.holder("1/2=1/q+1/r", 0.5, 1.0 / q + 1.0 / r);
            }
            SpecParams::Eq201 { s1, s2, a, p, q, r } => {
                c.require("0≤s1", s1 >= 0.0);
                c.greater("0<s2", s2, 0.0);
                c.greater("s1+s2<1", 1.0, s1 + s2);
                c.require("a≤1", a <= 1.0);
                c.greater("s1+s2<a", a, s1 + s2);
                c.open("2<q<∞", q, 2.0, f64::INFINITY);
                c.open("1<r<∞", r, 1.0, f64::INFINITY);
                c.require("1≤p", p >= 1.0);
                c.holder("1/p=1/q+1/r", 1.0 / p, 1.0 / q + 1.0 / r);
            }
            SpecParams::G50 { p1, q1, .. } => {
                c.open("1<p1<∞", p1, 1.0, f64::INFINITY);
                c.open("1<q1<∞", q1, 1.0, f64::INFINITY);
                c.holder("1/p1+1/q1=1", 1.0 / p1 + 1.0 / q1, 1.0);
            }
        }
        (c.violations, c.margins)
    }
}

#[derive(Default)]
struct Checks {
    violations: Vec<&'static str>,
    margins: Vec<f64>,
}

impl Checks {
    fn require(&mut self, what: &'static str, ok: bool) {
        if !ok {
            self.violations.push(what);
        }
    }

    /// `x > lo` with slack `x − lo`.
    fn greater(&mut self, what: &'static str, x: f64, lo: f64) {
        self.require(what, x > lo);
        self.margins.push(x - lo);
    }

    fn open(&mut self, what: &'static str, x: f64, lo: f64, hi: f64) {
        self.require(what, x > lo && x < hi);
        self.margins.push(x - lo);
        if hi.is_finite() {
            self.margins.push(hi - x);
        }
    }

    fn half_open(&mut self, what: &'static str, x: f64, lo: f64, hi: f64) {
        self.require(what, x >= lo && x < hi);
        self.margins.push(hi - x);
    }

    fn closed(&mut self, what: &'static str, x: f64, lo: f64, hi: f64) {
        self.require(what, x >= lo && x <= hi);
    }

    fn holder(&mut self, what: &'static str, lhs: f64, rhs: f64) {
        self.require(what, (lhs - rhs).abs() <= 1e-12);
    }

    /// `1 < p₂ < ∞`, `1 < p₁, p₃ ≤ ∞`, `Σ 1/p = 1`.
    fn trilinear_exponents(&mut self, p1: f64, p2: f64, p3: f64) {
        self.open("1<p2<∞", p2, 1.0, f64::INFINITY);
        self.greater("1<p1≤∞", p1, 1.0);
        self.greater("1<p3≤∞", p3, 1.0);
        self.holder("1/p1+1/p2+1/p3=1", 1.0 / p1 + 1.0 / p2 + 1.0 / p3, 1.0);
    }

    /// `p₁ > 2`, `Σ 1/p = 1` with every `p ≥ 1`.
    fn corollary_exponents(&mut self, p1: f64, p2: f64, p3: f64) {
        self.greater("p1>2", p1, 2.0);
        self.require("1≤p2", p2 >= 1.0);
        self.require("1≤p3", p3 >= 1.0);
        self.holder("1/p1+1/p2+1/p3=1", 1.0 / p1 + 1.0 / p2 + 1.0 / p3, 1.0);
    }
}

/// Strict-inequality slack below which a spec is flagged as near the
/// boundary of its hypotheses.
pub const NEAR_BOUNDARY: f64 = 0.05;

/// One registered estimate with its sampling ensemble.
#[derive(Clone, Debug, PartialEq)]
pub struct InequalitySpec {
    pub id: InequalityId,
    pub label: String,
    pub params: SpecParams,
    pub ensemble: Ensemble,
    /// Deliberately outside the hypotheses; reported, never gated.
    pub canary: bool,
}

impl InequalitySpec {
    /// Validated spec with the mixed ensemble.
    pub fn new(params: SpecParams) -> Result<Self> {
        let spec = InequalitySpec {
            id: params.id(),
            label: params.id().name().to_string(),
            params,
            ensemble: Ensemble::Mixed,
            canary: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn default_for(id: InequalityId) -> Self {
        Self::new(SpecParams::default_for(id)).expect("defaults satisfy their hypotheses")
    }

    pub fn from_named(id: InequalityId, values: &BTreeMap<String, f64>) -> Result<Self> {
        Self::new(SpecParams::from_named(id, values)?)
    }

    /// A spec that violates its hypotheses on purpose.
    pub fn canary(params: SpecParams, label: impl Into<String>) -> Result<Self> {
        if params.check().0.is_empty() {
            return Err(Error::InvalidParameter("a canary must violate at least one hypothesis".into()));
        }
        Ok(InequalitySpec {
            id: params.id(),
            label: label.into(),
            params,
            ensemble: Ensemble::Mixed,
            canary: true,
        })
    }

    pub fn with_ensemble(mut self, ensemble: Ensemble) -> Self {
        self.ensemble = ensemble;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn violations(&self) -> Vec<&'static str> {
        self.params.check().0
    }

    /// Errors with the first violated hypothesis, e.g. "eq20 requires 2<q<∞".
    pub fn validate(&self) -> Result<()> {
        match self.violations().first() {
            Some(v) => Err(Error::Constraint(format!("{} requires {v}", self.id.name()))),
            None => Ok(()),
        }
    }

    /// Smallest slack of a strict hypothesis.
    pub fn min_margin(&self) -> f64 {
        self.params.check().1.into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn near_boundary(&self) -> bool {
        self.min_margin() < NEAR_BOUNDARY
    }

    /// The comparison spec with `Λ^{β−2α}∂₁` in place of `R_α`.
    pub fn lower_order_twin(&self) -> Option<Self> {
        match &self.params {
            SpecParams::Eq200 { alpha, s, a, q, r, .. } => {
                let params = SpecParams::Eq200 {
                    alpha: *alpha,
                    s: *s,
                    a: *a,
                    q: *q,
                    r: *r,
                    variant: RieszVariant::Lower,
                };
                Some(InequalitySpec {
                    label: format!("{}-lower", self.label),
                    params,
                    ..self.clone()
                })
            }
            _ => None,
        }
    }
}

/// The registry: one default spec per estimate, in registry order.
pub fn default_registry() -> Vec<InequalitySpec> {
    InequalityId::ALL.into_iter().map(InequalitySpec::default_for).collect()
}

/// `eq20` with `q = 2`, outside its hypothesis `2 < q < ∞`.
pub fn canary_registry() -> Vec<InequalitySpec> {
    let params = SpecParams::Eq20 {
        s1: 0.0,
        s2: 0.25,
        a: 1.0,
        p: holder_p(2.0, 4.0),
        q: 2.0,
        r: 4.0,
    };
    vec![InequalitySpec::canary(params, "eq20-q2").expect("q = 2 violates 2<q")]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid_and_clear_of_the_boundary() {
        for spec in default_registry() {
            assert!(spec.validate().is_ok(), "{}", spec.label);
            assert!(!spec.near_boundary(), "{} margin {}", spec.label, spec.min_margin());
        }
    }

    #[test]
    fn violations_name_the_hypothesis() {
        let mut v = BTreeMap::new();
        v.insert("q".to_string(), 2.0);
        let err = InequalitySpec::from_named(InequalityId::Eq20, &v).unwrap_err();
        assert_eq!(err.to_string(), Error::Constraint("eq20 requires 2<q<∞".into()).to_string());
        let canary = &canary_registry()[0];
        assert!(canary.canary && canary.validate().is_err());
    }

    #[test]
    fn named_parameters() {
        let mut v = BTreeMap::new();
        v.insert("s2".to_string(), 0.865);
        let s = InequalitySpec::from_named(InequalityId::Eq25, &v).unwrap();
        assert!(s.near_boundary());
        v.insert("bogus".to_string(), 1.0);
        assert!(InequalitySpec::from_named(InequalityId::Eq25, &v).is_err());
        let mut v = BTreeMap::new();
        v.insert("r".to_string(), 2.0);
        match SpecParams::from_named(InequalityId::Eq20, &v).unwrap() {
            SpecParams::Eq20 { p, .. } => assert!((p - 4.0 / 3.0).abs() < 1e-15),
            _ => unreachable!(),
        }
    }

    #[test]
    fn every_id_round_trips_its_name() {
        for id in InequalityId::ALL {
            assert_eq!(InequalityId::from_name(id.name()), Some(id));
        }
    }
}
