//! Edwards curves over `F_p` with concrete points.
//!
//! The affine layer implements both addition laws and the symmetries
//! `ι`, `ρ`, `τ`. The projective layer ([`PointClass`]) glues two affine
//! copies along `E_oo` and adds classes by scanning every applicable rule.
//! [`group_check`] turns the group-law theorems into exhaustive checks.

mod bridge;
mod check;
mod projective;

pub use bridge::{bridge_check, random_point, BridgeReport};
pub use check::{group_check, CheckMode, CheckResult, Level, Report, REPORT_SCHEMA_VERSION};
pub use projective::{PointClass, ProjPoint};

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ffield::{FieldElement, FieldError, PrimeField};
pub use crate::identities::{AddLaw, CurveMode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("{0} is not on the curve")]
    NotOnCurve(AffinePoint),
    #[error("{p} and {q} are not summable with {law}")]
    NotSummable { p: AffinePoint, q: AffinePoint, law: AddLaw },
    #[error("operation requires the {0} curve form")]
    ModeMismatch(&'static str),
    #[error("tau is undefined at {0}: a coordinate is zero")]
    TauOffDomain(AffinePoint),
    #[error("no addition rule applies to {0} and {1}")]
    NoRuleApplies(String, String),
    #[error("addition rules disagree on {a} + {b}: {results:?}")]
    Ambiguous { a: String, b: String, results: Vec<String> },
    #[error("neither dichotomy branch holds for {0} and {1}")]
    DichotomyFailed(AffinePoint, AffinePoint),
    #[error("hypothesis violated: {reason}")]
    HypothesisViolated {
        reason: String,
        witness: Option<(AffinePoint, AffinePoint)>,
    },
    #[error("{0} points is too many for an exhaustive check")]
    TooLarge(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffinePoint {
    pub x: FieldElement,
    pub y: FieldElement,
}

impl AffinePoint {
    pub fn new(x: FieldElement, y: FieldElement) -> Self {
        Self { x, y }
    }

    /// Both coordinates nonzero.
    pub fn is_oo(&self) -> bool {
        !self.x.is_zero() && !self.y.is_zero()
    }
}

impl fmt::Display for AffinePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Form {
    General,
    Rescaled { t: FieldElement },
}

/// `x² + c·y² = 1 + d·x²·y²` over `F_p`. The rescaled form fixes `c = 1`,
/// `d = t²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveParams {
    field: PrimeField,
    c: FieldElement,
    d: FieldElement,
    form: Form,
}

impl CurveParams {
    /// No hypotheses are checked here; see [`CurveParams::check_affine_hypotheses`].
    pub fn general(field: &PrimeField, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        Self {
            field: field.clone(),
            c: field.elem(c),
            d: field.elem(d),
            form: Form::General,
        }
    }

    pub fn rescaled(field: &PrimeField, t: impl Into<BigInt>) -> Result<Self, CurveError> {
        let t = field.elem(t);
        if t.is_zero() || t.is_one() || (-&t).is_one() {
            return Err(CurveError::HypothesisViolated {
                reason: format!("t = {t} must avoid 0, 1 and -1"),
                witness: None,
            });
        }
        Ok(Self {
            field: field.clone(),
            c: field.one(),
            d: t.square(),
            form: Form::Rescaled { t },
        })
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn c(&self) -> &FieldElement {
        &self.c
    }

    pub fn d(&self) -> &FieldElement {
        &self.d
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn mode(&self) -> CurveMode {
        match self.form {
            Form::General => CurveMode::General,
            Form::Rescaled { .. } => CurveMode::Rescaled,
        }
    }

    pub fn t(&self) -> Result<&FieldElement, CurveError> {
        match &self.form {
            Form::Rescaled { t } => Ok(t),
            Form::General => Err(CurveError::ModeMismatch("rescaled")),
        }
    }

    pub fn elem(&self, v: impl Into<BigInt>) -> FieldElement {
        self.field.elem(v)
    }

    /// Builds a point and checks that it lies on the curve.
    pub fn point(&self, x: impl Into<BigInt>, y: impl Into<BigInt>) -> Result<AffinePoint, CurveError> {
        let p = AffinePoint::new(self.elem(x), self.elem(y));
        self.require_on_curve(&p)?;
        Ok(p)
    }

    pub fn identity(&self) -> AffinePoint {
        AffinePoint::new(self.field.one(), self.field.zero())
    }

    /// The curve polynomial at `p`.
    pub fn e(&self, p: &AffinePoint) -> FieldElement {
        let x2 = p.x.square();
        let y2 = p.y.square();
        &x2 + &(&self.c * &y2) - self.field.one() - &self.d * &x2 * &y2
    }

    pub fn on_curve(&self, p: &AffinePoint) -> bool {
        self.e(p).is_zero()
    }

    fn require_on_curve(&self, p: &AffinePoint) -> Result<(), CurveError> {
        if self.on_curve(p) {
            Ok(())
        } else {
            Err(CurveError::NotOnCurve(p.clone()))
        }
    }

    /// Every affine point, sorted. Solves for `y²` column by column, so the
    /// cost is linear in `p`.
    pub fn points(&self) -> Vec<AffinePoint> {
        let one = self.field.one();
        let mut out = Vec::new();
        for x in self.field.elements() {
            let x2 = x.square();
            let num = &one - &x2;
            let den = &self.c - &(&self.d * &x2);
            if den.is_zero() {
                if num.is_zero() {
                    out.extend(self.field.elements().map(|y| AffinePoint::new(x.clone(), y)));
                }
                continue;
            }
            let y2 = &num * &den.inv().expect("nonzero");
            if let Ok(y) = y2.sqrt() {
                let neg = -&y;
                out.push(AffinePoint::new(x.clone(), y.clone()));
                if neg != y {
                    out.push(AffinePoint::new(x.clone(), neg));
                }
            }
        }
        out.sort();
        out
    }

    /// `(δ₋, δ₊)`: the denominators of the two coordinates of `⊕₀`.
    pub fn delta0_parts(&self, p: &AffinePoint, q: &AffinePoint) -> (FieldElement, FieldElement) {
        let m = &self.d * &p.x * &p.y * &q.x * &q.y;
        let one = self.field.one();
        (&one - &m, &one + &m)
    }

    /// `(δ₁ₓ, δ₁ᵧ)`: the denominators of the two coordinates of `⊕₁`.
    pub fn delta1_parts(&self, p: &AffinePoint, q: &AffinePoint) -> (FieldElement, FieldElement) {
        (&q.x * &p.y - &p.x * &q.y, &p.x * &q.x + &p.y * &q.y)
    }

    pub fn delta(&self, law: AddLaw, p: &AffinePoint, q: &AffinePoint) -> FieldElement {
        let (a, b) = match law {
            AddLaw::Plus0 => self.delta0_parts(p, q),
            AddLaw::Plus1 => self.delta1_parts(p, q),
        };
        a * b
    }

    pub fn add(&self, law: AddLaw, p: &AffinePoint, q: &AffinePoint) -> Result<AffinePoint, CurveError> {
        match law {
            AddLaw::Plus0 => self.add0(p, q),
            AddLaw::Plus1 => self.add1(p, q),
        }
    }

    pub fn add0(&self, p: &AffinePoint, q: &AffinePoint) -> Result<AffinePoint, CurveError> {
        self.require_on_curve(p)?;
        self.require_on_curve(q)?;
        let (dx, dy) = self.delta0_parts(p, q);
        self.quotients(
            p,
            q,
            AddLaw::Plus0,
            (&p.x * &q.x - &self.c * &p.y * &q.y, dx),
            (&p.x * &q.y + &p.y * &q.x, dy),
        )
    }

    pub fn add1(&self, p: &AffinePoint, q: &AffinePoint) -> Result<AffinePoint, CurveError> {
        self.t()?;
        self.require_on_curve(p)?;
        self.require_on_curve(q)?;
        let (dx, dy) = self.delta1_parts(p, q);
        let u = &p.x * &p.y;
        let v = &q.x * &q.y;
        self.quotients(p, q, AddLaw::Plus1, (&u - &v, dx), (&u + &v, dy))
    }

    fn quotients(
        &self,
        p: &AffinePoint,
        q: &AffinePoint,
        law: AddLaw,
        (nx, dx): (FieldElement, FieldElement),
        (ny, dy): (FieldElement, FieldElement),
    ) -> Result<AffinePoint, CurveError> {
        if dx.is_zero() || dy.is_zero() {
            return Err(CurveError::NotSummable {
                p: p.clone(),
                q: q.clone(),
                law,
            });
        }
        Ok(AffinePoint::new(nx.checked_div(&dx)?, ny.checked_div(&dy)?))
    }

    pub fn iota(&self, p: &AffinePoint) -> AffinePoint {
        AffinePoint::new(p.x.clone(), -&p.y)
    }

    pub fn rho(&self, p: &AffinePoint) -> AffinePoint {
        AffinePoint::new(-&p.y, p.x.clone())
    }

    pub fn tau(&self, p: &AffinePoint) -> Result<AffinePoint, CurveError> {
        let t = self.t()?;
        if !p.is_oo() {
            return Err(CurveError::TauOffDomain(p.clone()));
        }
        Ok(AffinePoint::new((t * &p.x).inv()?, (t * &p.y).inv()?))
    }

    /// Where the affine hypotheses fail, the error carries a pair with
    /// `δ = 0` when one exists.
    pub fn check_affine_hypotheses(&self) -> Result<(), CurveError> {
        let mut reasons = Vec::new();
        if !self.c.is_square() {
            reasons.push(format!("c = {} is not a square", self.c));
        }
        if self.d.is_square() {
            reasons.push(format!("d = {} is a square", self.d));
        }
        if reasons.is_empty() {
            return Ok(());
        }
        Err(CurveError::HypothesisViolated {
            reason: reasons.join("; "),
            witness: self.non_summable_pair(),
        })
    }

    /// The first on-curve pair (in sorted order) with `δ₀ = 0`.
    pub fn non_summable_pair(&self) -> Option<(AffinePoint, AffinePoint)> {
        let pts = self.points();
        for p in &pts {
            for q in &pts {
                if self.delta(AddLaw::Plus0, p, q).is_zero() {
                    return Some((p.clone(), q.clone()));
                }
            }
        }
        None
    }

    /// The dichotomy case split for an on-curve pair. Prefers `⊕₀`.
    pub fn dichotomy(&self, p: &AffinePoint, q: &AffinePoint) -> Result<Dichotomy, CurveError> {
        self.t()?;
        self.require_on_curve(p)?;
        self.require_on_curve(q)?;
        for law in [AddLaw::Plus0, AddLaw::Plus1] {
            if !self.delta(law, p, q).is_zero() {
                return Ok(Dichotomy::Summable(law));
            }
        }
        if p.is_oo() {
            let ip = self.iota(p);
            for k in 0..4 {
                let g = GElem { rho: k, tau: true };
                if g.apply(self, &ip)? == *q {
                    return Ok(Dichotomy::NotSummable(g));
                }
            }
        }
        Err(CurveError::DichotomyFailed(p.clone(), q.clone()))
    }
}

/// Outcome of [`CurveParams::dichotomy`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dichotomy {
    Summable(AddLaw),
    /// `Q = g·ιP` with `g ∈ τ⟨ρ⟩`.
    NotSummable(GElem),
}

/// An element `τ^tau ρ^rho` of `G = ⟨ρ, τ⟩`. The generators commute, so
/// this normal form is closed under composition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GElem {
    pub rho: u8,
    pub tau: bool,
}

impl GElem {
    pub const ONE: GElem = GElem { rho: 0, tau: false };

    pub fn all() -> impl Iterator<Item = GElem> {
        (0..8u8).map(|i| GElem {
            rho: i % 4,
            tau: i >= 4,
        })
    }

    pub fn compose(self, other: GElem) -> GElem {
        GElem {
            rho: (self.rho + other.rho) % 4,
            tau: self.tau ^ other.tau,
        }
    }

    pub fn apply(self, params: &CurveParams, p: &AffinePoint) -> Result<AffinePoint, CurveError> {
        let mut q = p.clone();
        for _ in 0..self.rho % 4 {
            q = params.rho(&q);
        }
        if self.tau {
            q = params.tau(&q)?;
        }
        Ok(q)
    }
}

impl fmt::Display for GElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.tau, self.rho) {
            (false, 0) => f.write_str("1"),
            (true, 0) => f.write_str("tau"),
            (false, k) => write!(f, "rho^{k}"),
            (true, k) => write!(f, "tau*rho^{k}"),
        }
    }
}
