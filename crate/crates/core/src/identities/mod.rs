//! Symbolic side of the group law: the curve polynomial, both addition laws
//! as pairs of rational functions, the denominators that license them, and
//! the ideal-membership certificates built from these pieces.

mod cache;
mod catalog;
mod certificate;
mod sampler;

pub use cache::{CertCache, ENGINE_VERSION};
pub use catalog::{certify, certify_all, certify_family, dichotomy_generators, Component, Identity};
pub use certificate::{
    is_product_of, prove, verify_certificate, verify_with_seed, CertJson, Certificate, Claim, Strategy, Verification, CERT_SCHEMA_VERSION,
    CHECK_PRIME, CHECK_SAMPLES, FALLBACK_PRIMES,
};
pub use sampler::VarietySampler;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mpoly::{MPoly, ParseError, PolyError, RationalPair, VarContext};

#[derive(Debug, Error)]
pub enum IdentityError {
    #[error("point slot {0} is not part of the context")]
    BadSlot(usize),
    #[error("operation requires the {0} curve form")]
    ModeMismatch(&'static str),
    #[error("identity `{name}` did not reduce to zero (remainder: {remainder})")]
    ReductionFailed { name: String, remainder: String },
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl From<ParseError> for IdentityError {
    fn from(e: ParseError) -> Self {
        IdentityError::Poly(e.into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveMode {
    /// `x² + c·y² − 1 − d·x²·y²` with free parameters `c`, `d`.
    General,
    /// `x² + y² − 1 − t²·x²·y²`; `t` and `t² − 1` are invertible.
    Rescaled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AddLaw {
    Plus0,
    Plus1,
}

impl AddLaw {
    pub fn index(self) -> u8 {
        match self {
            AddLaw::Plus0 => 0,
            AddLaw::Plus1 => 1,
        }
    }

    pub fn from_bit(b: u8) -> Self {
        if b & 1 == 0 {
            AddLaw::Plus0
        } else {
            AddLaw::Plus1
        }
    }
}

impl fmt::Display for AddLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "plus{}", self.index())
    }
}

/// A point whose coordinates are rational functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPoint {
    pub x: RationalPair,
    pub y: RationalPair,
}

/// Denominator polynomials for the slot pair (1, 2), and the cleared
/// associativity denominators when a third slot exists.
#[derive(Clone, Debug)]
pub struct Deltas {
    /// `1 + d·x₁y₁x₂y₂`, the y-denominator of ⊕₀.
    pub plus: MPoly,
    /// `1 − d·x₁y₁x₂y₂`, the x-denominator of ⊕₀.
    pub minus: MPoly,
    pub delta: MPoly,
    pub delta1x: MPoly,
    pub delta1y: MPoly,
    pub delta1: MPoly,
    pub delta_x: Option<MPoly>,
    pub delta_y: Option<MPoly>,
}

/// Curve polynomial and point slots over a named variable context.
#[derive(Clone, Debug)]
pub struct SymbolicCurve {
    mode: CurveMode,
    ctx: VarContext,
}

fn slot_layout(n: usize) -> Vec<String> {
    // x1, x2, y1, y2 first (matching the usual division variable list), then
    // the remaining slots pairwise
    let mut names = Vec::new();
    let head = n.min(2);
    for k in 1..=head {
        names.push(format!("x{k}"));
    }
    for k in 1..=head {
        names.push(format!("y{k}"));
    }
    for k in 3..=n {
        names.push(format!("x{k}"));
        names.push(format!("y{k}"));
    }
    names
}

impl SymbolicCurve {
    /// Slots `1..=n` followed by the parameters `c, d`.
    pub fn general(n: usize) -> Self {
        let mut names = slot_layout(n);
        names.extend(["c".to_string(), "d".to_string()]);
        Self::with_variables(CurveMode::General, &names).expect("layout is valid")
    }

    /// Slots `1..=n` followed by the parameter `t`.
    pub fn rescaled(n: usize) -> Self {
        let mut names = slot_layout(n);
        names.push("t".to_string());
        Self::with_variables(CurveMode::Rescaled, &names).expect("layout is valid")
    }

    /// Custom variable list. Slot `k` is the pair `xk, yk`; the parameters of
    /// the chosen mode must be present.
    pub fn with_variables<S: AsRef<str>>(mode: CurveMode, names: &[S]) -> Result<Self, IdentityError> {
        let ctx = VarContext::new(names)?;
        let params: &[&str] = match mode {
            CurveMode::General => &["c", "d"],
            CurveMode::Rescaled => &["t"],
        };
        for p in params {
            ctx.var(p)?;
        }
        Ok(Self { mode, ctx })
    }

    pub fn mode(&self) -> CurveMode {
        self.mode
    }

    pub fn context(&self) -> &VarContext {
        &self.ctx
    }

    pub fn c(&self) -> MPoly {
        match self.mode {
            CurveMode::General => self.ctx.v("c"),
            CurveMode::Rescaled => MPoly::one(&self.ctx),
        }
    }

    pub fn d(&self) -> MPoly {
        match self.mode {
            CurveMode::General => self.ctx.v("d"),
            CurveMode::Rescaled => self.ctx.v("t").pow(2),
        }
    }

    pub fn t(&self) -> Result<MPoly, IdentityError> {
        match self.mode {
            CurveMode::General => Err(IdentityError::ModeMismatch("rescaled")),
            CurveMode::Rescaled => Ok(self.ctx.v("t")),
        }
    }

    pub fn coords(&self, slot: usize) -> Result<(MPoly, MPoly), IdentityError> {
        let x = self.ctx.var(&format!("x{slot}"));
        let y = self.ctx.var(&format!("y{slot}"));
        match (x, y) {
            (Ok(x), Ok(y)) => Ok((x, y)),
            _ => Err(IdentityError::BadSlot(slot)),
        }
    }

    pub fn slot(&self, slot: usize) -> Result<SymPoint, IdentityError> {
        let (x, y) = self.coords(slot)?;
        Ok(SymPoint {
            x: RationalPair::from_poly(x),
            y: RationalPair::from_poly(y),
        })
    }

    pub fn one(&self) -> MPoly {
        MPoly::one(&self.ctx)
    }

    /// `e(x, y)` for polynomial arguments.
    pub fn e_at(&self, x: &MPoly, y: &MPoly) -> MPoly {
        let (x2, y2) = (x * x, y * y);
        &x2 + &(self.c() * &y2) - self.one() - self.d() * &x2 * &y2
    }

    /// `e` evaluated at a point with rational coordinates, denominators
    /// cleared: `X²B² + c·Y²A² − A²B² − d·X²Y²` for `(X/A, Y/B)`.
    pub fn e_cleared(&self, p: &SymPoint) -> MPoly {
        let (xx, aa) = (p.x.num.pow(2), p.x.den.pow(2));
        let (yy, bb) = (p.y.num.pow(2), p.y.den.pow(2));
        &xx * &bb + self.c() * &yy * &aa - &aa * &bb - self.d() * &xx * &yy
    }

    /// `e_slot`, obtained from `e(x, y)` by substitution.
    pub fn build_curve(&self, slot: usize) -> Result<MPoly, IdentityError> {
        let (xs, ys) = self.coords(slot)?;
        let base_names: Vec<&str> = match self.mode {
            CurveMode::General => vec!["x", "y", "c", "d"],
            CurveMode::Rescaled => vec!["x", "y", "t"],
        };
        let base = SymbolicCurve::with_variables(self.mode, &base_names)?;
        let (bx, by) = (base.ctx.v("x"), base.ctx.v("y"));
        let e = base.e_at(&bx, &by);
        Ok(e.substitute(&[("x", xs), ("y", ys)])?)
    }

    /// Componentwise `z_i ⊕ z_j` for the chosen law.
    pub fn build_add(&self, which: AddLaw, slots: (usize, usize)) -> Result<(RationalPair, RationalPair), IdentityError> {
        let p = self.slot(slots.0)?;
        let q = self.slot(slots.1)?;
        let s = self.add(which, &p, &q)?;
        Ok((s.x, s.y))
    }

    /// Addition of points with rational coordinates. Common denominators are
    /// cancelled structurally, so plain slots give exactly the textbook
    /// formulas.
    pub fn add(&self, which: AddLaw, p: &SymPoint, q: &SymPoint) -> Result<SymPoint, IdentityError> {
        let (x1, a1, y1, b1) = (&p.x.num, &p.x.den, &p.y.num, &p.y.den);
        let (x2, a2, y2, b2) = (&q.x.num, &q.x.den, &q.y.num, &q.y.den);
        let (nx, dx, ny, dy) = match which {
            AddLaw::Plus0 => {
                let aabb = a1 * a2 * b1 * b2;
                let xxyy = x1 * x2 * y1 * y2;
                let dxy = self.d() * &xxyy;
                (
                    x1 * x2 * b1 * b2 - self.c() * y1 * y2 * a1 * a2,
                    &aabb - &dxy,
                    x1 * y2 * b1 * a2 + y1 * x2 * a1 * b2,
                    &aabb + &dxy,
                )
            }
            AddLaw::Plus1 => {
                if self.mode != CurveMode::Rescaled {
                    return Err(IdentityError::ModeMismatch("rescaled"));
                }
                let u = x1 * y1 * a2 * b2;
                let v = x2 * y2 * a1 * b1;
                (
                    &u - &v,
                    x2 * y1 * a1 * b2 - x1 * y2 * a2 * b1,
                    &u + &v,
                    x1 * x2 * b1 * b2 + y1 * y2 * a1 * a2,
                )
            }
        };
        Ok(SymPoint {
            x: RationalPair::new(nx, dx)?,
            y: RationalPair::new(ny, dy)?,
        })
    }

    /// `τ(x, y) = (1/(t·x), 1/(t·y))`.
    pub fn tau(&self, p: &SymPoint) -> Result<SymPoint, IdentityError> {
        let t = self.t()?;
        Ok(SymPoint {
            x: RationalPair::new(p.x.den.clone(), &t * &p.x.num)?,
            y: RationalPair::new(p.y.den.clone(), &t * &p.y.num)?,
        })
    }

    /// `ρ(x, y) = (−y, x)`.
    pub fn rho(&self, p: &SymPoint) -> SymPoint {
        SymPoint {
            x: RationalPair {
                num: -&p.y.num,
                den: p.y.den.clone(),
            },
            y: p.x.clone(),
        }
    }

    /// `ι(x, y) = (x, −y)`.
    pub fn iota(&self, p: &SymPoint) -> SymPoint {
        SymPoint {
            x: p.x.clone(),
            y: RationalPair {
                num: -&p.y.num,
                den: p.y.den.clone(),
            },
        }
    }

    /// The two factors `(δ_ℓx, δ_ℓy)` of `δ_ℓ(p, q)` as rational functions.
    pub fn delta_factors(&self, which: AddLaw, p: &SymPoint, q: &SymPoint) -> Result<(RationalPair, RationalPair), IdentityError> {
        let (x1, y1, x2, y2) = (&p.x, &p.y, &q.x, &q.y);
        let one = RationalPair::from_poly(self.one());
        Ok(match which {
            AddLaw::Plus0 => {
                let d = RationalPair::from_poly(self.d());
                let m = d.mul(&x1.mul(x2)?.mul(y1)?.mul(y2)?)?;
                (one.sub(&m)?, one.add(&m)?)
            }
            AddLaw::Plus1 => (
                x2.mul(y1)?.sub(&x1.mul(y2)?)?,
                x1.mul(x2)?.add(&y1.mul(y2)?)?,
            ),
        })
    }

    /// `δ_ℓ(p, q) = δ_ℓx · δ_ℓy`.
    pub fn delta(&self, which: AddLaw, p: &SymPoint, q: &SymPoint) -> Result<RationalPair, IdentityError> {
        let (a, b) = self.delta_factors(which, p, q)?;
        Ok(a.mul(&b)?)
    }

    /// Denominators for slots 1 and 2; `Δx`, `Δy` when slot 3 exists.
    pub fn build_deltas(&self) -> Result<Deltas, IdentityError> {
        let (x1, y1) = self.coords(1)?;
        let (x2, y2) = self.coords(2)?;
        let m = self.d() * &x1 * &y1 * &x2 * &y2;
        let plus = self.one() + &m;
        let minus = self.one() - &m;
        let delta1x = &x2 * &y1 - &x1 * &y2;
        let delta1y = &x1 * &x2 + &y1 * &y2;
        let (delta_x, delta_y) = match self.slot(3) {
            Ok(z3) => {
                let (z1, z2) = (self.slot(1)?, self.slot(2)?);
                let left = self.add(AddLaw::Plus0, &self.add(AddLaw::Plus0, &z1, &z2)?, &z3)?;
                let right = self.add(AddLaw::Plus0, &z1, &self.add(AddLaw::Plus0, &z2, &z3)?)?;
                (Some(&left.x.den * &right.x.den), Some(&left.y.den * &right.y.den))
            }
            Err(_) => (None, None),
        };
        Ok(Deltas {
            delta: &plus * &minus,
            delta1: &delta1x * &delta1y,
            plus,
            minus,
            delta1x,
            delta1y,
            delta_x,
            delta_y,
        })
    }
}
