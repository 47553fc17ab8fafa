//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A polynomial lives in a [`VarContext`], an ordered list of variable names.
//! Terms are kept in a map keyed by exponent vectors; zero coefficients are
//! never stored. The engine supports ring arithmetic, simultaneous
//! substitution, evaluation into a prime field, multivariate division with
//! remainder ([`reduce`]) and Buchberger's algorithm ([`groebner`]).

mod division;
mod groebner;
mod order;
mod rational;
mod text;

pub use division::{reduce, Reduction};
pub use groebner::{groebner, groebner_tracked, is_groebner_basis, s_polynomial, TrackedBasis};
pub use order::MonomialOrder;
pub(crate) use order::Keyed;
pub use rational::{rational_sub_simplify, RationalPair};
pub use text::ParseError;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::ffield::{FieldElement, FieldError, PrimeField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomials belong to different variable contexts")]
    ContextMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}` in context")]
    DuplicateVariable(String),
    #[error("no value assigned to variable `{0}`")]
    MissingAssignment(String),
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Ordered, duplicate-free list of variable names. The order fixes lex
/// priority: earlier names are larger.
#[derive(Clone)]
pub struct VarContext {
    names: Arc<[String]>,
}

impl PartialEq for VarContext {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.names, &other.names) || self.names == other.names
    }
}

impl Eq for VarContext {}

impl fmt::Debug for VarContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names.iter()).finish()
    }
}

impl VarContext {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, PolyError> {
        let mut seen = std::collections::HashSet::new();
        for n in names {
            if !seen.insert(n.as_ref()) {
                return Err(PolyError::DuplicateVariable(n.as_ref().to_string()));
            }
        }
        Ok(VarContext {
            names: names.iter().map(|n| n.as_ref().to_string()).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The polynomial consisting of a single variable.
    pub fn var(&self, name: &str) -> Result<MPoly, PolyError> {
        let idx = self
            .index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        let mut exps = vec![0; self.len()];
        exps[idx] = 1;
        Ok(MPoly::monomial(self, Monomial::new(exps), BigRational::one()))
    }

    /// Like [`VarContext::var`], for names known to be present.
    pub fn v(&self, name: &str) -> MPoly {
        self.var(name)
            .unwrap_or_else(|_| panic!("variable `{name}` is not in context {self:?}"))
    }
}

/// Exponent vector aligned with a [`VarContext`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps.into_boxed_slice())
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `self / other`; caller guarantees `other.divides(self)`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Binary ring operation selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Sparse polynomial over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    ctx: VarContext,
    terms: BTreeMap<Monomial, BigRational>,
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({})", self)
    }
}

pub fn poly_arith(a: &MPoly, b: &MPoly, op: PolyOp) -> Result<MPoly, PolyError> {
    match op {
        PolyOp::Add => a.try_add(b),
        PolyOp::Sub => a.try_sub(b),
        PolyOp::Mul => a.try_mul(b),
    }
}

impl MPoly {
    pub fn zero(ctx: &VarContext) -> Self {
        MPoly {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &VarContext) -> Self {
        Self::constant(ctx, BigRational::one())
    }

    pub fn constant(ctx: &VarContext, c: BigRational) -> Self {
        Self::monomial(ctx, Monomial::one(ctx.len()), c)
    }

    pub fn from_int(ctx: &VarContext, c: i64) -> Self {
        Self::constant(ctx, BigRational::from_integer(c.into()))
    }

    pub fn monomial(ctx: &VarContext, mono: Monomial, coeff: BigRational) -> Self {
        assert_eq!(mono.exponents().len(), ctx.len(), "monomial arity mismatch");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mono, coeff);
        }
        MPoly {
            ctx: ctx.clone(),
            terms,
        }
    }

    /// Builds from `(monomial, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(ctx: &VarContext, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut p = MPoly::zero(ctx);
        for (m, c) in terms {
            assert_eq!(m.exponents().len(), ctx.len(), "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn context(&self) -> &VarContext {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lex order of exponent vectors.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> BigRational {
        self.terms.get(mono).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Constant term's coefficient if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().expect("one term");
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Largest term under `order`, or `None` for zero.
    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &BigRational)> {
        match order {
            MonomialOrder::Lex => self.terms.iter().next_back(),
            _ => self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0)),
        }
    }

    pub fn leading_monomial(&self, order: MonomialOrder) -> Option<&Monomial> {
        self.leading_term(order).map(|(m, _)| m)
    }

    /// Variables that occur with positive exponent, by context index.
    pub fn support(&self) -> Vec<usize> {
        (0..self.ctx.len())
            .filter(|&i| self.terms.keys().any(|m| m.exponents()[i] > 0))
            .collect()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponents()[var]).max().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, mono: Monomial, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_ctx(&self, other: &MPoly) -> Result<(), PolyError> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(PolyError::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check_ctx(other)?;
        let mut out = MPoly::zero(&self.ctx);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    /// `self * coeff * mono`.
    pub fn mul_term(&self, mono: &Monomial, coeff: &BigRational) -> MPoly {
        if coeff.is_zero() {
            return MPoly::zero(&self.ctx);
        }
        MPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.mul(mono), c * coeff)).collect(),
        }
    }

    pub fn scale(&self, coeff: &BigRational) -> MPoly {
        self.mul_term(&Monomial::one(self.ctx.len()), coeff)
    }

    pub fn scale_int(&self, k: i64) -> MPoly {
        self.scale(&BigRational::from_integer(k.into()))
    }

    pub fn pow(&self, exp: u32) -> MPoly {
        let mut acc = MPoly::one(&self.ctx);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Scales so the leading coefficient under `order` is 1.
    pub fn monic(&self, order: MonomialOrder) -> MPoly {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, lc)) => self.scale(&lc.recip()),
        }
    }

    /// Least common multiple of all coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Largest absolute numerator, a cheap size measure for reports.
    pub fn max_coeff_bits(&self) -> u64 {
        self.terms
            .values()
            .map(|c| c.numer().abs().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }

    /// Simultaneous substitution `var ↦ image`. Every image must share one
    /// context, which becomes the result's context; variables not in `map`
    /// are carried over by name and must exist in that context.
    pub fn substitute(&self, map: &[(&str, MPoly)]) -> Result<MPoly, PolyError> {
        for (name, _) in map {
            if self.ctx.index_of(name).is_none() {
                return Err(PolyError::UnknownVariable(name.to_string()));
            }
        }
        let target = match map.first() {
            Some((_, img)) => img.ctx.clone(),
            None => self.ctx.clone(),
        };
        if map.iter().any(|(_, img)| img.ctx != target) {
            return Err(PolyError::ContextMismatch);
        }
        let mut images = Vec::with_capacity(self.ctx.len());
        for (i, name) in self.ctx.names().iter().enumerate() {
            let img = match map.iter().find(|(n, _)| n == name) {
                Some((_, img)) => img.clone(),
                None if self.degree_in(i) == 0 => MPoly::zero(&target),
                None => target.var(name)?,
            };
            images.push(img);
        }
        // cache powers per variable
        let mut powers: Vec<Vec<MPoly>> = images.iter().map(|_| Vec::new()).collect();
        let mut out = MPoly::zero(&target);
        for (mono, coeff) in &self.terms {
            let mut term = MPoly::constant(&target, coeff.clone());
            for (i, &e) in mono.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                if cache.is_empty() {
                    cache.push(MPoly::one(&target));
                }
                while cache.len() <= e as usize {
                    let next = cache.last().expect("seeded") * &images[i];
                    cache.push(next);
                }
                term = &term * &cache[e as usize];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Re-expresses the polynomial in another context by variable name.
    pub fn to_context(&self, ctx: &VarContext) -> Result<MPoly, PolyError> {
        let mut idx = Vec::with_capacity(self.ctx.len());
        for (i, name) in self.ctx.names().iter().enumerate() {
            match ctx.index_of(name) {
                Some(j) => idx.push(Some(j)),
                None if self.degree_in(i) == 0 => idx.push(None),
                None => return Err(PolyError::UnknownVariable(name.clone())),
            }
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; ctx.len()];
            for (i, &k) in m.exponents().iter().enumerate() {
                if let Some(j) = idx[i] {
                    e[j] = k;
                }
            }
            (Monomial::new(e), c.clone())
        });
        Ok(MPoly::from_terms(ctx, terms))
    }

    /// Image under the evaluation homomorphism `var ↦ assignment[var]`.
    pub fn evaluate(&self, field: &PrimeField, assignment: &HashMap<String, FieldElement>) -> Result<FieldElement, PolyError> {
        let values = self
            .ctx
            .names()
            .iter()
            .enumerate()
            .map(|(i, n)| match assignment.get(n) {
                Some(v) => Ok(Some(v.clone())),
                None if self.degree_in(i) == 0 => Ok(None),
                None => Err(PolyError::MissingAssignment(n.clone())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.evaluate_slice(field, &values)
    }

    /// Evaluation with values aligned to the context; `None` entries must
    /// belong to variables that do not occur.
    pub fn evaluate_slice(&self, field: &PrimeField, values: &[Option<FieldElement>]) -> Result<FieldElement, PolyError> {
        let mut acc = field.zero();
        for (mono, coeff) in &self.terms {
            let mut term = field.from_rational(coeff)?;
            for (i, &e) in mono.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = values[i]
                    .as_ref()
                    .ok_or_else(|| PolyError::MissingAssignment(self.ctx.names()[i].clone()))?;
                term = term.try_mul(&v.pow_u64(e as u64))?;
            }
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }

    /// Exact quotient `self / divisor` if the division leaves no remainder.
    pub fn divide_exact(&self, divisor: &MPoly) -> Result<Option<MPoly>, PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::ZeroDivisor);
        }
        let r = reduce(self, std::slice::from_ref(divisor), MonomialOrder::Lex)?;
        Ok(r.remainder.is_zero().then(|| r.cofactors.into_iter().next().expect("one divisor")))
    }
}

macro_rules! poly_op {
    ($tr:ident, $method:ident, $try:ident) => {
        impl std::ops::$tr<&MPoly> for &MPoly {
            type Output = MPoly;
            fn $method(self, rhs: &MPoly) -> MPoly {
                self.$try(rhs).expect("polynomial operands must share a context")
            }
        }
        impl std::ops::$tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                (&self).$try(&rhs).expect("polynomial operands must share a context")
            }
        }
        impl std::ops::$tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: &MPoly) -> MPoly {
                (&self).$try(rhs).expect("polynomial operands must share a context")
            }
        }
        impl std::ops::$tr<MPoly> for &MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                self.$try(&rhs).expect("polynomial operands must share a context")
            }
        }
    };
}

poly_op!(Add, add, try_add);
poly_op!(Sub, sub, try_sub);
poly_op!(Mul, mul, try_mul);

impl std::ops::Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl std::ops::Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}
