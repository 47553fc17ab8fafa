use crate::ffield::{FieldElement, PrimeField};

use super::{MPoly, PolyError};

/// A formal quotient `num / den` of polynomials in one context. No gcd
/// cancellation is attempted; equal denominators are shared where possible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPair {
    pub num: MPoly,
    pub den: MPoly,
}

impl RationalPair {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        if num.context() != den.context() {
            return Err(PolyError::ContextMismatch);
        }
        Ok(Self { num, den })
    }

    pub fn from_poly(p: MPoly) -> Self {
        let den = MPoly::one(p.context());
        Self { num: p, den }
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        if self.den == other.den {
            return Self::new(self.num.try_add(&other.num)?, self.den.clone());
        }
        Self::new(
            self.num.try_mul(&other.den)?.try_add(&other.num.try_mul(&self.den)?)?,
            self.den.try_mul(&other.den)?,
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        if self.den == other.den {
            return Self::new(self.num.try_sub(&other.num)?, self.den.clone());
        }
        rational_sub_simplify(self, other)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        Self::new(self.num.try_mul(&other.num)?, self.den.try_mul(&other.den)?)
    }

    pub fn div(&self, other: &Self) -> Result<Self, PolyError> {
        Self::new(self.num.try_mul(&other.den)?, self.den.try_mul(&other.num)?)
    }

    /// Value at a point of F_p; fails when the denominator vanishes there.
    pub fn evaluate(&self, field: &PrimeField, values: &[Option<FieldElement>]) -> Result<FieldElement, PolyError> {
        let n = self.num.evaluate_slice(field, values)?;
        let d = self.den.evaluate_slice(field, values)?;
        Ok(n.checked_div(&d)?)
    }
}

/// `a − b` by plain cross-multiplication: `(a.num·b.den − b.num·a.den) / (a.den·b.den)`.
/// The numerator is what identity certificates are stated for.
pub fn rational_sub_simplify(a: &RationalPair, b: &RationalPair) -> Result<RationalPair, PolyError> {
    RationalPair::new(
        a.num.try_mul(&b.den)?.try_sub(&b.num.try_mul(&a.den)?)?,
        a.den.try_mul(&b.den)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::VarContext;

    #[test]
    fn arithmetic_and_evaluation() {
        let k = VarContext::new(&["x", "y"]).unwrap();
        let (x, y) = (k.v("x"), k.v("y"));
        let one = MPoly::one(&k);
        assert_eq!(RationalPair::new(x.clone(), MPoly::zero(&k)), Err(PolyError::ZeroDenominator));
        let a = RationalPair::new(one.clone(), x.clone()).unwrap();
        let b = RationalPair::new(one.clone(), y.clone()).unwrap();
        let s = a.sub(&b).unwrap();
        assert_eq!(s.num, &y - &x);
        assert_eq!(s.den, &x * &y);
        let same = a.add(&a).unwrap();
        assert_eq!(same.den, x);
        let f = PrimeField::new(13u32).unwrap();
        let pt = [Some(f.elem(2)), Some(f.elem(3))];
        // 1/2 - 1/3 = 1/6 = 11 in F13
        assert_eq!(s.evaluate(&f, &pt).unwrap(), f.elem(11));
        let q = a.div(&b).unwrap().mul(&RationalPair::from_poly(x.clone())).unwrap();
        assert_eq!(q.evaluate(&f, &pt).unwrap(), f.elem(3));
        let bad = [Some(f.elem(0)), Some(f.elem(1))];
        assert!(a.evaluate(&f, &bad).is_err());
    }
}
