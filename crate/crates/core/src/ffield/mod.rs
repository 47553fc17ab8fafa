//! Prime field arithmetic.
//!
//! Every symbolic identity in this crate is eventually pushed through an
//! evaluation homomorphism into some `F_p`; this module is that target.
//! Values are stored as arbitrary-precision residues so the same code serves
//! the tiny fields used for exhaustive group checks and the larger ones used
//! for randomized certificate evaluation.

mod roots;

pub use roots::{roots_in_field, UniPoly};

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(BigUint),
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("modulus {0} exceeds the deterministic primality range (2^64)")]
    ModulusTooLarge(BigUint),
    #[error("operands belong to different fields (p = {0} and p = {1})")]
    MixedFields(BigUint, BigUint),
    #[error("division by zero in F_{0}")]
    DivisionByZero(BigUint),
    #[error("{0} is not a square in F_{1}")]
    NotASquare(BigUint, BigUint),
}

/// The field of residues modulo an odd prime.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    modulus: Arc<BigUint>,
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.modulus)
    }
}

impl PrimeField {
    /// Builds `F_p`, rejecting `p = 2`, composites, and moduli outside the
    /// range where Miller-Rabin with a fixed base set is deterministic.
    pub fn new(modulus: impl Into<BigUint>) -> Result<Self, FieldError> {
        let modulus = modulus.into();
        let small = modulus
            .to_u64()
            .ok_or_else(|| FieldError::ModulusTooLarge(modulus.clone()))?;
        if small == 2 {
            return Err(FieldError::CharacteristicTwo);
        }
        if !is_prime_u64(small) {
            return Err(FieldError::NotPrime(modulus));
        }
        Ok(Self {
            modulus: Arc::new(modulus),
        })
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    /// The modulus as a machine integer (always fits, see [`PrimeField::new`]).
    pub fn modulus_u64(&self) -> u64 {
        self.modulus.to_u64().expect("modulus checked at construction")
    }

    /// Reduces an arbitrary (possibly negative) integer into the field.
    pub fn elem(&self, value: impl Into<BigInt>) -> FieldElement {
        let value: BigInt = value.into();
        let m = BigInt::from_biguint(Sign::Plus, (*self.modulus).clone());
        let r = value.mod_floor(&m);
        FieldElement {
            value: r.to_biguint().expect("mod_floor is non-negative"),
            field: self.clone(),
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            value: BigUint::zero(),
            field: self.clone(),
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            value: BigUint::one(),
            field: self.clone(),
        }
    }

    /// Image of a rational number; fails when the denominator vanishes mod p.
    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElement, FieldError> {
        let num = self.elem(q.numer().clone());
        let den = self.elem(q.denom().clone());
        num.checked_div(&den)
    }

    /// Uniformly random element.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement {
            value: rng.gen_biguint_below(&self.modulus),
            field: self.clone(),
        }
    }

    /// All elements `0, 1, …, p-1` in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.modulus_u64()).map(move |v| FieldElement {
            value: BigUint::from(v),
            field: self.clone(),
        })
    }
}

/// A residue in `[0, p)` tagged with its field.
///
/// The arithmetic operators panic when the operands live in different fields;
/// the `try_*` / `checked_*` methods report that as [`FieldError::MixedFields`]
/// instead.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: BigUint,
    field: PrimeField,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.field.modulus)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Binary field operation selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Applies `op` to two elements of the same field.
pub fn fe_arith(a: &FieldElement, b: &FieldElement, op: FieldOp) -> Result<FieldElement, FieldError> {
    match op {
        FieldOp::Add => a.try_add(b),
        FieldOp::Sub => a.try_sub(b),
        FieldOp::Mul => a.try_mul(b),
        FieldOp::Div => a.checked_div(b),
    }
}

impl FieldElement {
    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    /// Canonical representative in `[0, p)`.
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn to_u64(&self) -> u64 {
        self.value.to_u64().expect("residues fit in u64")
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    fn same_field(&self, other: &Self) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::MixedFields(
                (*self.field.modulus).clone(),
                (*other.field.modulus).clone(),
            ))
        }
    }

    fn wrap(&self, value: BigUint) -> Self {
        FieldElement {
            value,
            field: self.field.clone(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(self.wrap((&self.value + &other.value) % &*self.field.modulus))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        let m = &*self.field.modulus;
        Ok(self.wrap((&self.value + m - &other.value) % m))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(self.wrap((&self.value * &other.value) % &*self.field.modulus))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        let inv = other.inv()?;
        self.try_mul(&inv)
    }

    pub fn neg(&self) -> Self {
        if self.value.is_zero() {
            self.clone()
        } else {
            self.wrap(&*self.field.modulus - &self.value)
        }
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero((*self.field.modulus).clone()));
        }
        let m = &*self.field.modulus;
        Ok(self.wrap(self.value.modpow(&(m - 2u32), m)))
    }

    pub fn pow(&self, exp: &BigUint) -> Self {
        self.wrap(self.value.modpow(exp, &self.field.modulus))
    }

    pub fn pow_u64(&self, exp: u64) -> Self {
        self.pow(&BigUint::from(exp))
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Euler criterion: `a^((p-1)/2)` is 0 or 1 exactly for squares.
    pub fn is_square(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        let m = &*self.field.modulus;
        let e = (m - 1u32) >> 1;
        self.value.modpow(&e, m).is_one()
    }

    /// Square root by Tonelli-Shanks; of the two roots the one with the
    /// smaller canonical representative is returned.
    pub fn sqrt(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        if !self.is_square() {
            return Err(FieldError::NotASquare(
                self.value.clone(),
                (*self.field.modulus).clone(),
            ));
        }
        let p = &*self.field.modulus;
        let one = BigUint::one();
        // p - 1 = q * 2^s with q odd
        let mut q = p - 1u32;
        let mut s = 0u32;
        while q.is_even() {
            q >>= 1;
            s += 1;
        }
        let mut z = BigUint::from(2u32);
        let half = (p - 1u32) >> 1;
        while z.modpow(&half, p) != p - 1u32 {
            z += 1u32;
        }
        let mut m = s;
        let mut c = z.modpow(&q, p);
        let mut t = self.value.modpow(&q, p);
        let mut r = self.value.modpow(&((&q + 1u32) >> 1), p);
        while t != one {
            let mut i = 0u32;
            let mut t2 = t.clone();
            while t2 != one {
                t2 = (&t2 * &t2) % p;
                i += 1;
            }
            let b = c.modpow(&(BigUint::one() << (m - i - 1)), p);
            m = i;
            c = (&b * &b) % p;
            t = (&t * &c) % p;
            r = (&r * &b) % p;
        }
        let other = p - &r;
        Ok(self.wrap(if other < r { other } else { r }))
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $try:ident) => {
        impl std::ops::$tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$try(rhs).expect("field operands must share a modulus")
            }
        }
        impl std::ops::$tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$try(&rhs).expect("field operands must share a modulus")
            }
        }
        impl std::ops::$tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$try(rhs).expect("field operands must share a modulus")
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(&self)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases suffice below 2^64.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn construction_rejects_bad_moduli() {
        assert_eq!(PrimeField::new(2u32), Err(FieldError::CharacteristicTwo));
        assert!(matches!(PrimeField::new(15u32), Err(FieldError::NotPrime(_))));
        assert!(matches!(PrimeField::new(1u32), Err(FieldError::NotPrime(_))));
        let big = BigUint::one() << 70;
        assert!(matches!(PrimeField::new(big), Err(FieldError::ModulusTooLarge(_))));
        assert!(PrimeField::new(18446744073709551557u64).is_ok());
    }

    #[test]
    fn primality_matches_trial_division() {
        let trial = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..5000u64 {
            assert_eq!(is_prime_u64(n), trial(n), "n = {n}");
        }
        // strong pseudoprime to bases 2..=11
        assert!(!is_prime_u64(3215031751));
    }

    #[test]
    fn small_arithmetic() {
        let f5 = f(5);
        assert_eq!(fe_arith(&f5.elem(3), &f5.elem(4), FieldOp::Mul).unwrap(), f5.elem(2));
        let f13 = f(13);
        assert_eq!(f13.one().checked_div(&f13.elem(2)).unwrap(), f13.elem(7));
        assert_eq!(f13.elem(-1), f13.elem(12));
        assert_eq!(fe_arith(&f13.elem(3), &f13.elem(5), FieldOp::Sub).unwrap(), f13.elem(11));
    }

    #[test]
    fn errors_are_reported() {
        let f13 = f(13);
        let f5 = f(5);
        assert!(matches!(
            fe_arith(&f13.elem(1), &f13.zero(), FieldOp::Div),
            Err(FieldError::DivisionByZero(_))
        ));
        assert!(matches!(
            fe_arith(&f13.elem(1), &f5.elem(1), FieldOp::Add),
            Err(FieldError::MixedFields(_, _))
        ));
        assert!(matches!(f13.elem(2).sqrt(), Err(FieldError::NotASquare(_, _))));
    }

    #[test]
    fn inverses_exhaustive() {
        for p in [3u64, 5, 7, 13, 29, 101] {
            let fp = f(p);
            for a in fp.elements().skip(1) {
                assert!((&a * &a.inv().unwrap()).is_one());
            }
        }
    }

    #[test]
    fn squares_agree_with_enumeration() {
        for p in [3u64, 5, 7, 11, 13, 17, 29, 31, 97, 101] {
            let fp = f(p);
            let squares: std::collections::BTreeSet<u64> =
                fp.elements().map(|b| b.square().to_u64()).collect();
            for a in fp.elements() {
                assert_eq!(a.is_square(), squares.contains(&a.to_u64()), "p={p} a={a}");
                if a.is_square() {
                    let r = a.sqrt().unwrap();
                    assert_eq!(r.square(), a);
                    assert!(r.to_u64() <= fp.elem(0).try_sub(&r).unwrap().to_u64() || r.is_zero());
                }
            }
        }
    }

    #[test]
    fn sqrt_examples() {
        let f13 = f(13);
        assert!(f13.zero().is_square());
        assert!(!f13.elem(2).is_square());
        assert!(f13.elem(4).is_square());
        assert_eq!(f13.elem(4).sqrt().unwrap(), f13.elem(2));
        assert_eq!(f13.zero().sqrt().unwrap(), f13.zero());
        assert_eq!(f13.elem(3).sqrt().unwrap(), f13.elem(4));
        // p = 1 mod 8 exercises the full Tonelli-Shanks loop
        let f17 = f(17);
        for a in f17.elements().filter(|a| a.is_square()) {
            assert_eq!(a.sqrt().unwrap().square(), a);
        }
    }

    #[test]
    fn rational_images() {
        let f7 = f(7);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f7.from_rational(&half).unwrap(), f7.elem(4));
        let bad = BigRational::new(1.into(), 7.into());
        assert!(f7.from_rational(&bad).is_err());
    }
}
