//! Dense univariate polynomials over `F_p` and their roots.

use num_bigint::BigUint;

use super::{FieldElement, PrimeField};

/// Dense univariate polynomial, coefficients in increasing degree.
/// Trailing zeros are trimmed, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    field: PrimeField,
    coeffs: Vec<FieldElement>,
}

impl UniPoly {
    pub fn new(field: &PrimeField, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly {
            field: field.clone(),
            coeffs,
        }
    }

    fn x(field: &PrimeField) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lc) => {
                let inv = lc.inv().expect("leading coefficient is nonzero");
                Self::new(&self.field, self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = self.field.zero();
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = other.coeffs.get(i).unwrap_or(&zero);
                a - b
            })
            .collect();
        Self::new(&self.field, coeffs)
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(&self.field, vec![]);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(&self.field, out)
    }

    fn rem(&self, modulus: &Self) -> Self {
        let m = modulus.monic();
        let dm = m.degree().expect("nonzero modulus");
        let mut r = self.coeffs.clone();
        while r.len() > dm {
            let lead = r.pop().expect("non-empty");
            if lead.is_zero() {
                continue;
            }
            let shift = r.len() - dm;
            for k in 0..dm {
                r[shift + k] = &r[shift + k] - &(&lead * &m.coeffs[k]);
            }
        }
        Self::new(&self.field, r)
    }

    /// Monic gcd (the zero polynomial if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `base^exp mod modulus`.
    fn pow_mod(&self, exp: &BigUint, modulus: &Self) -> Self {
        let mut acc = Self::new(&self.field, vec![self.field.one()]).rem(modulus);
        let base = self.rem(modulus);
        for bit in (0..exp.bits()).rev() {
            acc = acc.mul(&acc).rem(modulus);
            if exp.bit(bit) {
                acc = acc.mul(&base).rem(modulus);
            }
        }
        acc
    }
}

/// All distinct roots of a nonzero polynomial in its field, ascending.
///
/// Isolates the split part `gcd(f, x^p - x)` and separates it with
/// Cantor-Zassenhaus using deterministic shifts `x + a`, `a = 0, 1, …`.
pub fn roots_in_field(f: &UniPoly) -> Vec<FieldElement> {
    let field = f.field.clone();
    let Some(deg) = f.degree() else {
        return vec![];
    };
    if deg == 0 {
        return vec![];
    }
    let p = field.modulus().clone();
    let x = UniPoly::x(&field);
    let xp = x.pow_mod(&p, f);
    let split = f.gcd(&xp.sub(&x));
    let mut out = Vec::new();
    split_linear(&split, &field, &mut out);
    out.sort();
    out.dedup();
    out
}

fn split_linear(g: &UniPoly, field: &PrimeField, out: &mut Vec<FieldElement>) {
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let g = g.monic();
            out.push(-&g.coeffs[0]);
        }
        Some(_) => {
            let half = (field.modulus() - 1u32) >> 1;
            let one = UniPoly::new(field, vec![field.one()]);
            for a in field.elements() {
                let shifted = UniPoly::new(field, vec![a, field.one()]);
                let h = shifted.pow_mod(&half, g).sub(&one);
                let d = g.gcd(&h);
                let dd = d.degree().unwrap_or(0);
                if dd > 0 && Some(dd) != g.degree() {
                    let rest = divide_exact(g, &d);
                    split_linear(&d, field, out);
                    split_linear(&rest, field, out);
                    return;
                }
            }
            unreachable!("a product of distinct linear factors always splits for some shift");
        }
    }
}

fn divide_exact(num: &UniPoly, den: &UniPoly) -> UniPoly {
    let den = den.monic();
    let dd = den.degree().expect("nonzero divisor");
    let mut r = num.coeffs.clone();
    let mut q = vec![num.field.zero(); r.len().saturating_sub(dd)];
    while r.len() > dd {
        let lead = r.pop().expect("non-empty");
        let shift = r.len() - dd;
        for k in 0..dd {
            r[shift + k] = &r[shift + k] - &(&lead * &den.coeffs[k]);
        }
        q[shift] = lead;
    }
    UniPoly::new(&num.field, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(f: &UniPoly) -> Vec<FieldElement> {
        f.field.elements().filter(|x| f.eval(x).is_zero()).collect()
    }

    #[test]
    fn matches_enumeration() {
        let field = PrimeField::new(101u32).unwrap();
        let mut state = 7u64;
        for _ in 0..200 {
            let deg = (state % 7) as usize + 1;
            let coeffs = (0..=deg)
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    field.elem((state >> 33) as i64)
                })
                .collect();
            let f = UniPoly::new(&field, coeffs);
            if f.degree().unwrap_or(0) == 0 {
                continue;
            }
            assert_eq!(roots_in_field(&f), brute(&f), "{f:?}");
        }
    }

    #[test]
    fn fully_split_polynomial() {
        let field = PrimeField::new(13u32).unwrap();
        // (x-1)(x-2)(x-3)(x-5)
        let mut f = UniPoly::new(&field, vec![field.one()]);
        for r in [1, 2, 3, 5] {
            f = f.mul(&UniPoly::new(&field, vec![field.elem(-r), field.one()]));
        }
        let roots: Vec<u64> = roots_in_field(&f).iter().map(|r| r.to_u64()).collect();
        assert_eq!(roots, vec![1, 2, 3, 5]);
    }
}
