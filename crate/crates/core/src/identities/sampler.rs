use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::seq::SliceRandom;
use rand::Rng;

use super::IdentityError;
use crate::ffield::{roots_in_field, FieldElement, PrimeField, UniPoly};
use crate::mpoly::{groebner, MPoly, MonomialOrder, PolyError};

type Memo = Mutex<HashMap<String, Arc<Vec<MPoly>>>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

fn lex_basis(basis: &[MPoly]) -> Result<Arc<Vec<MPoly>>, PolyError> {
    let ctx = basis[0].context();
    let mut key = ctx.names().join(",");
    for b in basis {
        key.push('|');
        key.push_str(&b.to_string());
    }
    if let Some(gb) = memo().lock().expect("memo lock").get(&key) {
        return Ok(gb.clone());
    }
    let gb = Arc::new(groebner(basis, MonomialOrder::Lex)?);
    memo().lock().expect("memo lock").insert(key, gb.clone());
    Ok(gb)
}

/// Draws random F_p-points of the variety cut out by a set of polynomials.
///
/// A lex Gröbner basis triangularizes the system. Variables are assigned
/// from last to first: the basis elements whose largest variable is the
/// current one become univariate after substitution, and a random common
/// root (or a random value, if unconstrained) is picked. Dead ends restart.
pub struct VarietySampler {
    field: PrimeField,
    nvars: usize,
    basis: Vec<MPoly>,
    gb: Arc<Vec<MPoly>>,
    /// GB indices grouped by their largest (lowest-index) variable.
    by_main: Vec<Vec<usize>>,
}

impl VarietySampler {
    pub fn new(basis: &[MPoly], field: &PrimeField) -> Result<Self, IdentityError> {
        if basis.is_empty() {
            return Err(IdentityError::Malformed("empty basis".into()));
        }
        let gb = lex_basis(basis)?;
        let nvars = basis[0].context().len();
        let mut by_main = vec![Vec::new(); nvars];
        for (i, g) in gb.iter().enumerate() {
            if let Some(&main) = g.support().first() {
                by_main[main].push(i);
            }
        }
        Ok(Self {
            field: field.clone(),
            nvars,
            basis: basis.to_vec(),
            gb,
            by_main,
        })
    }

    /// True when the basis generates the unit ideal (no points anywhere).
    pub fn is_empty_variety(&self) -> bool {
        self.gb.iter().any(|g| g.as_constant().is_some())
    }

    fn univariate(&self, g: &MPoly, var: usize, values: &[Option<FieldElement>]) -> Option<UniPoly> {
        let f = &self.field;
        let mut coeffs = vec![f.zero(); g.degree_in(var) as usize + 1];
        for (m, c) in g.terms() {
            let mut term = f.from_rational(c).ok()?;
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 || i == var {
                    continue;
                }
                term = &term * &values[i].as_ref()?.pow_u64(e as u64);
            }
            let slot = &mut coeffs[m.exponents()[var] as usize];
            *slot = &*slot + &term;
        }
        Some(UniPoly::new(f, coeffs))
    }

    fn attempt<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Vec<FieldElement>> {
        let mut values: Vec<Option<FieldElement>> = vec![None; self.nvars];
        for var in (0..self.nvars).rev() {
            let mut g: Option<UniPoly> = None;
            for &i in &self.by_main[var] {
                let u = self.univariate(&self.gb[i], var, &values)?;
                g = Some(match g {
                    None => u,
                    Some(acc) => acc.gcd(&u),
                });
            }
            let value = match g {
                Some(g) if !g.is_zero() => {
                    if g.degree() == Some(0) {
                        return None;
                    }
                    roots_in_field(&g).choose(rng)?.clone()
                }
                _ => self.field.random(rng),
            };
            values[var] = Some(value.clone());
        }
        Some(values.into_iter().map(|v| v.expect("assigned")).collect())
    }

    /// A point killing every basis element and none of `nonzero`, or `None`
    /// after `attempts` failed tries.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, nonzero: &[MPoly], attempts: usize) -> Option<Vec<FieldElement>> {
        if self.is_empty_variety() {
            return None;
        }
        for _ in 0..attempts {
            let Some(point) = self.attempt(rng) else { continue };
            let vals: Vec<_> = point.iter().cloned().map(Some).collect();
            let zero_at = |p: &MPoly| p.evaluate_slice(&self.field, &vals).map(|v| v.is_zero()).ok();
            let kills = self.basis.iter().all(|b| zero_at(b) == Some(true));
            let avoids = nonzero.iter().all(|p| zero_at(p) == Some(false));
            if kills && avoids {
                return Some(point);
            }
        }
        None
    }
}
