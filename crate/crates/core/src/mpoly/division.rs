use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::{Keyed, MPoly, Monomial, MonomialOrder, PolyError};

/// Output of [`reduce`]: `target = Σ cofactors[i]·divisors[i] + remainder`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub cofactors: Vec<MPoly>,
    pub remainder: MPoly,
}

/// Multivariate division with remainder.
///
/// At each step the current leading term is divided by the first divisor (in
/// sequence order) whose leading monomial divides it; if none does, the term
/// moves to the remainder. No remainder monomial is divisible by any divisor's
/// leading monomial.
pub fn reduce(target: &MPoly, divisors: &[MPoly], order: MonomialOrder) -> Result<Reduction, PolyError> {
    let ctx = target.context();
    let mut leads: Vec<(Monomial, BigRational)> = Vec::with_capacity(divisors.len());
    for d in divisors {
        if d.context() != ctx {
            return Err(PolyError::ContextMismatch);
        }
        let (m, c) = d.leading_term(order).ok_or(PolyError::ZeroDivisor)?;
        leads.push((m.clone(), c.clone()));
    }

    let mut work: BTreeMap<Keyed, BigRational> = target
        .terms()
        .map(|(m, c)| (Keyed { order, mono: m.clone() }, c.clone()))
        .collect();
    let mut cofactors = vec![MPoly::zero(ctx); divisors.len()];
    let mut remainder = MPoly::zero(ctx);

    while let Some((key, lc)) = work.pop_last() {
        let lm = key.mono;
        match leads.iter().position(|(dm, _)| dm.divides(&lm)) {
            Some(i) => {
                let (dm, dc) = &leads[i];
                let q_mono = lm.div(dm);
                let q_coeff = &lc / dc;
                cofactors[i].add_term(q_mono.clone(), q_coeff.clone());
                // work -= q * divisor, skipping the leading term which cancels
                for (m, c) in divisors[i].terms() {
                    if m == dm {
                        continue;
                    }
                    let k = Keyed {
                        order,
                        mono: m.mul(&q_mono),
                    };
                    let delta = -(c * &q_coeff);
                    match work.entry(k) {
                        std::collections::btree_map::Entry::Vacant(v) => {
                            v.insert(delta);
                        }
                        std::collections::btree_map::Entry::Occupied(mut o) => {
                            let s = o.get() + delta;
                            if s.is_zero() {
                                o.remove();
                            } else {
                                *o.get_mut() = s;
                            }
                        }
                    }
                }
            }
            None => remainder.add_term(lm, lc),
        }
    }
    Ok(Reduction {
        cofactors,
        remainder,
    })
}
