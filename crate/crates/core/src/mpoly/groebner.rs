use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::One;

use super::{reduce, MPoly, Monomial, MonomialOrder, PolyError};

/// A reduced Gröbner basis together with the change of basis from the
/// generators: `basis[k] = Σ_j transform[k][j] · generators[j]`.
#[derive(Clone, Debug)]
pub struct TrackedBasis {
    pub basis: Vec<MPoly>,
    pub transform: Vec<Vec<MPoly>>,
}

impl TrackedBasis {
    /// Rewrites cofactors on the basis as cofactors on the generators.
    pub fn pull_back(&self, cofactors: &[MPoly]) -> Vec<MPoly> {
        let ngens = self.transform.first().map_or(0, Vec::len);
        let ctx = self.basis[0].context();
        let mut out = vec![MPoly::zero(ctx); ngens];
        for (q, row) in cofactors.iter().zip(&self.transform) {
            if q.is_zero() {
                continue;
            }
            for (acc, t) in out.iter_mut().zip(row) {
                if !t.is_zero() {
                    *acc = &*acc + &(q * t);
                }
            }
        }
        out
    }
}

struct Elem {
    poly: MPoly,
    lm: Monomial,
    rep: Option<Vec<MPoly>>,
}

/// `S(f, g) = (L / LT(f))·f − (L / LT(g))·g` with `L = lcm(LM f, LM g)`.
pub fn s_polynomial(f: &MPoly, g: &MPoly, order: MonomialOrder) -> Result<MPoly, PolyError> {
    let (fm, fc) = f.leading_term(order).ok_or(PolyError::ZeroDivisor)?;
    let (gm, gc) = g.leading_term(order).ok_or(PolyError::ZeroDivisor)?;
    let l = fm.lcm(gm);
    let a = f.mul_term(&l.div(fm), &fc.recip());
    let b = g.mul_term(&l.div(gm), &gc.recip());
    a.try_sub(&b)
}

/// True when every S-polynomial of `basis` reduces to zero.
pub fn is_groebner_basis(basis: &[MPoly], order: MonomialOrder) -> Result<bool, PolyError> {
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let s = s_polynomial(&basis[i], &basis[j], order)?;
            if !reduce(&s, basis, order)?.remainder.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Reduced, monic Gröbner basis of the ideal generated by `generators`.
pub fn groebner(generators: &[MPoly], order: MonomialOrder) -> Result<Vec<MPoly>, PolyError> {
    Ok(buchberger(generators, order, false)?
        .into_iter()
        .map(|e| e.poly)
        .collect())
}

/// [`groebner`] that also records how each basis element is built from the
/// generators.
pub fn groebner_tracked(generators: &[MPoly], order: MonomialOrder) -> Result<TrackedBasis, PolyError> {
    let elems = buchberger(generators, order, true)?;
    let (basis, transform) = elems
        .into_iter()
        .map(|e| (e.poly, e.rep.expect("tracking enabled")))
        .unzip();
    Ok(TrackedBasis { basis, transform })
}

fn combine(rep: &[MPoly], others: &[(&MPoly, &[MPoly])]) -> Vec<MPoly> {
    // rep − Σ q·rep_k
    let mut out = rep.to_vec();
    for (q, r) in others {
        if q.is_zero() {
            continue;
        }
        for (acc, t) in out.iter_mut().zip(r.iter()) {
            if !t.is_zero() {
                *acc = &*acc - &(*q * t);
            }
        }
    }
    out
}

fn buchberger(generators: &[MPoly], order: MonomialOrder, track: bool) -> Result<Vec<Elem>, PolyError> {
    let Some(first) = generators.first() else {
        return Ok(vec![]);
    };
    let ctx = first.context().clone();
    let n = generators.len();
    let mut elems: Vec<Elem> = Vec::new();
    for (j, g) in generators.iter().enumerate() {
        if g.context() != &ctx {
            return Err(PolyError::ContextMismatch);
        }
        let lm = g.leading_monomial(order).ok_or(PolyError::ZeroDivisor)?.clone();
        let rep = track.then(|| {
            (0..n)
                .map(|k| if k == j { MPoly::one(&ctx) } else { MPoly::zero(&ctx) })
                .collect()
        });
        elems.push(Elem {
            poly: g.clone(),
            lm,
            rep,
        });
    }

    let mut pairs: BTreeSet<(usize, usize)> = (0..elems.len())
        .flat_map(|i| (i + 1..elems.len()).map(move |j| (i, j)))
        .collect();

    while !pairs.is_empty() {
        // normal selection strategy: smallest lcm first
        let &(i, j) = pairs
            .iter()
            .min_by(|a, b| {
                let la = elems[a.0].lm.lcm(&elems[a.1].lm);
                let lb = elems[b.0].lm.lcm(&elems[b.1].lm);
                order.cmp(&la, &lb).then(a.cmp(b))
            })
            .expect("non-empty");
        pairs.remove(&(i, j));

        if elems[i].lm.coprime(&elems[j].lm) {
            continue;
        }
        let l = elems[i].lm.lcm(&elems[j].lm);
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let chain = (0..elems.len()).any(|k| {
            k != i
                && k != j
                && elems[k].lm.divides(&l)
                && !pairs.contains(&key(i, k))
                && !pairs.contains(&key(j, k))
        });
        if chain {
            continue;
        }

        let (fi, fj) = (&elems[i], &elems[j]);
        let (_, ci) = fi.poly.leading_term(order).expect("nonzero");
        let (_, cj) = fj.poly.leading_term(order).expect("nonzero");
        let (mi, mj) = (l.div(&fi.lm), l.div(&fj.lm));
        let (ki, kj) = (ci.recip(), -cj.recip());
        let s = &fi.poly.mul_term(&mi, &ki) + &fj.poly.mul_term(&mj, &kj);
        let s_rep = match (&fi.rep, &fj.rep) {
            (Some(ri), Some(rj)) => Some(
                ri.iter()
                    .zip(rj)
                    .map(|(a, b)| &a.mul_term(&mi, &ki) + &b.mul_term(&mj, &kj))
                    .collect::<Vec<_>>(),
            ),
            _ => None,
        };

        let basis: Vec<MPoly> = elems.iter().map(|e| e.poly.clone()).collect();
        let red = reduce(&s, &basis, order)?;
        if red.remainder.is_zero() {
            continue;
        }
        let rep = s_rep.map(|r| {
            let others: Vec<(&MPoly, &[MPoly])> = red
                .cofactors
                .iter()
                .zip(&elems)
                .map(|(q, e)| (q, e.rep.as_deref().expect("tracking")))
                .collect();
            combine(&r, &others)
        });
        let lm = red.remainder.leading_monomial(order).expect("nonzero").clone();
        let new = elems.len();
        elems.push(Elem {
            poly: red.remainder,
            lm,
            rep,
        });
        for k in 0..new {
            pairs.insert((k, new));
        }
    }

    // minimal basis
    let mut keep: Vec<Elem> = Vec::new();
    for (k, e) in elems.iter().enumerate() {
        let redundant = elems.iter().enumerate().any(|(l, f)| {
            l != k && f.lm.divides(&e.lm) && (f.lm != e.lm || l < k)
        });
        if !redundant {
            keep.push(Elem {
                poly: e.poly.clone(),
                lm: e.lm.clone(),
                rep: e.rep.clone(),
            });
        }
    }

    // inter-reduce and normalise
    for k in 0..keep.len() {
        let others: Vec<MPoly> = keep
            .iter()
            .enumerate()
            .filter(|&(l, _)| l != k)
            .map(|(_, e)| e.poly.clone())
            .collect();
        let red = reduce(&keep[k].poly, &others, order)?;
        let lc = red
            .remainder
            .leading_term(order)
            .map(|(_, c)| c.clone())
            .expect("minimal basis elements do not reduce to zero");
        let inv = BigRational::one() / lc;
        let rep = keep[k].rep.as_ref().map(|r| {
            let reps: Vec<(&MPoly, &[MPoly])> = red
                .cofactors
                .iter()
                .zip(keep.iter().enumerate().filter(|&(l, _)| l != k).map(|(_, e)| e))
                .map(|(q, e)| (q, e.rep.as_deref().expect("tracking")))
                .collect();
            combine(r, &reps).iter().map(|p| p.scale(&inv)).collect()
        });
        keep[k].poly = red.remainder.scale(&inv);
        keep[k].rep = rep;
    }
    keep.sort_by(|a, b| order.cmp(&a.lm, &b.lm));
    Ok(keep)
}
