use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use super::{AddLaw, AffinePoint, CurveError, CurveParams, GElem};

/// `[P, i]`: the point `P` in copy `i ∈ F₂` of the affine curve.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    pub point: AffinePoint,
    pub i: u8,
}

impl Ord for ProjPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.i, &self.point).cmp(&(other.i, &other.point))
    }
}

impl PartialOrd for ProjPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.point, self.i)
    }
}

/// A gluing class. Members are kept sorted, so the first one is the
/// canonical representative and derived equality is class equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointClass {
    members: Vec<ProjPoint>,
}

impl PointClass {
    pub fn members(&self) -> &[ProjPoint] {
        &self.members
    }

    pub fn representative(&self) -> &ProjPoint {
        &self.members[0]
    }
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, m) in self.members.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

impl CurveParams {
    /// The class of `[P, i]`: two members on `E_oo`, one elsewhere.
    pub fn glue(&self, p: &AffinePoint, i: u8) -> Result<PointClass, CurveError> {
        self.t()?;
        self.require_on_curve(p)?;
        let i = i & 1;
        let mut members = vec![ProjPoint { point: p.clone(), i }];
        if p.is_oo() {
            members.push(ProjPoint {
                point: self.tau(p)?,
                i: i ^ 1,
            });
            members.sort();
        }
        Ok(PointClass { members })
    }

    /// Every class of `E`, sorted.
    pub fn classes(&self) -> Result<Vec<PointClass>, CurveError> {
        let mut set = BTreeSet::new();
        for p in self.points() {
            for i in 0..2 {
                set.insert(self.glue(&p, i)?);
            }
        }
        Ok(set.into_iter().collect())
    }

    pub fn identity_class(&self) -> Result<PointClass, CurveError> {
        self.glue(&self.identity(), 0)
    }

    pub fn proj_inverse(&self, a: &PointClass) -> Result<PointClass, CurveError> {
        let r = a.representative();
        self.glue(&self.iota(&r.point), r.i)
    }

    /// `ρ[P, i] = [ρP, i]` and `τ[P, i] = [P, i + 1]`.
    pub fn act(&self, g: GElem, a: &PointClass) -> Result<PointClass, CurveError> {
        let r = a.representative();
        let mut p = r.point.clone();
        for _ in 0..g.rho % 4 {
            p = self.rho(&p);
        }
        self.glue(&p, r.i ^ u8::from(g.tau))
    }

    /// Adds two classes by trying every member pair and both laws. All
    /// applicable rules must agree; disagreement or an empty rule set is
    /// reported rather than resolved.
    pub fn proj_add(&self, a: &PointClass, b: &PointClass) -> Result<PointClass, CurveError> {
        let mut results = BTreeSet::new();
        for m in &a.members {
            for n in &b.members {
                for law in [AddLaw::Plus0, AddLaw::Plus1] {
                    if self.delta(law, &m.point, &n.point).is_zero() {
                        continue;
                    }
                    let s = self.add(law, &m.point, &n.point)?;
                    results.insert(self.glue(&s, m.i ^ n.i)?);
                }
            }
        }
        let mut it = results.iter();
        match (it.next(), it.next()) {
            (Some(c), None) => Ok(c.clone()),
            (None, _) => Err(CurveError::NoRuleApplies(a.to_string(), b.to_string())),
            _ => Err(CurveError::Ambiguous {
                a: a.to_string(),
                b: b.to_string(),
                results: results.iter().map(ToString::to_string).collect(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::PrimeField;

    fn curve() -> CurveParams {
        CurveParams::rescaled(&PrimeField::new(13u32).unwrap(), 2).unwrap()
    }

    #[test]
    fn gluing() {
        let c = curve();
        assert_eq!(c.identity_class().unwrap().members().len(), 1);
        for p in c.points().into_iter().filter(AffinePoint::is_oo) {
            let tp = c.tau(&p).unwrap();
            assert_eq!(c.glue(&p, 0).unwrap(), c.glue(&tp, 1).unwrap());
            assert_eq!(c.glue(&p, 0).unwrap().members().len(), 2);
        }
    }

    #[test]
    fn identity_and_inverse_classes() {
        let c = curve();
        let zero = c.identity_class().unwrap();
        for a in c.classes().unwrap() {
            assert_eq!(c.proj_add(&a, &zero).unwrap(), a);
            assert_eq!(c.proj_add(&a, &c.proj_inverse(&a).unwrap()).unwrap(), zero);
        }
    }

    #[test]
    fn canonical_representative_is_the_minimum() {
        let c = curve();
        for a in c.classes().unwrap() {
            let min = a.members().iter().min().unwrap();
            assert_eq!(a.representative(), min);
        }
    }

    #[test]
    fn non_summable_pair_adds_through_the_shift() {
        let c = curve();
        let p = c.points().into_iter().find(AffinePoint::is_oo).unwrap();
        let q = c.tau(&c.iota(&p)).unwrap();
        assert!(c.delta(AddLaw::Plus0, &p, &q).is_zero());
        assert!(c.delta(AddLaw::Plus1, &p, &q).is_zero());
        let a = c.glue(&p, 0).unwrap();
        let b = c.glue(&q, 0).unwrap();
        let tq = c.tau(&q).unwrap();
        let law = match c.dichotomy(&p, &tq).unwrap() {
            super::super::Dichotomy::Summable(l) => l,
            other => panic!("{other:?}"),
        };
        let expect = c.glue(&c.add(law, &p, &tq).unwrap(), 1).unwrap();
        assert_eq!(c.proj_add(&a, &b).unwrap(), expect);
    }
}
