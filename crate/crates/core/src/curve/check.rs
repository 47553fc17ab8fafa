use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{AddLaw, AffinePoint, CurveError, CurveParams, Dichotomy, GElem, PointClass};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Largest point (or class) count for which the full level checks every
/// triple; beyond it associativity is sampled.
pub const EXHAUSTIVE_LIMIT: usize = 64;
pub const SAMPLED_TRIPLES: usize = 1000;
/// Addition tables are quadratic in the point count.
pub const TABLE_LIMIT: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Affine,
    Projective,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Axioms,
    Full,
}

impl FromStr for CheckMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "affine" => Ok(CheckMode::Affine),
            "projective" => Ok(CheckMode::Projective),
            _ => Err(format!("unknown mode `{s}` (expected affine or projective)")),
        }
    }
}

impl FromStr for Level {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "axioms" => Ok(Level::Axioms),
            "full" => Ok(Level::Full),
            _ => Err(format!("unknown level `{s}` (expected axioms or full)")),
        }
    }
}

impl fmt::Display for CheckMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckMode::Affine => "affine",
            CheckMode::Projective => "projective",
        })
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Axioms => "axioms",
            Level::Full => "full",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub checked: u64,
    pub failures: u64,
    /// The first failing tuple in enumeration order.
    pub witness: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportParams {
    pub p: u64,
    pub c: u64,
    pub d: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub affine_points: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_oo: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<u64>,
}

/// Outcome of [`group_check`]. Contains no timings, so identical inputs
/// serialize to identical bytes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub mode: CheckMode,
    pub level: Level,
    pub params: ReportParams,
    pub seed: u64,
    pub counts: Counts,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl Report {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Default)]
struct Tally {
    checked: u64,
    failures: u64,
    witness: Option<Vec<String>>,
}

impl Tally {
    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Vec<String>) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.failures += other.failures;
        if self.witness.is_none() {
            self.witness = other.witness;
        }
        self
    }

    fn finish(self, name: &str, note: Option<String>) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            passed: self.failures == 0,
            checked: self.checked,
            failures: self.failures,
            witness: self.witness,
            note,
        }
    }
}

/// Runs `f` for each outer index in parallel and merges in index order, so
/// the reported witness does not depend on scheduling.
fn par_tally<F>(n: usize, f: F) -> Tally
where
    F: Fn(usize, &mut Tally) + Sync + Send,
{
    (0..n)
        .into_par_iter()
        .map(|a| {
            let mut t = Tally::default();
            f(a, &mut t);
            t
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::default(), Tally::merge)
}

macro_rules! wit {
    ($($e:expr),* $(,)?) => { || vec![$($e.to_string()),*] };
}

enum Triples {
    All,
    Sample(Vec<(usize, usize, usize)>),
}

fn triples(n: usize, level: Level, seed: u64) -> (Triples, String) {
    if level == Level::Full && n <= EXHAUSTIVE_LIMIT {
        return (Triples::All, format!("exhaustive over {n}^3 triples"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = (0..SAMPLED_TRIPLES)
        .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
        .collect();
    (Triples::Sample(s), format!("{SAMPLED_TRIPLES} sampled triples, seed {seed}"))
}

/// A finite binary operation given as a table, with `None` where the
/// operation failed.
struct Table<'a> {
    n: usize,
    cells: Vec<Option<usize>>,
    label: &'a (dyn Fn(usize) -> String + Sync),
}

impl Table<'_> {
    fn get(&self, a: usize, b: usize) -> Option<usize> {
        self.cells[a * self.n + b]
    }

    fn axioms(&self, identity: usize, inverse: &[Option<usize>], level: Level, seed: u64) -> Vec<CheckResult> {
        let n = self.n;
        let l = self.label;
        let mut out = Vec::new();
        let id = par_tally(n, |a, t| {
            let ok = self.get(a, identity) == Some(a) && self.get(identity, a) == Some(a);
            t.record(ok, wit![l(a)]);
        });
        out.push(id.finish("identity", None));
        let inv = par_tally(n, |a, t| {
            let ok = inverse[a].is_some_and(|b| self.get(a, b) == Some(identity) && self.get(b, a) == Some(identity));
            t.record(ok, wit![l(a)]);
        });
        out.push(inv.finish("inverse", None));
        let comm = par_tally(n, |a, t| {
            for b in 0..n {
                let ok = self.get(a, b).is_some() && self.get(a, b) == self.get(b, a);
                t.record(ok, wit![l(a), l(b)]);
            }
        });
        out.push(comm.finish("commutativity", None));

        let assoc_one = |a: usize, b: usize, c: usize, t: &mut Tally| {
            let left = self.get(a, b).and_then(|ab| self.get(ab, c));
            let right = self.get(b, c).and_then(|bc| self.get(a, bc));
            t.record(left.is_some() && left == right, wit![l(a), l(b), l(c)]);
        };
        let (set, note) = triples(n, level, seed);
        let assoc = match set {
            Triples::All => par_tally(n, |a, t| {
                for b in 0..n {
                    for c in 0..n {
                        assoc_one(a, b, c, t);
                    }
                }
            }),
            Triples::Sample(s) => par_tally(s.len(), |k, t| {
                let (a, b, c) = s[k];
                assoc_one(a, b, c, t);
            }),
        };
        out.push(assoc.finish("associativity", Some(note)));
        out
    }
}

fn report_params(params: &CurveParams) -> ReportParams {
    ReportParams {
        p: params.field().modulus_u64(),
        c: params.c().to_u64(),
        d: params.d().to_u64(),
        t: params.t().ok().map(|t| t.to_u64()),
    }
}

/// Checks the group axioms (and, projectively, the lemmas behind them)
/// over every point of the curve.
///
/// Affine mode needs `c` square and `d` nonsquare; projective mode needs
/// the rescaled form. Violations are errors, not failed checks.
pub fn group_check(params: &CurveParams, mode: CheckMode, level: Level, seed: u64) -> Result<Report, CurveError> {
    let (counts, checks) = match mode {
        CheckMode::Affine => affine(params, level, seed)?,
        CheckMode::Projective => projective(params, level, seed)?,
    };
    let passed = checks.iter().all(|c| c.passed);
    Ok(Report {
        schema_version: REPORT_SCHEMA_VERSION,
        mode,
        level,
        params: report_params(params),
        seed,
        counts,
        checks,
        passed,
    })
}

fn affine(params: &CurveParams, level: Level, seed: u64) -> Result<(Counts, Vec<CheckResult>), CurveError> {
    params.check_affine_hypotheses()?;
    let pts = params.points();
    let n = pts.len();
    if n > TABLE_LIMIT {
        return Err(CurveError::TooLarge(n));
    }
    let index = |p: &AffinePoint| pts.binary_search(p).ok();

    let rows: Vec<_> = (0..n)
        .into_par_iter()
        .map(|a| {
            let (mut summable, mut closure) = (Tally::default(), Tally::default());
            let row: Vec<_> = (0..n)
                .map(|b| {
                    let (p, q) = (&pts[a], &pts[b]);
                    summable.record(!params.delta(AddLaw::Plus0, p, q).is_zero(), wit![p, q]);
                    let s = params.add0(p, q).ok()?;
                    closure.record(params.on_curve(&s), wit![p, q, s]);
                    index(&s)
                })
                .collect();
            (row, summable, closure)
        })
        .collect();
    let mut cells = Vec::with_capacity(n * n);
    let (mut summable, mut closure) = (Tally::default(), Tally::default());
    for (row, s, c) in rows {
        cells.extend(row);
        summable = summable.merge(s);
        closure = closure.merge(c);
    }
    let label = |k: usize| pts[k].to_string();
    let table = Table { n, cells, label: &label };
    let identity = index(&params.identity()).expect("(1, 0) is on every curve");
    let inverse: Vec<_> = pts.iter().map(|p| index(&params.iota(p))).collect();

    let mut checks = vec![summable.finish("summable", None), closure.finish("closure", None)];
    checks.extend(table.axioms(identity, &inverse, level, seed));
    let counts = Counts {
        affine_points: n as u64,
        e_oo: None,
        classes: None,
    };
    Ok((counts, checks))
}

fn projective(params: &CurveParams, level: Level, seed: u64) -> Result<(Counts, Vec<CheckResult>), CurveError> {
    params.t()?;
    let pts = params.points();
    if pts.len() > TABLE_LIMIT {
        return Err(CurveError::TooLarge(pts.len()));
    }
    let oo: Vec<_> = pts.iter().filter(|p| p.is_oo()).cloned().collect();
    let classes = params.classes()?;
    let n = classes.len();
    let cindex = |c: &PointClass| classes.binary_search(c).ok();
    let class_of = |p: &AffinePoint, i: u8| params.glue(p, i).ok().and_then(|c| cindex(&c));
    let mut checks = Vec::new();

    // structure of E and of G
    let mut structure = Tally::default();
    for p in &pts {
        let mut holders = 0;
        for c in &classes {
            holders += c.members().iter().filter(|m| m.point == *p && m.i == 0).count();
        }
        let size = params.glue(p, 0).map(|c| c.members().len()).unwrap_or(0);
        let expect = if p.is_oo() { 2 } else { 1 };
        structure.record(holders == 1 && size == expect, wit![p]);
    }
    structure.record(n == 2 * pts.len() - oo.len(), wit![format!("|E| = {n}")]);
    checks.push(structure.finish("class_structure", None));

    let mut outside = Tally::default();
    let rotations: Vec<_> = (0..4)
        .map(|k| GElem { rho: k, tau: false }.apply(params, &params.identity()))
        .collect::<Result<_, _>>()?;
    let mut rest: Vec<_> = pts.iter().filter(|p| !p.is_oo()).cloned().collect();
    let mut rot_sorted = rotations.clone();
    rot_sorted.sort();
    rest.sort();
    outside.record(rest == rot_sorted, wit![format!("{rest:?}")]);
    checks.push(outside.finish("rotations_of_identity", None));

    let elems: Vec<_> = GElem::all().collect();
    let mut order = Tally::default();
    for (k, g) in elems.iter().enumerate() {
        for h in &elems[k + 1..] {
            let differ = oo.iter().any(|p| g.apply(params, p).ok() != h.apply(params, p).ok());
            order.record(differ, wit![g, h]);
        }
    }
    checks.push(order.finish("g_has_order_eight", None));

    let fixed = par_tally(oo.len(), |a, t| {
        let p = &oo[a];
        for g in elems.iter().filter(|g| **g != GElem::ONE) {
            t.record(g.apply(params, p).ok().is_some_and(|q| q != *p), wit![g, p]);
        }
    });
    checks.push(fixed.finish("fixed_point_free", None));

    // dichotomy and pairwise lemmas over E_aff × E_aff
    let m = pts.len();
    let dich = par_tally(m, |a, t| {
        for q in &pts {
            let p = &pts[a];
            let ok = match params.dichotomy(p, q) {
                Ok(Dichotomy::Summable(law)) => !params.delta(law, p, q).is_zero(),
                Ok(Dichotomy::NotSummable(g)) => {
                    p.is_oo()
                        && g.tau
                        && g.apply(params, &params.iota(p)).ok().as_ref() == Some(q)
                        && params.delta(AddLaw::Plus0, p, q).is_zero()
                        && params.delta(AddLaw::Plus1, p, q).is_zero()
                }
                Err(_) => false,
            };
            t.record(ok, wit![p, q]);
        }
    });
    checks.push(dich.finish("dichotomy", None));

    let orbit = par_tally(oo.len(), |a, t| {
        let p = &oo[a];
        for k in 0..4 {
            let g = GElem { rho: k, tau: true };
            let Ok(q) = g.apply(params, &params.iota(p)) else {
                t.record(false, wit![p, g]);
                continue;
            };
            let both_zero =
                params.delta(AddLaw::Plus0, p, &q).is_zero() && params.delta(AddLaw::Plus1, p, &q).is_zero();
            t.record(both_zero, wit![p, q]);
        }
    });
    checks.push(orbit.finish("non_summable_orbit", None));

    let unique = par_tally(m, |a, t| {
        let p = &pts[a];
        for q in &pts {
            for law in [AddLaw::Plus0, AddLaw::Plus1] {
                if let Ok(s) = params.add(law, p, q) {
                    if s == params.identity() {
                        t.record(*q == params.iota(p), wit![p, q, law]);
                    }
                }
            }
        }
    });
    checks.push(unique.finish("inverse_unique", None));

    let (coh, clos1) = (0..m)
        .into_par_iter()
        .map(|a| {
            let (mut coh, mut clos) = (Tally::default(), Tally::default());
            let p = &pts[a];
            for q in &pts {
                let s1 = params.add1(p, q).ok();
                if let Some(s) = &s1 {
                    clos.record(params.on_curve(s), wit![p, q, s]);
                }
                if let (Ok(s0), Some(s1)) = (params.add0(p, q), s1) {
                    coh.record(s0 == s1, wit![p, q, s0, s1]);
                }
            }
            (coh, clos)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((Tally::default(), Tally::default()), |(a, b), (c, d)| (a.merge(c), b.merge(d)));
    checks.push(coh.finish("coherence", None));
    checks.push(clos1.finish("closure_plus1", None));

    checks.extend(delta_relations(params, &pts));

    // class addition table
    let rows: Vec<_> = (0..n)
        .into_par_iter()
        .map(|a| {
            let (mut cover, mut wd) = (Tally::default(), Tally::default());
            let row: Vec<_> = (0..n)
                .map(|b| {
                    let (x, y) = (&classes[a], &classes[b]);
                    match params.proj_add(x, y) {
                        Ok(s) => {
                            cover.record(true, Vec::new);
                            wd.record(true, Vec::new);
                            cindex(&s)
                        }
                        Err(e @ CurveError::Ambiguous { .. }) => {
                            cover.record(true, Vec::new);
                            wd.record(false, wit![x, y, e]);
                            None
                        }
                        Err(e) => {
                            cover.record(false, wit![x, y, e]);
                            None
                        }
                    }
                })
                .collect();
            (row, cover, wd)
        })
        .collect();
    let mut cells = Vec::with_capacity(n * n);
    let (mut cover, mut wd) = (Tally::default(), Tally::default());
    for (row, c, w) in rows {
        cells.extend(row);
        cover = cover.merge(c);
        wd = wd.merge(w);
    }
    checks.push(cover.finish("covering", None));
    checks.push(wd.finish("well_defined", None));

    let label = |k: usize| classes[k].to_string();
    let table = Table { n, cells, label: &label };
    let identity = cindex(&params.identity_class()?).expect("identity class");
    let inverse: Vec<_> = classes
        .iter()
        .map(|c| params.proj_inverse(c).ok().and_then(|i| cindex(&i)))
        .collect();
    checks.extend(table.axioms(identity, &inverse, level, seed));

    let semi = par_tally(m, |a, t| {
        let p = &pts[a];
        for q in &pts {
            let lhs = class_of(p, 0)
                .zip(class_of(q, 0))
                .and_then(|(cp, cq)| table.get(cp, cq))
                .zip(class_of(&params.iota(q), 0))
                .and_then(|(s, ciq)| table.get(s, ciq));
            t.record(lhs.is_some() && lhs == class_of(p, 0), wit![p, q]);
        }
    });
    checks.push(semi.finish("semi", None));

    let gens = [GElem { rho: 1, tau: false }, GElem { rho: 0, tau: true }];
    let act: Vec<Vec<Option<usize>>> = gens
        .iter()
        .map(|g| classes.iter().map(|c| params.act(*g, c).ok().and_then(|x| cindex(&x))).collect())
        .collect();
    let equi = par_tally(n, |a, t| {
        for (gi, g) in gens.iter().enumerate() {
            for b in 0..n {
                let lhs = act[gi][a].and_then(|ga| table.get(ga, b));
                let rhs = table.get(a, b).and_then(|s| act[gi][s]);
                t.record(lhs.is_some() && lhs == rhs, wit![g, classes[a], classes[b]]);
            }
        }
    });
    checks.push(equi.finish("g_equivariance", None));

    let counts = Counts {
        affine_points: m as u64,
        e_oo: Some(oo.len() as u64),
        classes: Some(n as u64),
    };
    Ok((counts, checks))
}

/// The eight implications between nonvanishing denominators used in the
/// associativity proof. `δ` is the `⊕₀` denominator and `δ'` the `⊕₁` one.
/// The last two rows are read on pairs: the hypothesis on `(P₁, P₂)`
/// licenses the sum `R` that appears in the conclusion.
fn delta_relations(params: &CurveParams, pts: &[AffinePoint]) -> Vec<CheckResult> {
    use AddLaw::{Plus0, Plus1};
    let nz = |law: AddLaw, p: &AffinePoint, q: &AffinePoint| !params.delta(law, p, q).is_zero();
    let d0 = |p: &AffinePoint, q: &AffinePoint| nz(Plus0, p, q);
    let d1 = |p: &AffinePoint, q: &AffinePoint| nz(Plus1, p, q);
    let tau = |p: &AffinePoint| params.tau(p).ok();
    let m = pts.len();
    let row = |k: usize| -> Tally {
        par_tally(m, |a, t| {
            let p1 = &pts[a];
            for p2 in pts.iter().filter(|p| p.is_oo()) {
                let tp2 = tau(p2).expect("E_oo");
                let tip2 = tau(&params.iota(p2)).expect("E_oo");
                let ip2 = params.iota(p2);
                match k {
                    1 | 2 if p1.is_oo() => {
                        let tp1 = tau(p1).expect("E_oo");
                        let law = if k == 1 { Plus0 } else { Plus1 };
                        if nz(law, &tp1, &tp2) {
                            t.record(nz(law, p1, p2), wit![p1, p2]);
                        }
                    }
                    3 if d0(p1, p2) && d0(p1, &tp2) => t.record(d1(p1, p2), wit![p1, p2]),
                    4 if d1(p1, p2) && d1(p1, &tp2) => t.record(d0(p1, p2), wit![p1, p2]),
                    5 | 8 if d1(p1, p2) => {
                        let r = params.add1(p1, p2).expect("summable");
                        let (hyp, concl) = if k == 5 { (Plus1, Plus0) } else { (Plus0, Plus1) };
                        if nz(hyp, &r, &tip2) {
                            t.record(nz(concl, &r, &ip2), wit![p1, p2, r]);
                        }
                    }
                    6 | 7 if d0(p1, p2) => {
                        let r = params.add0(p1, p2).expect("summable");
                        let (hyp, concl) = if k == 6 { (Plus0, Plus1) } else { (Plus1, Plus0) };
                        if nz(hyp, &r, &tip2) {
                            t.record(nz(concl, &r, &ip2), wit![p1, p2, r]);
                        }
                    }
                    _ => {}
                }
            }
        })
    };
    (1..=8)
        .map(|k| row(k).finish(&format!("delta_relation_{k}"), None))
        .collect()
}
