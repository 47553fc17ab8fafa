//! Acceptance suite. Runs without the libtest harness so that the one-line
//! verdict per criterion always shows up in `cargo test` output.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{Model, Pt};
use edwards_core::curve::{
    bridge_check, group_check, AddLaw, AffinePoint, CheckMode, CurveParams, Dichotomy, Level, PointClass, Report,
};
use edwards_core::ffield::PrimeField;
use edwards_core::identities::{
    certify, certify_all, dichotomy_generators, prove, verify_certificate, Claim, Identity, IdentityError, Strategy,
    CHECK_SAMPLES,
};
use edwards_core::mpoly::{groebner, reduce, MPoly, MonomialOrder};

const CERT_BUDGET: Duration = Duration::from_secs(60);
const AFFINE_BUDGET: Duration = Duration::from_secs(30);
const PROJECTIVE_BUDGET: Duration = Duration::from_secs(300);
const BRIDGE_PAIRS: usize = 1000;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn field(p: u64) -> PrimeField {
    PrimeField::new(p).expect("prime")
}

fn pt(a: &AffinePoint) -> Pt {
    (a.x.to_u64(), a.y.to_u64())
}

fn class_key(c: &PointClass) -> Vec<(u8, u64, u64)> {
    c.members().iter().map(|m| (m.i, m.point.x.to_u64(), m.point.y.to_u64())).collect()
}

fn require_all_passed(r: &Report) -> Result<(), String> {
    let failed: Vec<_> = r.failures().map(|c| format!("{} (witness {:?})", c.name, c.witness)).collect();
    ensure(failed.is_empty(), || format!("failed checks: {}", failed.join("; ")))
}

fn c1_certificate_suite() -> Outcome {
    let start = Instant::now();
    let results = certify_all(None);
    let mut per_family: BTreeMap<&'static str, usize> = BTreeMap::new();
    for (id, res) in &results {
        let cert = res.as_ref().map_err(|e| format!("{id}: {e}"))?;
        let v = verify_certificate(cert);
        ensure(v.passed && v.replay && v.evaluations == CHECK_SAMPLES, || {
            format!("{id}: {:?}", v.diagnostic)
        })?;
        *per_family.entry(id.family()).or_default() += 1;
    }
    let elapsed = start.elapsed();
    let expected = [
        ("closure", 1),
        ("inverse", 2),
        ("assoc_generic", 2),
        ("affine_closure", 1),
        ("coherence_add", 2),
        ("coherence_closure", 1),
        ("plus1_definition", 2),
        ("tau_invariance", 4),
        ("rho_invariance", 6),
        ("iota_rules", 8),
        ("dichotomy_plus", 3),
        ("dichotomy_minus", 3),
        ("inverse_unique", 4),
        ("assoc_mixed", 32),
        ("tau_annihilates", 8),
    ];
    for (family, n) in expected {
        ensure(per_family.get(family) == Some(&n), || {
            format!("family {family}: expected {n} certificates, found {:?}", per_family.get(family))
        })?;
    }
    ensure(elapsed <= CERT_BUDGET, || format!("took {elapsed:.1?}, budget {CERT_BUDGET:?}"))?;
    Ok(format!(
        "{} certificates replay exactly and pass {CHECK_SAMPLES} evaluations each, {elapsed:.1?} (budget {CERT_BUDGET:?})",
        results.len()
    ))
}

fn c2_affine_closure_cofactors() -> Outcome {
    let cert = certify(Identity::AffineClosure).map_err(|e| e.to_string())?;
    let k = cert.context();
    let parse = |s: &str| MPoly::parse(k, s).expect("parses");
    let basis = [
        parse("x1^2 + c*y1^2 - 1 - d*x1^2*y1^2"),
        parse("(1 - d*x1*y1*x2*y2)*(1 + d*x1*y1*x2*y2)"),
        parse("x2^2 + c*y2^2 - 1 - d*x2^2*y2^2"),
    ];
    let cofactors = [parse("d^2*y1^2*y2^2*x2^2"), parse("1 - d*y1^2"), parse("-d*y1^2")];
    ensure(cert.basis == basis, || format!("basis differs: {:?}", cert.basis))?;
    ensure(cert.cofactors == cofactors, || {
        format!("cofactors differ: {}", cert.cofactors.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
    })?;
    ensure(cert.target == parse("(1 - c*d*y1^2*y2^2)*(1 - d*y1^2*x2^2)"), || "target differs".into())?;
    Ok(format!(
        "cofactors ({}), ({}), ({}) against (e1, delta, e2)",
        cert.cofactors[0], cert.cofactors[1], cert.cofactors[2]
    ))
}

fn c3_corrected_dichotomy() -> Outcome {
    let (sym, gens) = dichotomy_generators(false).map_err(|e| e.to_string())?;
    let k = sym.context();
    let uncorrected = MPoly::parse(k, "y0^2 - x1^2").expect("parses");
    let corrected = MPoly::parse(k, "2*x0*y0*(y0^2 - x1^2)").expect("parses");
    for order in [MonomialOrder::Lex, MonomialOrder::Grevlex] {
        let gb = groebner(&gens, order).map_err(|e| e.to_string())?;
        let r_bad = reduce(&uncorrected, &gb, order).map_err(|e| e.to_string())?.remainder;
        let r_good = reduce(&corrected, &gb, order).map_err(|e| e.to_string())?.remainder;
        ensure(!r_bad.is_zero(), || format!("uncorrected target reduced to zero ({order:?})"))?;
        ensure(r_good.is_zero(), || format!("corrected target left {r_good} ({order:?})"))?;
    }
    let claim = |target: MPoly, name: &str| Claim {
        name: name.into(),
        target,
        basis: gens.clone(),
        order: MonomialOrder::Grevlex,
        denominator: sym.one(),
        invertibles: vec![],
    };
    match prove(claim(uncorrected, "uncorrected"), &Strategy::Groebner) {
        Err(IdentityError::ReductionFailed { .. }) => {}
        other => return Err(format!("uncorrected target: expected a reduction failure, got {other:?}")),
    }
    let cert = prove(claim(corrected, "corrected"), &Strategy::Groebner).map_err(|e| e.to_string())?;
    let v = verify_certificate(&cert);
    ensure(v.passed, || format!("corrected certificate: {:?}", v.diagnostic))?;
    Ok("y0^2 - x1^2 leaves a nonzero remainder mod S-, 2*x0*y0*(y0^2 - x1^2) reduces to 0 and certifies".into())
}

fn c4_affine_exhaustive() -> Outcome {
    let start = Instant::now();
    let mut summary = Vec::new();
    for (p, c, d) in [(5u64, 1u64, 2u64), (13, 1, 2), (17, 1, 3), (29, 1, 2)] {
        let m = Model::general(p, c, d);
        ensure(m.is_square(c) && !m.is_square(d), || format!("({p},{c},{d}) fails the Euler-criterion hypotheses"))?;
        let params = CurveParams::general(&field(p), c, d);
        let pts: Vec<Pt> = params.points().iter().map(pt).collect();
        ensure(pts == m.points(), || format!("p={p}: point lists differ"))?;
        for &a in &pts {
            for &b in &pts {
                let lib = params
                    .add0(&params.point(a.0, a.1).unwrap(), &params.point(b.0, b.1).unwrap())
                    .ok()
                    .map(|s| pt(&s));
                ensure(lib == m.add0(a, b) && lib.is_some(), || format!("p={p}: {a:?} + {b:?} differs from the model"))?;
            }
        }
        let r = group_check(&params, CheckMode::Affine, Level::Full, 0).map_err(|e| e.to_string())?;
        require_all_passed(&r)?;
        let n = pts.len() as u64;
        let assoc = r.check("associativity").expect("present");
        ensure(assoc.checked == n.pow(3), || format!("p={p}: associativity covered {} of {} triples", assoc.checked, n.pow(3)))?;
        summary.push(format!("p={p}: {n} points, {} triples", n.pow(3)));
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= AFFINE_BUDGET, || format!("took {elapsed:.1?}"))?;
    Ok(format!("{} in {elapsed:.1?}", summary.join(", ")))
}

fn c5_projective_exhaustive() -> Outcome {
    let start = Instant::now();
    let mut summary = Vec::new();
    for (p, t) in [(13u64, 2u64), (17, 2)] {
        let m = Model::rescaled(p, t);
        let params = CurveParams::rescaled(&field(p), t).map_err(|e| e.to_string())?;
        let r = group_check(&params, CheckMode::Projective, Level::Full, 0).map_err(|e| e.to_string())?;
        require_all_passed(&r)?;
        let classes = params.classes().map_err(|e| e.to_string())?;
        let model_classes = m.classes();
        let n = classes.len();
        ensure(classes.iter().map(class_key).collect::<Vec<_>>() == model_classes, || {
            format!("p={p}: class lists differ from the model")
        })?;
        for name in ["covering", "well_defined", "identity", "inverse", "commutativity", "associativity"] {
            let c = r.check(name).expect("present");
            ensure(c.failures == 0, || format!("p={p}: {name} failed"))?;
        }
        ensure(r.check("associativity").unwrap().checked == (n as u64).pow(3), || "associativity not exhaustive".into())?;
        // the model adds with the first rule it finds; the library insists all rules agree
        let mut table = vec![vec![0usize; n]; n];
        for (a, ca) in classes.iter().enumerate() {
            for (b, cb) in classes.iter().enumerate() {
                let lib = class_key(&params.proj_add(ca, cb).map_err(|e| e.to_string())?);
                let model = m.proj_add(&model_classes[a], &model_classes[b]).ok_or("model found no rule")?;
                ensure(lib == model, || format!("p={p}: sums differ for {ca} + {cb}"))?;
                table[a][b] = model_classes.binary_search(&model).map_err(|_| "sum is not a class")?;
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    ensure(table[table[a][b]][c] == table[a][table[b][c]], || {
                        format!("p={p}: model table not associative at ({a},{b},{c})")
                    })?;
                }
            }
        }
        summary.push(format!("(p,t)=({p},{t}): {n} classes, {} triples", n.pow(3)));
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= PROJECTIVE_BUDGET, || format!("took {elapsed:.1?}"))?;
    Ok(format!("{}; no NoRuleApplies, no Ambiguous, {elapsed:.1?}", summary.join(", ")))
}

fn c6_dichotomy_and_fixed_points() -> Outcome {
    let mut summary = Vec::new();
    for (p, t) in [(13u64, 2u64), (17, 2)] {
        let m = Model::rescaled(p, t);
        let params = CurveParams::rescaled(&field(p), t).map_err(|e| e.to_string())?;
        let pts = m.points();
        let (mut summable, mut orbit) = (0, 0);
        for &a in &pts {
            for &b in &pts {
                let d0 = m.delta0(a, b) != 0;
                let d1 = m.delta1(a, b) != 0;
                let in_orbit = m.is_oo(a) && (0..4).any(|k| m.g(k, true, m.iota(a)) == b);
                ensure((d0 || d1) != in_orbit, || format!("p={p}: {a:?}, {b:?} is not in exactly one case"))?;
                let lib = params
                    .dichotomy(&params.point(a.0, a.1).unwrap(), &params.point(b.0, b.1).unwrap())
                    .map_err(|e| e.to_string())?;
                match lib {
                    Dichotomy::Summable(AddLaw::Plus0) => ensure(d0, || "library chose plus0 with delta0 = 0".into())?,
                    Dichotomy::Summable(AddLaw::Plus1) => {
                        ensure(!d0 && d1, || "library chose plus1 although plus0 applies".into())?
                    }
                    Dichotomy::NotSummable(g) => ensure(in_orbit && m.g(g.rho as u32, g.tau, m.iota(a)) == b, || {
                        format!("library orbit witness {g} is wrong for {a:?}, {b:?}")
                    })?,
                }
                if in_orbit {
                    orbit += 1;
                } else {
                    summable += 1;
                }
            }
        }
        let oo: Vec<_> = pts.iter().copied().filter(|&q| m.is_oo(q)).collect();
        for &q in &oo {
            for k in 0..4 {
                for tau in [false, true] {
                    if k == 0 && !tau {
                        continue;
                    }
                    ensure(m.g(k, tau, q) != q, || format!("p={p}: fixed point {q:?} of rho^{k} tau={tau}"))?;
                }
            }
        }
        let r = group_check(&params, CheckMode::Projective, Level::Axioms, 0).map_err(|e| e.to_string())?;
        for name in ["dichotomy", "non_summable_orbit", "fixed_point_free", "g_has_order_eight", "inverse_unique"] {
            ensure(r.check(name).is_some_and(|c| c.passed), || format!("p={p}: report check {name} failed"))?;
        }
        summary.push(format!(
            "(p,t)=({p},{t}): {summable} summable + {orbit} orbit pairs, {} fixed-point tests",
            7 * oo.len()
        ));
    }
    Ok(summary.join("; "))
}

/// Independent evaluation of the eight implications, read on pairs.
fn model_relations(m: &Model) -> [(u64, u64); 8] {
    let pts = m.points();
    let mut out = [(0u64, 0u64); 8];
    let nz0 = |a, b| m.delta0(a, b) != 0;
    let nz1 = |a, b| m.delta1(a, b) != 0;
    let mut rec = |k: usize, ok: bool| {
        out[k].0 += 1;
        if !ok {
            out[k].1 += 1;
        }
    };
    for &p1 in &pts {
        for &p2 in pts.iter().filter(|&&q| m.is_oo(q)) {
            let tp2 = m.tau(p2);
            let ip2 = m.iota(p2);
            let tip2 = m.tau(ip2);
            if m.is_oo(p1) {
                let tp1 = m.tau(p1);
                if nz0(tp1, tp2) {
                    rec(0, nz0(p1, p2));
                }
                if nz1(tp1, tp2) {
                    rec(1, nz1(p1, p2));
                }
            }
            if nz0(p1, p2) && nz0(p1, tp2) {
                rec(2, nz1(p1, p2));
            }
            if nz1(p1, p2) && nz1(p1, tp2) {
                rec(3, nz0(p1, p2));
            }
            if let Some(r) = m.add1(p1, p2) {
                if nz1(r, tip2) {
                    rec(4, nz0(r, ip2));
                }
                if nz0(r, tip2) {
                    rec(7, nz1(r, ip2));
                }
            }
            if let Some(r) = m.add0(p1, p2) {
                if nz0(r, tip2) {
                    rec(5, nz1(r, ip2));
                }
                if nz1(r, tip2) {
                    rec(6, nz0(r, ip2));
                }
            }
        }
    }
    out
}

fn c7_delta_relations() -> Outcome {
    let mut summary = Vec::new();
    // (29, 3) is included because at (13, 2) some hypotheses never hold
    for (p, t) in [(13u64, 2u64), (29, 3)] {
        let m = Model::rescaled(p, t);
        let params = CurveParams::rescaled(&field(p), t).map_err(|e| e.to_string())?;
        let r = group_check(&params, CheckMode::Projective, Level::Axioms, 0).map_err(|e| e.to_string())?;
        let model = model_relations(&m);
        let mut counts = Vec::new();
        for (k, &(checked, failures)) in model.iter().enumerate() {
            let name = format!("delta_relation_{}", k + 1);
            let c = r.check(&name).ok_or(format!("missing {name}"))?;
            ensure(failures == 0 && c.passed, || format!("({p},{t}): {name} fails"))?;
            ensure(c.checked == checked, || {
                format!("({p},{t}): {name} checked {} tuples, model {checked}", c.checked)
            })?;
            counts.push(checked.to_string());
        }
        summary.push(format!("(p,t)=({p},{t}) instances [{}]", counts.join(", ")));
    }
    Ok(format!("all eight hold; {}", summary.join("; ")))
}

fn c8_bridge() -> Outcome {
    let k = field(10007);
    let general = CurveParams::general(&k, 3, 5);
    let rescaled = CurveParams::rescaled(&k, 2).map_err(|e| e.to_string())?;
    let mut summary = Vec::new();
    for (label, params, law) in [
        ("general plus0", &general, AddLaw::Plus0),
        ("rescaled plus0", &rescaled, AddLaw::Plus0),
        ("rescaled plus1", &rescaled, AddLaw::Plus1),
    ] {
        let r = bridge_check(params, law, BRIDGE_PAIRS, 0).map_err(|e| e.to_string())?;
        ensure(r.passed() && r.pairs == BRIDGE_PAIRS as u64, || format!("{label}: {r:?}"))?;
        if params.t().is_ok() {
            ensure(r.coherence_checked > 0, || format!("{label}: coherence never exercised"))?;
        }
        summary.push(format!("{label} {}/{} (coherence {}/{})", r.agreements, r.pairs, r.coherence_agreements, r.coherence_checked));
    }
    Ok(summary.join(", "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("certificate suite", c1_certificate_suite),
        ("affine-closure cofactors", c2_affine_closure_cofactors),
        ("corrected dichotomy target", c3_corrected_dichotomy),
        ("affine group law, exhaustive", c4_affine_exhaustive),
        ("projective group law, exhaustive", c5_projective_exhaustive),
        ("dichotomy and fixed points", c6_dichotomy_and_fixed_points),
        ("delta relations", c7_delta_relations),
        ("symbolic-numeric bridge", c8_bridge),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
