use edwards_core::ffield::PrimeField;
use edwards_core::identities::{
    certify, certify_family, dichotomy_generators, verify_certificate, verify_with_seed, AddLaw, Certificate, Component,
    Identity,
};
use edwards_core::mpoly::{groebner, reduce, MPoly, MonomialOrder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `target == Σ rᵢ·bᵢ` is a polynomial identity, so it has to hold at every
/// point, not just on the variety. Check it at random points off the variety
/// modulo a Mersenne prime unrelated to the one verification samples over.
fn holds_everywhere(cert: &Certificate, rounds: usize) -> bool {
    let field = PrimeField::new((1u64 << 61) - 1).unwrap();
    let n = cert.context().len();
    let mut rng = ChaCha8Rng::seed_from_u64(0xed);
    (0..rounds).all(|_| {
        let vals: Vec<_> = (0..n).map(|_| Some(field.elem(rng.gen::<u64>()))).collect();
        let ev = |p: &MPoly| p.evaluate_slice(&field, &vals).unwrap();
        let mut rhs = field.zero();
        for (r, b) in cert.cofactors.iter().zip(&cert.basis) {
            rhs = &rhs + &(&ev(r) * &ev(b));
        }
        ev(&cert.target) == rhs
    })
}

#[test]
fn affine_closure_transcribed_by_hand_verifies() {
    let built = certify(Identity::AffineClosure).unwrap();
    let k = built.context().clone();
    let p = |s: &str| MPoly::parse(&k, s).unwrap();
    let cert = Certificate {
        name: "affine_closure_by_hand".into(),
        order: MonomialOrder::Lex,
        target: p("(1 - c*d*y1^2*y2^2)*(1 - d*y1^2*x2^2)"),
        basis: vec![
            p("x1^2 + c*y1^2 - 1 - d*x1^2*y1^2"),
            p("1 - d^2*x1^2*y1^2*x2^2*y2^2"),
            p("x2^2 + c*y2^2 - 1 - d*x2^2*y2^2"),
        ],
        cofactors: vec![p("d^2*y1^2*y2^2*x2^2"), p("1 - d*y1^2"), p("-d*y1^2")],
        declared_invertibles: vec![],
        denominator: p("1"),
        multiplier: p("1"),
    };
    assert!(verify_certificate(&cert).passed);
    assert!(holds_everywhere(&cert, 10));

    let mut broken = cert.clone();
    broken.cofactors[2] = p("d*y1^2");
    let v = verify_certificate(&broken);
    assert!(!v.passed && !v.replay);
}

#[test]
fn assoc_generic_size_is_pinned() {
    // measured once from the computed certificates; a change means the engine changed
    for c in [Component::X, Component::Y] {
        let cert = certify(Identity::AssocGeneric(c)).unwrap();
        assert_eq!(cert.basis.len(), 3);
        assert!(cert.cofactor_degree() <= 14, "{}: degree {}", cert.name, cert.cofactor_degree());
        assert!(holds_everywhere(&cert, 3));
    }
    let x = certify(Identity::AssocGeneric(Component::X)).unwrap();
    assert_eq!(x.cofactor_degree(), 14);
    assert_eq!(x.cofactor_terms(), vec![16, 64, 40]);
}

#[test]
fn mixed_associativity_needs_at_most_t_to_the_fourth() {
    let certs = certify_family("assoc_mixed").unwrap();
    assert_eq!(certs.len(), 32);
    let k = certs[0].context().clone();
    let allowed: Vec<_> = ["1", "t^2", "t^4"].iter().map(|s| MPoly::parse(&k, s).unwrap()).collect();
    for cert in &certs {
        assert!(allowed.contains(&cert.multiplier), "{}: {}", cert.name, cert.multiplier);
        assert!(verify_certificate(cert).passed, "{}", cert.name);
    }
    // the all-⊕₀ case is the generic one and needs no rescaling
    let plain = certify(Identity::AssocMixed([0, 0, 0, 0], Component::X)).unwrap();
    assert_eq!(plain.multiplier, allowed[0]);
}

#[test]
fn verification_does_not_depend_on_the_run_seed() {
    for id in [
        Identity::Closure,
        Identity::CoherenceAdd(Component::Y),
        Identity::DichotomyMinus(1),
        Identity::InverseUnique(AddLaw::Plus1, Component::X),
        Identity::TauAnnihilates(3, AddLaw::Plus0),
    ] {
        let cert = certify(id).unwrap();
        for seed in [1, 2, 0xdead_beef] {
            let v = verify_with_seed(&cert, seed);
            assert!(v.passed, "{id} with seed {seed}: {:?}", v.diagnostic);
        }
    }
}

#[test]
fn dichotomy_certificates_hold_identically() {
    for cert in certify_family("dichotomy_minus").unwrap().iter().chain(&certify_family("dichotomy_plus").unwrap()) {
        assert!(holds_everywhere(cert, 5), "{}", cert.name);
    }
}

#[test]
fn both_branches_reject_their_uncorrected_targets() {
    for (plus, bad) in [(false, "y0^2 - x1^2"), (true, "x0^2 - x1^2")] {
        let (sym, gens) = dichotomy_generators(plus).unwrap();
        let gb = groebner(&gens, MonomialOrder::Grevlex).unwrap();
        let f = MPoly::parse(sym.context(), bad).unwrap();
        let r = reduce(&f, &gb, MonomialOrder::Grevlex).unwrap();
        assert!(!r.remainder.is_zero(), "{bad} should not lie in the ideal (plus = {plus})");
    }
}

#[test]
fn exported_cofactors_have_integer_coefficients() {
    for id in [Identity::AffineClosure, Identity::Plus1Definition(Component::X), Identity::DichotomyMinus(2)] {
        let cert = certify(id).unwrap();
        let json = cert.to_json();
        for s in json.cofactors.iter().chain(&json.basis).chain([&json.target]) {
            assert!(!s.contains('/'), "{id}: {s}");
        }
        let back = Certificate::from_json(&json).unwrap();
        assert!(verify_certificate(&back).passed, "{id}");
    }
}
