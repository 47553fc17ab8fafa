use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{IdentityError, VarietySampler};
use crate::ffield::PrimeField;
use crate::mpoly::{groebner_tracked, reduce, MPoly, MonomialOrder, VarContext};

pub const CERT_SCHEMA_VERSION: u32 = 1;

/// Prime used for the randomized kernel-property check.
pub const CHECK_PRIME: u32 = 10007;
pub const CHECK_SAMPLES: usize = 20;

/// Tried in order when the basis has no admissible point over `CHECK_PRIME`
/// (e.g. a component that needs `√−1`, which 10007 lacks).
pub const FALLBACK_PRIMES: [u32; 3] = [10009, 10037, 10039];

/// Sampling attempts spent looking for a first admissible point per prime.
const PROBE_ATTEMPTS: usize = 100;

/// An ideal-membership witness `target = Σ cofactors[i]·basis[i]`.
///
/// For identities between rational functions the target is the numerator
/// of the cross-multiplied difference; `denominator` keeps the cleared
/// denominator so it can be checked against `declared_invertibles`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub name: String,
    pub order: MonomialOrder,
    pub target: MPoly,
    pub basis: Vec<MPoly>,
    pub cofactors: Vec<MPoly>,
    pub declared_invertibles: Vec<MPoly>,
    pub denominator: MPoly,
    /// Invertible factor the target was multiplied by to make plain
    /// division succeed (1 when unused). Already folded into `target`.
    pub multiplier: MPoly,
}

impl Certificate {
    pub fn context(&self) -> &VarContext {
        self.target.context()
    }

    /// Largest total degree among the cofactors.
    pub fn cofactor_degree(&self) -> u32 {
        self.cofactors.iter().map(MPoly::total_degree).max().unwrap_or(0)
    }

    pub fn cofactor_terms(&self) -> Vec<usize> {
        self.cofactors.iter().map(MPoly::num_terms).collect()
    }
}

/// How a claimed membership is turned into cofactors.
#[derive(Clone, Debug)]
pub enum Strategy {
    /// Plain division by the basis, in sequence order.
    Division,
    /// Division of `multiplier^k · target` for `k = 0, step, 2·step, …, max_power`;
    /// the first `k` with zero remainder wins. The multiplier must be invertible.
    ScaledDivision { multiplier: MPoly, step: u32, max_power: u32 },
    /// Reduction against a Gröbner basis of the basis, with cofactors pulled
    /// back onto the original generators. Decides membership.
    Groebner,
}

/// The data of an identity before cofactors are known.
#[derive(Clone, Debug)]
pub struct Claim {
    pub name: String,
    pub target: MPoly,
    pub basis: Vec<MPoly>,
    pub order: MonomialOrder,
    pub denominator: MPoly,
    pub invertibles: Vec<MPoly>,
}

fn digest(p: &MPoly) -> String {
    let text = p.to_string();
    let short: String = text.chars().take(96).collect();
    let ellipsis = if short.len() < text.len() { "…" } else { "" };
    format!("{short}{ellipsis} [{} terms]", p.num_terms())
}

fn push_unique(list: &mut Vec<MPoly>, p: MPoly) {
    // units carry no information; other constants (such as 2) are kept
    let unit = p.as_constant().is_some_and(|c| c.abs().is_one());
    if !unit && !list.contains(&p) {
        list.push(p);
    }
}

/// Splits each denominator part over `atoms` (with multiplicity); whatever
/// is left of a part is declared invertible as is.
pub(crate) fn declare(parts: &[&MPoly], atoms: &[MPoly]) -> Result<Vec<MPoly>, IdentityError> {
    let mut out = Vec::new();
    for part in parts {
        let mut rest = (*part).clone();
        for a in atoms {
            while rest.as_constant().is_none() {
                match rest.divide_exact(a)? {
                    Some(q) => {
                        push_unique(&mut out, a.clone());
                        rest = q;
                    }
                    None => break,
                }
            }
        }
        if rest.as_constant().is_none() {
            push_unique(&mut out, rest);
        }
    }
    Ok(out)
}

/// True iff `p` is a nonzero constant times a product of the `factors`
/// (repetition allowed), decided by exact division.
pub fn is_product_of(p: &MPoly, factors: &[MPoly]) -> Result<bool, IdentityError> {
    if p.is_zero() {
        return Ok(false);
    }
    let mut rest = p.clone();
    let mut progress = true;
    while rest.as_constant().is_none() && progress {
        progress = false;
        for f in factors.iter().filter(|f| f.as_constant().is_none()) {
            if let Some(q) = rest.divide_exact(f)? {
                rest = q;
                progress = true;
            }
        }
    }
    Ok(rest.as_constant().is_some())
}

fn failed(name: &str, remainder: &MPoly) -> IdentityError {
    IdentityError::ReductionFailed {
        name: name.to_string(),
        remainder: digest(remainder),
    }
}

/// Builds cofactors for `claim` with the given strategy.
pub fn prove(claim: Claim, strategy: &Strategy) -> Result<Certificate, IdentityError> {
    let Claim {
        name,
        target,
        basis,
        order,
        denominator,
        mut invertibles,
    } = claim;
    let ctx = target.context().clone();
    let (target, cofactors, multiplier) = match strategy {
        Strategy::Division => {
            let red = reduce(&target, &basis, order)?;
            if !red.remainder.is_zero() {
                return Err(failed(&name, &red.remainder));
            }
            (target, red.cofactors, MPoly::one(&ctx))
        }
        Strategy::ScaledDivision {
            multiplier,
            step,
            max_power,
        } => {
            let mut k = 0;
            loop {
                let m = multiplier.pow(k);
                let scaled = &m * &target;
                let red = reduce(&scaled, &basis, order)?;
                if red.remainder.is_zero() {
                    if k > 0 {
                        push_unique(&mut invertibles, multiplier.clone());
                    }
                    break (scaled, red.cofactors, m);
                }
                k += (*step).max(1);
                if k > *max_power {
                    return Err(failed(&name, &red.remainder));
                }
            }
        }
        Strategy::Groebner => {
            let tb = groebner_tracked(&basis, order)?;
            let red = reduce(&target, &tb.basis, order)?;
            if !red.remainder.is_zero() {
                return Err(failed(&name, &red.remainder));
            }
            (target, tb.pull_back(&red.cofactors), MPoly::one(&ctx))
        }
    };
    Ok(Certificate {
        name,
        order,
        target,
        basis,
        cofactors,
        declared_invertibles: invertibles,
        denominator,
        multiplier,
    })
}

/// Outcome of [`verify_certificate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub passed: bool,
    pub replay: bool,
    pub denominator_invertible: bool,
    pub evaluations: usize,
    /// Characteristic of the field the evaluations ran in (0 if none ran).
    pub prime: u32,
    pub diagnostic: Option<String>,
}

fn seed_for(name: &str) -> u64 {
    let h = Sha256::digest(name.as_bytes());
    u64::from_le_bytes(h[..8].try_into().expect("8 bytes"))
}

/// Exact replay of the certificate, the invertibility of its denominator,
/// and [`CHECK_SAMPLES`] evaluations over F_10007 at points that kill the
/// basis (and keep the invertibles nonzero), each of which must kill the
/// target. If no such point exists over F_10007, the [`FALLBACK_PRIMES`]
/// are tried in turn.
pub fn verify_certificate(cert: &Certificate) -> Verification {
    verify_with_seed(cert, 0)
}

/// As [`verify_certificate`], with the evaluation points drawn from a
/// stream keyed by both the run seed and the certificate name.
pub fn verify_with_seed(cert: &Certificate, run_seed: u64) -> Verification {
    let seed = seed_for(&cert.name) ^ run_seed;
    let mut v = Verification {
        passed: false,
        replay: false,
        denominator_invertible: false,
        evaluations: 0,
        prime: 0,
        diagnostic: None,
    };
    let ctx = cert.context();
    let same_ctx = cert
        .basis
        .iter()
        .chain(&cert.cofactors)
        .chain(&cert.declared_invertibles)
        .chain([&cert.denominator, &cert.multiplier])
        .all(|p| p.context() == ctx);
    if !same_ctx || cert.basis.len() != cert.cofactors.len() {
        v.diagnostic = Some("certificate parts disagree on context or length".into());
        return v;
    }

    let mut diff = cert.target.clone();
    for (q, b) in cert.cofactors.iter().zip(&cert.basis) {
        diff = &diff - &(q * b);
    }
    if !diff.is_zero() {
        let lead = diff
            .leading_term(cert.order)
            .map(|(m, c)| MPoly::monomial(ctx, m.clone(), c.clone()))
            .expect("nonzero");
        v.diagnostic = Some(format!("replay leaves {}, first term {}", digest(&diff), lead));
        return v;
    }
    v.replay = true;

    match is_product_of(&cert.denominator, &cert.declared_invertibles) {
        Ok(true) => v.denominator_invertible = true,
        Ok(false) => {
            v.diagnostic = Some(format!(
                "denominator {} is not a product of declared invertibles",
                digest(&cert.denominator)
            ));
            return v;
        }
        Err(e) => {
            v.diagnostic = Some(e.to_string());
            return v;
        }
    }
    if !matches!(is_product_of(&cert.multiplier, &cert.declared_invertibles), Ok(true)) {
        v.diagnostic = Some("multiplier is not a product of declared invertibles".into());
        return v;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nonzero: Vec<MPoly> = cert.declared_invertibles.clone();
    for prime in std::iter::once(CHECK_PRIME).chain(FALLBACK_PRIMES) {
        let field = PrimeField::new(prime).expect("prime");
        let sampler = match VarietySampler::new(&cert.basis, &field) {
            Ok(s) => s,
            Err(e) => {
                v.diagnostic = Some(format!("sampler: {e}"));
                return v;
            }
        };
        let Some(first) = sampler.sample(&mut rng, &nonzero, PROBE_ATTEMPTS) else {
            continue;
        };
        v.prime = prime;
        let mut point = Some(first);
        while v.evaluations < CHECK_SAMPLES {
            let Some(p) = point.take().or_else(|| sampler.sample(&mut rng, &nonzero, 4 * PROBE_ATTEMPTS)) else {
                v.diagnostic = Some(format!("ran out of points on the variety of the basis over F_{prime}"));
                return v;
            };
            let values: Vec<_> = p.into_iter().map(Some).collect();
            match cert.target.evaluate_slice(&field, &values) {
                Ok(val) if val.is_zero() => v.evaluations += 1,
                Ok(val) => {
                    v.diagnostic = Some(format!("target evaluates to {val} at a point killing the basis"));
                    return v;
                }
                Err(e) => {
                    v.diagnostic = Some(e.to_string());
                    return v;
                }
            }
        }
        break;
    }
    if v.evaluations < CHECK_SAMPLES {
        v.diagnostic = Some("could not find points on the variety of the basis".into());
        return v;
    }
    v.passed = true;
    v
}

/// On-disk form. Polynomials use the canonical text form; target and
/// cofactors are multiplied through by `scale` so every coefficient is an
/// integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertJson {
    pub schema_version: u32,
    pub name: String,
    pub variables: Vec<String>,
    pub order: MonomialOrder,
    pub target: String,
    pub basis: Vec<String>,
    pub cofactors: Vec<String>,
    pub invertibles: Vec<String>,
    pub denominator: String,
    pub multiplier: String,
    pub scale: String,
}

fn integral(p: &MPoly) -> MPoly {
    let l = p.denominator_lcm();
    p.scale(&BigRational::from_integer(l))
}

impl Certificate {
    pub fn to_json(&self) -> CertJson {
        let order = self.order;
        let text = |p: &MPoly| p.to_text(order);
        // make basis entries integral, compensating in the cofactors
        let mut basis = Vec::with_capacity(self.basis.len());
        let mut cofs = Vec::with_capacity(self.cofactors.len());
        for (b, q) in self.basis.iter().zip(&self.cofactors) {
            let l = BigRational::from_integer(b.denominator_lcm());
            basis.push(b.scale(&l));
            cofs.push(q.scale(&l.recip()));
        }
        let scale = cofs
            .iter()
            .chain([&self.target])
            .fold(BigInt::one(), |acc, p| acc.lcm(&p.denominator_lcm()));
        let s = BigRational::from_integer(scale.clone());
        CertJson {
            schema_version: CERT_SCHEMA_VERSION,
            name: self.name.clone(),
            variables: self.context().names().to_vec(),
            order,
            target: text(&self.target.scale(&s)),
            basis: basis.iter().map(text).collect(),
            cofactors: cofs.iter().map(|q| text(&q.scale(&s))).collect(),
            invertibles: self.declared_invertibles.iter().map(|p| text(&integral(p))).collect(),
            denominator: text(&integral(&self.denominator)),
            multiplier: text(&integral(&self.multiplier)),
            scale: scale.to_string(),
        }
    }

    pub fn from_json(j: &CertJson) -> Result<Self, IdentityError> {
        if j.schema_version != CERT_SCHEMA_VERSION {
            return Err(IdentityError::Malformed(format!(
                "schema version {} (expected {CERT_SCHEMA_VERSION})",
                j.schema_version
            )));
        }
        let ctx = VarContext::new(&j.variables)?;
        let parse = |s: &str| MPoly::parse(&ctx, s).map_err(IdentityError::from);
        let scale: BigInt = j
            .scale
            .parse()
            .map_err(|_| IdentityError::Malformed(format!("bad scale `{}`", j.scale)))?;
        if scale.is_zero() {
            return Err(IdentityError::Malformed("zero scale".into()));
        }
        let inv = BigRational::new(BigInt::one(), scale);
        let all = |v: &[String]| v.iter().map(|s| parse(s)).collect::<Result<Vec<_>, _>>();
        Ok(Certificate {
            name: j.name.clone(),
            order: j.order,
            target: parse(&j.target)?.scale(&inv),
            basis: all(&j.basis)?,
            cofactors: all(&j.cofactors)?.iter().map(|q| q.scale(&inv)).collect(),
            declared_invertibles: all(&j.invertibles)?,
            denominator: parse(&j.denominator)?,
            multiplier: parse(&j.multiplier)?,
        })
    }
}
