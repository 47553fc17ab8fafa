use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{AddLaw, AffinePoint, CurveError, CurveMode, CurveParams};
use crate::ffield::FieldElement;
use crate::identities::SymbolicCurve;

/// A uniformly chosen `x` with a solvable `y`, and a random sign for `y`.
/// Small fields where that keeps failing fall back to the point list.
pub fn random_point<R: Rng + ?Sized>(params: &CurveParams, rng: &mut R) -> AffinePoint {
    let field = params.field();
    let one = field.one();
    for _ in 0..64 {
        let x = field.random(rng);
        let x2 = x.square();
        let Ok(y2) = (&one - &x2).checked_div(&(params.c() - &(params.d() * &x2))) else {
            continue;
        };
        if let Ok(y) = y2.sqrt() {
            let y = if rng.gen::<bool>() { -&y } else { y };
            return AffinePoint::new(x, y);
        }
    }
    let pts = params.points();
    pts[rng.gen_range(0..pts.len())].clone()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BridgeReport {
    pub layer: AddLaw,
    pub pairs: u64,
    pub agreements: u64,
    /// Pairs where both laws were defined, and how many of them agreed.
    pub coherence_checked: u64,
    pub coherence_agreements: u64,
    pub witness: Option<Vec<String>>,
}

impl BridgeReport {
    pub fn passed(&self) -> bool {
        self.agreements == self.pairs && self.coherence_agreements == self.coherence_checked && self.witness.is_none()
    }
}

/// Compares the formula layer with the symbolic rational functions on
/// `pairs` random summable pairs. When the curve is rescaled, also compares
/// the two laws wherever both are defined.
pub fn bridge_check(params: &CurveParams, layer: AddLaw, pairs: usize, seed: u64) -> Result<BridgeReport, CurveError> {
    if layer == AddLaw::Plus1 {
        params.t()?;
    }
    let sym = match params.mode() {
        CurveMode::General => SymbolicCurve::general(2),
        CurveMode::Rescaled => SymbolicCurve::rescaled(2),
    };
    let law = sym
        .build_add(layer, (1, 2))
        .map_err(|_| CurveError::ModeMismatch("rescaled"))?;
    let names = sym.context().names().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = BridgeReport {
        layer,
        pairs: 0,
        agreements: 0,
        coherence_checked: 0,
        coherence_agreements: 0,
        witness: None,
    };
    let field = params.field();
    while report.pairs < pairs as u64 {
        let p = random_point(params, &mut rng);
        let q = random_point(params, &mut rng);
        if params.delta(layer, &p, &q).is_zero() {
            continue;
        }
        report.pairs += 1;
        let numeric = params.add(layer, &p, &q)?;
        let value = |name: &str| -> Option<FieldElement> {
            Some(match name {
                "x1" => p.x.clone(),
                "y1" => p.y.clone(),
                "x2" => q.x.clone(),
                "y2" => q.y.clone(),
                "c" => params.c().clone(),
                "d" => params.d().clone(),
                "t" => params.t().ok()?.clone(),
                _ => return None,
            })
        };
        let values: Vec<_> = names.iter().map(|n| value(n)).collect();
        let symbolic = law
            .0
            .evaluate(field, &values)
            .ok()
            .zip(law.1.evaluate(field, &values).ok())
            .map(|(x, y)| AffinePoint::new(x, y));
        if symbolic.as_ref() == Some(&numeric) {
            report.agreements += 1;
        } else if report.witness.is_none() {
            report.witness = Some(vec![p.to_string(), q.to_string(), numeric.to_string(), format!("{symbolic:?}")]);
        }
        if params.mode() == CurveMode::Rescaled {
            if let (Ok(a), Ok(b)) = (params.add0(&p, &q), params.add1(&p, &q)) {
                report.coherence_checked += 1;
                if a == b {
                    report.coherence_agreements += 1;
                } else if report.witness.is_none() {
                    report.witness = Some(vec![p.to_string(), q.to_string(), a.to_string(), b.to_string()]);
                }
            }
        }
    }
    Ok(report)
}
