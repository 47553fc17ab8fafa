use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::certificate::declare;
use super::{AddLaw, Certificate, Claim, CurveMode, IdentityError, Strategy, SymPoint, SymbolicCurve};
use crate::mpoly::{rational_sub_simplify, MPoly, MonomialOrder, RationalPair};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    X,
    Y,
}

impl Component {
    fn suffix(self) -> &'static str {
        match self {
            Component::X => "x",
            Component::Y => "y",
        }
    }

    fn pick(self, p: &SymPoint) -> &RationalPair {
        match self {
            Component::X => &p.x,
            Component::Y => &p.y,
        }
    }
}

const XY: [Component; 2] = [Component::X, Component::Y];
const LAWS: [AddLaw; 2] = [AddLaw::Plus0, AddLaw::Plus1];

/// Every identity the group-law argument rests on. Identities between
/// points are split into their x and y components, one certificate each.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `e(z₁ ⊕₀ z₂)` lies in `⟨e₁, e₂⟩` after clearing `δ²`.
    Closure,
    /// `z ⊕₀ ιz = (1, 0)` on the curve.
    Inverse(Component),
    /// `(z₁ ⊕₀ z₂) ⊕₀ z₃ ≡ z₁ ⊕₀ (z₂ ⊕₀ z₃)` mod `{e₁, e₂, e₃}`.
    AssocGeneric(Component),
    /// The explicit combination of `e₁, δ, e₂` forcing `d` or `cd` square.
    AffineClosure,
    /// `z₁ ⊕₀ z₂ ≡ z₁ ⊕₁ z₂` mod `{e₁, e₂}`.
    CoherenceAdd(Component),
    /// `e(z₁ ⊕₁ z₂) ≡ 0` mod `{e₁, e₂}`.
    CoherenceClosure,
    /// `τ((τz₁) ⊕₀ z₂)` equals the displayed `⊕₁` formula.
    Plus1Definition(Component),
    /// `τz₁ ⊕ᵢ z₂ = z₁ ⊕ᵢ τz₂`.
    TauInvariance(AddLaw, Component),
    /// `ρz₁ ⊕ᵢ z₂ = ρ(z₁ ⊕ᵢ z₂)`.
    RhoInvariance(AddLaw, Component),
    /// `δᵢ(z₁, ρz₂) = ±δᵢ(z₁, z₂)` (plus for ⊕₀, minus for ⊕₁).
    RhoDelta(AddLaw),
    /// `ιτz = τ⁻¹ιz`.
    IotaTau(Component),
    /// `ιρz = ρ⁻¹ιz`.
    IotaRho(Component),
    /// `ι(z₁ ⊕ᵢ z₂) = ιz₁ ⊕ᵢ ιz₂`.
    IotaAdd(AddLaw, Component),
    /// Targets 1..=3 of the `δ₊ = 0` branch of the dichotomy.
    DichotomyPlus(u8),
    /// Targets 1..=3 of the `δ₋ = 0` branch of the dichotomy.
    DichotomyMinus(u8),
    /// `z₁ ⊕ᵢ z₂ = (1, 0)` forces `z₂ = ιz₁`.
    InverseUnique(AddLaw, Component),
    /// `(z₁ ⊕ₖ z₂) ⊕ₗ z₃ ≡ z₁ ⊕ᵢ (z₂ ⊕ⱼ z₃)`, indexed `[i, j, k, l]`.
    AssocMixed([u8; 4], Component),
    /// `δₗ(z, τρᵏιz) = 0`, indexed `(k, l)`.
    TauAnnihilates(u8, AddLaw),
}

impl Identity {
    /// The full catalog in a fixed order.
    pub fn all() -> Vec<Identity> {
        use Identity::*;
        let mut v = vec![Closure];
        v.extend(XY.map(Inverse));
        v.extend(XY.map(AssocGeneric));
        v.push(AffineClosure);
        v.extend(XY.map(CoherenceAdd));
        v.push(CoherenceClosure);
        v.extend(XY.map(Plus1Definition));
        for law in LAWS {
            v.extend(XY.map(|c| TauInvariance(law, c)));
        }
        for law in LAWS {
            v.extend(XY.map(|c| RhoInvariance(law, c)));
            v.push(RhoDelta(law));
        }
        v.extend(XY.map(IotaTau));
        v.extend(XY.map(IotaRho));
        for law in LAWS {
            v.extend(XY.map(|c| IotaAdd(law, c)));
        }
        v.extend((1..=3).map(DichotomyPlus));
        v.extend((1..=3).map(DichotomyMinus));
        for law in LAWS {
            v.extend(XY.map(|c| InverseUnique(law, c)));
        }
        for bits in 0u8..16 {
            let ijkl = [(bits >> 3) & 1, (bits >> 2) & 1, (bits >> 1) & 1, bits & 1];
            v.extend(XY.map(|c| AssocMixed(ijkl, c)));
        }
        for k in 0..4 {
            v.extend(LAWS.map(|l| TauAnnihilates(k, l)));
        }
        v
    }

    pub fn family(&self) -> &'static str {
        use Identity::*;
        match self {
            Closure => "closure",
            Inverse(_) => "inverse",
            AssocGeneric(_) => "assoc_generic",
            AffineClosure => "affine_closure",
            CoherenceAdd(_) => "coherence_add",
            CoherenceClosure => "coherence_closure",
            Plus1Definition(_) => "plus1_definition",
            TauInvariance(..) => "tau_invariance",
            RhoInvariance(..) | RhoDelta(_) => "rho_invariance",
            IotaTau(_) | IotaRho(_) | IotaAdd(..) => "iota_rules",
            DichotomyPlus(_) => "dichotomy_plus",
            DichotomyMinus(_) => "dichotomy_minus",
            InverseUnique(..) => "inverse_unique",
            AssocMixed(..) => "assoc_mixed",
            TauAnnihilates(..) => "tau_annihilates",
        }
    }

    pub fn name(&self) -> String {
        use Identity::*;
        let f = self.family();
        match self {
            Closure | AffineClosure | CoherenceClosure => f.to_string(),
            Inverse(c) | AssocGeneric(c) | CoherenceAdd(c) | Plus1Definition(c) => {
                format!("{f}_{}", c.suffix())
            }
            TauInvariance(l, c) | RhoInvariance(l, c) | InverseUnique(l, c) => {
                format!("{f}_{}_{}", l.index(), c.suffix())
            }
            RhoDelta(l) => format!("{f}_delta_{}", l.index()),
            IotaTau(c) => format!("{f}_tau_{}", c.suffix()),
            IotaRho(c) => format!("{f}_rho_{}", c.suffix()),
            IotaAdd(l, c) => format!("{f}_add_{}_{}", l.index(), c.suffix()),
            DichotomyPlus(n) | DichotomyMinus(n) => format!("{f}_{n}"),
            AssocMixed([i, j, k, l], c) => format!("{f}_{i}{j}{k}{l}_{}", c.suffix()),
            TauAnnihilates(k, l) => format!("{f}_{k}_{}", l.index()),
        }
    }

    /// Whether `pattern` selects this identity: an exact name, its family,
    /// or any substring of the name.
    pub fn matches(&self, pattern: &str) -> bool {
        self.family() == pattern || self.name().contains(pattern)
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Identity {
    type Err = IdentityError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Identity::all()
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| IdentityError::UnknownIdentity(s.to_string()))
    }
}

fn one_of(sym: &SymbolicCurve) -> RationalPair {
    RationalPair::from_poly(sym.one())
}

fn curve_basis(sym: &SymbolicCurve, slots: &[usize]) -> Result<Vec<MPoly>, IdentityError> {
    slots.iter().map(|&k| sym.build_curve(k)).collect()
}

/// Coordinates of the listed slots and `t` (when present): factors that
/// are invertible wherever the identities are used.
fn coordinate_atoms(sym: &SymbolicCurve, slots: &[usize]) -> Result<Vec<MPoly>, IdentityError> {
    let mut atoms = Vec::new();
    if let Ok(t) = sym.t() {
        atoms.push(t);
    }
    for &k in slots {
        let (x, y) = sym.coords(k)?;
        atoms.push(x);
        atoms.push(y);
    }
    Ok(atoms)
}

fn rational_claim(
    name: String,
    left: &RationalPair,
    right: &RationalPair,
    basis: Vec<MPoly>,
    atoms: &[MPoly],
) -> Result<Claim, IdentityError> {
    let diff = rational_sub_simplify(left, right)?;
    Ok(Claim {
        name,
        target: diff.num,
        basis,
        order: MonomialOrder::Lex,
        denominator: diff.den,
        invertibles: declare(&[&left.den, &right.den], atoms)?,
    })
}

fn prove_first(claim: Claim, strategies: &[Strategy]) -> Result<Certificate, IdentityError> {
    let mut last = None;
    for s in strategies {
        match super::prove(claim.clone(), s) {
            Ok(c) => return Ok(c),
            Err(e @ IdentityError::ReductionFailed { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one strategy"))
}

fn clear(rp: &RationalPair, factor: &MPoly) -> Result<MPoly, IdentityError> {
    (&rp.num * factor)
        .divide_exact(&rp.den)?
        .ok_or_else(|| IdentityError::Malformed("factor does not clear the denominator".into()))
}

/// The generators `{e(x₀,y₀), e(x₁,y₁), δ′, δ±}` of the dichotomy ideals.
/// `δ′`, `δ₊`, `δ₋` are `x₀y₀·δ₀ₓ`, `t·x₀y₀·δ₁ₓ`, `t·x₀y₀·δ₁ᵧ` at
/// `(P, τQ₀)` with `P = (x₁, y₁)`, `Q₀ = (x₀, y₀)`.
pub fn dichotomy_generators(plus: bool) -> Result<(SymbolicCurve, Vec<MPoly>), IdentityError> {
    let sym = SymbolicCurve::with_variables(CurveMode::Rescaled, &["x0", "y0", "x1", "y1", "t"])?;
    let p = sym.slot(1)?;
    let tq = sym.tau(&sym.slot(0)?)?;
    let (x0, y0) = sym.coords(0)?;
    let x0y0 = &x0 * &y0;
    let tx0y0 = sym.t()? * &x0y0;
    let (d0x, _) = sym.delta_factors(AddLaw::Plus0, &p, &tq)?;
    let (d1x, d1y) = sym.delta_factors(AddLaw::Plus1, &p, &tq)?;
    let delta_prime = clear(&d0x, &x0y0)?;
    let delta_pm = if plus { clear(&d1x, &tx0y0)? } else { clear(&d1y, &tx0y0)? };
    let gens = vec![sym.build_curve(0)?, sym.build_curve(1)?, delta_prime, delta_pm];
    Ok((sym, gens))
}

fn dichotomy(plus: bool, n: u8, name: String) -> Result<Certificate, IdentityError> {
    let (sym, gens) = dichotomy_generators(plus)?;
    let k = sym.context();
    let parse = |s: &str| MPoly::parse(k, s);
    let (target, factors): (&str, &[&str]) = match (plus, n) {
        (true, 1) => ("x0^2 - y1^2", &[]),
        (true, 2) => ("y0^2 - x1^2", &[]),
        (false, 1) => ("2*x0*y0*(x0^2 - y1^2)", &["2", "x0", "y0"]),
        (false, 2) => ("2*(1 - t^2)*x0*y0*(y0^2 - x1^2)", &["2", "1 - t^2", "x0", "y0"]),
        (_, 3) => ("x0*y0 - x1*y1", &[]),
        _ => return Err(IdentityError::UnknownIdentity(name)),
    };
    let claim = Claim {
        name,
        target: parse(target)?,
        basis: gens,
        order: MonomialOrder::Grevlex,
        denominator: sym.one(),
        invertibles: factors.iter().map(|f| parse(f)).collect::<Result<_, _>>()?,
    };
    super::prove(claim, &Strategy::Groebner)
}

fn inverse_unique(law: AddLaw, comp: Component, name: String) -> Result<Certificate, IdentityError> {
    let sym = SymbolicCurve::with_variables(CurveMode::Rescaled, &["qx", "qy", "x1", "x2", "y1", "y2", "t"])?;
    let k = sym.context();
    let s = sym.add(law, &sym.slot(1)?, &sym.slot(2)?)?;
    let one = sym.one();
    let basis = vec![
        sym.build_curve(1)?,
        sym.build_curve(2)?,
        k.v("qx") * &s.x.den - &one,
        k.v("qy") * &s.y.den - &one,
        s.y.num.clone(),
        &s.x.num - &s.x.den,
    ];
    let (x1, y1) = sym.coords(1)?;
    let (x2, y2) = sym.coords(2)?;
    let target = match comp {
        Component::X => x1 - x2,
        Component::Y => y1 + y2,
    };
    let claim = Claim {
        name,
        target,
        basis,
        order: MonomialOrder::Grevlex,
        denominator: one,
        invertibles: vec![],
    };
    super::prove(claim, &Strategy::Groebner)
}

/// Builds the certificate for one identity.
pub fn certify(id: Identity) -> Result<Certificate, IdentityError> {
    use Identity::*;
    let name = id.name();
    let division = [Strategy::Division];
    match id {
        Closure => {
            let sym = SymbolicCurve::general(2);
            let s = sym.add(AddLaw::Plus0, &sym.slot(1)?, &sym.slot(2)?)?;
            let claim = Claim {
                name,
                target: sym.e_cleared(&s),
                basis: curve_basis(&sym, &[1, 2])?,
                order: MonomialOrder::Lex,
                denominator: s.x.den.pow(2) * s.y.den.pow(2),
                invertibles: declare(&[&s.x.den, &s.y.den], &[])?,
            };
            prove_first(claim, &division)
        }
        Inverse(c) => {
            let sym = SymbolicCurve::general(1);
            let z = sym.slot(1)?;
            let s = sym.add(AddLaw::Plus0, &z, &sym.iota(&z))?;
            let unit = match c {
                Component::X => one_of(&sym),
                Component::Y => RationalPair::from_poly(MPoly::zero(sym.context())),
            };
            let claim = rational_claim(name, c.pick(&s), &unit, curve_basis(&sym, &[1])?, &[])?;
            prove_first(claim, &division)
        }
        AssocGeneric(c) => {
            let sym = SymbolicCurve::general(3);
            let (z1, z2, z3) = (sym.slot(1)?, sym.slot(2)?, sym.slot(3)?);
            let p0 = AddLaw::Plus0;
            let left = sym.add(p0, &sym.add(p0, &z1, &z2)?, &z3)?;
            let right = sym.add(p0, &z1, &sym.add(p0, &z2, &z3)?)?;
            let claim = rational_claim(name, c.pick(&left), c.pick(&right), curve_basis(&sym, &[1, 2, 3])?, &[])?;
            prove_first(claim, &division)
        }
        AffineClosure => {
            // this variable order reproduces the classical cofactors exactly
            let sym = SymbolicCurve::with_variables(CurveMode::General, &["y1", "y2", "x2", "c", "d", "x1"])?;
            let k = sym.context();
            let target = MPoly::parse(k, "(1 - c*d*y1^2*y2^2)*(1 - d*y1^2*x2^2)")?;
            let delta = sym.build_deltas()?.delta;
            let claim = Claim {
                name,
                target,
                basis: vec![sym.build_curve(1)?, delta, sym.build_curve(2)?],
                order: MonomialOrder::Lex,
                denominator: sym.one(),
                invertibles: vec![],
            };
            prove_first(claim, &division)
        }
        CoherenceAdd(c) => {
            let sym = SymbolicCurve::rescaled(2);
            let (z1, z2) = (sym.slot(1)?, sym.slot(2)?);
            let a = sym.add(AddLaw::Plus0, &z1, &z2)?;
            let b = sym.add(AddLaw::Plus1, &z1, &z2)?;
            let ds = sym.build_deltas()?;
            let atoms = [ds.minus, ds.plus, ds.delta1x, ds.delta1y];
            let claim = rational_claim(name, c.pick(&a), c.pick(&b), curve_basis(&sym, &[1, 2])?, &atoms)?;
            prove_first(claim, &with_fallbacks(&sym))
        }
        CoherenceClosure => {
            let sym = SymbolicCurve::rescaled(2);
            let s = sym.add(AddLaw::Plus1, &sym.slot(1)?, &sym.slot(2)?)?;
            let claim = Claim {
                name,
                target: sym.e_cleared(&s),
                basis: curve_basis(&sym, &[1, 2])?,
                order: MonomialOrder::Lex,
                denominator: s.x.den.pow(2) * s.y.den.pow(2),
                invertibles: declare(&[&s.x.den, &s.y.den], &[])?,
            };
            prove_first(claim, &with_fallbacks(&sym))
        }
        Plus1Definition(c) => {
            let sym = SymbolicCurve::rescaled(2);
            let (z1, z2) = (sym.slot(1)?, sym.slot(2)?);
            let conj = sym.tau(&sym.add(AddLaw::Plus0, &sym.tau(&z1)?, &z2)?)?;
            let direct = sym.add(AddLaw::Plus1, &z1, &z2)?;
            let atoms = coordinate_atoms(&sym, &[1, 2])?;
            let claim = rational_claim(name, c.pick(&conj), c.pick(&direct), curve_basis(&sym, &[1, 2])?, &atoms)?;
            prove_first(claim, &division)
        }
        TauInvariance(law, c) => {
            let sym = SymbolicCurve::rescaled(2);
            let (z1, z2) = (sym.slot(1)?, sym.slot(2)?);
            let left = sym.add(law, &sym.tau(&z1)?, &z2)?;
            let right = sym.add(law, &z1, &sym.tau(&z2)?)?;
            let atoms = coordinate_atoms(&sym, &[1, 2])?;
            let claim = rational_claim(name, c.pick(&left), c.pick(&right), curve_basis(&sym, &[1, 2])?, &atoms)?;
            prove_first(claim, &division)
        }
        RhoInvariance(law, c) => {
            let sym = SymbolicCurve::rescaled(2);
            let (z1, z2) = (sym.slot(1)?, sym.slot(2)?);
            let left = sym.add(law, &sym.rho(&z1), &z2)?;
            let right = sym.rho(&sym.add(law, &z1, &z2)?);
            let claim = rational_claim(name, c.pick(&left), c.pick(&right), curve_basis(&sym, &[1, 2])?, &[])?;
            prove_first(claim, &division)
        }
        RhoDelta(law) => {
            let sym = SymbolicCurve::rescaled(2);
            let (z1, z2) = (sym.slot(1)?, sym.slot(2)?);
            let left = sym.delta(law, &z1, &sym.rho(&z2))?;
            let base = sym.delta(law, &z1, &z2)?;
            let right = match law {
                AddLaw::Plus0 => base,
                AddLaw::Plus1 => RationalPair::new(-&base.num, base.den)?,
            };
            let claim = rational_claim(name, &left, &right, curve_basis(&sym, &[1, 2])?, &[])?;
            prove_first(claim, &division)
        }
        IotaTau(c) => {
            let sym = SymbolicCurve::rescaled(1);
            let z = sym.slot(1)?;
            let left = sym.iota(&sym.tau(&z)?);
            let right = sym.tau(&sym.iota(&z))?;
            let atoms = coordinate_atoms(&sym, &[1])?;
            let claim = rational_claim(name, c.pick(&left), c.pick(&right), curve_basis(&sym, &[1])?, &atoms)?;
            prove_first(claim, &division)
        }
        IotaRho(c) => {
            let sym = SymbolicCurve::rescaled(1);
            let z = sym.slot(1)?;
            let left = sym.iota(&sym.rho(&z));
            let right = sym.rho(&sym.rho(&sym.rho(&sym.iota(&z))));
            let claim = rational_claim(name, c.pick(&left), c.pick(&right), curve_basis(&sym, &[1])?, &[])?;
            prove_first(claim, &division)
        }
        IotaAdd(law, c) => {
            let sym = SymbolicCurve::rescaled(2);
            let (z1, z2) = (sym.slot(1)?, sym.slot(2)?);
            let left = sym.iota(&sym.add(law, &z1, &z2)?);
            let right = sym.add(law, &sym.iota(&z1), &sym.iota(&z2))?;
            let claim = rational_claim(name, c.pick(&left), c.pick(&right), curve_basis(&sym, &[1, 2])?, &[])?;
            prove_first(claim, &division)
        }
        DichotomyPlus(n) => dichotomy(true, n, name),
        DichotomyMinus(n) => dichotomy(false, n, name),
        InverseUnique(law, c) => inverse_unique(law, c, name),
        AssocMixed([i, j, k, l], c) => {
            let sym = SymbolicCurve::rescaled(3);
            let (z1, z2, z3) = (sym.slot(1)?, sym.slot(2)?, sym.slot(3)?);
            let b = AddLaw::from_bit;
            let left = sym.add(b(l), &sym.add(b(k), &z1, &z2)?, &z3)?;
            let right = sym.add(b(i), &z1, &sym.add(b(j), &z2, &z3)?)?;
            let t = sym.t()?;
            let claim = rational_claim(
                name,
                c.pick(&left),
                c.pick(&right),
                curve_basis(&sym, &[1, 2, 3])?,
                std::slice::from_ref(&t),
            )?;
            let strategy = Strategy::ScaledDivision {
                multiplier: t,
                step: 2,
                max_power: 8,
            };
            prove_first(claim, &[strategy])
        }
        TauAnnihilates(k, l) => {
            let sym = SymbolicCurve::rescaled(1);
            let z = sym.slot(1)?;
            let mut w = sym.iota(&z);
            for _ in 0..k {
                w = sym.rho(&w);
            }
            let w = sym.tau(&w)?;
            let d = sym.delta(l, &z, &w)?;
            let zero = RationalPair::from_poly(MPoly::zero(sym.context()));
            let atoms = coordinate_atoms(&sym, &[1])?;
            let claim = rational_claim(name, &d, &zero, curve_basis(&sym, &[1])?, &atoms)?;
            prove_first(claim, &division)
        }
    }
}

fn with_fallbacks(sym: &SymbolicCurve) -> Vec<Strategy> {
    let mut v = vec![Strategy::Division];
    if let Ok(t) = sym.t() {
        v.push(Strategy::ScaledDivision {
            multiplier: t,
            step: 2,
            max_power: 8,
        });
    }
    v.push(Strategy::Groebner);
    v
}

/// Every identity whose name matches `pattern`, certified in catalog order.
pub fn certify_family(pattern: &str) -> Result<Vec<Certificate>, IdentityError> {
    let ids: Vec<Identity> = Identity::all().into_iter().filter(|id| id.matches(pattern)).collect();
    if ids.is_empty() {
        return Err(IdentityError::UnknownIdentity(pattern.to_string()));
    }
    ids.into_par_iter().map(certify).collect()
}

/// Certifies the catalog (optionally filtered) in parallel; results keep
/// catalog order.
pub fn certify_all(filter: Option<&str>) -> Vec<(Identity, Result<Certificate, IdentityError>)> {
    Identity::all()
        .into_par_iter()
        .filter(|id| filter.is_none_or(|f| id.matches(f)))
        .map(|id| (id, certify(id)))
        .collect()
}
