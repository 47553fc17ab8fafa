use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Monomial;

/// Term order on monomials. Lex priority follows the variable order of the
/// context (first variable is largest).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    #[default]
    Lex,
    Grevlex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.exponents().cmp(b.exponents()),
            MonomialOrder::Grevlex => a
                .degree()
                .cmp(&b.degree())
                .then_with(|| {
                    // smaller exponent in the last differing variable wins
                    for (x, y) in a.exponents().iter().zip(b.exponents()).rev() {
                        match x.cmp(y) {
                            Ordering::Equal => continue,
                            other => return other.reverse(),
                        }
                    }
                    Ordering::Equal
                }),
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MonomialOrder::Lex => "lex",
            MonomialOrder::Grevlex => "grevlex",
        })
    }
}

impl FromStr for MonomialOrder {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lex" => Ok(MonomialOrder::Lex),
            "grevlex" => Ok(MonomialOrder::Grevlex),
            other => Err(format!("unknown monomial order `{other}`")),
        }
    }
}

/// A monomial bundled with the order it should sort under, so ordered maps
/// can keep terms in descending-leading-term position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Keyed {
    pub order: MonomialOrder,
    pub mono: Monomial,
}

impl PartialOrd for Keyed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Keyed {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order.cmp(&self.mono, &other.mono)
    }
}
