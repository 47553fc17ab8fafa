//! Canonical text form: `coeff*var^e*…` terms joined by ` + ` / ` - `,
//! sorted by descending monomial under the chosen order.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{MPoly, Monomial, MonomialOrder, VarContext};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse polynomial at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn write_monomial(out: &mut String, ctx: &VarContext, m: &Monomial) {
    let mut first = true;
    for (name, &e) in ctx.names().iter().zip(m.exponents()) {
        if e == 0 {
            continue;
        }
        if !first {
            out.push('*');
        }
        first = false;
        out.push_str(name);
        if e > 1 {
            out.push('^');
            out.push_str(&e.to_string());
        }
    }
}

impl MPoly {
    /// Canonical text with terms in descending `order`.
    pub fn to_text(&self, order: MonomialOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by(|a, b| order.cmp(b.0, a.0));
        let mut out = String::new();
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let mag = c.abs();
            if m.is_one() {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
                write_monomial(&mut out, self.context(), m);
            }
        }
        out
    }

    /// Parses sums of products of rationals, variables, powers and
    /// parenthesised subexpressions.
    pub fn parse(ctx: &VarContext, src: &str) -> Result<MPoly, ParseError> {
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
            ctx,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(out)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(MonomialOrder::Lex))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: &'a VarContext,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == b'+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MPoly, ParseError> {
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(if neg { -acc } else { acc })
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        s.parse().map_err(|_| self.err("bad integer"))
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            u32::try_from(e).map_err(|_| self.err("exponent out of range"))
        } else {
            Ok(1)
        }
    }

    fn factor(&mut self) -> Result<MPoly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                let e = self.exponent()?;
                Ok(inner.pow(e))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let den = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.integer()?
                } else {
                    BigInt::one()
                };
                if den.is_zero() {
                    return Err(self.err("zero denominator"));
                }
                Ok(MPoly::constant(self.ctx, BigRational::new(num, den)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let v = self.ctx.var(name).map_err(|_| ParseError {
                    pos: start,
                    msg: format!("unknown variable `{name}`"),
                })?;
                let e = self.exponent()?;
                Ok(v.pow(e))
            }
            _ => Err(self.err("expected factor")),
        }
    }
}
