//! Text syntax for ordinals.
//!
//! ```text
//! expr    := term ('+' term)*            (empty input is 0)
//! term    := primary ('*' atom)*
//! primary := omega | nat | '(' expr ')' | tower
//! omega   := ('w' | 'ω') ('_' nat)? ('^' atom)?
//! atom    := nat | omega | '(' expr ')' | tower
//! tower   := 'tower' '(' nat ',' expr ')'
//! ```
//!
//! Sums and products use ordinal arithmetic, so `w+w^2` is `w^2`. `w_d` is
//! `ω_d = ω_d(1)` and `tower(d, e)` is `ω_d(e)`. Exponentiation is only
//! defined on powers of ω, where `(ω^β)^γ = ω^{β·γ}`. Whitespace is ignored.
//! [`std::fmt::Display`] on [`Ordinal`] produces text this parser accepts.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::ordinal::Ordinal;

/// Parses with default limits.
pub fn parse(text: &str) -> Result<Ordinal> {
    parse_with(text, &Limits::default())
}

pub fn parse_with(text: &str, limits: &Limits) -> Result<Ordinal> {
    let mut p = Parser {
        src: text,
        pos: 0,
        limits,
    };
    p.skip_ws();
    if p.peek().is_none() {
        return Ok(Ordinal::zero());
    }
    let out = p.expr()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(p.error("'+', '*' or end of input", &c.to_string()));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    limits: &'a Limits,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn error(&self, expected: &str, found: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    fn found(&self) -> String {
        self.peek()
            .map_or_else(|| "end of input".to_string(), |c| format!("'{c}'"))
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("'{c}'"), &self.found()))
        }
    }

    fn expr(&mut self) -> Result<Ordinal> {
        let mut acc = self.term()?;
        while self.eat('+') {
            let t = self.term()?;
            acc = &acc + &t;
            self.check(&acc)?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ordinal> {
        let mut acc = self.primary()?;
        while self.eat('*') {
            let rhs = self.primary()?;
            acc = &acc * &rhs;
            self.check(&acc)?;
        }
        Ok(acc)
    }

    fn check(&self, a: &Ordinal) -> Result<()> {
        if a.size() > self.limits.max_terms {
            return Err(Error::limit(format!(
                "expression has more than {} terms",
                self.limits.max_terms
            )));
        }
        Ok(())
    }

    fn primary(&mut self) -> Result<Ordinal> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::nat(self.nat()?)),
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some('w') | Some('ω') => self.omega(),
            Some('t') if self.src[self.pos..].starts_with("tower") => self.tower(),
            _ => Err(self.error("numeral, 'w', 'tower' or '('", &self.found())),
        }
    }

    fn nat(&mut self) -> Result<BigUint> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("numeral", &self.found()));
        }
        Ok(self.src[start..self.pos].parse().expect("ascii digits"))
    }

    fn small_nat(&mut self) -> Result<usize> {
        let at = self.pos;
        let n = self.nat()?;
        n.to_usize().ok_or_else(|| Error::Parse {
            pos: at,
            expected: "a small numeral".into(),
            found: n.to_string(),
        })
    }

    fn omega(&mut self) -> Result<Ordinal> {
        let c = self.peek().expect("caller checked");
        self.pos += c.len_utf8();
        let base = if self.eat('_') {
            let d = self.small_nat()?;
            Ordinal::omega_d(d, self.limits)?
        } else {
            Ordinal::omega()
        };
        if self.eat('^') {
            let e = self.atom()?;
            return power(&base, &e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ordinal> {
        // an atom is a primary without trailing '*' or '+'
        self.primary()
    }

    fn tower(&mut self) -> Result<Ordinal> {
        self.pos += "tower".len();
        self.expect('(')?;
        let d = self.small_nat()?;
        self.expect(',')?;
        let inner = self.expr()?;
        self.expect(')')?;
        inner.omega_tower(d, self.limits)
    }
}

/// `base^e` for `base` a power of ω (or 1).
fn power(base: &Ordinal, e: &Ordinal) -> Result<Ordinal> {
    match base.terms() {
        [t] if t.coefficient() == &BigUint::from(1u32) => {
            Ok(Ordinal::omega_pow(t.exponent() * e))
        }
        _ => Err(Error::Domain(format!(
            "exponentiation is only supported on powers of w, not {base}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let a = parse("w^2*3+w+4").unwrap();
        assert_eq!(a.to_string(), "w^2*3+w+4");
        assert_eq!(parse("w+w^2").unwrap(), parse("w^2").unwrap());
        assert_eq!(parse("w_2").unwrap(), Ordinal::omega_pow(Ordinal::omega()));
        assert_eq!(parse("tower(2, 1)").unwrap(), parse("w_2").unwrap());
        assert_eq!(parse("tower(0, w+1)").unwrap(), parse("w+1").unwrap());
    }

    #[test]
    fn sugar_and_whitespace() {
        assert_eq!(parse("").unwrap(), Ordinal::zero());
        assert_eq!(parse("w*0").unwrap(), Ordinal::zero());
        assert_eq!(parse(" w ^ ( w + 1 ) * 2 ").unwrap().to_string(), "w^(w+1)*2");
        assert_eq!(parse("ω^ω").unwrap().to_string(), "w^w");
        assert_eq!(parse("w^w^2").unwrap().to_string(), "w^(w^2)");
        assert_eq!(parse("(w+1)*w").unwrap().to_string(), "w^2");
        assert_eq!(parse("w_2^2").unwrap().to_string(), "w^(w*2)");
        assert_eq!(parse("w_0").unwrap(), Ordinal::one());
        let big = "123456789012345678901234567890";
        assert_eq!(parse(big).unwrap().to_string(), big);
    }

    #[test]
    fn errors_carry_position() {
        match parse("w^2+").unwrap_err() {
            Error::Parse { pos, expected, .. } => {
                assert_eq!(pos, 4);
                assert!(expected.contains("numeral"));
            }
            e => panic!("unexpected {e:?}"),
        }
        match parse("w+)").unwrap_err() {
            Error::Parse { pos, found, .. } => {
                assert_eq!(pos, 2);
                assert_eq!(found, "')'");
            }
            e => panic!("unexpected {e:?}"),
        }
        assert!(matches!(parse("(w+1"), Err(Error::Parse { .. })));
        assert!(matches!(parse("2^w"), Err(Error::Parse { .. })));
        assert!(matches!(parse("(w+1)^2"), Err(Error::Parse { .. })));
        assert!(matches!(parse("w_99999"), Err(Error::ResourceLimit(_))));
    }
}
