//! Text syntax for BC elements.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := int ['/' int] | 'mu(' int ')' | 'mu_star(' int ')'
//!         | 'e(' int ['/' int] ')' | '(' expr ')'
//! ```
//!
//! Example: `mu(2)*e(1/3)*mu_star(5) + 1/2*e(1/4)`.

use rug::Rational;

use super::algebra::{bc_mul, BCElement};
use crate::exact::TorsionLabel;
use crate::{Error, Result};

pub fn parse_element(src: &str) -> Result<BCElement> {
    let mut p = Parser { s: src.as_bytes(), pos: 0 };
    let x = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(x)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::parse(format!("{msg} at offset {} in '{}'", self.pos, String::from_utf8_lossy(self.s)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<BCElement> {
        let neg = self.eat(b'-');
        let mut acc = self.term()?;
        if neg {
            acc = acc.scale(&Rational::from(-1));
        }
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<BCElement> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = bc_mul(&acc, &self.factor()?);
        }
        Ok(acc)
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.s.len() && self.s[self.pos] == b'-' {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.error("expected integer"))
    }

    fn positive(&mut self) -> Result<u64> {
        let v = self.integer()?;
        if v <= 0 {
            return Err(self.error("expected positive integer"));
        }
        Ok(v as u64)
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let end = self.pos + kw.len();
        if self.s.get(self.pos..end) == Some(kw.as_bytes()) && self.s.get(end) == Some(&b'(') {
            self.pos = end + 1;
            true
        } else {
            false
        }
    }

    fn factor(&mut self) -> Result<BCElement> {
        if self.keyword("mu_star") {
            let n = self.positive()?;
            self.expect(b')')?;
            return BCElement::mu_star(n);
        }
        if self.keyword("mu") {
            let n = self.positive()?;
            self.expect(b')')?;
            return BCElement::mu(n);
        }
        if self.keyword("e") {
            let num = self.integer()?;
            let den = if self.eat(b'/') { self.positive()? } else { 1 };
            self.expect(b')')?;
            return Ok(BCElement::e(TorsionLabel::new(num, den)?));
        }
        if self.eat(b'(') {
            let x = self.expr()?;
            self.expect(b')')?;
            return Ok(x);
        }
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let den = if self.eat(b'/') { self.positive()? } else { 1 };
                Ok(BCElement::scalar(Rational::from((num, den as i64))))
            }
            _ => Err(self.error("expected factor")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_example() {
        let x = parse_element("mu(2)*e(1/3)*mu_star(5) + 1/2*e(1/4)").unwrap();
        assert_eq!(x.len(), 2);
        assert_eq!(x.to_string(), "1/2*e(1/4) + mu(2)*e(1/3)*mu_star(5)");
    }

    #[test]
    fn display_roundtrip() {
        for s in ["mu(2)*e(1/2)*mu_star(2)", "-3*e(1/6) + mu_star(4)", "(1 + e(1/2))*(1 - e(1/2))", "0"] {
            let x = parse_element(s).unwrap();
            assert_eq!(parse_element(&x.to_string()).unwrap(), x, "{s}");
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_element("mu(0)").is_err());
        assert!(parse_element("e(1/0)").is_err());
        assert!(parse_element("mu(2) +").is_err());
        assert!(parse_element("nu(2)").is_err());
        assert!(parse_element("e(1/2) e(1/3)").is_err());
    }
}
