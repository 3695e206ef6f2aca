//! Recursive-descent parser for the concrete formula syntax.
//!
//! ```text
//! formula := until ("->" formula)?
//! until   := or ("U" until)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := ("X"|"F"|"G"|"!") unary | "G{" cmp rat "," ext "}" unary | primary
//! primary := "tt" | "ff" | ident | "(" formula ")"
//! ```

use super::{push_negation, Cmp, Ext, FreqBound, Formula};
use crate::error::{Error, Result};
use crate::rational::{in_unit_interval, parse_rational};

/// Parses a formula and rewrites it into negation normal form.
pub fn parse_formula(text: &str) -> Result<Formula> {
    Ok(push_negation(&parse_formula_raw(text)?))
}

/// Parses a formula keeping `!` on arbitrary subformulas and `->` desugared
/// to `!l | r`.
pub fn parse_formula_raw(text: &str) -> Result<Formula> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let f = p.implication()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

const KEYWORDS: [&str; 6] = ["X", "F", "G", "U", "tt", "ff"];

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
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

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{tok}`")))
        }
    }

    /// Reads an identifier without consuming it.
    fn peek_ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        let first = *self.src.get(start)?;
        if !(first.is_ascii_alphabetic() || first == b'_') {
            return None;
        }
        let mut end = start + 1;
        while end < self.src.len() && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_')
        {
            end += 1;
        }
        std::str::from_utf8(&self.src[start..end]).ok()
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.until()?;
        if self.eat("->") {
            let rhs = self.implication()?;
            return Ok(Formula::or(Formula::not(lhs), rhs));
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.peek_ident() == Some("U") {
            self.pos += 1;
            let rhs = self.until()?;
            return Ok(Formula::until(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while self.eat("|") {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.eat("&") {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.peek() == Some(b'!') {
            self.pos += 1;
            return Ok(Formula::not(self.unary()?));
        }
        match self.peek_ident() {
            Some("X") => {
                self.pos += 1;
                Ok(Formula::next(self.unary()?))
            }
            Some("F") => {
                self.pos += 1;
                Ok(Formula::finally(self.unary()?))
            }
            Some("G") => {
                self.pos += 1;
                if self.peek() == Some(b'{') {
                    self.pos += 1;
                    let bound = self.freq_bound()?;
                    Ok(Formula::freq(bound, self.unary()?))
                } else {
                    Ok(Formula::globally(self.unary()?))
                }
            }
            _ => self.primary(),
        }
    }

    fn freq_bound(&mut self) -> Result<FreqBound> {
        let cmp = if self.eat(">=") {
            Cmp::Geq
        } else if self.eat(">") {
            Cmp::Gt
        } else {
            return Err(self.error("expected `>=` or `>`"));
        };
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit() || matches!(self.src[self.pos], b'.' | b'/'))
        {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
        let p = parse_rational(text).map_err(|_| Error::Syntax {
            pos: start,
            msg: format!("malformed frequency `{text}`"),
        })?;
        if !in_unit_interval(&p) {
            return Err(Error::FrequencyOutOfRange(text.to_string()));
        }
        self.expect(",")?;
        let ext = match self.peek_ident() {
            Some("inf") => Ext::Inf,
            Some("sup") => Ext::Sup,
            _ => return Err(self.error("expected `inf` or `sup`")),
        };
        self.pos += 3;
        self.expect("}")?;
        Ok(FreqBound::new(cmp, p, ext))
    }

    fn primary(&mut self) -> Result<Formula> {
        if self.eat("(") {
            let f = self.implication()?;
            self.expect(")")?;
            return Ok(f);
        }
        match self.peek_ident() {
            Some("tt") => {
                self.pos += 2;
                Ok(Formula::True)
            }
            Some("ff") => {
                self.pos += 2;
                Ok(Formula::False)
            }
            Some(id) if !KEYWORDS.contains(&id) => {
                self.pos += id.len();
                Ok(Formula::atom(id))
            }
            Some(_) => Err(self.error("unexpected keyword")),
            None if self.pos >= self.src.len() => Err(self.error("unexpected end of input")),
            None => Err(self.error("expected a formula")),
        }
    }
}
