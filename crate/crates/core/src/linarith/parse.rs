//! Tokenizer and recursive-descent parser for the textual formula syntax.
//!
//! ```text
//! formula := conj ("or" conj)*
//! conj    := unary ("and" unary)*
//! unary   := "not" unary | "(" formula ")" | "true" | "false" | expr REL expr
//! REL     := ">" | ">=" | "<" | "<=" | "=" | "!="
//! expr    := ["-"] term (("+" | "-") term)*
//! term    := coeff ["*"] var | coeff | var
//! coeff   := NUMBER ["/" NUMBER]
//! ```
//! Variables are `x1`, `x2`, ...

use std::fmt;

use super::expr::{AffineExpr, Var};
use super::formula::Formula;
use super::rational::{parse_rational, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Num(String),
    Ident(String),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(s) | Tok::Ident(s) => f.write_str(s),
            Tok::Sym(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

const SYMBOLS: [&str; 16] = [
    ">=", "<=", "!=", ">", "<", "=", "+", "-", "*", "/", "(", ")", ",", "[", "]", ";",
];

/// Splits one line of text into tokens. `#` starts a comment.
pub fn tokenize(text: &str, line: usize) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < bytes.len() {
        let c = bytes[i];
        let column = i + 1;
        if c == b'#' {
            break;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < bytes.len() && bytes[i] == b'.' && bytes[i + 1].is_ascii_digit() {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            out.push(Token {
                tok: Tok::Num(text[start..i].to_string()),
                line,
                column,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len()
                && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'-')
            {
                // Dashes join purely alphabetic words (`almost-archimedean`)
                // so that `x1-x2` still lexes as a difference.
                if bytes[i] == b'-'
                    && !(i + 1 < bytes.len()
                        && bytes[i + 1].is_ascii_alphabetic()
                        && text[start..i].bytes().all(|b| b.is_ascii_alphabetic() || b == b'-'))
                {
                    break;
                }
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(text[start..i].to_string()),
                line,
                column,
            });
            continue;
        }
        match SYMBOLS.iter().find(|s| text[i..].starts_with(**s)) {
            Some(s) => {
                out.push(Token {
                    tok: Tok::Sym(s),
                    line,
                    column,
                });
                i += s.len();
            }
            None => {
                return Err(Error::Parse {
                    line,
                    column,
                    message: format!("unexpected character `{}`", c as char),
                })
            }
        }
    }
    Ok(out)
}

/// Cursor over a token slice.
pub struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_column: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Token], line: usize, line_len: usize) -> Self {
        Cursor {
            toks,
            pos: 0,
            line,
            end_column: line_len + 1,
        }
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    pub fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.toks.get(self.pos + offset).map(|t| &t.tok)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn next(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|t| &t.tok);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    /// Column of the next token, or one past the end of the line.
    pub fn column(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.column).unwrap_or(self.end_column)
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        let column = self
            .toks
            .get(self.pos)
            .map(|t| t.column)
            .unwrap_or(self.end_column);
        let line = self.toks.get(self.pos).map(|t| t.line).unwrap_or(self.line);
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub fn eat_sym(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(t)) if *t == s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, s: &str) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`")))
        }
    }

    pub fn eat_keyword(&mut self, k: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(t)) if t == k) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_keyword(&mut self, k: &str) -> Result<()> {
        if self.eat_keyword(k) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{k}`")))
        }
    }

    pub fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error("expected a name")),
        }
    }

    pub fn natural(&mut self) -> Result<usize> {
        match self.peek() {
            Some(Tok::Num(s)) if s.bytes().all(|b| b.is_ascii_digit()) => {
                let n = s.parse().map_err(|_| self.error("number too large"))?;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.error("expected a natural number")),
        }
    }

    pub fn expect_end(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(format!("unexpected `{}`", self.peek().unwrap())))
        }
    }

    /// A signed rational literal: `-3`, `1/2`, `-0.25`.
    pub fn rational(&mut self) -> Result<Rational> {
        let negative = self.eat_sym("-");
        let q = self.unsigned_rational()?;
        Ok(if negative { -q } else { q })
    }

    fn unsigned_rational(&mut self) -> Result<Rational> {
        let num = match self.peek() {
            Some(Tok::Num(s)) => s.clone(),
            _ => return Err(self.error("expected a number")),
        };
        self.pos += 1;
        let mut q = parse_rational(&num).ok_or_else(|| self.error("malformed number"))?;
        if self.eat_sym("/") {
            let den = match self.peek() {
                Some(Tok::Num(s)) => s.clone(),
                _ => return Err(self.error("expected a denominator")),
            };
            let d = parse_rational(&den).ok_or_else(|| self.error("malformed number"))?;
            if num_traits::Zero::is_zero(&d) {
                return Err(self.error("zero denominator"));
            }
            self.pos += 1;
            q /= d;
        }
        Ok(q)
    }

    fn var(&mut self) -> Option<Var> {
        if let Some(Tok::Ident(s)) = self.peek() {
            if let Some(digits) = s.strip_prefix('x') {
                if let Ok(k) = digits.parse::<u32>() {
                    if k >= 1 && !digits.starts_with('0') {
                        self.pos += 1;
                        return Some(Var(k - 1));
                    }
                }
            }
        }
        None
    }

    fn term(&mut self) -> Result<AffineExpr> {
        if let Some(v) = self.var() {
            return Ok(AffineExpr::var(v));
        }
        if !matches!(self.peek(), Some(Tok::Num(_))) {
            return Err(self.error("expected a number or a variable"));
        }
        let c = self.unsigned_rational()?;
        let had_star = self.eat_sym("*");
        match self.var() {
            Some(v) => Ok(AffineExpr::term(v, c)),
            None if had_star => Err(self.error("expected a variable after `*`")),
            None => Ok(AffineExpr::constant(c)),
        }
    }

    pub fn expr(&mut self) -> Result<AffineExpr> {
        let mut acc = if self.eat_sym("-") {
            -self.term()?
        } else {
            self.eat_sym("+");
            self.term()?
        };
        loop {
            if self.eat_sym("+") {
                acc = acc + self.term()?;
            } else if self.eat_sym("-") {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    pub fn formula(&mut self) -> Result<Formula> {
        let mut parts = vec![self.conjunction()?];
        while self.eat_keyword("or") {
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        })
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut parts = vec![self.unary()?];
        while self.eat_keyword("and") {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::And(parts)
        })
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat_keyword("not") {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat_keyword("true") {
            return Ok(Formula::True);
        }
        if self.eat_keyword("false") {
            return Ok(Formula::False);
        }
        if self.eat_sym("(") {
            let f = self.formula()?;
            self.expect_sym(")")?;
            return Ok(f);
        }
        let lhs = self.expr()?;
        let rel = match self.next() {
            Some(Tok::Sym(s)) if [">", ">=", "<", "<=", "=", "!="].contains(s) => *s,
            _ => {
                self.pos = self.pos.saturating_sub(1);
                return Err(self.error("expected a comparison operator"));
            }
        };
        let rhs = self.expr()?;
        let d = lhs - rhs;
        Ok(match rel {
            ">" => Formula::gt(d),
            ">=" => Formula::ge(d),
            "<" => Formula::gt(-d),
            "<=" => Formula::ge(-d),
            "=" => Formula::eq(d),
            _ => Formula::ne(d),
        })
    }
}

/// Parses a formula; line numbers in errors start at 1.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut toks = Vec::new();
    for (i, line) in text.lines().enumerate() {
        toks.extend(tokenize(line, i + 1)?);
    }
    let last_len = text.lines().last().map(str::len).unwrap_or(0);
    let mut cur = Cursor::new(&toks, text.lines().count().max(1), last_len);
    let f = cur.formula()?;
    cur.expect_end()?;
    Ok(f)
}

impl std::str::FromStr for Formula {
    type Err = Error;
    fn from_str(s: &str) -> Result<Formula> {
        parse_formula(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_k2() {
        let f = parse_formula("(x1 > 0) or (x1 = 0 and x2 >= 0)").unwrap();
        assert_eq!(f.to_string(), "x1 > 0 or (x1 = 0 and x2 >= 0)");
    }

    #[test]
    fn coefficients_and_relations() {
        let f = parse_formula("1/2*x1 - 3 x2 + 1 <= x3").unwrap();
        assert_eq!(f.to_string(), "-x1 + 6*x2 + 2*x3 - 2 >= 0");
        let g = parse_formula("x1 != 2").unwrap();
        assert_eq!(g.to_string(), "x1 - 2 > 0 or -x1 + 2 > 0");
    }

    #[test]
    fn errors_carry_positions() {
        match parse_formula("x1 > 0 and\nx2 >> 1") {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!((line, column), (2, 5));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_formula("x0 > 0"), Err(Error::Parse { .. })));
        assert!(matches!(parse_formula("x1 > 0 )"), Err(Error::Parse { .. })));
    }
}
