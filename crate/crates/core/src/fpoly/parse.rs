//! Recursive-descent parser for polynomial text.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' integer)?
//! primary := integer | identifier | '(' expr ')'
//! ```
//!
//! Integer literals of any length are reduced modulo p. Juxtaposition is not
//! multiplication: `2x` and `x y` are rejected.

use super::field::Prime;
use super::poly::{Poly, Ring};
use crate::error::{AlgebraError, ParseError};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        let start = i;
        match ch {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '^' => out.push((start, Tok::Caret)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            c if c.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].to_string())));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            other => {
                return Err(ParseError { position: start, message: format!("unexpected character `{other}`") })
            }
        }
        i += 1;
    }
    Ok(out)
}

/// Parse over the variables occurring in `text`, sorted by name.
pub fn parse(text: &str, p: Prime) -> Result<Poly, AlgebraError> {
    let toks = tokenize(text)?;
    let mut vars: Vec<String> = toks
        .iter()
        .filter_map(|(_, t)| match t {
            Tok::Ident(s) => Some(s.clone()),
            _ => None,
        })
        .collect();
    vars.sort();
    vars.dedup();
    let ring = Ring::new(p, &vars);
    Parser { toks, pos: 0, ring: &ring, end: text.len() }.run()
}

/// Parse over a fixed ring; identifiers outside it are errors.
pub fn parse_in(text: &str, ring: &Ring) -> Result<Poly, AlgebraError> {
    let toks = tokenize(text)?;
    Parser { toks, pos: 0, ring, end: text.len() }.run()
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    ring: &'a Ring,
    end: usize,
}

impl Parser<'_> {
    fn run(mut self) -> Result<Poly, AlgebraError> {
        if self.toks.is_empty() {
            return Err(self.err("empty input").into());
        }
        let f = self.expr()?;
        if self.pos < self.toks.len() {
            return Err(self.err("unexpected trailing input (implicit multiplication is not allowed)").into());
        }
        Ok(f)
    }

    fn err(&self, message: &str) -> ParseError {
        let position = self.toks.get(self.pos).map_or(self.end, |(p, _)| *p);
        ParseError { position, message: message.to_string() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn expr(&mut self) -> Result<Poly, AlgebraError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, AlgebraError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, AlgebraError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, AlgebraError> {
        let base = self.primary()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let Some(Tok::Int(digits)) = self.peek().cloned() else {
                return Err(self.err("exponent must be a non-negative integer literal").into());
            };
            let n: u64 = digits.parse().map_err(|_| self.err("exponent too large"))?;
            self.pos += 1;
            if let Some(Tok::Caret) = self.peek() {
                return Err(self.err("chained exponents are ambiguous; use parentheses").into());
            }
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Poly, AlgebraError> {
        match self.peek().cloned() {
            Some(Tok::Int(digits)) => {
                self.pos += 1;
                let p = self.ring.modulus();
                let v = digits.bytes().fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p.get());
                Ok(self.ring.constant(v as i64))
            }
            Some(Tok::Ident(name)) => {
                let idx = self.ring.index_of(&name).map_err(|_| self.err(&format!("unknown variable `{name}`")))?;
                self.pos += 1;
                Ok(self.ring.gen(idx))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.err("expected `)`").into()),
                }
            }
            Some(_) => Err(self.err("expected a number, variable or `(`").into()),
            None => Err(self.err("unexpected end of input").into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn antelope_example() {
        let f = parse("x^2 + y^3*z^3*(y^2+z^2)", p(2)).unwrap();
        assert_eq!(f.vars(), ["x", "y", "z"]);
        assert_eq!(f.num_terms(), 3);
        for e in [[2, 0, 0], [0, 5, 3], [0, 3, 5]] {
            assert_eq!(f.coeff(&e).value(), 1);
        }
    }

    #[test]
    fn zero_and_reduction() {
        let f = parse("0", p(5)).unwrap();
        assert!(f.is_zero());
        let g = parse("123456789012345678901234567896*y - 3", p(7)).unwrap();
        // 123456789012345678901234567896 mod 7 = 6
        assert_eq!(g.coeff(&[1]).value(), 6);
        assert_eq!(g.constant_term().value(), 4);
    }

    #[test]
    fn binomial_mod_two() {
        let f = parse("(y+w)^4", p(2)).unwrap();
        assert_eq!(f.to_string(), "w^4+y^4");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("x^2 + 2y", p(3)).unwrap_err();
        match e {
            AlgebraError::Parse(pe) => assert_eq!(pe.position, 7),
            other => panic!("{other:?}"),
        }
        assert!(parse("(x+1", p(3)).is_err());
        assert!(parse("x^y", p(3)).is_err());
        assert!(parse("x^2^2", p(3)).is_err());
        assert!(parse("", p(3)).is_err());
        assert!(parse("x # y", p(3)).is_err());
        let ring = Ring::new(p(3), &["x"]);
        assert!(parse_in("y", &ring).is_err());
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        let f = parse("-x^2", p(5)).unwrap();
        assert_eq!(f.coeff(&[2]).value(), 4);
    }
}
