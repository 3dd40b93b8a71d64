//! Recursive-descent parser for polynomial text.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (['*'] factor)*        juxtaposition multiplies
//! factor := '-' factor | atom ['^' UINT]
//! atom   := UINT | IDENT | '(' expr ')'
//! ```

use std::sync::Arc;

use thiserror::Error;

use super::{Monomial, Poly, PolyError, PolyRing};

/// Default cap on exponent literals.
pub const DEFAULT_EXPONENT_BOUND: u64 = (1 << 31) - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("exponent {value} at position {pos} exceeds the bound {bound}")]
    ExponentOverflow { value: String, pos: usize, bound: u64 },
    #[error(transparent)]
    Ring(PolyError),
}

#[derive(Debug, Clone, PartialEq)]
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

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((Tok::Plus, start)),
            '-' => out.push((Tok::Minus, start)),
            '*' => out.push((Tok::Star, start)),
            '^' => out.push((Tok::Caret, start)),
            '(' => out.push((Tok::LParen, start)),
            ')' => out.push((Tok::RParen, start)),
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(text[start..i].to_string()), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            other => {
                return Err(ParseError::Syntax {
                    pos: start,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

/// Distinct identifiers in `text`, in natural sort order (`x2` before `x10`).
pub fn identifiers(text: &str) -> Result<Vec<String>, ParseError> {
    let mut names: Vec<String> = tokenize(text)?
        .into_iter()
        .filter_map(|(t, _)| match t {
            Tok::Ident(s) => Some(s),
            _ => None,
        })
        .collect();
    names.sort_by_key(|a| natural_key(a));
    names.dedup();
    Ok(names)
}

fn natural_key(s: &str) -> (String, u64, String) {
    let stem = s.trim_end_matches(|c: char| c.is_ascii_digit());
    let digits = &s[stem.len()..];
    let n = digits.parse::<u64>().unwrap_or(0);
    (stem.to_string(), n, digits.to_string())
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    ring: &'a Arc<PolyRing>,
    bound: u64,
}

pub(crate) fn parse(text: &str, ring: &Arc<PolyRing>, bound: u64) -> Result<Poly, ParseError> {
    let toks = tokenize(text)?;
    let mut parser = Parser {
        toks,
        at: 0,
        end: text.len(),
        ring,
        bound,
    };
    if parser.toks.is_empty() {
        return Err(ParseError::Syntax {
            pos: 0,
            message: "empty expression".into(),
        });
    }
    let value = parser.expr()?;
    if let Some((tok, pos)) = parser.toks.get(parser.at) {
        return Err(ParseError::Syntax {
            pos: *pos,
            message: format!("unexpected token {tok:?}"),
        });
    }
    Ok(value)
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = match self.peek() {
            Some(Tok::Plus) => {
                self.bump();
                self.term()?
            }
            Some(Tok::Minus) => {
                self.bump();
                -self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                Some(Tok::Int(_) | Tok::Ident(_) | Tok::LParen) => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            return Ok(-self.factor()?);
        }
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some((Tok::Int(digits), _)) => {
                    let e = digits.parse::<u64>().ok().filter(|e| *e <= self.bound).ok_or(
                        ParseError::ExponentOverflow {
                            value: digits.clone(),
                            pos,
                            bound: self.bound,
                        },
                    )?;
                    Ok(base.pow(e))
                }
                _ => Err(ParseError::Syntax {
                    pos,
                    message: "expected a non-negative integer exponent".into(),
                }),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some((Tok::Int(digits), _)) => {
                let p = self.ring.p();
                let c = digits
                    .bytes()
                    .fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p);
                Ok(Poly::monomial(self.ring, c, Monomial::one(self.ring.nvars())))
            }
            Some((Tok::Ident(name), _)) => match self.ring.var_index(&name) {
                Some(i) => Ok(Poly::var(self.ring, i)),
                None => Err(ParseError::UnknownVariable { name, pos }),
            },
            Some((Tok::LParen, _)) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some((Tok::RParen, _)) => Ok(inner),
                    _ => Err(ParseError::Syntax {
                        pos: self.toks.get(self.at - 1).map(|(_, p)| *p).unwrap_or(self.end),
                        message: "expected `)`".into(),
                    }),
                }
            }
            Some((tok, _)) => Err(ParseError::Syntax {
                pos,
                message: format!("unexpected token {tok:?}"),
            }),
            None => Err(ParseError::Syntax {
                pos,
                message: "unexpected end of input".into(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xyz(p: u64) -> Arc<PolyRing> {
        PolyRing::new(p, &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn rdp_example() {
        let r = xyz(3);
        let f = Poly::parse("z^2 + x^3 + y^4", &r).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.coefficient(&Monomial::new([0u64, 0, 2])), 1);
        assert_eq!(f.coefficient(&Monomial::new([3u64, 0, 0])), 1);
        assert_eq!(f.coefficient(&Monomial::new([0u64, 4, 0])), 1);
    }

    #[test]
    fn zero_and_reduction() {
        let r = xyz(3);
        assert!(Poly::parse("0", &r).unwrap().is_zero());
        assert_eq!(Poly::parse("3*x + x", &r).unwrap(), Poly::var(&r, 0));
        assert_eq!(Poly::parse("-1", &r).unwrap(), Poly::constant(&r, 2));
    }

    #[test]
    fn implicit_multiplication_and_parens() {
        let r = xyz(5);
        let a = Poly::parse("2x^2 y - (x + y)(x - y)", &r).unwrap();
        let b = Poly::parse("2*x^2*y - x^2 + y^2", &r).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors() {
        let r = xyz(3);
        assert_eq!(
            Poly::parse("x + w", &r),
            Err(ParseError::UnknownVariable { name: "w".into(), pos: 4 })
        );
        assert!(matches!(Poly::parse("x +", &r), Err(ParseError::Syntax { pos: 3, .. })));
        assert!(matches!(Poly::parse("(x", &r), Err(ParseError::Syntax { .. })));
        assert!(matches!(Poly::parse("x ^ y", &r), Err(ParseError::Syntax { pos: 4, .. })));
        assert!(matches!(Poly::parse("x # y", &r), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(
            Poly::parse("x^2147483648", &r),
            Err(ParseError::ExponentOverflow { pos: 2, .. })
        ));
        assert!(matches!(
            Poly::parse_with_bound("x^17", &r, 16),
            Err(ParseError::ExponentOverflow { .. })
        ));
        assert!(matches!(Poly::parse("", &r), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn inferred_variables() {
        let f = Poly::parse_infer("x10 + x2^3 + x1", 7).unwrap();
        assert_eq!(f.ring().vars(), ["x1", "x2", "x10"]);
        assert_eq!(f.to_string(), "x1 + x2^3 + x10");
    }

    #[test]
    fn rendering_round_trip() {
        let r = xyz(3);
        let f = Poly::parse("z^2 + 2*x^3*y + y^4 + 2", &r).unwrap();
        let text = f.to_string();
        assert_eq!(text, "2*x^3*y + y^4 + z^2 + 2");
        assert_eq!(Poly::parse(&text, &r).unwrap(), f);
    }
}
