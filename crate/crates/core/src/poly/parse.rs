//! Recursive-descent parser for polynomial text.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! Division is only allowed by nonzero constants. Two operands side by side
//! (`2u`, `u v`) are rejected.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::{Ambient, Polynomial, Rational};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 64;

/// Parsing gives up once an intermediate result exceeds this many terms.
const MAX_TERMS: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnexpectedEnd,
    UnknownVariable(String),
    MissingOperator,
    ExponentTooLarge,
    DivisionByNonConstant,
    DivisionByZero,
    TooLarge,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedToken(t) => write!(f, "unexpected {t}"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::UnknownVariable(v) => write!(f, "unknown variable `{v}`"),
            ParseErrorKind::MissingOperator => {
                write!(f, "missing operator (juxtaposition is not allowed)")
            }
            ParseErrorKind::ExponentTooLarge => {
                write!(f, "exponent larger than {MAX_EXPONENT}")
            }
            ParseErrorKind::DivisionByNonConstant => write!(f, "division by a non-constant"),
            ParseErrorKind::DivisionByZero => write!(f, "division by zero"),
            ParseErrorKind::TooLarge => write!(f, "expression expands to too many terms"),
        }
    }
}

/// A parse failure at a 0-based character offset.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number {n}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            toks.push((Tok::Num(s.parse().expect("digits")), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if "+-*/^()".contains(c) {
            toks.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(ParseError {
                position: i,
                kind: ParseErrorKind::UnexpectedChar(c),
            });
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    ambient: &'a Arc<Ambient>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(self.end)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            position: self.offset(),
            kind,
        }
    }

    fn guard(&self, p: Polynomial, at: usize) -> Result<Polynomial, ParseError> {
        if p.len() > MAX_TERMS {
            Err(ParseError {
                position: at,
                kind: ParseErrorKind::TooLarge,
            })
        } else {
            Ok(p)
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        while let Some(Tok::Sym(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        loop {
            let at = self.offset();
            match self.peek() {
                Some(Tok::Sym('*')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = self.guard(&acc * &rhs, at)?;
                }
                Some(Tok::Sym('/')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    if rhs.degrees().iter().any(|&d| d > 0) {
                        return Err(ParseError {
                            position: at,
                            kind: ParseErrorKind::DivisionByNonConstant,
                        });
                    }
                    let c = rhs.constant_term();
                    if c.is_zero() {
                        return Err(ParseError {
                            position: at,
                            kind: ParseErrorKind::DivisionByZero,
                        });
                    }
                    acc = acc.scale(&(Rational::from_integer(BigInt::from(1)) / c));
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Sym('(')) => {
                    return Err(self.err(ParseErrorKind::MissingOperator));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Sym('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Sym('^')) = self.peek() {
            let at = self.offset();
            self.pos += 1;
            let e = match self.peek().cloned() {
                Some(Tok::Num(n)) => n,
                Some(t) => return Err(self.err(ParseErrorKind::UnexpectedToken(t.describe()))),
                None => return Err(self.err(ParseErrorKind::UnexpectedEnd)),
            };
            if e > BigInt::from(MAX_EXPONENT) {
                return Err(self.err(ParseErrorKind::ExponentTooLarge));
            }
            self.pos += 1;
            let k: u32 = e.try_into().expect("bounded exponent");
            let mut acc = Polynomial::one(self.ambient);
            for _ in 0..k {
                acc = self.guard(&acc * &base, at)?;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let tok = match self.peek().cloned() {
            Some(t) => t,
            None => return Err(self.err(ParseErrorKind::UnexpectedEnd)),
        };
        match tok {
            Tok::Num(n) => {
                self.pos += 1;
                Ok(Polynomial::constant(
                    self.ambient,
                    Rational::from_integer(n),
                ))
            }
            Tok::Ident(name) => {
                let p = Polynomial::var(self.ambient, &name)
                    .map_err(|_| self.err(ParseErrorKind::UnknownVariable(name.clone())))?;
                self.pos += 1;
                Ok(p)
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::Sym(')')) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    Some(t) => Err(self.err(ParseErrorKind::UnexpectedToken(t.describe()))),
                    None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
                }
            }
            t => Err(self.err(ParseErrorKind::UnexpectedToken(t.describe()))),
        }
    }
}

pub(crate) fn parse(text: &str, ambient: &Arc<Ambient>) -> Result<Polynomial, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.chars().count(),
        ambient,
    };
    let result = p.expr()?;
    if let Some(t) = p.peek().cloned() {
        let kind = match t {
            Tok::Num(_) | Tok::Ident(_) | Tok::Sym('(') => ParseErrorKind::MissingOperator,
            t => ParseErrorKind::UnexpectedToken(t.describe()),
        };
        return Err(p.err(kind));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn amb() -> Arc<Ambient> {
        Ambient::from_pairs(&[("x", 2), ("u", 2), ("a", 4), ("b", 6)]).unwrap()
    }

    #[test]
    fn binomial_identity_is_zero() {
        let p = parse("(1+x)^2 - 1 - 2*x - x^2", &amb()).unwrap();
        assert!(p.is_zero());
        assert!(parse("0", &amb()).unwrap().is_zero());
    }

    #[test]
    fn cubic_relation() {
        let p = parse("u^3 + a*u + b", &amb()).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.is_homogeneous_of(6));
    }

    #[test]
    fn rational_literals_and_division() {
        let p = parse("3/2*x - x/2", &amb()).unwrap();
        assert_eq!(p, parse("x", &amb()).unwrap());
        assert_eq!(
            parse("-(4)/6", &amb()).unwrap().constant_term(),
            -rat(2) / rat(3)
        );
    }

    #[test]
    fn juxtaposition_rejected_with_position() {
        let e = parse("2u", &amb()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingOperator);
        assert_eq!(e.position, 1);
        let e = parse("x (u)", &amb()).unwrap_err();
        assert_eq!(e.position, 2);
    }

    #[test]
    fn errors() {
        let e = parse("x + y", &amb()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownVariable("y".into()));
        assert_eq!(e.position, 4);
        assert_eq!(
            parse("x +", &amb()).unwrap_err().kind,
            ParseErrorKind::UnexpectedEnd
        );
        assert_eq!(
            parse("x / u", &amb()).unwrap_err().kind,
            ParseErrorKind::DivisionByNonConstant
        );
        assert_eq!(
            parse("x / 0", &amb()).unwrap_err().kind,
            ParseErrorKind::DivisionByZero
        );
        assert_eq!(
            parse("x^65", &amb()).unwrap_err().kind,
            ParseErrorKind::ExponentTooLarge
        );
        assert_eq!(
            parse("x ? 1", &amb()).unwrap_err().kind,
            ParseErrorKind::UnexpectedChar('?')
        );
        assert!(parse("(x", &amb()).is_err());
        assert!(parse("x)", &amb()).is_err());
        assert!(parse("", &amb()).is_err());
    }

    #[test]
    fn minus_binds_looser_than_power() {
        assert_eq!(
            parse("-x^2", &amb()).unwrap(),
            -parse("x^2", &amb()).unwrap()
        );
    }
}
