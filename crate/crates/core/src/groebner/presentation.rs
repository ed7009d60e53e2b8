//! Ring presentations: `var`, `order` and `rel` lines, `#` comments.
//!
//! ```text
//! var u deg 2
//! var a deg 4
//! order grevlex u > a
//! rel u^3 + a*u
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use super::buchberger::{GroebnerError, IdealBasis, ReductionStats};
use super::order::{MonomialOrder, OrderKind};
use crate::poly::{Ambient, PolyError, Polynomial, Variable};

/// Error with 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct PresentationError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> PresentationError {
    PresentationError {
        line,
        column,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingPresentation {
    ambient: Arc<Ambient>,
    order: MonomialOrder,
    relations: Vec<Polynomial>,
}

impl RingPresentation {
    pub fn new(
        ambient: Arc<Ambient>,
        order: MonomialOrder,
        relations: Vec<Polynomial>,
    ) -> Result<Self, GroebnerError> {
        for r in &relations {
            if !r.same_ambient(&Polynomial::zero(&ambient)) {
                return Err(GroebnerError::AmbientMismatch);
            }
            if r.is_zero() {
                return Err(GroebnerError::ZeroGenerator);
            }
        }
        Ok(RingPresentation {
            ambient,
            order,
            relations,
        })
    }

    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        let mut vars: Vec<(Variable, usize)> = Vec::new();
        let mut order_line: Option<(OrderKind, Vec<String>, usize)> = None;
        let mut rels: Vec<(String, usize, usize)> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = match raw.find('#') {
                Some(k) => &raw[..k],
                None => raw,
            };
            let trimmed = line.trim_start();
            if trimmed.trim().is_empty() {
                continue;
            }
            let indent = line.chars().count() - trimmed.chars().count();
            let (keyword, rest) = match trimmed.find(char::is_whitespace) {
                Some(k) => (&trimmed[..k], &trimmed[k..]),
                None => (trimmed, ""),
            };
            let rest_col = indent + keyword.chars().count() + 1;
            match keyword {
                "var" => {
                    let words: Vec<&str> = rest.split_whitespace().collect();
                    if words.len() != 3 || words[1] != "deg" {
                        return Err(perr(lineno, rest_col, "expected `var <name> deg <k>`"));
                    }
                    let degree: u32 = words[2].parse().map_err(|_| {
                        perr(lineno, rest_col, format!("bad degree `{}`", words[2]))
                    })?;
                    vars.push((Variable::new(words[0], degree), lineno));
                }
                "order" => {
                    if order_line.is_some() {
                        return Err(perr(lineno, 1 + indent, "duplicate `order` line"));
                    }
                    let mut words = rest.split_whitespace();
                    let kind_word = words
                        .next()
                        .ok_or_else(|| perr(lineno, rest_col, "missing order kind"))?;
                    let kind = OrderKind::from_name(kind_word).ok_or_else(|| {
                        perr(
                            lineno,
                            rest_col,
                            format!("unknown order kind `{kind_word}`"),
                        )
                    })?;
                    let spec: String = words.collect::<Vec<_>>().join(" ");
                    let names: Vec<String> =
                        spec.split('>').map(|s| s.trim().to_string()).collect();
                    if names
                        .iter()
                        .any(|n| n.is_empty() || n.contains(char::is_whitespace))
                    {
                        return Err(perr(
                            lineno,
                            rest_col,
                            "expected `order <kind> <name> > <name> > ...`",
                        ));
                    }
                    order_line = Some((kind, names, lineno));
                }
                "rel" => rels.push((rest.to_string(), lineno, rest_col)),
                other => {
                    return Err(perr(
                        lineno,
                        1 + indent,
                        format!("unknown keyword `{other}`"),
                    ))
                }
            }
        }

        if vars.is_empty() {
            return Err(perr(1, 1, "no variables declared"));
        }
        let (kind, names, order_lineno) = match order_line {
            Some((k, n, l)) => (k, n, Some(l)),
            None => (
                OrderKind::GradedReverseLex,
                vars.iter().map(|(v, _)| v.name.clone()).collect(),
                None,
            ),
        };
        let order_err = |msg: String| perr(order_lineno.unwrap_or(1), 1, msg);
        let mut ordered = Vec::with_capacity(vars.len());
        for n in &names {
            let (v, _) = vars
                .iter()
                .find(|(v, _)| &v.name == n)
                .ok_or_else(|| order_err(format!("order names undeclared variable `{n}`")))?;
            ordered.push(v.clone());
        }
        if ordered.len() != vars.len() {
            return Err(order_err(
                "order must list every variable exactly once".into(),
            ));
        }
        let ambient = Ambient::new(ordered).map_err(|e| {
            let line = match &e {
                PolyError::InvalidVariable { name, .. } => vars
                    .iter()
                    .rev()
                    .find(|(v, _)| &v.name == name)
                    .map(|(_, l)| *l)
                    .unwrap_or(1),
                _ => 1,
            };
            perr(line, 1, e.to_string())
        })?;
        let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let order =
            MonomialOrder::new(kind, &ambient, &name_refs).map_err(|e| order_err(e.to_string()))?;

        let mut relations = Vec::with_capacity(rels.len());
        for (text, lineno, col) in rels {
            let p = Polynomial::parse(&text, &ambient)
                .map_err(|e| perr(lineno, col + e.position, e.kind.to_string()))?;
            if p.is_zero() {
                return Err(perr(lineno, col, "relation is zero"));
            }
            relations.push(p);
        }
        Ok(RingPresentation {
            ambient,
            order,
            relations,
        })
    }

    /// Canonical text form; parses back to an equal presentation.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in self.ambient.vars() {
            let _ = writeln!(out, "var {} deg {}", v.name, v.degree);
        }
        let _ = writeln!(out, "order {}", self.order.display(&self.ambient));
        for r in &self.relations {
            let _ = writeln!(out, "rel {r}");
        }
        out
    }

    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    /// The same ring with the named variables additionally set to zero.
    pub fn specialize_to_zero(&self, names: &[&str]) -> Result<Self, PolyError> {
        let mut relations = self.relations.clone();
        for n in names {
            relations.push(Polynomial::var(&self.ambient, n)?);
        }
        Ok(RingPresentation {
            ambient: self.ambient.clone(),
            order: self.order.clone(),
            relations,
        })
    }

    pub fn complete(&self) -> QuotientRing {
        let basis = IdealBasis::new(&self.ambient, self.relations.clone(), self.order.clone())
            .expect("relations validated at construction")
            .complete();
        QuotientRing {
            presentation: self.clone(),
            basis,
        }
    }
}

/// A presentation with its completed Gröbner basis.
#[derive(Debug, Clone)]
pub struct QuotientRing {
    presentation: RingPresentation,
    basis: IdealBasis,
}

impl QuotientRing {
    pub fn presentation(&self) -> &RingPresentation {
        &self.presentation
    }

    pub fn basis(&self) -> &IdealBasis {
        &self.basis
    }

    pub fn ambient(&self) -> &Arc<Ambient> {
        self.presentation.ambient()
    }

    /// Normal form; panics if `p` lives in another ambient.
    pub fn nf(&self, p: &Polynomial) -> Polynomial {
        self.basis
            .normal_form(p)
            .expect("polynomial in the ring's ambient")
    }

    pub fn nf_counted(&self, p: &Polynomial, stats: &mut ReductionStats) -> Polynomial {
        self.basis
            .normal_form_with(p, &mut |_| 0, stats)
            .expect("polynomial in the ring's ambient")
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial, crate::poly::ParseError> {
        Polynomial::parse(text, self.ambient())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# two cubic relations
var u deg 2
var v deg 2
var a deg 4
var b deg 6
order grevlex u > v > a > b
rel u^3 + a*u + b
rel v^3 + a*v - b   # trailing comment
";

    #[test]
    fn parses_and_round_trips() {
        let p = RingPresentation::parse(SAMPLE).unwrap();
        assert_eq!(p.ambient().len(), 4);
        assert_eq!(p.relations().len(), 2);
        let again = RingPresentation::parse(&p.to_text()).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn order_line_sets_precedence() {
        let text = "var x deg 2\nvar y deg 2\norder grlex y > x\nrel x*y - x^2\n";
        let p = RingPresentation::parse(text).unwrap();
        assert_eq!(p.ambient().vars()[0].name, "y");
        assert_eq!(p.order().kind(), OrderKind::GradedLex);
    }

    #[test]
    fn errors_carry_positions() {
        let e = RingPresentation::parse("var x deg 2\nrel x + 2y\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert_eq!(e.column, 10);
        let e = RingPresentation::parse("var x deg 3\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = RingPresentation::parse("var x deg 2\nfoo\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 1));
        let e = RingPresentation::parse("var x deg 2\norder grevlex x > y\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(RingPresentation::parse("").is_err());
        assert!(RingPresentation::parse("var x deg 2\nrel x - x\n").is_err());
        assert!(RingPresentation::parse("var x deg 2\norder lex x\n").is_err());
    }

    #[test]
    fn specialization_kills_parameters() {
        let p = RingPresentation::parse(SAMPLE).unwrap();
        let fib = p.specialize_to_zero(&["a", "b"]).unwrap().complete();
        let u3 = fib.parse("u^3 + a*u").unwrap();
        assert!(fib.nf(&u3).is_zero());
        assert_eq!(fib.nf(&fib.parse("u^2*v^2").unwrap()).len(), 1);
    }
}
