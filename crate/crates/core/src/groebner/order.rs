use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::poly::{Ambient, Monomial, PolyError, Polynomial, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    GradedReverseLex,
    GradedLex,
}

impl OrderKind {
    pub fn name(self) -> &'static str {
        match self {
            OrderKind::GradedReverseLex => "grevlex",
            OrderKind::GradedLex => "grlex",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "grevlex" | "graded-reverse-lex" => Some(OrderKind::GradedReverseLex),
            "grlex" | "graded-lex" => Some(OrderKind::GradedLex),
            _ => None,
        }
    }
}

/// Sort key; larger key means larger monomial.
pub type OrderKey = SmallVec<[i32; 10]>;

/// Weighted-degree monomial order with an explicit variable precedence
/// (indices into the ambient, highest first).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    kind: OrderKind,
    precedence: Vec<usize>,
}

impl MonomialOrder {
    /// Graded reverse lex using the ambient's declaration order.
    pub fn grevlex(ambient: &Ambient) -> Self {
        MonomialOrder {
            kind: OrderKind::GradedReverseLex,
            precedence: (0..ambient.len()).collect(),
        }
    }

    pub fn new(kind: OrderKind, ambient: &Ambient, names: &[&str]) -> Result<Self, PolyError> {
        let mut precedence = Vec::with_capacity(names.len());
        for n in names {
            let i = ambient
                .index_of(n)
                .ok_or_else(|| PolyError::UnknownVariable(n.to_string()))?;
            if precedence.contains(&i) {
                return Err(PolyError::InvalidVariable {
                    name: n.to_string(),
                    reason: "listed twice in the order".into(),
                });
            }
            precedence.push(i);
        }
        if precedence.len() != ambient.len() {
            return Err(PolyError::InvalidVariable {
                name: names.join(" > "),
                reason: "order must list every variable exactly once".into(),
            });
        }
        Ok(MonomialOrder { kind, precedence })
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn precedence(&self) -> &[usize] {
        &self.precedence
    }

    pub fn key(&self, ambient: &Ambient, m: &Monomial) -> OrderKey {
        let mut k = OrderKey::new();
        k.push(ambient.degree(m) as i32);
        match self.kind {
            OrderKind::GradedReverseLex => {
                for &i in self.precedence.iter().rev() {
                    k.push(-(m.exponent(i) as i32));
                }
            }
            OrderKind::GradedLex => {
                for &i in &self.precedence {
                    k.push(m.exponent(i) as i32);
                }
            }
        }
        k
    }

    pub fn cmp(&self, ambient: &Ambient, a: &Monomial, b: &Monomial) -> Ordering {
        self.key(ambient, a).cmp(&self.key(ambient, b))
    }

    /// Leading monomial and coefficient of a nonzero polynomial.
    pub fn leading_term<'a>(&self, p: &'a Polynomial) -> Option<(&'a Monomial, &'a Rational)> {
        let amb = p.ambient();
        p.terms()
            .iter()
            .max_by(|x, y| self.cmp(amb, &x.0, &y.0))
            .map(|(m, c)| (m, c))
    }

    pub fn display(&self, ambient: &Ambient) -> OrderDisplay<'_> {
        OrderDisplay {
            order: self,
            names: self
                .precedence
                .iter()
                .map(|&i| ambient.vars()[i].name.clone())
                .collect(),
        }
    }
}

pub struct OrderDisplay<'a> {
    order: &'a MonomialOrder,
    names: Vec<String>,
}

impl fmt::Display for OrderDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.order.kind.name(), self.names.join(" > "))
    }
}
