//! Sparse multivariate polynomials over exact rationals with a weighted
//! cohomological grading.
//!
//! Terms are kept sorted descending in the canonical storage order: graded
//! reverse lexicographic with the ambient's declaration order as precedence.

mod parse;
mod print;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;
use thiserror::Error;

pub use parse::{ParseError, ParseErrorKind, MAX_EXPONENT};

/// Exact rational coefficient; always normalized with a positive denominator.
pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("operands live in different ambient rings")]
    AmbientMismatch,
    #[error("invalid variable `{name}`: {reason}")]
    InvalidVariable { name: String, reason: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("image of `{var}` must be homogeneous of degree {expected}")]
    DegreeMismatch { var: String, expected: u32 },
    #[error("polynomial is not divisible by `{0}`")]
    NotDivisible(String),
    #[error("wrong number of images: expected {expected}, got {found}")]
    ImageCount { expected: usize, found: usize },
}

/// A graded generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub degree: u32,
}

impl Variable {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Variable {
            name: name.into(),
            degree,
        }
    }
}

/// Ordered variable list. Position in the list is the precedence used by the
/// canonical order (first = highest).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ambient {
    vars: Vec<Variable>,
}

fn valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Ambient {
    pub fn new(vars: Vec<Variable>) -> Result<Arc<Self>, PolyError> {
        for (i, v) in vars.iter().enumerate() {
            if !valid_ident(&v.name) {
                return Err(PolyError::InvalidVariable {
                    name: v.name.clone(),
                    reason: "not an identifier".into(),
                });
            }
            if v.degree == 0 || v.degree % 2 != 0 {
                return Err(PolyError::InvalidVariable {
                    name: v.name.clone(),
                    reason: format!("degree {} is not even and positive", v.degree),
                });
            }
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(PolyError::InvalidVariable {
                    name: v.name.clone(),
                    reason: "declared twice".into(),
                });
            }
        }
        Ok(Arc::new(Ambient { vars }))
    }

    /// Convenience constructor from `(name, degree)` pairs.
    pub fn from_pairs(pairs: &[(&str, u32)]) -> Result<Arc<Self>, PolyError> {
        Ambient::new(pairs.iter().map(|(n, d)| Variable::new(*n, *d)).collect())
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn degree(&self, m: &Monomial) -> u32 {
        m.0.iter()
            .zip(&self.vars)
            .map(|(&e, v)| e as u32 * v.degree)
            .sum()
    }

    /// Canonical comparison (weighted grevlex, declaration precedence).
    pub fn cmp_monomials(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.degree(a).cmp(&self.degree(b)).then_with(|| {
            for i in (0..a.0.len()).rev() {
                match a.0[i].cmp(&b.0[i]) {
                    Ordering::Equal => continue,
                    o => return o.reverse(),
                }
            }
            Ordering::Equal
        })
    }

    pub fn one(&self) -> Monomial {
        Monomial(SmallVec::from_elem(0, self.vars.len()))
    }
}

/// Exponent vector, indexed like the ambient's variable list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub(crate) SmallVec<[u16; 8]>);

impl Monomial {
    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn exponent(&self, i: usize) -> u16 {
        self.0[i]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller guarantees divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// A polynomial together with the ambient it lives in.
#[derive(Clone)]
pub struct Polynomial {
    ambient: Arc<Ambient>,
    terms: Vec<(Monomial, Rational)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ambient, &other.ambient) || self.ambient == other.ambient)
            && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self)
    }
}

impl Polynomial {
    pub fn zero(ambient: &Arc<Ambient>) -> Self {
        Polynomial {
            ambient: ambient.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ambient: &Arc<Ambient>, c: Rational) -> Self {
        let mut p = Polynomial::zero(ambient);
        if !c.is_zero() {
            p.terms.push((ambient.one(), c));
        }
        p
    }

    pub fn one(ambient: &Arc<Ambient>) -> Self {
        Polynomial::constant(ambient, Rational::one())
    }

    pub fn var(ambient: &Arc<Ambient>, name: &str) -> Result<Self, PolyError> {
        let i = ambient
            .index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(Polynomial::var_index(ambient, i))
    }

    pub fn var_index(ambient: &Arc<Ambient>, i: usize) -> Self {
        let mut m = ambient.one();
        m.0[i] = 1;
        Polynomial::term(ambient, m, Rational::one())
    }

    pub fn term(ambient: &Arc<Ambient>, m: Monomial, c: Rational) -> Self {
        let mut p = Polynomial::zero(ambient);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms<I>(ambient: &Arc<Ambient>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.0.len(), ambient.len(), "monomial arity mismatch");
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Polynomial::from_map(ambient, acc)
    }

    fn from_map(ambient: &Arc<Ambient>, acc: HashMap<Monomial, Rational>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| ambient.cmp_monomials(&b.0, &a.0));
        Polynomial {
            ambient: ambient.clone(),
            terms,
        }
    }

    /// Parses the polynomial text grammar against `ambient`.
    pub fn parse(text: &str, ambient: &Arc<Ambient>) -> Result<Self, ParseError> {
        parse::parse(text, ambient)
    }

    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms
            .iter()
            .find(|(n, _)| n == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => Rational::zero(),
        }
    }

    pub fn same_ambient(&self, other: &Polynomial) -> bool {
        Arc::ptr_eq(&self.ambient, &other.ambient) || self.ambient == other.ambient
    }

    fn check(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.same_ambient(other) {
            Ok(())
        } else {
            Err(PolyError::AmbientMismatch)
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        Ok(self.mul_bounded(other, None))
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let amb = &self.ambient;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = if i == self.terms.len() {
                Ordering::Less
            } else if j == other.terms.len() {
                Ordering::Greater
            } else {
                amb.cmp_monomials(&self.terms[i].0, &other.terms[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, c) = &other.terms[j];
                    out.push((m.clone(), if negate { -c } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &self.terms[i].1 - &other.terms[j].1
                    } else {
                        &self.terms[i].1 + &other.terms[j].1
                    };
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial {
            ambient: amb.clone(),
            terms: out,
        }
    }

    /// Product, dropping every monomial of degree above `max_deg` when given.
    pub fn mul_bounded(&self, other: &Polynomial, max_deg: Option<u32>) -> Polynomial {
        let amb = &self.ambient;
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        let right: Vec<_> = other
            .terms
            .iter()
            .map(|(m, c)| (m, c, amb.degree(m)))
            .collect();
        for (m1, c1) in &self.terms {
            let d1 = amb.degree(m1);
            for (m2, c2, d2) in &right {
                if let Some(max) = max_deg {
                    if d1 + d2 > max {
                        continue;
                    }
                }
                let c = c1 * *c2;
                acc.entry(m1.mul(m2)).and_modify(|e| *e += &c).or_insert(c);
            }
        }
        Polynomial::from_map(amb, acc)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ambient);
        }
        Polynomial {
            ambient: self.ambient.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ambient);
        }
        // Multiplying by a monomial preserves the canonical order.
        Polynomial {
            ambient: self.ambient.clone(),
            terms: self.terms.iter().map(|(n, a)| (n.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32, max_deg: Option<u32>) -> Polynomial {
        let mut result = Polynomial::one(&self.ambient).truncate_opt(max_deg);
        let mut base = self.truncate_opt(max_deg);
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_bounded(&base, max_deg);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_bounded(&base, max_deg);
            }
        }
        result
    }

    fn truncate_opt(&self, max_deg: Option<u32>) -> Polynomial {
        match max_deg {
            Some(d) => self.truncate(d),
            None => self.clone(),
        }
    }

    /// Drops all monomials of cohomological degree above `max_deg`.
    pub fn truncate(&self, max_deg: u32) -> Polynomial {
        self.filter_degrees(|d| d <= max_deg)
    }

    /// The homogeneous component of degree `deg`.
    pub fn piece(&self, deg: u32) -> Polynomial {
        self.filter_degrees(|d| d == deg)
    }

    fn filter_degrees(&self, keep: impl Fn(u32) -> bool) -> Polynomial {
        Polynomial {
            ambient: self.ambient.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(self.ambient.degree(m)))
                .cloned()
                .collect(),
        }
    }

    /// Distinct degrees of the stored monomials, ascending.
    pub fn degrees(&self) -> Vec<u32> {
        let mut ds: Vec<u32> = self
            .terms
            .iter()
            .map(|(m, _)| self.ambient.degree(m))
            .collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// Highest degree present (`None` for zero).
    pub fn max_degree(&self) -> Option<u32> {
        // Canonical order is degree-first, so the first term is of top degree.
        self.terms.first().map(|(m, _)| self.ambient.degree(m))
    }

    /// True when every monomial has degree `deg`. The zero polynomial is
    /// homogeneous of every degree.
    pub fn is_homogeneous_of(&self, deg: u32) -> bool {
        self.terms
            .iter()
            .all(|(m, _)| self.ambient.degree(m) == deg)
    }

    /// Maps every homogeneous piece of degree `d` to `f(d) * piece`.
    pub fn map_pieces(&self, f: impl Fn(u32) -> Rational) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c * f(self.ambient.degree(m))))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Polynomial {
            ambient: self.ambient.clone(),
            terms,
        }
    }

    /// Exact division by the variable at index `i`.
    pub fn div_var(&self, i: usize) -> Result<Polynomial, PolyError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            if m.0[i] == 0 {
                return Err(PolyError::NotDivisible(self.ambient.vars[i].name.clone()));
            }
            let mut q = m.clone();
            q.0[i] -= 1;
            terms.push((q, c.clone()));
        }
        Ok(Polynomial {
            ambient: self.ambient.clone(),
            terms,
        })
    }

    /// Ring homomorphism sending variable `i` to `images[i]`, which must all
    /// live in `target`. No degree check; see [`Polynomial::substitute`].
    pub fn compose(
        &self,
        target: &Arc<Ambient>,
        images: &[Polynomial],
        max_deg: Option<u32>,
    ) -> Result<Polynomial, PolyError> {
        if images.len() != self.ambient.len() {
            return Err(PolyError::ImageCount {
                expected: self.ambient.len(),
                found: images.len(),
            });
        }
        if images
            .iter()
            .any(|p| !(Arc::ptr_eq(&p.ambient, target) || *p.ambient == **target))
        {
            return Err(PolyError::AmbientMismatch);
        }
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Polynomial::one(target), p.truncate_opt(max_deg)])
            .collect();
        let mut acc = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i]
                        .last()
                        .unwrap()
                        .mul_bounded(&powers[i][1], max_deg);
                    powers[i].push(next);
                }
                t = t.mul_bounded(&powers[i][e as usize], max_deg);
                if t.is_zero() {
                    break;
                }
            }
            acc = acc.merge(&t, false);
        }
        Ok(acc)
    }

    /// Graded substitution into `target`. Variables named in `map` go to the
    /// given image, which must be homogeneous of the variable's degree; every
    /// other variable is sent to the variable of the same name in `target`.
    pub fn substitute(
        &self,
        target: &Arc<Ambient>,
        map: &[(&str, Polynomial)],
    ) -> Result<Polynomial, PolyError> {
        for (name, _) in map {
            if self.ambient.index_of(name).is_none() {
                return Err(PolyError::UnknownVariable(name.to_string()));
            }
        }
        let mut images = Vec::with_capacity(self.ambient.len());
        for v in &self.ambient.vars {
            match map.iter().find(|(n, _)| *n == v.name) {
                Some((_, img)) => {
                    if !img.is_homogeneous_of(v.degree) {
                        return Err(PolyError::DegreeMismatch {
                            var: v.name.clone(),
                            expected: v.degree,
                        });
                    }
                    images.push(img.clone());
                }
                None => {
                    let j = target
                        .index_of(&v.name)
                        .ok_or_else(|| PolyError::UnknownVariable(v.name.clone()))?;
                    if target.vars[j].degree != v.degree {
                        return Err(PolyError::DegreeMismatch {
                            var: v.name.clone(),
                            expected: v.degree,
                        });
                    }
                    images.push(Polynomial::var_index(target, j));
                }
            }
        }
        self.compose(target, &images, None)
    }

    /// Moves the polynomial into `target`, matching variables by name.
    pub fn embed(&self, target: &Arc<Ambient>) -> Result<Polynomial, PolyError> {
        if Arc::ptr_eq(&self.ambient, target) {
            return Ok(self.clone());
        }
        self.substitute(target, &[])
    }

    /// Largest absolute numerator/denominator, handy for size reporting.
    pub fn height(&self) -> BigInt {
        self.terms
            .iter()
            .map(|(_, c)| c.numer().abs().max(c.denom().clone()))
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            /// Panics on ambient mismatch; use the `checked_*` form to handle it.
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("ambient mismatch")
            }
        }
        impl std::ops::$trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$checked(&rhs).expect("ambient mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ambient: self.ambient.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl std::ops::Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::render(self))
    }
}
