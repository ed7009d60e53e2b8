use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use super::rings::{fiber_ring, RingError, Rings};
use super::GradedAlgebra;
use crate::groebner::QuotientRing;
use crate::poly::{rat, ratio, Ambient, Monomial, ParseError, Polynomial, Rational};

/// `p + j_*(q)`: `p` a pullback class in the S1 ambient (xi, a, b), `q` a class
/// on the exceptional divisor in the B~ ambient (eta, u, v, a, b).
#[derive(Clone, PartialEq, Eq)]
pub struct S2Class {
    pub p: Polynomial,
    pub q: Polynomial,
}

impl fmt::Display for S2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p: {} ; q: {}", self.p, self.q)
    }
}

impl fmt::Debug for S2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S2Class({self})")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum S2ParseError {
    #[error("expected `p: <poly> ; q: <poly>`")]
    Shape,
    #[error("in {part}-part: {error}")]
    Part { part: char, error: ParseError },
}

impl S2ParseError {
    /// 0-based character offset of the failure within the whole text.
    pub fn position(&self) -> Option<usize> {
        match self {
            S2ParseError::Shape => None,
            S2ParseError::Part { error, .. } => Some(error.position),
        }
    }
}

impl S2Class {
    /// Parses `p: <poly> ; q: <poly>` without reducing.
    pub fn parse(
        text: &str,
        s1: &Arc<Ambient>,
        btilde: &Arc<Ambient>,
    ) -> Result<S2Class, S2ParseError> {
        let mut parts = text.split(';');
        let (Some(left), Some(right), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(S2ParseError::Shape);
        };
        let offset_right = left.chars().count() + 1;
        let body = |s: &str, tag: &str| -> Option<(usize, String)> {
            let lead = s.chars().take_while(|c| c.is_whitespace()).count();
            let rest: String = s.chars().skip(lead).collect();
            rest.strip_prefix(tag)
                .map(|r| (lead + tag.chars().count(), r.to_string()))
        };
        let (lp, ptext) = body(left, "p:").ok_or(S2ParseError::Shape)?;
        let (lq, qtext) = body(right, "q:").ok_or(S2ParseError::Shape)?;
        let p = Polynomial::parse(&ptext, s1).map_err(|mut error| {
            error.position += lp;
            S2ParseError::Part { part: 'p', error }
        })?;
        let q = Polynomial::parse(&qtext, btilde).map_err(|mut error| {
            error.position += offset_right + lq;
            S2ParseError::Part { part: 'q', error }
        })?;
        Ok(S2Class { p, q })
    }
}

/// The pair model of H*(S2) truncated at a working degree.
#[derive(Debug, Clone)]
pub struct S2Model {
    s1: Arc<QuotientRing>,
    bt: Arc<QuotientRing>,
    trunc: u32,
    restrict_images: Vec<Polynomial>,
    xi: usize,
    eta: Polynomial,
    bracket: Polynomial,
    lift_ambient: Arc<Ambient>,
    display_ambient: Arc<Ambient>,
}

impl S2Model {
    pub fn new(rings: &Rings, trunc: u32) -> Result<Self, RingError> {
        let s1 = rings.s1.clone();
        let bt = rings.btilde.clone();
        let bamb = bt.ambient().clone();
        let xi = s1.ambient().index_of("xi").expect("validated");
        let u = Polynomial::var(&bamb, "u").expect("validated");
        let v = Polynomial::var(&bamb, "v").expect("validated");
        let mut restrict_images = Vec::new();
        for (i, var) in s1.ambient().vars().iter().enumerate() {
            if i == xi {
                restrict_images.push(&u + &v);
                continue;
            }
            match bamb.index_of(&var.name) {
                Some(j) if bamb.vars()[j].degree == var.degree => {
                    restrict_images.push(Polynomial::var_index(&bamb, j))
                }
                _ => {
                    return Err(RingError::Unmatched {
                        var: var.name.clone(),
                    })
                }
            }
        }
        let eta = Polynomial::var(&bamb, "eta").expect("validated");
        let bracket = Polynomial::parse(
            "eta^3 + 6*(u+v)*eta^2 + (15*(u+v)^2 + 4*a - 3*u*v)*eta + 15*(u+v)^3 + 9*a*(u+v)",
            &bamb,
        )
        .expect("bracket text");
        let lift_ambient =
            Ambient::from_pairs(&[("xi", 2), ("eta", 2), ("a", 4), ("b", 6)]).expect("static");
        let display_ambient = Ambient::from_pairs(&[
            ("xi", 2),
            ("eta", 2),
            ("juv", 6),
            ("ju2v2", 10),
            ("ju3v3", 14),
            ("a", 4),
            ("b", 6),
        ])
        .expect("static");
        Ok(S2Model {
            s1,
            bt,
            trunc,
            restrict_images,
            xi,
            eta,
            bracket,
            lift_ambient,
            display_ambient,
        })
    }

    pub fn s1(&self) -> &Arc<QuotientRing> {
        &self.s1
    }

    pub fn btilde(&self) -> &Arc<QuotientRing> {
        &self.bt
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    fn qtrunc(&self) -> u32 {
        self.trunc.saturating_sub(2)
    }

    /// Variables xi, eta, a, b: pullbacks from S1 together with eta.
    pub fn lift_ambient(&self) -> &Arc<Ambient> {
        &self.lift_ambient
    }

    /// Variables used by printed Chern classes: xi, eta, a, b and
    /// `juv`, `ju2v2`, `ju3v3` for j_*(uv), j_*(u^2v^2), j_*(u^3v^3).
    pub fn display_ambient(&self) -> &Arc<Ambient> {
        &self.display_ambient
    }

    /// The bracket `eta^3 + 6 xi eta^2 + (15 xi^2 + 4a - 3uv) eta + 15 xi^3 + 9 a xi`
    /// in the B~ ambient, xi expanded.
    pub fn r2_bracket(&self) -> &Polynomial {
        &self.bracket
    }

    pub fn class(&self, p: Polynomial, q: Polynomial) -> S2Class {
        self.normalize(&S2Class { p, q })
    }

    pub fn pullback(&self, p: &Polynomial) -> S2Class {
        self.class(p.clone(), Polynomial::zero(self.bt.ambient()))
    }

    pub fn pushforward(&self, q: &Polynomial) -> S2Class {
        self.class(Polynomial::zero(self.s1.ambient()), q.clone())
    }

    /// eta = j_*(1).
    pub fn eta(&self) -> S2Class {
        self.pushforward(&Polynomial::one(self.bt.ambient()))
    }

    /// Restriction of a pullback class to the exceptional divisor: xi -> u+v.
    pub fn restrict(&self, p: &Polynomial) -> Polynomial {
        let raw = p
            .compose(self.bt.ambient(), &self.restrict_images, Some(self.trunc))
            .expect("images live in B~");
        self.bt.nf(&raw)
    }

    fn restrict_bounded(&self, p: &Polynomial, max: u32) -> Polynomial {
        p.compose(self.bt.ambient(), &self.restrict_images, Some(max))
            .expect("images live in B~")
    }

    /// j^*(p + j_*q) = restrict(p) + eta q.
    pub fn restrict_class(&self, x: &S2Class) -> Polynomial {
        let r = self.restrict(&x.p);
        let eq = x.q.mul_bounded(&self.eta, Some(self.trunc));
        self.bt.nf(&(&r + &eq))
    }

    /// Builds a class from a polynomial in xi, eta, a, b using
    /// `eta^k * xi^m = j_*(eta^(k-1) * (u+v)^m)`.
    pub fn lift(&self, poly: &Polynomial) -> S2Class {
        assert!(poly.same_ambient(&Polynomial::zero(&self.lift_ambient)));
        let (ixi, ieta, ia, ib) = (0, 1, 2, 3);
        let mut p_terms = Vec::new();
        let mut q = Polynomial::zero(self.bt.ambient());
        for (m, c) in poly.terms() {
            let e = m.exponents();
            let mut pm = self.s1.ambient().one();
            let s1amb = self.s1.ambient();
            pm.0[self.xi] = e[ixi];
            pm.0[s1amb.index_of("a").unwrap()] = e[ia];
            pm.0[s1amb.index_of("b").unwrap()] = e[ib];
            if e[ieta] == 0 {
                p_terms.push((pm, c.clone()));
            } else {
                let base = Polynomial::term(s1amb, pm, c.clone());
                let r = self.restrict_bounded(&base, self.qtrunc());
                let etas = self.eta.pow(e[ieta] as u32 - 1, Some(self.qtrunc()));
                q = &q + &r.mul_bounded(&etas, Some(self.qtrunc()));
            }
        }
        self.class(Polynomial::from_terms(self.s1.ambient(), p_terms), q)
    }

    /// Converts a printed class (see [`S2Model::display_ambient`]) into the
    /// pair model: a product of t >= 1 pushforward factors j_*(m_1)...j_*(m_t)
    /// (eta counting as j_*(1)) equals j_*(m_1...m_t eta^(t-1)).
    pub fn from_display(&self, poly: &Polynomial) -> S2Class {
        self.normalize(&self.from_display_unreduced(poly))
    }

    /// As [`S2Model::from_display`] but without reducing either part.
    pub fn from_display_unreduced(&self, poly: &Polynomial) -> S2Class {
        assert!(poly.same_ambient(&Polynomial::zero(&self.display_ambient)));
        let s1amb = self.s1.ambient();
        let bamb = self.bt.ambient();
        let uv = Polynomial::parse("u*v", bamb).expect("static");
        let mut p_terms = Vec::new();
        let mut q = Polynomial::zero(bamb);
        for (m, c) in poly.terms() {
            let e = m.exponents();
            let (exi, eeta, j1, j2, j3, ea, eb) = (e[0], e[1], e[2], e[3], e[4], e[5], e[6]);
            let mut pm = s1amb.one();
            pm.0[self.xi] = exi;
            pm.0[s1amb.index_of("a").unwrap()] = ea;
            pm.0[s1amb.index_of("b").unwrap()] = eb;
            let t = (eeta + j1 + j2 + j3) as u32;
            if t == 0 {
                p_terms.push((pm, c.clone()));
                continue;
            }
            let base = self.restrict_bounded(&Polynomial::term(s1amb, pm, c.clone()), u32::MAX);
            let uvk = uv.pow((j1 + 2 * j2 + 3 * j3) as u32, None);
            let etas = self.eta.pow(t - 1, None);
            q = &q + &(&(&base * &uvk) * &etas);
        }
        S2Class {
            p: Polynomial::from_terms(s1amb, p_terms),
            q,
        }
    }

    pub fn parse_class(&self, text: &str) -> Result<S2Class, S2ParseError> {
        let raw = S2Class::parse(text, self.s1.ambient(), self.bt.ambient())?;
        Ok(self.normalize(&raw))
    }

    /// Applies `xi^4 -> -a xi^2 + j_*(-bracket/6)` until no pullback monomial
    /// has xi-exponent above 3.
    pub fn rehouse(&self, x: &S2Class) -> S2Class {
        self.rehouse_with(x, &mut |_| 0)
    }

    /// As [`S2Model::rehouse`], rewriting one monomial at a time; `choose`
    /// picks which of the eligible monomials (by index) is rewritten next.
    pub fn rehouse_with(&self, x: &S2Class, choose: &mut dyn FnMut(usize) -> usize) -> S2Class {
        let (residual, quotient) = self.rehouse_split(&x.p, choose);
        let shift = self.rehouse_shift(&quotient);
        self.class(residual, &x.q + &shift)
    }

    /// Splits a pullback polynomial as `residual + quotient * (xi^4 + a xi^2)`
    /// with every residual monomial of xi-exponent at most 3. Nothing is reduced.
    pub fn rehouse_split(
        &self,
        p: &Polynomial,
        choose: &mut dyn FnMut(usize) -> usize,
    ) -> (Polynomial, Polynomial) {
        let s1amb = self.s1.ambient();
        let ia = s1amb.index_of("a").unwrap();
        let mut p = p.clone();
        let mut quotient = Polynomial::zero(s1amb);
        loop {
            let eligible: Vec<&(Monomial, Rational)> = p
                .terms()
                .iter()
                .filter(|(m, _)| m.exponent(self.xi) >= 4)
                .collect();
            if eligible.is_empty() {
                break;
            }
            let (m, c) = eligible[choose(eligible.len()) % eligible.len()].clone();
            let mut low = m.clone();
            low.0[self.xi] -= 4;
            let mut m4 = low.clone();
            m4.0[self.xi] += 4;
            let mut m2 = low.clone();
            m2.0[self.xi] += 2;
            m2.0[ia] += 1;
            let removed = Polynomial::from_terms(s1amb, [(m4, c.clone()), (m2, c.clone())]);
            p = &p - &removed;
            quotient = &quotient + &Polynomial::term(s1amb, low, c);
        }
        (p, quotient)
    }

    /// The pushforward part produced by rewriting `quotient * (xi^4 + a xi^2)`:
    /// `restrict(quotient) * (-bracket/6)`, unreduced.
    pub fn rehouse_shift(&self, quotient: &Polynomial) -> Polynomial {
        self.restrict_bounded(quotient, u32::MAX)
            .mul_bounded(&self.bracket, None)
            .scale(&ratio(-1, 6))
    }

    /// Same model over the fiber of S2 -> S0 (a = b = 0).
    pub fn fiber(&self) -> S2Model {
        let mut m = self.clone();
        m.s1 = fiber_ring(&self.s1);
        m.bt = fiber_ring(&self.bt);
        m
    }

    /// Substitutes a = b = 0 in both parts and reduces in this model.
    pub fn fiber_restrict(&self, x: &S2Class) -> S2Class {
        let zero_ab = |p: &Polynomial| {
            let amb = p.ambient().clone();
            let z = Polynomial::zero(&amb);
            p.substitute(&amb, &[("a", z.clone()), ("b", z)])
                .expect("a, b present")
        };
        self.class(zero_ab(&x.p), zero_ab(&x.q))
    }

    /// Degree of the top class on a fiber: P^8 for S1 over S0.
    pub const FIBER_DIM: u32 = 16;

    /// Integral over a fiber of S2 -> S0 of a class of degree 16, with
    /// `xi^8 -> 1` on the P^8 fiber of S1 and `u^2 v^2 eta^3 -> -1` on the
    /// exceptional divisor (eta = -c_1(O(1)) on the P^3 fibers). Only
    /// meaningful on a fiber model.
    pub fn fiber_integral(&self, x: &S2Class) -> Rational {
        let mut xi8 = self.s1.ambient().one();
        xi8.0[self.xi] = 8;
        let bamb = self.bt.ambient();
        let mut top = bamb.one();
        top.0[bamb.index_of("u").unwrap()] = 2;
        top.0[bamb.index_of("v").unwrap()] = 2;
        top.0[bamb.index_of("eta").unwrap()] = 3;
        let x = self.normalize(x);
        let p = x.p.piece(Self::FIBER_DIM).coefficient(&xi8);
        let q = x.q.piece(Self::FIBER_DIM - 2).coefficient(&top);
        p - q
    }
}

impl GradedAlgebra for S2Model {
    type Elem = S2Class;

    fn working_degree(&self) -> u32 {
        self.trunc
    }

    fn one(&self) -> S2Class {
        S2Class {
            p: Polynomial::one(self.s1.ambient()),
            q: Polynomial::zero(self.bt.ambient()),
        }
    }

    fn zero(&self) -> S2Class {
        S2Class {
            p: Polynomial::zero(self.s1.ambient()),
            q: Polynomial::zero(self.bt.ambient()),
        }
    }

    fn add(&self, x: &S2Class, y: &S2Class) -> S2Class {
        S2Class {
            p: &x.p + &y.p,
            q: &x.q + &y.q,
        }
    }

    fn sub(&self, x: &S2Class, y: &S2Class) -> S2Class {
        S2Class {
            p: &x.p - &y.p,
            q: &x.q - &y.q,
        }
    }

    /// (p1 + j_*q1)(p2 + j_*q2) = p1 p2 + j_*(r(p1) q2 + r(p2) q1 + eta q1 q2).
    fn mul(&self, x: &S2Class, y: &S2Class) -> S2Class {
        let qt = Some(self.qtrunc());
        let p = x.p.mul_bounded(&y.p, Some(self.trunc));
        let mut q = Polynomial::zero(self.bt.ambient());
        if !y.q.is_zero() {
            q = &q
                + &self
                    .restrict_bounded(&x.p, self.qtrunc())
                    .mul_bounded(&y.q, qt);
        }
        if !x.q.is_zero() {
            q = &q
                + &self
                    .restrict_bounded(&y.p, self.qtrunc())
                    .mul_bounded(&x.q, qt);
            if !y.q.is_zero() {
                let qq = x.q.mul_bounded(&y.q, Some(self.qtrunc().saturating_sub(2)));
                q = &q + &qq.mul_bounded(&self.eta, qt);
            }
        }
        self.class(p, q)
    }

    fn scale(&self, x: &S2Class, c: &Rational) -> S2Class {
        S2Class {
            p: x.p.scale(c),
            q: x.q.scale(c),
        }
    }

    fn map_pieces(&self, x: &S2Class, f: &dyn Fn(u32) -> Rational) -> S2Class {
        S2Class {
            p: x.p.map_pieces(f),
            q: x.q.map_pieces(|d| f(d + 2)),
        }
    }

    fn degrees(&self, x: &S2Class) -> Vec<u32> {
        let mut ds = x.p.degrees();
        ds.extend(x.q.degrees().into_iter().map(|d| d + 2));
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    fn constant_term(&self, x: &S2Class) -> Rational {
        x.p.constant_term()
    }

    fn normalize(&self, x: &S2Class) -> S2Class {
        let p = self.s1.nf(&x.p.truncate(self.trunc));
        let q = self.bt.nf(&x.q.truncate(self.qtrunc()));
        S2Class { p, q }
    }

    fn is_zero(&self, x: &S2Class) -> bool {
        x.p.is_zero() && x.q.is_zero()
    }
}

impl S2Model {
    /// Closed-form inverse of a unit `(1, q)`: `(1, -q / (1 + eta q))`.
    pub fn inverse_unit(&self, x: &S2Class) -> Option<S2Class> {
        if x.p != Polynomial::one(self.s1.ambient()) {
            return None;
        }
        let qt = Some(self.qtrunc());
        let eq = self.bt.nf(&x.q.mul_bounded(&self.eta, qt));
        // -q * sum (-eta q)^k
        let mut acc = Polynomial::zero(self.bt.ambient());
        let mut term = x.q.scale(&rat(-1));
        while !term.is_zero() {
            acc = &acc + &term;
            term = self.bt.nf(&term.mul_bounded(&eq, qt).scale(&rat(-1)));
        }
        Some(self.class(Polynomial::one(self.s1.ambient()), acc))
    }

    /// Scalar multiple check helper: is `x` exactly `c * y`?
    pub fn ratio_to(&self, x: &S2Class, y: &S2Class) -> Option<Rational> {
        let (m, cy) = y.p.terms().first().or_else(|| y.q.terms().first())?;
        let in_p = !y.p.is_zero();
        let cx = if in_p {
            x.p.coefficient(m)
        } else {
            x.q.coefficient(m)
        };
        let c = cx / cy;
        let scaled = self.scale(y, &c);
        if scaled == *x || (c.is_zero() && self.is_zero(x)) {
            Some(c)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> S2Model {
        S2Model::new(&Rings::bundled(), 16).unwrap()
    }

    fn bt(m: &S2Model, s: &str) -> Polynomial {
        m.btilde().parse(s).unwrap()
    }

    fn s1(m: &S2Model, s: &str) -> Polynomial {
        m.s1().parse(s).unwrap()
    }

    #[test]
    fn eta_squared_is_pushforward_of_eta() {
        let m = model();
        let e = m.eta();
        assert_eq!(m.mul(&e, &e), m.pushforward(&bt(&m, "eta")));
    }

    #[test]
    fn product_of_pushforwards() {
        let m = model();
        let x = m.pushforward(&bt(&m, "u*v"));
        let y = m.pushforward(&bt(&m, "u^2*v^2"));
        assert_eq!(m.mul(&x, &y), m.pushforward(&bt(&m, "eta*u^3*v^3")));
    }

    #[test]
    fn pullbacks_form_a_subring() {
        let m = model();
        let x = m.pullback(&s1(&m, "xi + a"));
        let y = m.pullback(&s1(&m, "xi^2 - b"));
        assert_eq!(m.mul(&x, &y), m.pullback(&s1(&m, "(xi + a)*(xi^2 - b)")));
    }

    #[test]
    fn restriction_examples() {
        let m = model();
        assert_eq!(m.restrict(&s1(&m, "xi")), bt(&m, "u + v"));
        assert_eq!(m.restrict(&s1(&m, "1")), bt(&m, "1"));
        assert_eq!(
            m.restrict(&s1(&m, "xi^3")),
            m.btilde().nf(&bt(&m, "(u+v)^3"))
        );
        assert!(m
            .restrict(&s1(&m, "xi^3"))
            .terms()
            .iter()
            .all(|(t, _)| { t.exponent(1) <= 2 && t.exponent(2) <= 2 }));
    }

    #[test]
    fn inverse_examples() {
        let m = model();
        assert_eq!(m.inverse_unit(&m.one()).unwrap(), m.one());
        let eps = bt(&m, "u - 2*v + a");
        let x = m.class(s1(&m, "1"), -&eps);
        let inv = m.inverse_unit(&x).unwrap();
        assert_eq!(m.mul(&x, &inv), m.one());
        assert!(m.inverse_unit(&m.eta()).is_none());
    }

    #[test]
    fn rehouse_examples() {
        let m = model();
        let x3 = m.pullback(&s1(&m, "xi^3"));
        assert_eq!(m.rehouse(&x3), x3);
        let d = m.pullback(&s1(&m, "xi^4 + a*xi^2"));
        let expect = m.pushforward(&m.r2_bracket().scale(&ratio(-1, 6)));
        assert_eq!(m.rehouse(&d), expect);
    }

    #[test]
    fn c7_pullback_part_rehouses_to_pushforward() {
        let m = model();
        let p = m.pullback(&s1(&m, "-252*xi^7 - 504*a*xi^5 - 252*a^2*xi^3"));
        let r = m.rehouse(&p);
        assert!(r.p.is_zero());
        let expect = m
            .btilde()
            .nf(&bt(&m, "42*(a*(u+v) + (u+v)^3)").mul_bounded(m.r2_bracket(), None));
        assert_eq!(r.q, expect);
    }

    #[test]
    fn r2_relation_is_consistent() {
        let m = model();
        let lifted = m.lift(
            &Polynomial::parse(
                "eta^4 + 6*xi*eta^3 + (15*xi^2 + 4*a)*eta^2 + (15*xi^3 + 9*a*xi)*eta + 6*xi^4 + 6*a*xi^2",
                m.lift_ambient(),
            )
            .unwrap(),
        );
        let uv_eta = m.pushforward(&bt(&m, "u*v*eta"));
        let r2 = m.sub(&lifted, &m.scale(&uv_eta, &rat(3)));
        assert!(m.btilde().nf(&m.restrict_class(&r2)).is_zero());
        assert!(m.is_zero(&m.rehouse(&r2)));
    }

    #[test]
    fn fiber_restriction() {
        let m = model();
        let f = m.fiber();
        let mu = m.pullback(&s1(
            &m,
            "xi^2*(xi^6 + 6*a*xi^4 + 9*a^2*xi^2 + 4*a^3 + 27*b^2)",
        ));
        assert_eq!(f.fiber_restrict(&mu), f.pullback(&s1(&m, "xi^8")));
        let br = m.pushforward(m.r2_bracket());
        assert_eq!(
            f.fiber_restrict(&br),
            f.pushforward(&bt(
                &m,
                "eta^3 + 6*(u+v)*eta^2 + (15*(u+v)^2 - 3*u*v)*eta + 15*(u+v)^3"
            ))
        );
        assert!(f.is_zero(&f.fiber_restrict(&m.zero())));
        assert_eq!(f.fiber_integral(&f.pullback(&s1(&m, "xi^8"))), rat(1));
        assert_eq!(
            f.fiber_integral(&f.pushforward(&bt(&m, "u^2*v^2*eta^3"))),
            rat(-1)
        );
    }

    #[test]
    fn display_conversion() {
        let m = model();
        let d = |s: &str| Polynomial::parse(s, m.display_ambient()).unwrap();
        assert_eq!(
            m.from_display(&d("juv*ju2v2")),
            m.pushforward(&bt(&m, "eta*u^3*v^3"))
        );
        assert_eq!(
            m.from_display(&d("xi^2*eta")),
            m.pushforward(&bt(&m, "(u+v)^2"))
        );
        assert_eq!(m.from_display(&d("a*xi")), m.pullback(&s1(&m, "a*xi")));
        assert_eq!(
            m.from_display(&d("juv*eta^2*xi")),
            m.pushforward(&bt(&m, "u*v*eta^2*(u+v)"))
        );
    }

    #[test]
    fn text_round_trip() {
        let m = model();
        let x = m.class(s1(&m, "xi^2 - 3/2*a"), bt(&m, "eta*u + b"));
        let back = m.parse_class(&x.to_string()).unwrap();
        assert_eq!(back, x);
        assert!(matches!(m.parse_class("xi"), Err(S2ParseError::Shape)));
        let e = m.parse_class("p: xi ; q: 2u").unwrap_err();
        assert_eq!(e.position(), Some(12));
    }
}
