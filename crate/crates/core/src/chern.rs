//! Total Chern classes as truncated units of a graded algebra, the GRR excess
//! for a sheaf pushed forward from the exceptional divisor, and assembly of
//! the total Chern class of the log cotangent bundle of S2 over S0.

use std::fmt;

use num_traits::One;
use thiserror::Error;

use crate::cohomology::{GradedAlgebra, RingError, Rings, S2Class, S2Model, TruncatedRing};
use crate::groebner::QuotientRing;
use crate::poly::{rat, Polynomial, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChernError {
    #[error("constant term is {0}, expected 1")]
    NotUnit(String),
    #[error("expected a rank-3 class, found a nonzero piece in degree {0}")]
    Rank(u32),
    #[error("working degree {0} is too small (need at least {1})")]
    Truncation(u32, u32),
    #[error("expected exactly one relation involving `{0}`")]
    Relation(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A class with constant term 1, kept reduced and truncated.
#[derive(Clone, PartialEq)]
pub struct TotalChernClass<E>(E);

impl<E: fmt::Display> fmt::Display for TotalChernClass<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<E: fmt::Display> fmt::Debug for TotalChernClass<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TotalChernClass({})", self.0)
    }
}

impl<E: Clone + PartialEq> TotalChernClass<E> {
    pub fn new<A: GradedAlgebra<Elem = E>>(alg: &A, x: &E) -> Result<Self, ChernError> {
        let x = alg.normalize(x);
        let c = alg.constant_term(&x);
        if !c.is_one() {
            return Err(ChernError::NotUnit(c.to_string()));
        }
        Ok(TotalChernClass(x))
    }

    pub fn elem(&self) -> &E {
        &self.0
    }

    pub fn into_elem(self) -> E {
        self.0
    }

    /// The i-th Chern class: the piece of degree 2i.
    pub fn c<A: GradedAlgebra<Elem = E>>(&self, alg: &A, i: u32) -> E {
        alg.piece(&self.0, 2 * i)
    }
}

pub fn total_mul<A: GradedAlgebra>(
    alg: &A,
    x: &TotalChernClass<A::Elem>,
    y: &TotalChernClass<A::Elem>,
) -> TotalChernClass<A::Elem> {
    TotalChernClass(alg.mul(&x.0, &y.0))
}

/// Geometric-series inverse truncated at the working degree.
pub fn inverse<A: GradedAlgebra>(
    alg: &A,
    x: &TotalChernClass<A::Elem>,
) -> TotalChernClass<A::Elem> {
    let n = alg.sub(&alg.one(), &x.0);
    let mut acc = alg.one();
    let mut term = alg.one();
    // n has no constant term, so n^k vanishes once 2k exceeds the working degree.
    for _ in 0..alg.working_degree() / 2 {
        term = alg.mul(&term, &n);
        if alg.is_zero(&term) {
            break;
        }
        acc = alg.add(&acc, &term);
    }
    TotalChernClass(alg.normalize(&acc))
}

pub fn total_div<A: GradedAlgebra>(
    alg: &A,
    x: &TotalChernClass<A::Elem>,
    y: &TotalChernClass<A::Elem>,
) -> TotalChernClass<A::Elem> {
    total_mul(alg, x, &inverse(alg, y))
}

/// Negates every piece of degree 2 mod 4, turning c(V) into c(V^*).
pub fn dual_flip<A: GradedAlgebra>(
    alg: &A,
    x: &TotalChernClass<A::Elem>,
) -> TotalChernClass<A::Elem> {
    TotalChernClass(alg.map_pieces(&x.0, &dual_sign))
}

pub fn dual_sign(d: u32) -> Rational {
    if d % 4 == 2 {
        rat(-1)
    } else {
        rat(1)
    }
}

/// Pieces of the GRR excess computation for a rank-3 class `Q = prod(1 + b_i)`.
#[derive(Debug, Clone)]
pub struct GrrExcess {
    /// `prod(1 + b_i - eta)`.
    pub product: Polynomial,
    /// `D = 1 - prod(1 + b_i - eta)`.
    pub d: Polynomial,
    /// `F = (prod(1 + b_i - eta) - Q) / eta`.
    pub f: Polynomial,
    /// `F / (1 - D)` through the working degree, reduced.
    pub excess: Polynomial,
}

/// `(1/eta)(1 - prod (1+b_i)/(1+b_i-eta))` computed as `F/(1-D)`.
/// The ring must contain `eta`; `cf` must have pieces only in degrees 0..=6.
pub fn grr_excess(ring: &TruncatedRing, cf: &Polynomial) -> Result<GrrExcess, ChernError> {
    let amb = ring.ring.ambient().clone();
    let q = ring.ring.nf(cf);
    if !q.constant_term().is_one() {
        return Err(ChernError::NotUnit(q.constant_term().to_string()));
    }
    if let Some(&d) = q.degrees().iter().find(|&&d| d > 6) {
        return Err(ChernError::Rank(d));
    }
    let eta_i = amb.index_of("eta").expect("ring with eta");
    let one = Polynomial::one(&amb);
    let one_minus_eta = &one - &Polynomial::var_index(&amb, eta_i);
    let mut product = Polynomial::zero(&amb);
    for k in 0..=3u32 {
        let ck = q.piece(2 * k);
        product = &product + &ck.mul_bounded(&one_minus_eta.pow(3 - k, None), None);
    }
    let d = &one - &product;
    let f = (&product - &q).div_var(eta_i).expect("divisible by eta");
    let trunc = ring.trunc;
    let mut series = one.clone();
    let mut power = one.clone();
    for _ in 0..trunc / 2 {
        power = power.mul_bounded(&d, Some(trunc));
        if power.is_zero() {
            break;
        }
        series = &series + &power;
    }
    let excess = ring.ring.nf(&f.mul_bounded(&series, Some(trunc)));
    Ok(GrrExcess {
        product,
        d,
        f,
        excess,
    })
}

/// Every intermediate of the log cotangent computation.
#[derive(Debug, Clone)]
pub struct LogCotangent {
    pub model: S2Model,
    /// c(N_{B/S1}) in H*(B).
    pub normal_bundle: Polynomial,
    /// c(F) = c(N)/(1 + eta) in H*(B~).
    pub cf: Polynomial,
    pub grr: GrrExcess,
    /// c(j_*F) = 1 - j_*(excess).
    pub c_jf: S2Class,
    /// c(Omega_{S2/S1}).
    pub relative: S2Class,
    /// c(Omega_{S1/S0}) pulled back.
    pub base: S2Class,
    /// (1 - eta)(1 + 3 xi + 2 eta).
    pub divisors: S2Class,
    pub total: TotalChernClass<S2Class>,
}

/// The single relation of `ring` involving `var`.
pub fn fiber_relation(ring: &QuotientRing, var: &str) -> Result<Polynomial, ChernError> {
    let i = ring
        .ambient()
        .index_of(var)
        .ok_or_else(|| ChernError::Relation(var.to_string()))?;
    let mut found = ring
        .presentation()
        .relations()
        .iter()
        .filter(|r| r.terms().iter().any(|(m, _)| m.exponent(i) > 0));
    let rel = match (found.next(), found.next()) {
        (Some(r), None) => r,
        _ => return Err(ChernError::Relation(var.to_string())),
    };
    // Made monic in `var`; the top power must carry a constant coefficient.
    let top = rel
        .terms()
        .iter()
        .map(|(m, _)| m.exponent(i))
        .max()
        .unwrap_or(0);
    let lead: Vec<_> = rel
        .terms()
        .iter()
        .filter(|(m, _)| m.exponent(i) == top)
        .collect();
    match lead.as_slice() {
        [(m, c)] if m.exponents().iter().sum::<u16>() == top => Ok(rel.scale(&c.recip())),
        _ => Err(ChernError::Relation(var.to_string())),
    }
}

/// c(Omega) of a projective bundle whose fiber class `var` satisfies the
/// relation `R(var) = 0`: the relation evaluated at `1 + var`.
pub fn bundle_cotangent(ring: &QuotientRing, var: &str) -> Result<Polynomial, ChernError> {
    let rel = fiber_relation(ring, var)?;
    let amb = ring.ambient();
    let images: Vec<Polynomial> = amb
        .vars()
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let x = Polynomial::var_index(amb, j);
            if v.name == var {
                &Polynomial::one(amb) + &x
            } else {
                x
            }
        })
        .collect();
    let shifted = rel.compose(amb, &images, None).expect("same ambient");
    Ok(ring.nf(&shifted))
}

/// The class mu in H*(S1) with `xi * mu = 0`: the relation divided by xi.
pub fn mu(rings: &Rings) -> Result<Polynomial, ChernError> {
    let rel = fiber_relation(&rings.s1, "xi")?;
    let i = rings.s1.ambient().index_of("xi").expect("xi present");
    rel.div_var(i)
        .map_err(|_| ChernError::Relation("xi".to_string()))
}

/// c(N_{B/S1}) = c(T_{S1})|_B / c(T_B), relative to the base, with xi = u + v.
pub fn normal_bundle(rings: &Rings, trunc: u32) -> Result<Polynomial, ChernError> {
    let tb = TruncatedRing::new(rings.b.clone(), trunc);
    let amb = rings.b.ambient();
    let xi = Polynomial::parse("u + v", amb).expect("static");
    let s1_cot = bundle_cotangent(&rings.s1, "xi")?
        .substitute(amb, &[("xi", xi)])
        .map_err(|_| ChernError::Relation("xi".to_string()))?;
    let unit = |p: &Polynomial| TotalChernClass::new(&tb, p);
    let t_s1 = dual_flip(&tb, &unit(&s1_cot)?);
    let t_u = dual_flip(&tb, &unit(&bundle_cotangent(&rings.b, "u")?)?);
    let t_v = dual_flip(&tb, &unit(&bundle_cotangent(&rings.b, "v")?)?);
    Ok(total_div(&tb, &t_s1, &total_mul(&tb, &t_u, &t_v)).into_elem())
}

/// c(F) = c(N)/(1 + eta) in H*(B~).
pub fn cf_from_normal(rings: &Rings, normal: &Polynomial, trunc: u32) -> Polynomial {
    let bt = TruncatedRing::new(rings.btilde.clone(), trunc);
    let amb = rings.btilde.ambient();
    let n = normal.embed(amb).expect("B variables in B~");
    let one_eta = Polynomial::parse("1 + eta", amb).expect("static");
    total_div(
        &bt,
        &TotalChernClass::new(&bt, &n).expect("unit"),
        &TotalChernClass::new(&bt, &one_eta).expect("unit"),
    )
    .into_elem()
}

/// Builds the whole chain at working degree `trunc` (even, at least 14).
pub fn log_cotangent_total(rings: &Rings, trunc: u32) -> Result<LogCotangent, ChernError> {
    if trunc < 14 || !trunc.is_multiple_of(2) {
        return Err(ChernError::Truncation(trunc, 14));
    }
    let model = S2Model::new(rings, trunc)?;
    let normal = normal_bundle(rings, trunc)?;
    let cf = cf_from_normal(rings, &normal, trunc);
    let grr = grr_excess(&TruncatedRing::new(rings.btilde.clone(), trunc - 2), &cf)?;
    let one = Polynomial::one(model.s1().ambient());
    let c_jf = model.class(one, -&grr.excess);
    let c_jf_t = TotalChernClass::new(&model, &c_jf)?;
    let relative = dual_flip(&model, &inverse(&model, &c_jf_t));
    let base = model.pullback(&bundle_cotangent(&rings.s1, "xi")?);
    let div = Polynomial::parse("(1-eta)*(1+3*xi+2*eta)", model.lift_ambient()).expect("static");
    let divisors = model.lift(&div);
    let base_t = TotalChernClass::new(&model, &base)?;
    let div_t = TotalChernClass::new(&model, &divisors)?;
    let total = total_mul(&model, &total_div(&model, &base_t, &div_t), &relative);
    Ok(LogCotangent {
        model,
        normal_bundle: normal,
        cf,
        grr,
        c_jf,
        relative: relative.into_elem(),
        base,
        divisors,
        total,
    })
}

impl LogCotangent {
    /// The i-th Chern class of the log cotangent bundle.
    pub fn c(&self, i: u32) -> S2Class {
        self.total.c(&self.model, i)
    }
}

/// Is every nonzero piece of `x` of the single degree `d`?
pub fn is_homogeneous<A: GradedAlgebra>(alg: &A, x: &A::Elem, d: u32) -> bool {
    alg.degrees(x).iter().all(|&e| e == d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::RingPresentation;

    fn rings() -> Rings {
        Rings::bundled()
    }

    #[test]
    fn normal_bundle_matches_closed_form() {
        let r = rings();
        let n = normal_bundle(&r, 16).unwrap();
        let expect = r
            .b
            .parse(
                "1 - 6*(u+v) + (15*(u+v)^2 + 4*a - 3*u*v) - (15*(u+v)^3 + 9*a*(u+v)) + (6*(u+v)^4 + 6*a*(u+v)^2)",
            )
            .unwrap();
        assert_eq!(n, r.b.nf(&expect));
    }

    #[test]
    fn cotangents_from_relations() {
        let r = rings();
        assert_eq!(
            bundle_cotangent(&r.s1, "xi").unwrap(),
            r.s1.nf(&r
                .s1
                .parse("(1+xi)^3*((1+xi)^6 + 6*a*(1+xi)^4 + 9*a^2*(1+xi)^2 + 4*a^3 + 27*b^2)")
                .unwrap())
        );
        let bt = TruncatedRing::new(r.b.clone(), 16);
        let pu = TotalChernClass::new(&bt, &bundle_cotangent(&r.b, "u").unwrap()).unwrap();
        assert_eq!(
            dual_flip(&bt, &pu).elem(),
            &r.b.nf(&r.b.parse("(1-u)^3 + a*(1-u) - b").unwrap())
        );
        let pv = TotalChernClass::new(&bt, &bundle_cotangent(&r.b, "v").unwrap()).unwrap();
        assert_eq!(
            dual_flip(&bt, &pv).elem(),
            &r.b.nf(&r.b.parse("(1-v)^3 + a*(1-v) + b").unwrap())
        );
        assert_eq!(
            mu(&r).unwrap(),
            r.s1.parse("xi^2*(xi^6 + 6*a*xi^4 + 9*a^2*xi^2 + 4*a^3 + 27*b^2)")
                .unwrap()
        );
        assert!(fiber_relation(&r.btilde, "u").is_err());
    }

    #[test]
    fn fiber_relation_is_made_monic() {
        let ring = |text: &str| RingPresentation::parse(text).unwrap().complete();
        let q = ring("var x deg 2\nvar y deg 4\nrel 2*x^2 + y\n");
        assert_eq!(
            fiber_relation(&q, "x").unwrap(),
            q.parse("x^2 + 1/2*y").unwrap()
        );
        let q = ring("var x deg 2\nvar y deg 2\nrel y*x^2 + y^3\n");
        assert!(fiber_relation(&q, "x").is_err());
    }

    #[test]
    fn division_inverts_multiplication() {
        let r = rings();
        let bt = TruncatedRing::new(r.btilde.clone(), 16);
        let x = TotalChernClass::new(&bt, &r.btilde.parse("1 + eta - 2*u + a").unwrap()).unwrap();
        let y = TotalChernClass::new(&bt, &r.btilde.parse("1 - 3*v + u*v + b").unwrap()).unwrap();
        let xy = total_mul(&bt, &x, &y);
        assert_eq!(total_div(&bt, &xy, &y), x);
        assert_eq!(total_div(&bt, &x, &x).elem(), &bt.one());
    }

    #[test]
    fn dual_flip_examples() {
        let r = rings();
        let bt = TruncatedRing::new(r.btilde.clone(), 16);
        let x = TotalChernClass::new(&bt, &r.btilde.parse("1 + u + a + u*v").unwrap()).unwrap();
        assert_eq!(
            dual_flip(&bt, &x).elem(),
            &r.btilde.parse("1 - u + a + u*v").unwrap()
        );
        assert_eq!(dual_flip(&bt, &dual_flip(&bt, &x)), x);
        let one = TotalChernClass::new(&bt, &bt.one()).unwrap();
        assert_eq!(dual_flip(&bt, &one), one);
    }

    #[test]
    fn rejects_non_units() {
        let r = rings();
        let bt = TruncatedRing::new(r.btilde.clone(), 16);
        assert!(TotalChernClass::new(&bt, &r.btilde.parse("2 + u").unwrap()).is_err());
        assert!(TotalChernClass::new(&bt, &r.btilde.parse("u").unwrap()).is_err());
    }

    #[test]
    fn grr_rejects_other_ranks() {
        let r = rings();
        let bt = TruncatedRing::new(r.btilde.clone(), 14);
        let high = r.btilde.parse("1 + u*v*eta^2").unwrap();
        assert_eq!(grr_excess(&bt, &high).unwrap_err(), ChernError::Rank(8));
        assert!(grr_excess(&bt, &r.btilde.parse("1").unwrap()).is_ok());
        assert!(grr_excess(&bt, &r.btilde.parse("2").unwrap()).is_err());
    }

    #[test]
    fn truncation_guard() {
        assert!(matches!(
            log_cotangent_total(&rings(), 12),
            Err(ChernError::Truncation(12, 14))
        ));
    }
}
