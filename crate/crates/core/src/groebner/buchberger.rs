use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use super::order::{MonomialOrder, OrderKey};
use crate::poly::{Ambient, Monomial, Polynomial, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("basis has not been completed")]
    NotCompleted,
    #[error("polynomial and ideal live in different ambient rings")]
    AmbientMismatch,
    #[error("generators must be nonzero")]
    ZeroGenerator,
}

/// A basis element prepared for division: leading monomial split off.
#[derive(Debug, Clone)]
struct Reducer {
    lm: Monomial,
    lc_inv: Rational,
    tail: Vec<(Monomial, Rational)>,
}

impl Reducer {
    fn new(order: &MonomialOrder, p: &Polynomial) -> Self {
        let (lm, lc) = order.leading_term(p).expect("nonzero");
        let lm = lm.clone();
        Reducer {
            lc_inv: Rational::one() / lc,
            tail: p
                .terms()
                .iter()
                .filter(|(m, _)| *m != lm)
                .cloned()
                .collect(),
            lm,
        }
    }
}

/// Counters gathered while reducing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReductionStats {
    pub steps: u64,
}

/// Full reduction of `p` by `reducers`; `choose` picks among the reducers
/// whose leading monomial divides the current term.
fn reduce(
    amb: &Arc<Ambient>,
    order: &MonomialOrder,
    reducers: &[Reducer],
    p: &Polynomial,
    choose: &mut dyn FnMut(&[usize]) -> usize,
    stats: &mut ReductionStats,
) -> Polynomial {
    let mut work: BTreeMap<OrderKey, (Monomial, Rational)> = p
        .terms()
        .iter()
        .map(|(m, c)| (order.key(amb, m), (m.clone(), c.clone())))
        .collect();
    let mut rem = Vec::new();
    let mut cands = Vec::new();
    while let Some((_, (m, c))) = work.pop_last() {
        cands.clear();
        cands.extend(
            reducers
                .iter()
                .enumerate()
                .filter(|(_, r)| r.lm.divides(&m))
                .map(|(i, _)| i),
        );
        if cands.is_empty() {
            rem.push((m, c));
            continue;
        }
        let r = &reducers[cands[choose(&cands)]];
        stats.steps += 1;
        let q = r.lm.quotient_of(&m);
        let f = -(c * &r.lc_inv);
        for (tm, tc) in &r.tail {
            let nm = tm.mul(&q);
            let key = order.key(amb, &nm);
            let add = &f * tc;
            match work.get_mut(&key) {
                Some(slot) => {
                    slot.1 += add;
                    if slot.1.is_zero() {
                        work.remove(&key);
                    }
                }
                None => {
                    work.insert(key, (nm, add));
                }
            }
        }
    }
    Polynomial::from_terms(amb, rem)
}

fn first(_: &[usize]) -> usize {
    0
}

/// Generators of an ideal plus, once completed, a reduced Gröbner basis.
#[derive(Debug, Clone)]
pub struct IdealBasis {
    ambient: Arc<Ambient>,
    generators: Vec<Polynomial>,
    order: MonomialOrder,
    groebner: Option<Vec<Polynomial>>,
    reducers: Vec<Reducer>,
}

impl IdealBasis {
    /// An uncompleted basis; call [`IdealBasis::complete`] before reducing.
    pub fn new(
        ambient: &Arc<Ambient>,
        generators: Vec<Polynomial>,
        order: MonomialOrder,
    ) -> Result<Self, GroebnerError> {
        for g in &generators {
            if !g.same_ambient(&Polynomial::zero(ambient)) {
                return Err(GroebnerError::AmbientMismatch);
            }
            if g.is_zero() {
                return Err(GroebnerError::ZeroGenerator);
            }
        }
        Ok(IdealBasis {
            ambient: ambient.clone(),
            generators,
            order,
            groebner: None,
            reducers: Vec::new(),
        })
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }

    pub fn is_completed(&self) -> bool {
        self.groebner.is_some()
    }

    /// The reduced Gröbner basis, sorted by descending leading monomial.
    pub fn groebner(&self) -> Option<&[Polynomial]> {
        self.groebner.as_deref()
    }

    pub fn complete(mut self) -> Self {
        let gb = buchberger_core(&self.ambient, &self.generators, &self.order);
        self.reducers = gb.iter().map(|g| Reducer::new(&self.order, g)).collect();
        self.groebner = Some(gb);
        self
    }

    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial, GroebnerError> {
        self.normal_form_with(p, &mut first, &mut ReductionStats::default())
    }

    /// Normal form with a caller-supplied choice among eligible reducers.
    pub fn normal_form_with(
        &self,
        p: &Polynomial,
        choose: &mut dyn FnMut(&[usize]) -> usize,
        stats: &mut ReductionStats,
    ) -> Result<Polynomial, GroebnerError> {
        if !self.is_completed() {
            return Err(GroebnerError::NotCompleted);
        }
        if !p.same_ambient(&Polynomial::zero(&self.ambient)) {
            return Err(GroebnerError::AmbientMismatch);
        }
        Ok(reduce(
            &self.ambient,
            &self.order,
            &self.reducers,
            p,
            choose,
            stats,
        ))
    }

    pub fn is_member(&self, p: &Polynomial) -> Result<bool, GroebnerError> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// Checks Buchberger's criterion on the completed basis.
    pub fn satisfies_criterion(&self) -> bool {
        let Some(gb) = &self.groebner else {
            return false;
        };
        for i in 0..gb.len() {
            for j in i + 1..gb.len() {
                let s = s_polynomial(&self.order, &gb[i], &gb[j]);
                if !self.normal_form(&s).map(|r| r.is_zero()).unwrap_or(false) {
                    return false;
                }
            }
        }
        true
    }
}

/// Computes a reduced Gröbner basis of `gens`.
pub fn buchberger(
    ambient: &Arc<Ambient>,
    gens: Vec<Polynomial>,
    order: MonomialOrder,
) -> Result<IdealBasis, GroebnerError> {
    Ok(IdealBasis::new(ambient, gens, order)?.complete())
}

fn monic(order: &MonomialOrder, p: &Polynomial) -> Polynomial {
    let (_, lc) = order.leading_term(p).expect("nonzero");
    p.scale(&(Rational::one() / lc))
}

fn s_polynomial(order: &MonomialOrder, f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (lf, cf) = order.leading_term(f).expect("nonzero");
    let (lg, cg) = order.leading_term(g).expect("nonzero");
    let l = lf.lcm(lg);
    let a = f.mul_monomial(&lf.quotient_of(&l), &(Rational::one() / cf));
    let b = g.mul_monomial(&lg.quotient_of(&l), &(Rational::one() / cg));
    &a - &b
}

fn buchberger_core(
    amb: &Arc<Ambient>,
    gens: &[Polynomial],
    order: &MonomialOrder,
) -> Vec<Polynomial> {
    let mut basis: Vec<Polynomial> = gens.iter().map(|g| monic(order, g)).collect();
    let mut lms: Vec<Monomial> = basis
        .iter()
        .map(|g| order.leading_term(g).unwrap().0.clone())
        .collect();
    let mut reducers: Vec<Reducer> = basis.iter().map(|g| Reducer::new(order, g)).collect();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pending.insert((i, j));
        }
    }
    let mut stats = ReductionStats::default();
    while !pending.is_empty() {
        // Normal strategy: the pair with the smallest lcm goes first.
        let &(i, j) = pending
            .iter()
            .min_by(|a, b| {
                let la = lms[a.0].lcm(&lms[a.1]);
                let lb = lms[b.0].lcm(&lms[b.1]);
                order.key(amb, &la).cmp(&order.key(amb, &lb)).then(a.cmp(b))
            })
            .unwrap();
        pending.remove(&(i, j));
        if lms[i].coprime(&lms[j]) {
            continue;
        }
        let l = lms[i].lcm(&lms[j]);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && lms[k].divides(&l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(order, &basis[i], &basis[j]);
        let h = reduce(amb, order, &reducers, &s, &mut first, &mut stats);
        if h.is_zero() {
            continue;
        }
        let h = monic(order, &h);
        let n = basis.len();
        lms.push(order.leading_term(&h).unwrap().0.clone());
        reducers.push(Reducer::new(order, &h));
        basis.push(h);
        for k in 0..n {
            pending.insert((k, n));
        }
    }
    interreduce(amb, order, basis)
}

fn interreduce(
    amb: &Arc<Ambient>,
    order: &MonomialOrder,
    basis: Vec<Polynomial>,
) -> Vec<Polynomial> {
    let lms: Vec<Monomial> = basis
        .iter()
        .map(|g| order.leading_term(g).unwrap().0.clone())
        .collect();
    let mut keep = Vec::new();
    for i in 0..basis.len() {
        let redundant = (0..basis.len())
            .any(|j| j != i && lms[j].divides(&lms[i]) && (lms[j] != lms[i] || j < i));
        if !redundant {
            keep.push(i);
        }
    }
    let minimal: Vec<Polynomial> = keep.iter().map(|&i| basis[i].clone()).collect();
    let mut out = Vec::with_capacity(minimal.len());
    let mut stats = ReductionStats::default();
    for (idx, g) in minimal.iter().enumerate() {
        let others: Vec<Reducer> = minimal
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != idx)
            .map(|(_, h)| Reducer::new(order, h))
            .collect();
        let (lm, _) = order.leading_term(g).unwrap();
        let lead = Polynomial::term(amb, lm.clone(), Rational::one());
        let tail = g - &lead;
        let tail = reduce(amb, order, &others, &tail, &mut first, &mut stats);
        out.push(&lead + &tail);
    }
    out.sort_by(|a, b| {
        let la = order.leading_term(a).unwrap().0;
        let lb = order.leading_term(b).unwrap().0;
        order.cmp(amb, lb, la)
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::order::OrderKind;

    fn setup(pairs: &[(&str, u32)]) -> Arc<Ambient> {
        Ambient::from_pairs(pairs).unwrap()
    }

    #[test]
    fn single_generator() {
        let amb = setup(&[("x", 2), ("y", 2)]);
        let x = Polynomial::parse("x", &amb).unwrap();
        let b = buchberger(&amb, vec![x.clone()], MonomialOrder::grevlex(&amb)).unwrap();
        assert_eq!(b.groebner().unwrap(), &[x]);
    }

    #[test]
    fn cubic_pair_sends_u_cubed_to_tail() {
        let amb = setup(&[("u", 2), ("v", 2), ("a", 4), ("b", 6)]);
        let gens = vec![
            Polynomial::parse("u^3 + a*u + b", &amb).unwrap(),
            Polynomial::parse("v^3 + a*v - b", &amb).unwrap(),
        ];
        let basis = buchberger(&amb, gens, MonomialOrder::grevlex(&amb)).unwrap();
        assert_eq!(basis.groebner().unwrap().len(), 2);
        let nf = basis
            .normal_form(&Polynomial::parse("u^3", &amb).unwrap())
            .unwrap();
        assert_eq!(nf, Polynomial::parse("-a*u - b", &amb).unwrap());
        assert!(basis
            .is_member(&Polynomial::parse("u^3 + a*u + b", &amb).unwrap())
            .unwrap());
        assert!(!basis.is_member(&Polynomial::one(&amb)).unwrap());
    }

    #[test]
    fn inhomogeneous_example() {
        let amb = setup(&[("x", 2), ("y", 2)]);
        let gens = vec![
            Polynomial::parse("x^2 - y", &amb).unwrap(),
            Polynomial::parse("y^2 - x", &amb).unwrap(),
        ];
        for order in [
            MonomialOrder::grevlex(&amb),
            MonomialOrder::new(OrderKind::GradedLex, &amb, &["y", "x"]).unwrap(),
        ] {
            let basis = buchberger(&amb, gens.clone(), order).unwrap();
            assert!(basis.satisfies_criterion());
            let x4 = Polynomial::parse("x^4", &amb).unwrap();
            let x = Polynomial::parse("x", &amb).unwrap();
            assert_eq!(
                basis.normal_form(&x4).unwrap(),
                basis.normal_form(&x).unwrap()
            );
        }
    }

    #[test]
    fn uncompleted_basis_refuses_reduction() {
        let amb = setup(&[("x", 2)]);
        let x = Polynomial::parse("x", &amb).unwrap();
        let b = IdealBasis::new(&amb, vec![x.clone()], MonomialOrder::grevlex(&amb)).unwrap();
        assert_eq!(b.normal_form(&x), Err(GroebnerError::NotCompleted));
        assert_eq!(
            IdealBasis::new(
                &amb,
                vec![Polynomial::zero(&amb)],
                MonomialOrder::grevlex(&amb)
            )
            .unwrap_err(),
            GroebnerError::ZeroGenerator
        );
    }

    #[test]
    fn reduced_basis_is_monic_and_interreduced() {
        let amb = setup(&[("x", 2), ("y", 2), ("z", 2)]);
        let gens = vec![
            Polynomial::parse("2*x^2 + y*z", &amb).unwrap(),
            Polynomial::parse("x*y - z^2", &amb).unwrap(),
            Polynomial::parse("y^3 - x*z^2", &amb).unwrap(),
        ];
        let order = MonomialOrder::grevlex(&amb);
        let basis = buchberger(&amb, gens.clone(), order.clone()).unwrap();
        assert!(basis.satisfies_criterion());
        let gb = basis.groebner().unwrap();
        for (k, g) in gb.iter().enumerate() {
            let (lm, lc) = order.leading_term(g).unwrap();
            assert!(lc.is_one());
            for (l, h) in gb.iter().enumerate() {
                if l != k {
                    for (m, _) in h.terms() {
                        assert!(!lm.divides(m));
                    }
                }
            }
        }
        for g in &gens {
            assert!(basis.is_member(g).unwrap());
        }
    }
}
