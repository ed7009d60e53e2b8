use num_traits::{One, Signed};

use super::{Monomial, Polynomial, Rational};

/// Factors of a monomial as `name^k` strings, sorted by variable name.
pub(crate) fn monomial_factors(p: &Polynomial, m: &Monomial) -> Vec<String> {
    let vars = p.ambient().vars();
    let mut factors: Vec<(&str, u16)> = m
        .exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| (vars[i].name.as_str(), e))
        .collect();
    factors.sort_by(|a, b| a.0.cmp(b.0));
    factors
        .into_iter()
        .map(|(n, e)| {
            if e == 1 {
                n.to_string()
            } else {
                format!("{n}^{e}")
            }
        })
        .collect()
}

fn coefficient_text(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub(crate) fn render(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let abs = c.abs();
        let factors = monomial_factors(p, m);
        if factors.is_empty() {
            out.push_str(&coefficient_text(&abs));
            continue;
        }
        if !abs.is_one() {
            out.push_str(&coefficient_text(&abs));
            out.push('*');
        }
        out.push_str(&factors.join("*"));
    }
    out
}
