//! Cohomology models: H*(B), H*(B~), H*(S1) as quotient rings, and the pair
//! model `p + j_*(q)` for the second blow-up S2.

mod rings;
mod s2class;

use std::fmt;

use crate::poly::Rational;

pub use rings::{RingError, RingName, Rings, TruncatedRing, BUNDLED_B, BUNDLED_BTILDE, BUNDLED_S1};
pub use s2class::{S2Class, S2Model, S2ParseError};

/// A commutative graded algebra truncated above a working degree. Products
/// come back reduced and truncated.
pub trait GradedAlgebra {
    type Elem: Clone + PartialEq + fmt::Display + fmt::Debug;

    fn working_degree(&self) -> u32;
    fn one(&self) -> Self::Elem;
    fn zero(&self) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn scale(&self, x: &Self::Elem, c: &Rational) -> Self::Elem;
    /// Multiplies the homogeneous piece of degree `d` by `f(d)`.
    fn map_pieces(&self, x: &Self::Elem, f: &dyn Fn(u32) -> Rational) -> Self::Elem;
    /// Degrees carrying a nonzero piece, ascending.
    fn degrees(&self, x: &Self::Elem) -> Vec<u32>;
    fn constant_term(&self, x: &Self::Elem) -> Rational;
    /// Reduced, truncated representative.
    fn normalize(&self, x: &Self::Elem) -> Self::Elem;

    fn piece(&self, x: &Self::Elem, d: u32) -> Self::Elem {
        self.map_pieces(x, &|e| {
            if e == d {
                Rational::from_integer(1.into())
            } else {
                Rational::from_integer(0.into())
            }
        })
    }

    fn is_zero(&self, x: &Self::Elem) -> bool {
        self.degrees(x).is_empty()
    }
}
