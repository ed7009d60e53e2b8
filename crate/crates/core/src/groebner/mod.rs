//! Buchberger completion and normal forms for graded polynomial ideals.

mod buchberger;
mod order;
mod presentation;

pub use buchberger::{buchberger, GroebnerError, IdealBasis, ReductionStats};
pub use order::{MonomialOrder, OrderKey, OrderKind};
pub use presentation::{PresentationError, QuotientRing, RingPresentation};
