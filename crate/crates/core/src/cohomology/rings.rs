use std::sync::Arc;

use thiserror::Error;

use crate::groebner::{PresentationError, QuotientRing, RingPresentation};
use crate::poly::{Polynomial, Rational};

use super::GradedAlgebra;

pub const BUNDLED_B: &str = include_str!("../../data/rings/b.ring");
pub const BUNDLED_BTILDE: &str = include_str!("../../data/rings/btilde.ring");
pub const BUNDLED_S1: &str = include_str!("../../data/rings/s1.ring");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("{ring}: {source}")]
    Presentation {
        ring: &'static str,
        source: PresentationError,
    },
    #[error("{ring}: missing variable `{var}` of degree {degree}")]
    MissingVariable {
        ring: &'static str,
        var: &'static str,
        degree: u32,
    },
    #[error("variable `{var}` of S1 has no counterpart in B~")]
    Unmatched { var: String },
}

/// Which of the three presentations a text belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingName {
    B,
    BTilde,
    S1,
}

impl RingName {
    pub const ALL: [RingName; 3] = [RingName::B, RingName::BTilde, RingName::S1];

    pub fn file_stem(self) -> &'static str {
        match self {
            RingName::B => "b",
            RingName::BTilde => "btilde",
            RingName::S1 => "s1",
        }
    }

    pub fn from_stem(s: &str) -> Option<Self> {
        RingName::ALL.into_iter().find(|r| r.file_stem() == s)
    }

    pub fn bundled_text(self) -> &'static str {
        match self {
            RingName::B => BUNDLED_B,
            RingName::BTilde => BUNDLED_BTILDE,
            RingName::S1 => BUNDLED_S1,
        }
    }

    fn required(self) -> &'static [(&'static str, u32)] {
        match self {
            RingName::B => &[("u", 2), ("v", 2), ("a", 4), ("b", 6)],
            RingName::BTilde => &[("eta", 2), ("u", 2), ("v", 2), ("a", 4), ("b", 6)],
            RingName::S1 => &[("xi", 2), ("a", 4), ("b", 6)],
        }
    }
}

/// The three completed presentations used throughout.
#[derive(Debug, Clone)]
pub struct Rings {
    pub b: Arc<QuotientRing>,
    pub btilde: Arc<QuotientRing>,
    pub s1: Arc<QuotientRing>,
}

fn load(name: RingName, text: &str) -> Result<RingPresentation, RingError> {
    let label = name.file_stem();
    let pres = RingPresentation::parse(text).map_err(|source| RingError::Presentation {
        ring: label,
        source,
    })?;
    for &(var, degree) in name.required() {
        let ok = pres
            .ambient()
            .index_of(var)
            .map(|i| pres.ambient().vars()[i].degree == degree)
            .unwrap_or(false);
        if !ok {
            return Err(RingError::MissingVariable {
                ring: label,
                var,
                degree,
            });
        }
    }
    Ok(pres)
}

impl Rings {
    pub fn bundled() -> Self {
        Rings::from_texts(BUNDLED_B, BUNDLED_BTILDE, BUNDLED_S1).expect("bundled rings are valid")
    }

    pub fn from_texts(b: &str, btilde: &str, s1: &str) -> Result<Self, RingError> {
        let b = load(RingName::B, b)?;
        let bt = load(RingName::BTilde, btilde)?;
        let s1 = load(RingName::S1, s1)?;
        Ok(Rings {
            b: Arc::new(b.complete()),
            btilde: Arc::new(bt.complete()),
            s1: Arc::new(s1.complete()),
        })
    }

    /// The rings restricted to a fiber over the base: a = b = 0.
    pub fn fiber(&self) -> Self {
        Rings {
            b: fiber_ring(&self.b),
            btilde: fiber_ring(&self.btilde),
            s1: fiber_ring(&self.s1),
        }
    }
}

/// `r` with the parameters a and b set to zero.
pub(crate) fn fiber_ring(r: &QuotientRing) -> Arc<QuotientRing> {
    Arc::new(
        r.presentation()
            .specialize_to_zero(&["a", "b"])
            .expect("parameters present")
            .complete(),
    )
}

/// A quotient ring viewed as a graded algebra truncated above a degree.
#[derive(Debug, Clone)]
pub struct TruncatedRing {
    pub ring: Arc<QuotientRing>,
    pub trunc: u32,
}

impl TruncatedRing {
    pub fn new(ring: Arc<QuotientRing>, trunc: u32) -> Self {
        TruncatedRing { ring, trunc }
    }

    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        self.ring.nf(&p.truncate(self.trunc)).truncate(self.trunc)
    }
}

impl GradedAlgebra for TruncatedRing {
    type Elem = Polynomial;

    fn working_degree(&self) -> u32 {
        self.trunc
    }

    fn one(&self) -> Polynomial {
        Polynomial::one(self.ring.ambient())
    }

    fn zero(&self) -> Polynomial {
        Polynomial::zero(self.ring.ambient())
    }

    fn add(&self, x: &Polynomial, y: &Polynomial) -> Polynomial {
        x + y
    }

    fn sub(&self, x: &Polynomial, y: &Polynomial) -> Polynomial {
        x - y
    }

    fn mul(&self, x: &Polynomial, y: &Polynomial) -> Polynomial {
        self.ring.nf(&x.mul_bounded(y, Some(self.trunc)))
    }

    fn scale(&self, x: &Polynomial, c: &Rational) -> Polynomial {
        x.scale(c)
    }

    fn map_pieces(&self, x: &Polynomial, f: &dyn Fn(u32) -> Rational) -> Polynomial {
        x.map_pieces(f)
    }

    fn degrees(&self, x: &Polynomial) -> Vec<u32> {
        x.degrees()
    }

    fn constant_term(&self, x: &Polynomial) -> Rational {
        x.constant_term()
    }

    fn normalize(&self, x: &Polynomial) -> Polynomial {
        self.reduce(x)
    }
}
