//! Stability combinatorics for rank-3 bundles on a curve with a chain of
//! rational components: walls, slopes, transfer, subsheaf patterns and
//! dimension counts.

use thiserror::Error;

pub mod catalog;
pub mod chains;
pub mod dims;
pub mod patterns;
pub mod walls;

pub use catalog::{Catalog, CatalogEntry, Family};
pub use chains::{is_regular, reverse_transfer, transfer, ChainBundle, Transfer};
pub use dims::{dims_table, DimsTable};
pub use patterns::{enumerate_destab_patterns, Node, Row, SubsheafPattern, Summand};
pub use walls::{
    destab_triples, gpb_slope, is_wall, lambda_set, parse_rational, slope_compare,
    slope_compare_strict, DestabTriple, GpbData, Polarization, SheafInvariants, Side, WallSolution,
    Q,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabilityError {
    #[error("rank must be at least 2, got {0}")]
    Rank(i64),
    #[error("rank {r} and Euler characteristic {chi} are not coprime")]
    NotCoprime { r: i64, chi: i64 },
    #[error("expected {expected} component ranks, found {found}")]
    Components { expected: usize, found: usize },
    #[error("rank vanishes identically")]
    ZeroRank,
    #[error("{0} is a wall; a strict comparison is undefined there")]
    OnWall(String),
    #[error("{0} is not a wall")]
    NotAWall(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("bad rational `{0}`")]
    Rational(String),
    #[error("component {component}: expected {expected} factors, found {found}")]
    ChainRank {
        component: usize,
        expected: i64,
        found: usize,
    },
    #[error("component {component}: degree {degree} is outside {{0, 1}}")]
    Degree { component: usize, degree: i64 },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("genus must be at least 2, got {0}")]
    Genus(i64),
}
