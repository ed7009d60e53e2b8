//! Exact symbolic verification of a Chern-class vanishing computation on a
//! twice blown-up Hom-projectivization, together with the stability-wall
//! combinatorics for rank-3 bundles on nodal curves that goes with it.

pub mod chern;
pub mod cli;
pub mod cohomology;
pub mod groebner;
pub mod poly;
pub mod report;
pub mod stability;
pub mod vanish;
