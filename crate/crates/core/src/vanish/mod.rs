//! Stage-by-stage verification that c7 and c8 of the log cotangent bundle
//! vanish, with a certificate per stage.

pub mod certificate;
pub mod displays;
pub mod verify;

pub use certificate::{Certificate, Check, Stats, TermDiff};
pub use displays::{DisplayName, Displays};
pub use verify::{Stage, Verifier};
