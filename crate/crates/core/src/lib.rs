//! Workbench for levels of cancellation in commutative monoids.
//!
//! The crate decides the word problem for finitely presented commutative
//! monoids by completion over exponent vectors, runs exact decision procedures
//! on finite monoids, and computes stable-rank brackets with machine-checkable
//! certificates on finitely presented (generally infinite) monoids. Universal
//! statements over infinite carriers get honest three-valued verdicts: a claim
//! either holds with evidence, fails with a re-checkable witness, or is
//! unknown up to the searched radius.

// addition tables and matrices are clearer with explicit index loops
#![allow(clippy::needless_range_loop)]

pub mod finite;
pub mod harness;
pub mod kernel;
pub mod presentation;
pub mod rank;

pub use finite::{
    property_report, quotient, smallest_sr_plus_congruence, sr_exact_finite, structure_report,
    Congruence, FiniteMonoid, QuotientKind, Rank,
};
pub use kernel::{
    complete, find_grading, Finiteness, Grading, Hom, LeqResult, RewriteSystem,
    DEFAULT_COMPLETION_BUDGET,
};
pub use presentation::{
    parse_cayley, parse_element, parse_presentation, pretty_element, CayleyDocument,
    ExponentVector, MonoidPresentation, ParseError, ParseWarning,
};
pub use rank::{Analyzer, Certificate, RadiusPolicy, SrBracket, Verdict};
