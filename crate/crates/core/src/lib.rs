//! Criteria and certificates for surface subgroups of doubles of free
//! groups along a word.
//!
//! Given a word `w` in a free group, the double along `w` is the amalgam of
//! two copies of the free group over the cyclic subgroup `<w>`. This crate
//! decides which of several sufficient criteria for that double to contain a
//! surface subgroup apply, and produces machine-checkable certificates:
//! Alexander polynomials and their cyclotomic factors, explicit cover
//! homology, small-cancellation piece data, subgroup presentations, and
//! combinatorial Heegaard diagrams.

pub mod alexander;
pub mod bsgroups;
pub mod census;
pub mod covers;
pub mod heegaard;
pub mod intlinalg;
pub mod laurent;
pub mod report;
pub mod smallcanc;
pub mod whitehead;
pub mod words;

pub use report::{analyze, analyze_word, CriterionReport, CriterionVerdict};
pub use words::{parse_word, PhiMap, Word};
