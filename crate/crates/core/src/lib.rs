//! Exact double-shuffle reduction of multiple zeta values.
//!
//! Words of each weight are reduced, weight by weight, onto products of
//! lower-weight generators and a small set of new generators drawn from
//! (extended) Lyndon words over odd letters. Results persist as substitution
//! tables that later weights read back.

pub mod algebra;
pub mod error;
pub mod lyndon;
pub mod solver;
pub mod verify;
pub mod words;

pub use algebra::{BasisMonomial, LinComb, Rational, Relation, RelationKind, RelationKinds};
pub use error::{Error, Result};
pub use lyndon::{candidate_pool, collapse, extend, generate_l, is_lyndon, ExtendedCandidate, LyndonSet};
pub use solver::{solve_weight, SolverConfig, SubstitutionTable, TableSet};
pub use verify::BasisReport;
pub use words::{admissible_words, all_words, elim_compare, BinaryWord, CandidateSet, ElimKey, IndexWord, Letter};

/// Build identifier written into every manifest.
pub const BUILD_ID: &str = concat!("zeta-forge ", env!("CARGO_PKG_VERSION"));
