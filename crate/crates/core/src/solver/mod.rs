//! Weight-by-weight reduction of all admissible words onto basis monomials.

mod expr;
mod family;
mod master;
mod pipeline;
mod store;
mod table;

pub use expr::Expr;
pub use family::{family_partition, solve_family, splitting_pairs, FamilyKey, FamilyOutcome};
pub use master::{Absorbed, MasterExpression};
pub use pipeline::{solve_through, solve_weight, SolveOutcome, SolveStats, SolverConfig};
pub use store::{Manifest, ManifestEntry, TableStore};
pub use table::{substitute_tables, substitute_words, Phase, SubstitutionTable, TableSet};
