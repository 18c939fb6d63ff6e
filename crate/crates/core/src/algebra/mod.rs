//! Exact linear algebra over MZV words: coefficients, products, relations.

mod linear;
mod monomial;
pub mod numeric;
pub mod products;
pub mod relations;

pub use linear::LinComb;
pub use monomial::{count_monomials, mul_combos, parse_monomial_combo, BasisMonomial};
pub use numeric::eval_truncated;
pub use products::{shuffle, shuffle_words, stuffle};
pub use relations::{
    duality_relation, gen_relations, hoffman_relation, relation_population, Product, Relation,
    RelationKind, RelationKinds, RelationSpec,
};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;
