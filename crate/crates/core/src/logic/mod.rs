//! Decision procedures for multiplicity constraints over `{1, ω}`.
//!
//! Predicates are first [normalized](normalize) to the shape `μ ≤ ∏νᵢ`.
//! Mapping `1` to true and `ω` to false turns such a predicate into the Horn
//! clause `ν₁ ∧ … ∧ νₙ ⇒ μ`, so satisfiability and entailment reduce to Horn
//! satisfiability, which unit propagation decides without search.

mod elim;
mod entail;
mod horn;
mod normal;

pub use elim::{eliminate, eliminate_all};
pub use entail::{entails, entails_normal, equivalent, is_satisfiable, Entailer};
pub use horn::{HornClause, HornFormula};
pub use normal::{normalize, normalize_one, NormalPred};
