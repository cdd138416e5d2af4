use thiserror::Error;

use crate::mult::{Given, Name};
use crate::types::Type;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(Name),
    #[error("unknown constructor `{0}`")]
    UnknownConstructor(Name),
    #[error("constructor `{con}` has {expected} field(s) but the pattern binds {found}")]
    PatternArity { con: Name, expected: usize, found: usize },
    #[error("constructor `{con}` expects {expected} argument(s), got {found}")]
    ConArity { con: Name, expected: usize, found: usize },
    #[error("variable `{0}` is bound twice in one pattern")]
    NonLinearPattern(Name),
    #[error("cannot match `{0}` with `{1}`")]
    Mismatch(Box<Type>, Box<Type>),
    #[error("occurs check: `{0}` occurs in `{1}`")]
    Occurs(Box<Type>, Box<Type>),
    #[error("multiplicity constraints are unsatisfiable")]
    Unsatisfiable { residual: Given },
    #[error("the signature is more general than the definition")]
    Unprovable { residual: Given },
    #[error("an implication needs to fix a variable from an outer scope: {detail}")]
    Touchability { detail: String, residual: Given },
    #[error("constraint simplification exceeded its budget of {0} steps")]
    StepBudget(usize),
    #[error("decision procedure disagrees with brute force: {0}")]
    OracleMismatch(String),
}

impl TypeError {
    /// The leftover constraint, for errors that have one.
    pub fn residual(&self) -> Option<&Given> {
        match self {
            TypeError::Unsatisfiable { residual }
            | TypeError::Unprovable { residual }
            | TypeError::Touchability { residual, .. } => Some(residual),
            _ => None,
        }
    }
}
