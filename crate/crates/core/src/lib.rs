//! Type inference for a small functional language whose arrows carry
//! multiplicities `1` (linear) or `ω` (unrestricted), possibly polymorphic.
//!
//! Inferred types are principal and qualified by multiplicity predicates:
//!
//! ```
//! use linfer::{check_program, pretty_polytype, SolveOptions};
//!
//! let report = check_program("app f x = f x", SolveOptions::default()).unwrap();
//! assert_eq!(
//!     pretty_polytype(report.type_of("app").unwrap()),
//!     "forall p q r a b. (p <= r) => (a ->[p] b) ->[q] a ->[r] b",
//! );
//! ```
//!
//! The pipeline is [`syntax`] (parsing) → [`infer`] (constraint generation)
//! → [`solve`] (simplification, entailment via [`logic`], quantifier
//! elimination) → [`check`] (independent replay of the result).

pub mod check;
pub mod constraint;
pub mod env;
pub mod error;
pub mod infer;
pub mod logic;
pub mod mult;
pub mod oracle;
pub mod program;
pub mod solve;
pub mod subst;
pub mod syntax;
pub mod types;

pub use check::{replay, ReplayError};
pub use constraint::{ImplId, Implication, Wanted};
pub use env::{MultEnv, Supply, TypeEnv};
pub use error::TypeError;
pub use infer::{infer_expr, Deriv, GenResult};
pub use mult::{Given, Mult, Name, Predicate, Product, Var};
pub use program::{check_program, infer_program, render_types, BindingReport, Diagnostic, ProgramReport, Record};
pub use solve::{generalize, SolveOptions, SolveResult, Solver, Stats};
pub use subst::Subst;
pub use syntax::{parse_expr, parse_program, parse_type, pretty_polytype, DataEnv, ParseError};
pub use types::{PolyType, Type};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/multiplicities.md")]
    mod multiplicities {}
    #[doc = include_str!("../../../book/src/syntax.md")]
    mod syntax {}
    #[doc = include_str!("../../../book/src/generation.md")]
    mod generation {}
    #[doc = include_str!("../../../book/src/entailment.md")]
    mod entailment {}
    #[doc = include_str!("../../../book/src/elimination.md")]
    mod elimination {}
    #[doc = include_str!("../../../book/src/solving.md")]
    mod solving {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
