//! Monotypes and polytypes.

use std::fmt;

use crate::mult::{Given, Mult, Name, Var};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Rigid(Name),
    Uni(Var),
    /// `D μ̄ τ̄`
    Data(Name, Vec<Mult>, Vec<Type>),
    /// `σ →μ τ`
    Arrow(Box<Type>, Mult, Box<Type>),
}

impl Type {
    pub fn rigid(name: impl Into<Name>) -> Self {
        Type::Rigid(name.into())
    }

    pub fn con(name: impl Into<Name>) -> Self {
        Type::Data(name.into(), Vec::new(), Vec::new())
    }

    pub fn data(name: impl Into<Name>, mults: Vec<Mult>, args: Vec<Type>) -> Self {
        Type::Data(name.into(), mults, args)
    }

    pub fn arrow(dom: Type, m: Mult, cod: Type) -> Self {
        Type::Arrow(Box::new(dom), m, Box::new(cod))
    }

    /// Number of constructors in the tree; used for step budgets.
    pub fn size(&self) -> usize {
        match self {
            Type::Rigid(_) | Type::Uni(_) => 1,
            Type::Data(_, ms, ts) => 1 + ms.len() + ts.iter().map(Type::size).sum::<usize>(),
            Type::Arrow(a, _, b) => 2 + a.size() + b.size(),
        }
    }
}

/// `∀ p̄ ā. Q ⇒ τ`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyType {
    pub mult_binders: Vec<Name>,
    pub type_binders: Vec<Name>,
    pub context: Given,
    pub body: Type,
}

impl PolyType {
    /// A binder-free polytype.
    pub fn mono(body: Type) -> Self {
        PolyType {
            mult_binders: Vec::new(),
            type_binders: Vec::new(),
            context: Given::top(),
            body,
        }
    }

    pub fn is_mono(&self) -> bool {
        self.mult_binders.is_empty() && self.type_binders.is_empty() && self.context.is_top()
    }
}

/// Precedence levels for printing types.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Top,
    ArrowLhs,
    Atom,
}

fn write_type(f: &mut fmt::Formatter<'_>, t: &Type, prec: Prec) -> fmt::Result {
    match t {
        Type::Rigid(n) => f.write_str(n),
        Type::Uni(v) => write!(f, "?t{}", v.id),
        Type::Data(d, ms, ts) => {
            if ms.is_empty() && ts.is_empty() {
                return f.write_str(d);
            }
            let paren = prec >= Prec::Atom;
            if paren {
                f.write_str("(")?;
            }
            f.write_str(d)?;
            for m in ms {
                write!(f, " {m}")?;
            }
            for t in ts {
                f.write_str(" ")?;
                write_type(f, t, Prec::Atom)?;
            }
            if paren {
                f.write_str(")")?;
            }
            Ok(())
        }
        Type::Arrow(a, m, b) => {
            let paren = prec >= Prec::ArrowLhs;
            if paren {
                f.write_str("(")?;
            }
            write_type(f, a, Prec::ArrowLhs)?;
            write!(f, " ->[{m}] ")?;
            write_type(f, b, Prec::Top)?;
            if paren {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_type(f, self, Prec::Top)
    }
}

/// Prints the polytype as stored, without canonical renaming. See
/// [`crate::syntax::pretty_polytype`] for the canonical form.
impl fmt::Display for PolyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.mult_binders.is_empty() || !self.type_binders.is_empty() {
            f.write_str("forall")?;
            for b in self.mult_binders.iter().chain(&self.type_binders) {
                write!(f, " {b}")?;
            }
            f.write_str(". ")?;
        }
        if !self.context.is_top() {
            let mut preds: Vec<String> = self.context.iter().map(|p| p.to_string()).collect();
            preds.sort();
            preds.dedup();
            write!(f, "({}) => ", preds.join(", "))?;
        }
        write!(f, "{}", self.body)
    }
}
