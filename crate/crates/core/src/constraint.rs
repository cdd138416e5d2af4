//! Generated (wanted) constraints.

use std::collections::BTreeSet;
use std::fmt;

use crate::mult::{Given, Predicate};
use crate::subst::{Fold, Folder, FreeVars, Vars};
use crate::types::Type;

/// Identifies an implication within one inference run.
pub type ImplId = usize;

/// `C`: predicates, type equalities and implication constraints.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Wanted {
    pub preds: Vec<Predicate>,
    pub eqs: Vec<(Type, Type)>,
    pub implications: Vec<Implication>,
}

/// `∃ π̄ ᾱ. (Q ⊨^τ C)`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Implication {
    pub id: ImplId,
    /// Ids of the unification variables this implication may substitute.
    pub touchables: BTreeSet<u32>,
    pub level: u32,
    pub given: Given,
    pub wanted: Wanted,
    /// Type used to decide which touchables are ambiguous.
    pub disamb: Type,
}

impl Wanted {
    pub fn new() -> Self {
        Wanted::default()
    }

    pub fn pred(p: Predicate) -> Self {
        Wanted {
            preds: vec![p],
            ..Wanted::default()
        }
    }

    pub fn eq(a: Type, b: Type) -> Self {
        Wanted {
            eqs: vec![(a, b)],
            ..Wanted::default()
        }
    }

    pub fn append(&mut self, mut other: Wanted) {
        self.preds.append(&mut other.preds);
        self.eqs.append(&mut other.eqs);
        self.implications.append(&mut other.implications);
    }

    pub fn is_empty(&self) -> bool {
        self.preds.is_empty() && self.eqs.is_empty() && self.implications.is_empty()
    }

    /// `simpl(C)`: everything except implications.
    pub fn simple(&self) -> Wanted {
        Wanted {
            preds: self.preds.clone(),
            eqs: self.eqs.clone(),
            implications: Vec::new(),
        }
    }

    /// Syntactic size, used for the simplifier's step budget.
    pub fn size(&self) -> usize {
        self.preds.len()
            + self.eqs.iter().map(|(a, b)| a.size() + b.size()).sum::<usize>()
            + self.implications.iter().map(|i| 1 + i.wanted.size()).sum::<usize>()
    }
}

impl Fold for Wanted {
    fn fold<F: Folder + ?Sized>(&self, f: &F) -> Self {
        Wanted {
            preds: self.preds.fold(f),
            eqs: self.eqs.fold(f),
            implications: self.implications.iter().map(|i| i.fold(f)).collect(),
        }
    }
}

impl Fold for Implication {
    fn fold<F: Folder + ?Sized>(&self, f: &F) -> Self {
        Implication {
            id: self.id,
            touchables: self.touchables.clone(),
            level: self.level,
            given: self.given.fold(f),
            wanted: self.wanted.fold(f),
            disamb: self.disamb.fold(f),
        }
    }
}

impl Vars for Wanted {
    fn collect_vars(&self, out: &mut FreeVars) {
        self.preds.collect_vars(out);
        for (a, b) in &self.eqs {
            a.collect_vars(out);
            b.collect_vars(out);
        }
        self.implications.iter().for_each(|i| i.collect_vars(out));
    }
}

/// Free variables of an implication are those not among its touchables.
impl Vars for Implication {
    fn collect_vars(&self, out: &mut FreeVars) {
        let mut inner = FreeVars::default();
        self.given.collect_vars(&mut inner);
        self.wanted.collect_vars(&mut inner);
        self.disamb.collect_vars(&mut inner);
        for (s, v) in inner.uni {
            if !self.touchables.contains(&v.id) {
                out.uni.insert((s, v));
            }
        }
        out.rigid.extend(inner.rigid);
    }
}

impl fmt::Display for Wanted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        parts.extend(self.eqs.iter().map(|(a, b)| format!("{a} ~ {b}")));
        parts.extend(self.preds.iter().map(|p| p.to_string()));
        parts.extend(self.implications.iter().map(|i| i.to_string()));
        if parts.is_empty() {
            return f.write_str("T");
        }
        f.write_str(&parts.join(" /\\ "))
    }
}

impl fmt::Display for Implication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(exists")?;
        for v in &self.touchables {
            write!(f, " ?{v}")?;
        }
        write!(f, ". {} |=^{{{}}} {})", self.given, self.disamb, self.wanted)
    }
}
