use std::collections::BTreeSet;

use crate::mult::{Mult, Predicate};

use super::horn::HornFormula;
use super::normal::{normalize, normalize_one, NormalPred};

pub fn is_satisfiable<'a>(q: impl IntoIterator<Item = &'a NormalPred>) -> bool {
    HornFormula::from_preds(q).is_satisfiable()
}

/// Entailment queries against a fixed normalized constraint.
#[derive(Clone, Debug)]
pub struct Entailer {
    base: HornFormula,
}

impl Entailer {
    pub fn new<'a>(q: impl IntoIterator<Item = &'a NormalPred>) -> Self {
        Entailer {
            base: HornFormula::from_preds(q),
        }
    }

    pub fn from_predicates<'a>(q: impl IntoIterator<Item = &'a Predicate>) -> Self {
        Entailer::new(&normalize(q))
    }

    /// `Q ⊨ μ ≤ ∏νᵢ` iff `Q ∧ ⋀ νᵢ ≤ 1 ∧ ω ≤ μ` is unsatisfiable.
    pub fn entails_normal(&self, phi: &NormalPred) -> bool {
        let mut f = self.base.clone();
        for nu in phi.rhs().factors() {
            f.add_fact(nu);
        }
        if *phi.lhs() != Mult::Omega {
            f.add_negative(phi.lhs());
        }
        !f.is_satisfiable()
    }

    pub fn entails(&self, phi: &Predicate) -> bool {
        normalize_one(phi).all(|p| self.entails_normal(&p))
    }

    pub fn is_satisfiable(&self) -> bool {
        self.base.is_satisfiable()
    }
}

pub fn entails_normal(q: &BTreeSet<NormalPred>, phi: &NormalPred) -> bool {
    Entailer::new(q).entails_normal(phi)
}

pub fn entails<'a>(q: impl IntoIterator<Item = &'a Predicate>, phi: &Predicate) -> bool {
    Entailer::from_predicates(q).entails(phi)
}

/// Mutual entailment.
pub fn equivalent<'a, 'b>(
    q1: impl IntoIterator<Item = &'a Predicate>,
    q2: impl IntoIterator<Item = &'b Predicate>,
) -> bool {
    let n1 = normalize(q1);
    let n2 = normalize(q2);
    let e1 = Entailer::new(&n1);
    let e2 = Entailer::new(&n2);
    n2.iter().all(|p| e1.entails_normal(p)) && n1.iter().all(|p| e2.entails_normal(p))
}
