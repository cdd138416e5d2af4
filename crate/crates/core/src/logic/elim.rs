use std::collections::BTreeSet;

use crate::mult::{Mult, Product, Var};

use super::normal::NormalPred;

/// A quantifier-free constraint equivalent to `∃π. Q`.
///
/// With `Q` normalized, `Q[π↦1]` is `Φ₁ ∧ Q_rest` where `Φ₁` collects
/// `μ ≤ M` from each `μ ≤ π·M`, and `Q[π↦ω]` is `Φω ∧ Q_rest` where `Φω`
/// collects `ω ≤ M` from each `π ≤ M`. Their disjunction distributes into
/// the pairwise products `μ ≤ M·M'`, since `μ ≤ M ∨ ω ≤ M'` is `μ ≤ M·M'`.
pub fn eliminate(pi: Var, q: &BTreeSet<NormalPred>) -> BTreeSet<NormalPred> {
    let pi = Mult::Uni(pi);
    let mut phi_one: Vec<(Mult, Product)> = Vec::new();
    let mut phi_omega: Vec<Product> = Vec::new();
    let mut out = BTreeSet::new();
    for p in q {
        if *p.lhs() == pi {
            phi_omega.push(p.rhs().clone());
        } else if p.rhs().contains(&pi) {
            let rest = Product::from_factors(p.rhs().factors().iter().filter(|m| **m != pi).cloned());
            phi_one.push((p.lhs().clone(), rest));
        } else {
            out.insert(p.clone());
        }
    }
    for (mu, m) in &phi_one {
        for m2 in &phi_omega {
            if let Some(np) = NormalPred::new(mu.clone(), m.mul(m2)) {
                out.insert(np);
            }
        }
    }
    out
}

/// Eliminate each variable in turn, in the order given.
pub fn eliminate_all(pis: &[Var], q: &BTreeSet<NormalPred>) -> BTreeSet<NormalPred> {
    pis.iter().fold(q.clone(), |acc, pi| eliminate(*pi, &acc))
}
