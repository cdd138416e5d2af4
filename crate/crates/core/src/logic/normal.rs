use std::collections::BTreeSet;
use std::fmt;

use crate::mult::{Mult, Predicate, Product};
use crate::subst::{Fold, Folder, FreeVars, Vars};

/// A predicate `μ ≤ ∏νᵢ` that is not trivially true.
///
/// `lhs` is never `1`, `rhs` is never `ω`, and `lhs` does not occur in `rhs`.
/// `ω ≤ 1` is representable and unsatisfiable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalPred {
    lhs: Mult,
    rhs: Product,
}

impl NormalPred {
    /// `None` when the predicate is trivially true.
    pub fn new(lhs: Mult, rhs: Product) -> Option<NormalPred> {
        if lhs == Mult::One || rhs.is_omega() || rhs.contains(&lhs) {
            return None;
        }
        Some(NormalPred { lhs, rhs })
    }

    pub fn lhs(&self) -> &Mult {
        &self.lhs
    }

    pub fn rhs(&self) -> &Product {
        &self.rhs
    }

    pub fn mentions(&self, m: &Mult) -> bool {
        self.lhs == *m || self.rhs.contains(m)
    }

    pub fn to_predicate(&self) -> Predicate {
        Predicate::new(self.lhs.clone(), self.rhs.clone())
    }
}

impl From<&NormalPred> for Predicate {
    fn from(p: &NormalPred) -> Self {
        p.to_predicate()
    }
}

impl fmt::Display for NormalPred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", self.lhs, self.rhs)
    }
}

impl Vars for NormalPred {
    fn collect_vars(&self, out: &mut FreeVars) {
        self.lhs.collect_vars(out);
        self.rhs.collect_vars(out);
    }
}

/// Substitution may produce a trivial predicate, hence the set result.
impl Fold for BTreeSet<NormalPred> {
    fn fold<F: Folder + ?Sized>(&self, f: &F) -> Self {
        normalize(self.iter().map(|p| p.to_predicate().fold(f)).collect::<Vec<_>>().iter())
    }
}

impl Vars for BTreeSet<NormalPred> {
    fn collect_vars(&self, out: &mut FreeVars) {
        self.iter().for_each(|p| p.collect_vars(out));
    }
}

/// Split a predicate into normal predicates: `M₁·M₂ ≤ M` becomes
/// `M₁ ≤ M ∧ M₂ ≤ M`, and trivial results are dropped. Products are already
/// canonical, which covers the unit/absorption rewriting.
pub fn normalize_one(p: &Predicate) -> impl Iterator<Item = NormalPred> + '_ {
    p.lhs
        .factors()
        .iter()
        .filter_map(move |mu| NormalPred::new(mu.clone(), p.rhs.clone()))
}

pub fn normalize<'a>(preds: impl IntoIterator<Item = &'a Predicate>) -> BTreeSet<NormalPred> {
    preds.into_iter().flat_map(normalize_one).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: &str) -> Mult {
        Mult::rigid(n)
    }

    #[test]
    fn splits_products_on_the_left() {
        let p = Predicate::new(Product::from_factors([r("p"), r("q")]), r("r"));
        let n = normalize([&p]);
        let expect: BTreeSet<_> = [
            NormalPred::new(r("p"), r("r").into()).unwrap(),
            NormalPred::new(r("q"), r("r").into()).unwrap(),
        ]
        .into_iter()
        .collect();
        assert_eq!(n, expect);
    }

    #[test]
    fn drops_trivial() {
        let a = Predicate::new(Mult::One, r("p"));
        let b = Predicate::new(r("q"), Mult::Omega);
        assert!(normalize([&a, &b]).is_empty());
    }

    #[test]
    fn omega_product_collapses_then_drops() {
        let p = Predicate::new(r("p"), Product::from_factors([Mult::Omega, r("q")]));
        assert!(normalize([&p]).is_empty());
    }

    #[test]
    fn self_reference_is_trivial() {
        let p = Predicate::new(r("p"), Product::from_factors([r("p"), r("q")]));
        assert!(normalize([&p]).is_empty());
    }

    #[test]
    fn omega_le_one_survives() {
        let p = Predicate::new(Mult::Omega, Mult::One);
        let n = normalize([&p]);
        assert_eq!(n.len(), 1);
        let only = n.iter().next().unwrap();
        assert_eq!(only.lhs(), &Mult::Omega);
        assert!(only.rhs().is_one());
    }
}
