use std::collections::HashMap;

use crate::mult::Mult;

use super::normal::NormalPred;

/// `body₁ ∧ … ∧ bodyₙ ⇒ head`, with an absent head meaning `false`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornClause {
    pub head: Option<usize>,
    pub body: Vec<usize>,
}

/// A set of Horn clauses over atoms numbered `0..atoms.len()`.
#[derive(Clone, Debug, Default)]
pub struct HornFormula {
    pub clauses: Vec<HornClause>,
    atoms: Vec<Mult>,
    index: HashMap<Mult, usize>,
}

impl HornFormula {
    pub fn new() -> Self {
        HornFormula::default()
    }

    pub fn from_preds<'a>(preds: impl IntoIterator<Item = &'a NormalPred>) -> Self {
        let mut f = HornFormula::new();
        for p in preds {
            f.add_pred(p);
        }
        f
    }

    pub fn atom(&mut self, m: &Mult) -> usize {
        debug_assert!(m.is_var());
        if let Some(&i) = self.index.get(m) {
            return i;
        }
        let i = self.atoms.len();
        self.atoms.push(m.clone());
        self.index.insert(m.clone(), i);
        i
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// Encode `μ ≤ ∏νᵢ` under `1 ↦ true`, `ω ↦ false`.
    pub fn add_pred(&mut self, p: &NormalPred) {
        let body = p.rhs().factors().iter().map(|m| self.atom(m)).collect();
        let head = match p.lhs() {
            Mult::Omega => None,
            m => Some(self.atom(m)),
        };
        self.clauses.push(HornClause { head, body });
    }

    /// Assert that `m` is `1`.
    pub fn add_fact(&mut self, m: &Mult) {
        let a = self.atom(m);
        self.clauses.push(HornClause {
            head: Some(a),
            body: Vec::new(),
        });
    }

    /// Assert that `m` is `ω`.
    pub fn add_negative(&mut self, m: &Mult) {
        let a = self.atom(m);
        self.clauses.push(HornClause {
            head: None,
            body: vec![a],
        });
    }

    /// Least model by unit propagation, or `None` when unsatisfiable.
    ///
    /// Every clause is visited once per body atom, so the cost is linear in
    /// the number of literal occurrences.
    pub fn minimal_model(&self) -> Option<Vec<bool>> {
        let n = self.atoms.len();
        let mut missing: Vec<usize> = self.clauses.iter().map(|c| c.body.len()).collect();
        let mut watchers: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (ci, c) in self.clauses.iter().enumerate() {
            for &a in &c.body {
                watchers[a].push(ci);
            }
        }
        let mut value = vec![false; n];
        let mut queue = Vec::new();
        for (ci, c) in self.clauses.iter().enumerate() {
            if missing[ci] == 0 {
                match c.head {
                    None => return None,
                    Some(h) if !value[h] => {
                        value[h] = true;
                        queue.push(h);
                    }
                    Some(_) => {}
                }
            }
        }
        while let Some(a) = queue.pop() {
            for &ci in &watchers[a] {
                missing[ci] -= 1;
                if missing[ci] == 0 {
                    match self.clauses[ci].head {
                        None => return None,
                        Some(h) if !value[h] => {
                            value[h] = true;
                            queue.push(h);
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        Some(value)
    }

    pub fn is_satisfiable(&self) -> bool {
        self.minimal_model().is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn propagation_chain() {
        let mut f = HornFormula::new();
        let p = Mult::rigid("p");
        let q = Mult::rigid("q");
        // p ≤ q, q ≤ 1  ⇒ q true, then p true
        f.add_pred(&NormalPred::new(p.clone(), q.clone().into()).unwrap());
        f.add_fact(&q);
        let model = f.minimal_model().unwrap();
        assert!(model.iter().all(|&b| b));
        f.add_negative(&p);
        assert!(!f.is_satisfiable());
    }

    #[test]
    fn empty_formula_is_satisfiable() {
        assert!(HornFormula::new().is_satisfiable());
    }
}
