//! Brute-force semantics of multiplicity constraints.
//!
//! Everything here enumerates all `{1, ω}` valuations of the atoms involved
//! and never touches the Horn encoding, so it can serve as an independent
//! check of [`crate::logic`].

use std::collections::BTreeSet;

use crate::mult::{Mult, Predicate, Product, Var};

/// Refuse to enumerate more than `2^MAX_ATOMS` valuations.
pub const MAX_ATOMS: usize = 18;

/// A valuation: the atoms mapped to `ω` (all others are `1`).
#[derive(Clone, Debug)]
pub struct Valuation<'a> {
    atoms: &'a [Mult],
    bits: u64,
}

impl Valuation<'_> {
    pub fn is_omega(&self, m: &Mult) -> bool {
        match m {
            Mult::One => false,
            Mult::Omega => true,
            m => {
                let i = self.atoms.iter().position(|a| a == m).expect("atom outside valuation");
                self.bits >> i & 1 == 1
            }
        }
    }

    pub fn product(&self, p: &Product) -> bool {
        p.factors().iter().any(|m| self.is_omega(m))
    }

    pub fn holds(&self, p: &Predicate) -> bool {
        // lhs ≤ rhs fails only for ω ≤ 1
        !self.product(&p.lhs) || self.product(&p.rhs)
    }

    pub fn holds_all<'p>(&self, q: impl IntoIterator<Item = &'p Predicate>) -> bool {
        q.into_iter().all(|p| self.holds(p))
    }
}

/// The non-constant atoms of `preds`, sorted.
pub fn atoms<'a>(preds: impl IntoIterator<Item = &'a Predicate>) -> Vec<Mult> {
    let mut out = BTreeSet::new();
    for p in preds {
        for m in p.lhs.factors().iter().chain(p.rhs.factors()) {
            if m.is_var() {
                out.insert(m.clone());
            }
        }
    }
    out.into_iter().collect()
}

/// Call `f` on every valuation of `atoms`; stops early when `f` returns false.
/// `None` when there are too many atoms.
pub fn for_all_valuations(atoms: &[Mult], mut f: impl FnMut(&Valuation) -> bool) -> Option<bool> {
    if atoms.len() > MAX_ATOMS {
        return None;
    }
    for bits in 0..1u64 << atoms.len() {
        if !f(&Valuation { atoms, bits }) {
            return Some(false);
        }
    }
    Some(true)
}

pub fn brute_satisfiable(q: &[Predicate]) -> Option<bool> {
    let atoms = atoms(q);
    for_all_valuations(&atoms, |v| !v.holds_all(q)).map(|none| !none)
}

pub fn brute_entails(q: &[Predicate], phi: &Predicate) -> Option<bool> {
    let atoms = atoms(q.iter().chain([phi]));
    for_all_valuations(&atoms, |v| !v.holds_all(q) || v.holds(phi))
}

pub fn brute_equivalent(q1: &[Predicate], q2: &[Predicate]) -> Option<bool> {
    let atoms = atoms(q1.iter().chain(q2));
    for_all_valuations(&atoms, |v| v.holds_all(q1) == v.holds_all(q2))
}

fn pin(q: &[Predicate], pi: Var, to: Mult) -> Vec<Predicate> {
    let pi = Mult::Uni(pi);
    let sub = |p: &Product| p.map(|m| if *m == pi { to.clone() } else { m.clone() });
    q.iter().map(|p| Predicate::new(sub(&p.lhs), sub(&p.rhs))).collect()
}

/// Whether `result` is valuation-equivalent to `q[π↦1] ∨ q[π↦ω]` and free of `π`.
pub fn brute_qe_agrees(pi: Var, q: &[Predicate], result: &[Predicate]) -> Option<bool> {
    if atoms(result).contains(&Mult::Uni(pi)) {
        return Some(false);
    }
    let q1 = pin(q, pi, Mult::One);
    let qw = pin(q, pi, Mult::Omega);
    let atoms = atoms(q1.iter().chain(result));
    for_all_valuations(&atoms, |v| {
        v.holds_all(result) == (v.holds_all(&q1) || v.holds_all(&qw))
    })
}
