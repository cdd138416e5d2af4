//! Multiplicities, symbolic products of multiplicities, and predicates over them.
//!
//! The value domain is exactly `{1, ω}` ordered by `1 ≤ ω`. Products are the
//! least upper bound, so `ω` is absorbing and `1` is the unit.

use std::collections::BTreeSet;
use std::fmt;

/// Identifier of a rigid (user-visible or skolem) variable.
pub type Name = String;

/// A unification variable of either sort.
///
/// Ids come from one counter per inference run, so they are unique across
/// both the multiplicity and the type sort. `level` is the implication depth
/// at which the variable was created.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub id: u32,
    pub level: u32,
}

impl Var {
    pub fn new(id: u32, level: u32) -> Self {
        Var { id, level }
    }
}

/// A multiplicity atom `μ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mult {
    One,
    Omega,
    Rigid(Name),
    Uni(Var),
}

impl Mult {
    pub fn rigid(name: impl Into<Name>) -> Self {
        Mult::Rigid(name.into())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Mult::Rigid(_) | Mult::Uni(_))
    }

    pub fn as_uni(&self) -> Option<Var> {
        match self {
            Mult::Uni(v) => Some(*v),
            _ => None,
        }
    }
}

impl fmt::Display for Mult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mult::One => f.write_str("1"),
            Mult::Omega => f.write_str("w"),
            Mult::Rigid(n) => f.write_str(n),
            Mult::Uni(v) => write!(f, "?m{}", v.id),
        }
    }
}

/// A product `∏ μᵢ` kept in canonical form.
///
/// Canonical means: no `One` factors, a single `Omega` if any factor is
/// `Omega`, remaining factors sorted and without duplicates (`μ·μ = μ` on
/// `{1, ω}`). The empty product is `1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Product(Vec<Mult>);

impl Product {
    pub fn one() -> Self {
        Product(Vec::new())
    }

    pub fn omega() -> Self {
        Product(vec![Mult::Omega])
    }

    pub fn atom(m: Mult) -> Self {
        Product::from_factors([m])
    }

    pub fn from_factors(factors: impl IntoIterator<Item = Mult>) -> Self {
        let mut out = Vec::new();
        for m in factors {
            match m {
                Mult::One => {}
                Mult::Omega => return Product::omega(),
                m => out.push(m),
            }
        }
        out.sort();
        out.dedup();
        Product(out)
    }

    pub fn factors(&self) -> &[Mult] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_omega(&self) -> bool {
        matches!(self.0.as_slice(), [Mult::Omega])
    }

    /// The single atom this product consists of, if any (`1` counts).
    pub fn as_atom(&self) -> Option<Mult> {
        match self.0.as_slice() {
            [] => Some(Mult::One),
            [m] => Some(m.clone()),
            _ => None,
        }
    }

    pub fn contains(&self, m: &Mult) -> bool {
        self.0.contains(m)
    }

    pub fn mul(&self, other: &Product) -> Product {
        Product::from_factors(self.0.iter().chain(other.0.iter()).cloned())
    }

    /// Rebuild after mapping every factor.
    pub fn map(&self, mut f: impl FnMut(&Mult) -> Mult) -> Product {
        Product::from_factors(self.0.iter().map(&mut f))
    }
}

impl From<Mult> for Product {
    fn from(m: Mult) -> Self {
        Product::atom(m)
    }
}

impl fmt::Display for Product {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// `lhs ≤ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Predicate {
    pub lhs: Product,
    pub rhs: Product,
}

impl Predicate {
    pub fn new(lhs: impl Into<Product>, rhs: impl Into<Product>) -> Self {
        Predicate {
            lhs: lhs.into(),
            rhs: rhs.into(),
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", self.lhs, self.rhs)
    }
}

/// A given constraint `Q`: a conjunction of predicates with set semantics.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Given(BTreeSet<Predicate>);

impl Given {
    pub fn top() -> Self {
        Given(BTreeSet::new())
    }

    pub fn insert(&mut self, p: Predicate) {
        self.0.insert(p);
    }

    pub fn extend(&mut self, other: impl IntoIterator<Item = Predicate>) {
        self.0.extend(other);
    }

    pub fn and(&self, other: &Given) -> Given {
        let mut out = self.clone();
        out.extend(other.iter().cloned());
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = &Predicate> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_top(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: &Predicate) -> bool {
        self.0.contains(p)
    }
}

impl FromIterator<Predicate> for Given {
    fn from_iter<I: IntoIterator<Item = Predicate>>(iter: I) -> Self {
        Given(iter.into_iter().collect())
    }
}

impl IntoIterator for Given {
    type Item = Predicate;
    type IntoIter = std::collections::btree_set::IntoIter<Predicate>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a Given {
    type Item = &'a Predicate;
    type IntoIter = std::collections::btree_set::Iter<'a, Predicate>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for Given {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("T");
        }
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}
