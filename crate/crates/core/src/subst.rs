//! Substitutions, generic traversal, and free-variable collection.

use std::collections::{BTreeMap, HashMap};

use indexmap::IndexSet;

use crate::mult::{Given, Mult, Name, Predicate, Product, Var};
use crate::types::{PolyType, Type};

/// Variable sort: multiplicity or type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    Mult,
    Type,
}

/// Leaf rewriting used by [`Fold`]. Returning `None` keeps the leaf.
pub trait Folder {
    fn mult(&self, m: &Mult) -> Option<Mult>;
    /// Called on `Rigid` and `Uni` type leaves only.
    fn type_leaf(&self, t: &Type) -> Option<Type>;
}

pub trait Fold: Sized {
    fn fold<F: Folder + ?Sized>(&self, f: &F) -> Self;
}

impl Fold for Mult {
    fn fold<F: Folder + ?Sized>(&self, f: &F) -> Self {
        f.mult(self).unwrap_or_else(|| self.clone())
    }
}

impl Fold for Product {
    fn fold<F: Folder + ?Sized>(&self, f: &F) -> Self {
        self.map(|m| m.fold(f))
    }
}

impl Fold for Predicate {
    fn fold<F: Folder + ?Sized>(&self, f: &F) -> Self {
        Predicate {
            lhs: self.lhs.fold(f),
            rhs: self.rhs.fold(f),
        }
    }
}

impl Fold for Given {
    fn fold<F: Folder + ?Sized>(&self, f: &F) -> Self {
        self.iter().map(|p| p.fold(f)).collect()
    }
}

impl Fold for Type {
    fn fold<F: Folder + ?Sized>(&self, f: &F) -> Self {
        match self {
            Type::Rigid(_) | Type::Uni(_) => f.type_leaf(self).unwrap_or_else(|| self.clone()),
            Type::Data(d, ms, ts) => Type::Data(
                d.clone(),
                ms.iter().map(|m| m.fold(f)).collect(),
                ts.iter().map(|t| t.fold(f)).collect(),
            ),
            Type::Arrow(a, m, b) => Type::arrow(a.fold(f), m.fold(f), b.fold(f)),
        }
    }
}

/// Folds context and body; binders are left alone, so only use this with
/// folders that do not touch the bound names.
impl Fold for PolyType {
    fn fold<F: Folder + ?Sized>(&self, f: &F) -> Self {
        PolyType {
            mult_binders: self.mult_binders.clone(),
            type_binders: self.type_binders.clone(),
            context: self.context.fold(f),
            body: self.body.fold(f),
        }
    }
}

impl<T: Fold> Fold for Vec<T> {
    fn fold<F: Folder + ?Sized>(&self, f: &F) -> Self {
        self.iter().map(|x| x.fold(f)).collect()
    }
}

impl<A: Fold, B: Fold> Fold for (A, B) {
    fn fold<F: Folder + ?Sized>(&self, f: &F) -> Self {
        (self.0.fold(f), self.1.fold(f))
    }
}

/// An idempotent substitution for unification variables of both sorts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subst {
    mults: BTreeMap<Var, Mult>,
    types: BTreeMap<Var, Type>,
}

impl Subst {
    pub fn new() -> Self {
        Subst::default()
    }

    pub fn is_empty(&self) -> bool {
        self.mults.is_empty() && self.types.is_empty()
    }

    pub fn len(&self) -> usize {
        self.mults.len() + self.types.len()
    }

    pub fn get_mult(&self, v: &Var) -> Option<&Mult> {
        self.mults.get(v)
    }

    pub fn get_type(&self, v: &Var) -> Option<&Type> {
        self.types.get(v)
    }

    pub fn mults(&self) -> impl Iterator<Item = (&Var, &Mult)> {
        self.mults.iter()
    }

    pub fn types(&self) -> impl Iterator<Item = (&Var, &Type)> {
        self.types.iter()
    }

    /// Ids of every mapped variable.
    pub fn domain(&self) -> impl Iterator<Item = Var> + '_ {
        self.mults.keys().chain(self.types.keys()).copied()
    }

    pub fn apply<T: Fold>(&self, t: &T) -> T {
        if self.is_empty() {
            return t.fold(&Keep);
        }
        t.fold(self)
    }

    /// `θ ∘ [v ↦ m]`. `m` must already be zonked by `self` and differ from `v`.
    pub fn bind_mult(&mut self, v: Var, m: Mult) {
        debug_assert!(m != Mult::Uni(v));
        let single = Single::Mult(v, m.clone());
        for img in self.mults.values_mut() {
            *img = img.fold(&single);
        }
        for img in self.types.values_mut() {
            *img = img.fold(&single);
        }
        self.mults.insert(v, m);
    }

    /// `θ ∘ [v ↦ t]`. `t` must already be zonked by `self` and must not mention `v`.
    pub fn bind_type(&mut self, v: Var, t: Type) {
        let single = Single::Type(v, t.clone());
        for img in self.types.values_mut() {
            *img = img.fold(&single);
        }
        self.types.insert(v, t);
    }

    /// Union with a substitution over a disjoint domain whose images are
    /// already zonked by `self`.
    pub fn extend_disjoint(&mut self, other: &Subst) {
        for (v, m) in &other.mults {
            self.mults.insert(*v, m.clone());
        }
        for (v, t) in &other.types {
            self.types.insert(*v, t.clone());
        }
    }

    /// Keep only entries whose variable satisfies `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(&Var) -> bool) -> Subst {
        Subst {
            mults: self
                .mults
                .iter()
                .filter(|(v, _)| keep(v))
                .map(|(v, m)| (*v, m.clone()))
                .collect(),
            types: self
                .types
                .iter()
                .filter(|(v, _)| keep(v))
                .map(|(v, t)| (*v, t.clone()))
                .collect(),
        }
    }
}

impl Folder for Subst {
    fn mult(&self, m: &Mult) -> Option<Mult> {
        match m {
            Mult::Uni(v) => self.mults.get(v).cloned(),
            _ => None,
        }
    }

    fn type_leaf(&self, t: &Type) -> Option<Type> {
        match t {
            Type::Uni(v) => self.types.get(v).cloned(),
            _ => None,
        }
    }
}

impl std::fmt::Display for Subst {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("[")?;
        let mut first = true;
        for (v, m) in &self.mults {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{} := {}", Mult::Uni(*v), m)?;
        }
        for (v, t) in &self.types {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{} := {}", Type::Uni(*v), t)?;
        }
        f.write_str("]")
    }
}

struct Keep;

impl Folder for Keep {
    fn mult(&self, _: &Mult) -> Option<Mult> {
        None
    }
    fn type_leaf(&self, _: &Type) -> Option<Type> {
        None
    }
}

enum Single {
    Mult(Var, Mult),
    Type(Var, Type),
}

impl Folder for Single {
    fn mult(&self, m: &Mult) -> Option<Mult> {
        match (self, m) {
            (Single::Mult(v, img), Mult::Uni(w)) if v == w => Some(img.clone()),
            _ => None,
        }
    }
    fn type_leaf(&self, t: &Type) -> Option<Type> {
        match (self, t) {
            (Single::Type(v, img), Type::Uni(w)) if v == w => Some(img.clone()),
            _ => None,
        }
    }
}

/// Replacement of rigid names, used for instantiation and renaming.
#[derive(Clone, Debug, Default)]
pub struct RigidMap {
    pub mults: HashMap<Name, Mult>,
    pub types: HashMap<Name, Type>,
}

impl Folder for RigidMap {
    fn mult(&self, m: &Mult) -> Option<Mult> {
        match m {
            Mult::Rigid(n) => self.mults.get(n).cloned(),
            _ => None,
        }
    }

    fn type_leaf(&self, t: &Type) -> Option<Type> {
        match t {
            Type::Rigid(n) => self.types.get(n).cloned(),
            _ => None,
        }
    }
}

/// Free variables in first-occurrence order.
#[derive(Clone, Debug, Default)]
pub struct FreeVars {
    pub uni: IndexSet<(Sort, Var)>,
    pub rigid: IndexSet<(Sort, Name)>,
}

impl FreeVars {
    pub fn has_uni(&self, v: &Var) -> bool {
        self.uni.contains(&(Sort::Mult, *v)) || self.uni.contains(&(Sort::Type, *v))
    }

    pub fn uni_vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.uni.iter().map(|(_, v)| *v)
    }

    pub fn mult_unis(&self) -> impl Iterator<Item = Var> + '_ {
        self.uni.iter().filter(|(s, _)| *s == Sort::Mult).map(|(_, v)| *v)
    }
}

pub trait Vars {
    fn collect_vars(&self, out: &mut FreeVars);

    fn free_vars(&self) -> FreeVars {
        let mut out = FreeVars::default();
        self.collect_vars(&mut out);
        out
    }
}

/// `fuv(t)`: unification variables of both sorts.
pub fn free_unification_vars<T: Vars + ?Sized>(t: &T) -> IndexSet<(Sort, Var)> {
    t.free_vars().uni
}

/// `ftv(t)`: free rigid variables of both sorts.
pub fn free_rigid_vars<T: Vars + ?Sized>(t: &T) -> IndexSet<(Sort, Name)> {
    t.free_vars().rigid
}

impl Vars for Mult {
    fn collect_vars(&self, out: &mut FreeVars) {
        match self {
            Mult::Uni(v) => {
                out.uni.insert((Sort::Mult, *v));
            }
            Mult::Rigid(n) => {
                out.rigid.insert((Sort::Mult, n.clone()));
            }
            _ => {}
        }
    }
}

impl Vars for Product {
    fn collect_vars(&self, out: &mut FreeVars) {
        self.factors().iter().for_each(|m| m.collect_vars(out));
    }
}

impl Vars for Predicate {
    fn collect_vars(&self, out: &mut FreeVars) {
        self.lhs.collect_vars(out);
        self.rhs.collect_vars(out);
    }
}

impl Vars for Given {
    fn collect_vars(&self, out: &mut FreeVars) {
        self.iter().for_each(|p| p.collect_vars(out));
    }
}

impl Vars for Type {
    fn collect_vars(&self, out: &mut FreeVars) {
        match self {
            Type::Uni(v) => {
                out.uni.insert((Sort::Type, *v));
            }
            Type::Rigid(n) => {
                out.rigid.insert((Sort::Type, n.clone()));
            }
            Type::Data(_, ms, ts) => {
                ms.iter().for_each(|m| m.collect_vars(out));
                ts.iter().for_each(|t| t.collect_vars(out));
            }
            Type::Arrow(a, m, b) => {
                a.collect_vars(out);
                m.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

impl Vars for PolyType {
    fn collect_vars(&self, out: &mut FreeVars) {
        let mut inner = FreeVars::default();
        self.body.collect_vars(&mut inner);
        self.context.collect_vars(&mut inner);
        out.uni.extend(inner.uni);
        for (s, n) in inner.rigid {
            let bound = match s {
                Sort::Mult => self.mult_binders.contains(&n),
                Sort::Type => self.type_binders.contains(&n),
            };
            if !bound {
                out.rigid.insert((s, n));
            }
        }
    }
}

impl<T: Vars> Vars for [T] {
    fn collect_vars(&self, out: &mut FreeVars) {
        self.iter().for_each(|x| x.collect_vars(out));
    }
}

impl<T: Vars> Vars for Vec<T> {
    fn collect_vars(&self, out: &mut FreeVars) {
        self.as_slice().collect_vars(out);
    }
}

impl<A: Vars, B: Vars> Vars for (A, B) {
    fn collect_vars(&self, out: &mut FreeVars) {
        self.0.collect_vars(out);
        self.1.collect_vars(out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uv(id: u32) -> Var {
        Var::new(id, 0)
    }

    #[test]
    fn zonk_replaces_type_var() {
        let mut s = Subst::new();
        s.bind_type(uv(0), Type::con("Int"));
        let t = Type::arrow(Type::Uni(uv(0)), Mult::Uni(uv(1)), Type::Uni(uv(0)));
        assert_eq!(
            s.apply(&t),
            Type::arrow(Type::con("Int"), Mult::Uni(uv(1)), Type::con("Int"))
        );
    }

    #[test]
    fn zonk_renormalizes_products() {
        let mut s = Subst::new();
        s.bind_mult(uv(0), Mult::Omega);
        let p = Predicate::new(
            Product::from_factors([Mult::Uni(uv(0)), Mult::rigid("q")]),
            Mult::rigid("r"),
        );
        assert_eq!(s.apply(&p), Predicate::new(Mult::Omega, Mult::rigid("r")));
    }

    #[test]
    fn empty_subst_is_identity() {
        let t = Type::arrow(Type::Uni(uv(3)), Mult::Uni(uv(4)), Type::rigid("a"));
        assert_eq!(Subst::new().apply(&t), t);
    }

    #[test]
    fn composition_stays_idempotent() {
        let mut s = Subst::new();
        s.bind_type(uv(0), Type::Uni(uv(1)));
        s.bind_type(uv(1), Type::con("Int"));
        assert_eq!(s.get_type(&uv(0)), Some(&Type::con("Int")));
        let t = Type::Uni(uv(0));
        assert_eq!(s.apply(&s.apply(&t)), s.apply(&t));
    }

    #[test]
    fn fuv_collects_both_sorts() {
        let t = Type::arrow(Type::Uni(uv(0)), Mult::Uni(uv(1)), Type::Uni(uv(2)));
        let q = Predicate::new(Mult::rigid("q"), Mult::Uni(uv(1)));
        let fv = free_unification_vars(&(t, q));
        let ids: Vec<u32> = fv.iter().map(|(_, v)| v.id).collect();
        assert_eq!(ids, vec![0, 1, 2]);
        assert!(free_unification_vars(&Type::con("Int")).is_empty());
    }

    #[test]
    fn ftv_removes_binders() {
        let a = PolyType {
            mult_binders: vec!["p".into()],
            type_binders: vec!["a".into()],
            context: [Predicate::new(Mult::rigid("p"), Mult::rigid("q"))]
                .into_iter()
                .collect(),
            body: Type::arrow(Type::rigid("a"), Mult::rigid("p"), Type::rigid("b")),
        };
        let names: Vec<String> = free_rigid_vars(&a).into_iter().map(|(_, n)| n).collect();
        assert_eq!(names.len(), 2);
        assert!(names.contains(&"q".to_string()));
        assert!(names.contains(&"b".to_string()));
    }
}
