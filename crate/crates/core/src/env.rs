//! Typing and multiplicity environments, the fresh-variable supply, and
//! polytype instantiation.

use std::collections::BTreeMap;
use std::fmt;

use crate::mult::{Given, Mult, Name, Product, Var};
use crate::subst::{Fold, Folder, FreeVars, RigidMap, Vars};
use crate::types::{PolyType, Type};

/// Multiplicity environment `Δ`. A missing variable is used zero times.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultEnv(BTreeMap<Name, Product>);

impl MultEnv {
    pub fn new() -> Self {
        MultEnv::default()
    }

    pub fn singleton(x: impl Into<Name>, m: impl Into<Product>) -> Self {
        let mut env = MultEnv::new();
        env.0.insert(x.into(), m.into());
        env
    }

    pub fn get(&self, x: &str) -> Option<&Product> {
        self.0.get(x)
    }

    pub fn insert(&mut self, x: impl Into<Name>, m: impl Into<Product>) {
        self.0.insert(x.into(), m.into());
    }

    pub fn remove(&mut self, x: &str) -> Option<Product> {
        self.0.remove(x)
    }

    pub fn contains(&self, x: &str) -> bool {
        self.0.contains_key(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Product)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Δ1 + Δ2`: a variable used on both sides is used `ω` times.
    pub fn add(&self, other: &MultEnv) -> MultEnv {
        let mut out = self.0.clone();
        for (x, m) in &other.0 {
            out.entry(x.clone())
                .and_modify(|e| *e = Product::omega())
                .or_insert_with(|| m.clone());
        }
        MultEnv(out)
    }

    /// `M·Δ`
    pub fn scale(&self, m: &Product) -> MultEnv {
        MultEnv(self.0.iter().map(|(x, n)| (x.clone(), m.mul(n))).collect())
    }

    /// `Δ1 ⊔ Δ2`: shared variables multiply, one-sided variables become `ω`.
    pub fn lub(&self, other: &MultEnv) -> MultEnv {
        let mut out = BTreeMap::new();
        for (x, m) in &self.0 {
            let v = match other.0.get(x) {
                Some(n) => m.mul(n),
                None => Product::omega(),
            };
            out.insert(x.clone(), v);
        }
        for x in other.0.keys() {
            out.entry(x.clone()).or_insert_with(Product::omega);
        }
        MultEnv(out)
    }
}

pub fn mult_env_add(d1: &MultEnv, d2: &MultEnv) -> MultEnv {
    d1.add(d2)
}

pub fn mult_env_scale(m: &Product, d: &MultEnv) -> MultEnv {
    d.scale(m)
}

pub fn mult_env_lub(d1: &MultEnv, d2: &MultEnv) -> MultEnv {
    d1.lub(d2)
}

impl FromIterator<(Name, Product)> for MultEnv {
    fn from_iter<I: IntoIterator<Item = (Name, Product)>>(iter: I) -> Self {
        MultEnv(iter.into_iter().collect())
    }
}

impl Fold for MultEnv {
    fn fold<F: Folder + ?Sized>(&self, f: &F) -> Self {
        MultEnv(self.0.iter().map(|(x, m)| (x.clone(), m.fold(f))).collect())
    }
}

impl Vars for MultEnv {
    fn collect_vars(&self, out: &mut FreeVars) {
        self.0.values().for_each(|m| m.collect_vars(out));
    }
}

impl fmt::Display for MultEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, m)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}:{m}")?;
        }
        f.write_str("}")
    }
}

/// Typing environment `Γ`, innermost binding last.
#[derive(Clone, Debug, Default)]
pub struct TypeEnv {
    entries: Vec<(Name, PolyType)>,
}

impl TypeEnv {
    pub fn new() -> Self {
        TypeEnv::default()
    }

    pub fn get(&self, x: &str) -> Option<&PolyType> {
        self.entries.iter().rev().find(|(n, _)| n == x).map(|(_, a)| a)
    }

    /// Index of the innermost entry for `x`.
    pub fn position(&self, x: &str) -> Option<usize> {
        self.entries.iter().rposition(|(n, _)| n == x)
    }

    pub fn push(&mut self, x: impl Into<Name>, a: PolyType) {
        self.entries.push((x.into(), a));
    }

    pub fn push_mono(&mut self, x: impl Into<Name>, t: Type) {
        self.push(x, PolyType::mono(t));
    }

    /// Number of entries, for restoring scope with [`TypeEnv::truncate`].
    pub fn mark(&self) -> usize {
        self.entries.len()
    }

    pub fn truncate(&mut self, mark: usize) {
        self.entries.truncate(mark);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &PolyType)> {
        self.entries.iter().map(|(n, a)| (n, a))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Vars for TypeEnv {
    fn collect_vars(&self, out: &mut FreeVars) {
        self.entries.iter().for_each(|(_, a)| a.collect_vars(out));
    }
}

/// Source of fresh unification variables for one inference run.
#[derive(Clone, Debug, Default)]
pub struct Supply {
    next: u32,
}

impl Supply {
    pub fn new() -> Self {
        Supply::default()
    }

    pub fn fresh(&mut self, level: u32) -> Var {
        let v = Var::new(self.next, level);
        self.next += 1;
        v
    }

    pub fn fresh_mult(&mut self, level: u32) -> Mult {
        Mult::Uni(self.fresh(level))
    }

    pub fn fresh_type(&mut self, level: u32) -> Type {
        Type::Uni(self.fresh(level))
    }

    /// Id the next fresh variable will get.
    pub fn peek(&self) -> u32 {
        self.next
    }
}

/// Result of instantiating a polytype.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub body: Type,
    pub context: Given,
    pub mults: Vec<Mult>,
    pub types: Vec<Type>,
}

/// Replace every binder of `a` by a fresh unification variable at `level`.
pub fn instantiate(a: &PolyType, supply: &mut Supply, level: u32) -> Instance {
    let mults: Vec<Mult> = a.mult_binders.iter().map(|_| supply.fresh_mult(level)).collect();
    let types: Vec<Type> = a.type_binders.iter().map(|_| supply.fresh_type(level)).collect();
    let inst = instantiate_with(a, &mults, &types);
    Instance {
        body: inst.0,
        context: inst.1,
        mults,
        types,
    }
}

/// `τ[p̄ ↦ μ̄, ā ↦ σ̄]` and `Q[p̄ ↦ μ̄]` for explicitly given arguments.
pub fn instantiate_with(a: &PolyType, mults: &[Mult], types: &[Type]) -> (Type, Given) {
    let map = RigidMap {
        mults: a.mult_binders.iter().cloned().zip(mults.iter().cloned()).collect(),
        types: a.type_binders.iter().cloned().zip(types.iter().cloned()).collect(),
    };
    (a.body.fold(&map), a.context.fold(&map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mult::Predicate;

    fn rp(n: &str) -> Product {
        Product::atom(Mult::rigid(n))
    }

    fn env(entries: &[(&str, Product)]) -> MultEnv {
        entries.iter().map(|(x, m)| (x.to_string(), m.clone())).collect()
    }

    #[test]
    fn add_shared_is_omega() {
        let d = env(&[("x", Product::one())]);
        assert_eq!(d.add(&d), env(&[("x", Product::omega())]));
    }

    #[test]
    fn add_disjoint_keeps_entries() {
        let d1 = env(&[("x", Product::one())]);
        let d2 = env(&[("y", rp("p"))]);
        assert_eq!(d1.add(&d2), env(&[("x", Product::one()), ("y", rp("p"))]));
    }

    #[test]
    fn add_mixed() {
        let pi = Product::atom(Mult::Uni(Var::new(0, 0)));
        let d1 = env(&[("x", pi)]);
        let qr = Product::from_factors([Mult::rigid("q"), Mult::rigid("r")]);
        let d2 = env(&[("x", Product::omega()), ("y", qr.clone())]);
        assert_eq!(d1.add(&d2), env(&[("x", Product::omega()), ("y", qr)]));
    }

    #[test]
    fn scale_examples() {
        let d = env(&[("x", rp("p"))]);
        assert_eq!(d.scale(&Product::one()), d);
        let d = env(&[("x", Product::one()), ("y", rp("p"))]);
        assert_eq!(
            d.scale(&Product::omega()),
            env(&[("x", Product::omega()), ("y", Product::omega())])
        );
        let pi = Mult::Uni(Var::new(7, 0));
        let d = env(&[("x", rp("q"))]);
        assert_eq!(
            d.scale(&Product::atom(pi.clone())),
            env(&[("x", Product::from_factors([pi, Mult::rigid("q")]))])
        );
    }

    #[test]
    fn lub_examples() {
        let d = env(&[("x", Product::one())]);
        assert_eq!(d.lub(&d), d);
        let e = env(&[("y", Product::one())]);
        assert_eq!(d.lub(&e), env(&[("x", Product::omega()), ("y", Product::omega())]));
        let p = env(&[("x", rp("p"))]);
        let q = env(&[("x", rp("q"))]);
        assert_eq!(
            p.lub(&q),
            env(&[("x", Product::from_factors([Mult::rigid("p"), Mult::rigid("q")]))])
        );
    }

    #[test]
    fn type_env_scoping() {
        let mut g = TypeEnv::new();
        g.push_mono("x", Type::con("Int"));
        let m = g.mark();
        g.push_mono("x", Type::con("Bool"));
        assert_eq!(g.get("x").unwrap().body, Type::con("Bool"));
        g.truncate(m);
        assert_eq!(g.get("x").unwrap().body, Type::con("Int"));
    }

    #[test]
    fn instantiate_app_type() {
        // forall p pf px a b. p <= px => (a ->[p] b) ->[pf] a ->[px] b
        let a = Type::rigid("a");
        let b = Type::rigid("b");
        let app = PolyType {
            mult_binders: vec!["p".into(), "pf".into(), "px".into()],
            type_binders: vec!["a".into(), "b".into()],
            context: [Predicate::new(Mult::rigid("p"), Mult::rigid("px"))]
                .into_iter()
                .collect(),
            body: Type::arrow(
                Type::arrow(a.clone(), Mult::rigid("p"), b.clone()),
                Mult::rigid("pf"),
                Type::arrow(a, Mult::rigid("px"), b),
            ),
        };
        let mut s = Supply::new();
        let inst = instantiate(&app, &mut s, 0);
        let (p1, p2, p3) = (inst.mults[0].clone(), inst.mults[1].clone(), inst.mults[2].clone());
        let (al, be) = (inst.types[0].clone(), inst.types[1].clone());
        assert_eq!(
            inst.body,
            Type::arrow(
                Type::arrow(al.clone(), p1.clone(), be.clone()),
                p2,
                Type::arrow(al, p3.clone(), be)
            )
        );
        assert_eq!(inst.context, [Predicate::new(p1, p3)].into_iter().collect());
    }

    #[test]
    fn instantiate_binder_free() {
        let mut s = Supply::new();
        let inst = instantiate(&PolyType::mono(Type::con("Int")), &mut s, 0);
        assert_eq!(inst.body, Type::con("Int"));
        assert!(inst.context.is_top());
        assert_eq!(s.peek(), 0);
    }

    #[test]
    fn instantiate_without_context() {
        let id = PolyType {
            mult_binders: vec![],
            type_binders: vec!["a".into()],
            context: Given::top(),
            body: Type::arrow(Type::rigid("a"), Mult::One, Type::rigid("a")),
        };
        let mut s = Supply::new();
        let inst = instantiate(&id, &mut s, 2);
        let al = inst.types[0].clone();
        assert_eq!(inst.body, Type::arrow(al.clone(), Mult::One, al));
        assert!(inst.context.is_top());
        assert!(matches!(inst.types[0], Type::Uni(Var { level: 2, .. })));
    }
}
