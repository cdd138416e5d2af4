//! Constraint generation for expressions.
//!
//! Generation never solves anything: it returns the usage environment, the
//! type and the wanted constraint, plus a [`Deriv`] recording each choice of
//! fresh variables so that the solution can be replayed later.

use std::collections::{BTreeSet, HashSet};

use crate::constraint::{ImplId, Implication, Wanted};
use crate::env::{instantiate, MultEnv, Supply, TypeEnv};
use crate::error::TypeError;
use crate::mult::{Given, Mult, Name, Predicate, Product};
use crate::subst::{Fold, RigidMap};
use crate::syntax::{DataEnv, Expr, ExprKind};
use crate::types::{PolyType, Type};

/// `Γ ⊢ e : τ ⇝ Δ; C`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenResult {
    pub usage: MultEnv,
    pub ty: Type,
    pub wanted: Wanted,
}

/// The shape of an inference derivation, with the fresh variables chosen at
/// each node. Types are unzonked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Deriv {
    Var {
        name: Name,
        mults: Vec<Mult>,
        types: Vec<Type>,
        /// Occurrence of an unannotated binding inside its own body.
        recursive: bool,
    },
    Lam {
        binder: Name,
        dom: Type,
        mult: Mult,
        body: Box<Deriv>,
    },
    App {
        fun: Box<Deriv>,
        arg: Box<Deriv>,
    },
    Con {
        con: Name,
        mults: Vec<Mult>,
        types: Vec<Type>,
        args: Vec<Deriv>,
    },
    Case {
        scrut: Box<Deriv>,
        mult: Mult,
        result: Type,
        alts: Vec<(Name, Vec<Name>, Deriv)>,
    },
    LetA {
        binder: Name,
        sig: PolyType,
        /// The signature body and context with binders replaced by skolems.
        skolem_body: Type,
        skolem_context: Given,
        implication: ImplId,
        rhs: Box<Deriv>,
        body: Box<Deriv>,
    },
}

/// State shared by one inference run.
#[derive(Debug)]
pub struct Infer<'a> {
    pub data: &'a DataEnv,
    pub supply: Supply,
    next_impl: ImplId,
    next_skolem: usize,
    /// The unannotated binding being inferred and its position in `Γ`.
    recursive: Option<(Name, usize)>,
}

impl<'a> Infer<'a> {
    pub fn new(data: &'a DataEnv) -> Self {
        Infer {
            data,
            supply: Supply::new(),
            next_impl: 0,
            next_skolem: 0,
            recursive: None,
        }
    }

    /// Treat occurrences of the `Γ` entry at `pos` as recursive.
    pub fn set_recursive(&mut self, rec: Option<(Name, usize)>) {
        self.recursive = rec;
    }

    /// Fresh rigid names for the binders of `a`, used while checking a
    /// local signature so they cannot clash with names in scope.
    pub fn skolemize(&mut self, a: &PolyType) -> (Type, Given) {
        self.next_skolem += 1;
        let k = self.next_skolem;
        let map = RigidMap {
            mults: a
                .mult_binders
                .iter()
                .map(|p| (p.clone(), Mult::rigid(format!("{p}#{k}"))))
                .collect(),
            types: a
                .type_binders
                .iter()
                .map(|t| (t.clone(), Type::rigid(format!("{t}#{k}"))))
                .collect(),
        };
        (a.body.fold(&map), a.context.fold(&map))
    }

    pub fn infer_expr(&mut self, env: &mut TypeEnv, e: &Expr, level: u32) -> Result<(GenResult, Deriv), TypeError> {
        match &e.kind {
            ExprKind::Var(x) => {
                let pos = env.position(x).ok_or_else(|| TypeError::UnboundVariable(x.clone()))?;
                let a = env.get(x).expect("position implies presence");
                if self.recursive.as_ref().is_some_and(|(n, p)| n == x && *p == pos) {
                    return Ok((
                        GenResult {
                            usage: MultEnv::singleton(x.clone(), Mult::Omega),
                            ty: a.body.clone(),
                            wanted: Wanted::new(),
                        },
                        Deriv::Var {
                            name: x.clone(),
                            mults: Vec::new(),
                            types: Vec::new(),
                            recursive: true,
                        },
                    ));
                }
                let inst = instantiate(a, &mut self.supply, level);
                Ok((
                    GenResult {
                        usage: MultEnv::singleton(x.clone(), Mult::One),
                        ty: inst.body,
                        wanted: Wanted {
                            preds: inst.context.into_iter().collect(),
                            ..Wanted::new()
                        },
                    },
                    Deriv::Var {
                        name: x.clone(),
                        mults: inst.mults,
                        types: inst.types,
                        recursive: false,
                    },
                ))
            }
            ExprKind::Lam(x, body) => {
                let alpha = self.supply.fresh_type(level);
                let pi = self.supply.fresh_mult(level);
                let mark = env.mark();
                env.push_mono(x.clone(), alpha.clone());
                let r = self.infer_expr(env, body, level);
                env.truncate(mark);
                let (mut g, d) = r?;
                // An unused binder has usage 0, which only ω can absorb.
                let used = g.usage.remove(x).unwrap_or_else(Product::omega);
                g.wanted.preds.push(Predicate::new(used, pi.clone()));
                Ok((
                    GenResult {
                        usage: g.usage,
                        ty: Type::arrow(alpha.clone(), pi.clone(), g.ty),
                        wanted: g.wanted,
                    },
                    Deriv::Lam {
                        binder: x.clone(),
                        dom: alpha,
                        mult: pi,
                        body: Box::new(d),
                    },
                ))
            }
            ExprKind::App(f, a) => {
                let (g1, d1) = self.infer_expr(env, f, level)?;
                let (g2, d2) = self.infer_expr(env, a, level)?;
                let beta = self.supply.fresh_type(level);
                let pi = self.supply.fresh_mult(level);
                let mut wanted = g1.wanted;
                wanted.append(g2.wanted);
                wanted.eqs.push((g1.ty, Type::arrow(g2.ty, pi.clone(), beta.clone())));
                Ok((
                    GenResult {
                        usage: g1.usage.add(&g2.usage.scale(&pi.into())),
                        ty: beta,
                        wanted,
                    },
                    Deriv::App {
                        fun: Box::new(d1),
                        arg: Box::new(d2),
                    },
                ))
            }
            ExprKind::Con(c, args) => {
                let info = self
                    .data
                    .con(c)
                    .ok_or_else(|| TypeError::UnknownConstructor(c.clone()))?
                    .clone();
                if info.arity() != args.len() {
                    return Err(TypeError::ConArity {
                        con: c.clone(),
                        expected: info.arity(),
                        found: args.len(),
                    });
                }
                let mults: Vec<Mult> = info.mult_params.iter().map(|_| self.supply.fresh_mult(level)).collect();
                let types: Vec<Type> = info.type_params.iter().map(|_| self.supply.fresh_type(level)).collect();
                let map = param_map(&info.mult_params, &info.type_params, &mults, &types);
                let mut usage = MultEnv::new();
                let mut wanted = Wanted::new();
                let mut ds = Vec::new();
                for ((field, nu), arg) in info.fields.iter().zip(args) {
                    let (g, d) = self.infer_expr(env, arg, level)?;
                    usage = usage.add(&g.usage.scale(&nu.fold(&map).into()));
                    wanted.append(g.wanted);
                    wanted.eqs.push((g.ty, field.fold(&map)));
                    ds.push(d);
                }
                Ok((
                    GenResult {
                        usage,
                        ty: Type::data(info.data.clone(), mults.clone(), types.clone()),
                        wanted,
                    },
                    Deriv::Con {
                        con: c.clone(),
                        mults,
                        types,
                        args: ds,
                    },
                ))
            }
            ExprKind::Case(scrut, alts) => {
                let (g0, d0) = self.infer_expr(env, scrut, level)?;
                let pi0 = self.supply.fresh_mult(level);
                let beta = self.supply.fresh_type(level);
                let mut wanted = g0.wanted;
                let mut branches: Option<MultEnv> = None;
                let mut dalts = Vec::new();
                for alt in alts {
                    let info = self
                        .data
                        .con(&alt.con)
                        .ok_or_else(|| TypeError::UnknownConstructor(alt.con.clone()))?
                        .clone();
                    if info.arity() != alt.binders.len() {
                        return Err(TypeError::PatternArity {
                            con: alt.con.clone(),
                            expected: info.arity(),
                            found: alt.binders.len(),
                        });
                    }
                    let mut seen = HashSet::new();
                    for x in &alt.binders {
                        if !seen.insert(x) {
                            return Err(TypeError::NonLinearPattern(x.clone()));
                        }
                    }
                    let mults: Vec<Mult> = info.mult_params.iter().map(|_| self.supply.fresh_mult(level)).collect();
                    let types: Vec<Type> = info.type_params.iter().map(|_| self.supply.fresh_type(level)).collect();
                    let map = param_map(&info.mult_params, &info.type_params, &mults, &types);
                    let mark = env.mark();
                    for (x, (field, _)) in alt.binders.iter().zip(&info.fields) {
                        env.push_mono(x.clone(), field.fold(&map));
                    }
                    let r = self.infer_expr(env, &alt.body, level);
                    env.truncate(mark);
                    let (mut g, d) = r?;
                    wanted.append(g.wanted);
                    wanted.eqs.push((beta.clone(), g.ty));
                    wanted.eqs.push((
                        g0.ty.clone(),
                        Type::data(info.data.clone(), mults.clone(), types.clone()),
                    ));
                    for (x, (_, nu)) in alt.binders.iter().zip(&info.fields) {
                        let used = g.usage.remove(x).unwrap_or_else(Product::omega);
                        let bound = Product::from_factors([pi0.clone(), nu.fold(&map)]);
                        wanted.preds.push(Predicate::new(used, bound));
                    }
                    branches = Some(match branches {
                        None => g.usage,
                        Some(acc) => acc.lub(&g.usage),
                    });
                    dalts.push((alt.con.clone(), alt.binders.clone(), d));
                }
                let usage = g0.usage.scale(&pi0.clone().into()).add(&branches.unwrap_or_default());
                Ok((
                    GenResult {
                        usage,
                        ty: beta.clone(),
                        wanted,
                    },
                    Deriv::Case {
                        scrut: Box::new(d0),
                        mult: pi0,
                        result: beta,
                        alts: dalts,
                    },
                ))
            }
            ExprKind::LetA(x, sig, rhs, body) => {
                let (sk_body, sk_ctx) = self.skolemize(sig);
                let start = self.supply.peek();
                let (g1, d1) = self.infer_expr(env, rhs, level + 1)?;
                let end = self.supply.peek();
                let id = self.next_impl;
                self.next_impl += 1;
                let mut inner = g1.wanted;
                inner.eqs.push((sk_body.clone(), g1.ty.clone()));
                let implication = Implication {
                    id,
                    touchables: (start..end).collect::<BTreeSet<u32>>(),
                    level: level + 1,
                    given: sk_ctx.clone(),
                    wanted: inner,
                    disamb: g1.ty,
                };
                let mark = env.mark();
                env.push(x.clone(), sig.clone());
                let r = self.infer_expr(env, body, level);
                env.truncate(mark);
                let (mut g2, d2) = r?;
                g2.usage.remove(x);
                let mut wanted = g2.wanted;
                wanted.implications.push(implication);
                Ok((
                    GenResult {
                        usage: g1.usage.scale(&Product::omega()).add(&g2.usage),
                        ty: g2.ty,
                        wanted,
                    },
                    Deriv::LetA {
                        binder: x.clone(),
                        sig: sig.clone(),
                        skolem_body: sk_body,
                        skolem_context: sk_ctx,
                        implication: id,
                        rhs: Box::new(d1),
                        body: Box::new(d2),
                    },
                ))
            }
        }
    }
}

fn param_map(mps: &[Name], tps: &[Name], mults: &[Mult], types: &[Type]) -> RigidMap {
    RigidMap {
        mults: mps.iter().cloned().zip(mults.iter().cloned()).collect(),
        types: tps.iter().cloned().zip(types.iter().cloned()).collect(),
    }
}

/// Generate constraints for `e` under `Γ` with a fresh variable supply.
pub fn infer_expr(data: &DataEnv, env: &TypeEnv, e: &Expr, level: u32) -> Result<GenResult, TypeError> {
    let mut inf = Infer::new(data);
    let mut env = env.clone();
    inf.infer_expr(&mut env, e, level).map(|(g, _)| g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mult::Var;
    use crate::syntax::{parse_expr, parse_program, parse_type};

    fn prelude() -> DataEnv {
        let p = parse_program(
            "data Pair a b where { Pair : a -o b -o Pair a b }\n\
             data List a where { Nil : List a ; Cons : a -o List a -o List a }",
        )
        .unwrap();
        DataEnv::from_decls(&p.data)
    }

    fn gen(env: &TypeEnv, src: &str) -> GenResult {
        let d = prelude();
        infer_expr(&d, env, &parse_expr(src, &d).unwrap(), 0).unwrap()
    }

    fn uvar(t: &Type) -> Var {
        match t {
            Type::Uni(v) => *v,
            _ => panic!("not a variable: {t}"),
        }
    }

    #[test]
    fn application_under_lambdas() {
        // λf.λx. f x
        let g = gen(&TypeEnv::new(), "\\f -> \\x -> f x");
        assert!(g.usage.is_empty());
        let Type::Arrow(af, pf, rest) = &g.ty else { panic!() };
        let Type::Arrow(ax, px, beta) = &**rest else { panic!() };
        assert_eq!(g.wanted.eqs.len(), 1);
        let (lhs, rhs) = &g.wanted.eqs[0];
        assert_eq!(lhs, &**af);
        let Type::Arrow(ax2, pi, beta2) = rhs else { panic!() };
        assert_eq!(ax2, ax);
        assert_eq!(beta2, beta);
        let preds: Vec<Predicate> = g.wanted.preds.clone();
        assert!(preds.contains(&Predicate::new(pi.clone(), px.clone())));
        assert!(preds.contains(&Predicate::new(Mult::One, pf.clone())));
        assert_eq!(preds.len(), 2);
        uvar(af);
    }

    #[test]
    fn unused_binder_is_unrestricted() {
        let mut env = TypeEnv::new();
        env.push_mono("y", Type::con("Int"));
        let g = gen(&env, "\\x -> y");
        let Type::Arrow(_, pi, cod) = &g.ty else { panic!() };
        assert_eq!(**cod, Type::con("Int"));
        assert_eq!(g.usage, MultEnv::singleton("y", Mult::One));
        assert_eq!(g.wanted.preds, vec![Predicate::new(Mult::Omega, pi.clone())]);
    }

    #[test]
    fn app_instance_carries_its_context() {
        let d = prelude();
        let mut env = TypeEnv::new();
        env.push(
            "app",
            parse_type("forall p q r a b. (p <= r) => (a ->[p] b) ->[q] a ->[r] b", &d).unwrap(),
        );
        let g = gen(&env, "\\f -> \\x -> app f x");
        // one instantiated predicate plus the two binder bounds
        assert_eq!(g.wanted.preds.len(), 3);
        assert_eq!(g.wanted.eqs.len(), 2);
        assert!(g.usage.get("app").is_some());
    }

    #[test]
    fn duplication_is_omega() {
        let g = gen(&TypeEnv::new(), "\\x -> Pair x x");
        let Type::Arrow(_, pi, _) = &g.ty else { panic!() };
        let bound = g
            .wanted
            .preds
            .iter()
            .find(|p| p.rhs == Product::from(pi.clone()))
            .unwrap();
        assert!(bound.lhs.is_omega());
    }

    #[test]
    fn case_scales_binders_by_the_scrutinee() {
        let g = gen(&TypeEnv::new(), "\\xs -> case xs of { Nil -> Nil ; Cons y ys -> ys }");
        // y unused: ω ≤ π0·1, ys used once: 1 ≤ π0·1 (kept, trivially true)
        assert_eq!(g.wanted.preds.iter().filter(|p| p.lhs.is_omega()).count(), 1);
    }

    #[test]
    fn errors() {
        let d = prelude();
        let env = TypeEnv::new();
        let e = parse_expr("z", &d).unwrap();
        assert_eq!(infer_expr(&d, &env, &e, 0), Err(TypeError::UnboundVariable("z".into())));
        let e = parse_expr("\\p -> case p of { Pair x x -> x }", &d).unwrap();
        assert_eq!(
            infer_expr(&d, &env, &e, 0),
            Err(TypeError::NonLinearPattern("x".into()))
        );
        let e = parse_expr("\\p -> case p of { Pair x -> x }", &d).unwrap();
        assert!(matches!(
            infer_expr(&d, &env, &e, 0),
            Err(TypeError::PatternArity { .. })
        ));
        let e = Expr::con("Nope", vec![]);
        assert_eq!(
            infer_expr(&d, &env, &e, 0),
            Err(TypeError::UnknownConstructor("Nope".into()))
        );
    }

    #[test]
    fn annotated_let_makes_an_implication() {
        let d = prelude();
        let g = gen(&TypeEnv::new(), "let i : forall a. a -o a = \\z -> z in i");
        assert_eq!(g.wanted.implications.len(), 1);
        let imp = &g.wanted.implications[0];
        assert!(!imp.touchables.is_empty());
        assert_eq!(imp.level, 1);
        assert!(imp.given.is_top());
        let _ = d;
    }

    #[test]
    fn fresh_variables_of_siblings_are_disjoint() {
        let g = gen(&TypeEnv::new(), "\\f -> f (\\x -> x) (\\y -> y)");
        let all = crate::subst::free_unification_vars(&g.wanted);
        let ids: HashSet<u32> = all.iter().map(|(_, v)| v.id).collect();
        assert_eq!(ids.len(), all.len());
    }
}
