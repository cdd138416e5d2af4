//! Replay of an inference result against the declarative typing rules.
//!
//! Given a [`Record`], this rebuilds the type and usage of every node of the
//! derivation directly from the rules, with multiplicities read through the
//! solver's substitution, and checks every side condition by entailment.
//! It shares no code with constraint generation or solving beyond the
//! logic decision procedure.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::constraint::ImplId;
use crate::env::{instantiate_with, MultEnv, TypeEnv};
use crate::infer::Deriv;
use crate::logic::{normalize, Entailer};
use crate::mult::{Given, Mult, Predicate, Product};
use crate::program::Record;
use crate::solve::NestedResult;
use crate::subst::{Fold, RigidMap, Subst};
use crate::syntax::DataEnv;
use crate::types::Type;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("replay failed: {0}")]
pub struct ReplayError(pub String);

fn fail<T>(msg: impl Into<String>) -> Result<T, ReplayError> {
    Err(ReplayError(msg.into()))
}

/// Substitutions applied innermost-last.
#[derive(Clone)]
struct Zonk<'a>(Vec<&'a Subst>);

impl Zonk<'_> {
    fn apply<T: Fold>(&self, t: &T) -> T {
        self.0.iter().fold(t.fold(&NoOp), |acc, s| s.apply(&acc))
    }
}

struct NoOp;

impl crate::subst::Folder for NoOp {
    fn mult(&self, _: &Mult) -> Option<Mult> {
        None
    }
    fn type_leaf(&self, _: &Type) -> Option<Type> {
        None
    }
}

struct Ctx<'a> {
    data: &'a DataEnv,
    nested: &'a BTreeMap<ImplId, NestedResult>,
}

struct Assumptions {
    preds: Given,
    ent: Entailer,
}

impl Assumptions {
    fn new(preds: Given) -> Self {
        let ent = Entailer::from_predicates(&preds);
        Assumptions { preds, ent }
    }

    fn require(&self, p: Predicate, what: &str) -> Result<(), ReplayError> {
        if self.ent.entails(&p) {
            Ok(())
        } else {
            fail(format!("{what}: {} does not entail {p}", self.preds))
        }
    }

    fn same_mult(&self, a: &Mult, b: &Mult) -> bool {
        self.ent.entails(&Predicate::new(a.clone(), b.clone()))
            && self.ent.entails(&Predicate::new(b.clone(), a.clone()))
    }

    /// Structural equality with multiplicities compared up to the assumptions.
    fn same_type(&self, a: &Type, b: &Type) -> bool {
        match (a, b) {
            (Type::Arrow(d1, m1, c1), Type::Arrow(d2, m2, c2)) => {
                self.same_mult(m1, m2) && self.same_type(d1, d2) && self.same_type(c1, c2)
            }
            (Type::Data(n1, ms1, ts1), Type::Data(n2, ms2, ts2)) => {
                n1 == n2
                    && ms1.len() == ms2.len()
                    && ts1.len() == ts2.len()
                    && ms1.iter().zip(ms2).all(|(x, y)| self.same_mult(x, y))
                    && ts1.iter().zip(ts2).all(|(x, y)| self.same_type(x, y))
            }
            _ => a == b,
        }
    }

    fn expect_type(&self, got: &Type, want: &Type, what: &str) -> Result<(), ReplayError> {
        if self.same_type(got, want) {
            Ok(())
        } else {
            fail(format!("{what}: `{got}` is not `{want}`"))
        }
    }

    fn binder_usage(&self, usage: &MultEnv, x: &str, bound: Product) -> Result<(), ReplayError> {
        // an absent variable has usage 0, which only ω bounds
        let used = usage.get(x).cloned().unwrap_or_else(Product::omega);
        self.require(Predicate::new(used, bound), &format!("usage of `{x}`"))
    }
}

/// Check the record's solution against the declarative rules.
pub fn replay(data: &DataEnv, rec: &Record) -> Result<(), ReplayError> {
    let sol = &rec.solution;
    let zonk = Zonk(vec![&sol.subst]);
    let mut q = rec.given();
    q.extend(sol.residual.iter().cloned());
    q.extend(zonk.apply(&sol.pre_elim));
    if !crate::logic::is_satisfiable(&normalize(&q)) {
        return fail(format!("assumptions {q} are unsatisfiable"));
    }
    let asm = Assumptions::new(q);
    let ctx = Ctx {
        data,
        nested: &sol.nested,
    };
    let mut env = rec.env.clone();
    let (ty, _) = go(&ctx, &asm, &zonk, &mut env, &rec.deriv)?;
    asm.expect_type(&ty, &zonk.apply(&rec.ty), "inferred type")?;
    if let Some(sig) = &rec.sig {
        asm.expect_type(&ty, &sig.body, "signature")?;
    }
    Ok(())
}

fn go(ctx: &Ctx, asm: &Assumptions, z: &Zonk, env: &mut TypeEnv, d: &Deriv) -> Result<(Type, MultEnv), ReplayError> {
    match d {
        Deriv::Var { name, mults, types, .. } => {
            let Some(a) = env.get(name) else {
                return fail(format!("`{name}` is not in scope"));
            };
            if a.mult_binders.len() != mults.len() || a.type_binders.len() != types.len() {
                return fail(format!("`{name}` instantiated with the wrong number of arguments"));
            }
            let (ty, context) = instantiate_with(a, &z.apply(mults), &z.apply(types));
            for p in context {
                asm.require(p, &format!("instance of `{name}`"))?;
            }
            Ok((z.apply(&ty), MultEnv::singleton(name.clone(), Mult::One)))
        }
        Deriv::Lam {
            binder,
            dom,
            mult,
            body,
        } => {
            let dom = z.apply(dom);
            let mult = z.apply(mult);
            let mark = env.mark();
            env.push_mono(binder.clone(), dom.clone());
            let r = go(ctx, asm, z, env, body);
            env.truncate(mark);
            let (ty, mut usage) = r?;
            asm.binder_usage(&usage, binder, mult.clone().into())?;
            usage.remove(binder);
            Ok((Type::arrow(dom, mult, ty), usage))
        }
        Deriv::App { fun, arg } => {
            let (tf, uf) = go(ctx, asm, z, env, fun)?;
            let (ta, ua) = go(ctx, asm, z, env, arg)?;
            let Type::Arrow(dom, m, cod) = tf else {
                return fail(format!("applying a non-function of type `{tf}`"));
            };
            asm.expect_type(&ta, &dom, "argument")?;
            Ok((*cod, uf.add(&ua.scale(&m.into()))))
        }
        Deriv::Con {
            con,
            mults,
            types,
            args,
        } => {
            let Some(info) = ctx.data.con(con) else {
                return fail(format!("unknown constructor `{con}`"));
            };
            if info.arity() != args.len() {
                return fail(format!("`{con}` applied to {} arguments", args.len()));
            }
            let mults = z.apply(mults);
            let types = z.apply(types);
            let fields = field_types(info, &mults, &types);
            let mut usage = MultEnv::new();
            for (arg, (ft, nu)) in args.iter().zip(fields) {
                let (t, u) = go(ctx, asm, z, env, arg)?;
                asm.expect_type(&t, &ft, &format!("field of `{con}`"))?;
                usage = usage.add(&u.scale(&nu.into()));
            }
            Ok((Type::data(info.data.clone(), mults, types), usage))
        }
        Deriv::Case {
            scrut,
            mult,
            result,
            alts,
        } => {
            let (t0, u0) = go(ctx, asm, z, env, scrut)?;
            let Type::Data(dname, smults, stypes) = &t0 else {
                return fail(format!("scrutinee of type `{t0}` is not a datatype"));
            };
            let mult = z.apply(mult);
            let result = z.apply(result);
            let mut branches: Option<MultEnv> = None;
            for (con, binders, body) in alts {
                let Some(info) = ctx.data.con(con) else {
                    return fail(format!("unknown constructor `{con}`"));
                };
                if &info.data != dname {
                    return fail(format!("`{con}` is not a constructor of `{dname}`"));
                }
                let fields = field_types(info, smults, stypes);
                let mark = env.mark();
                for (x, (ft, _)) in binders.iter().zip(&fields) {
                    env.push_mono(x.clone(), ft.clone());
                }
                let r = go(ctx, asm, z, env, body);
                env.truncate(mark);
                let (t, mut u) = r?;
                asm.expect_type(&t, &result, "case branch")?;
                for (x, (_, nu)) in binders.iter().zip(fields) {
                    asm.binder_usage(&u, x, Product::from_factors([mult.clone(), nu]))?;
                    u.remove(x);
                }
                branches = Some(match branches {
                    None => u,
                    Some(acc) => acc.lub(&u),
                });
            }
            Ok((result, u0.scale(&mult.into()).add(&branches.unwrap_or_default())))
        }
        Deriv::LetA {
            binder,
            sig,
            skolem_body,
            skolem_context,
            implication,
            rhs,
            body,
        } => {
            let Some(inner) = ctx.nested.get(implication) else {
                return fail(format!("no solution recorded for the signature of `{binder}`"));
            };
            let mut iz = z.clone();
            iz.0.push(&inner.subst);
            let mut q = asm.preds.clone();
            q.extend(z.apply(skolem_context));
            q.extend(iz.apply(&inner.pre_elim));
            let inner_asm = Assumptions::new(q);
            let (t1, u1) = go(ctx, &inner_asm, &iz, env, rhs)?;
            inner_asm.expect_type(&t1, skolem_body, &format!("signature of `{binder}`"))?;
            let mark = env.mark();
            env.push(binder.clone(), sig.clone());
            let r = go(ctx, asm, z, env, body);
            env.truncate(mark);
            let (t2, mut u2) = r?;
            u2.remove(binder);
            Ok((t2, u1.scale(&Product::omega()).add(&u2)))
        }
    }
}

fn field_types(info: &crate::syntax::ConInfo, mults: &[Mult], types: &[Type]) -> Vec<(Type, Mult)> {
    let map = RigidMap {
        mults: info.mult_params.iter().cloned().zip(mults.iter().cloned()).collect(),
        types: info.type_params.iter().cloned().zip(types.iter().cloned()).collect(),
    };
    info.fields.iter().map(|(t, m)| (t.fold(&map), m.fold(&map))).collect()
}
