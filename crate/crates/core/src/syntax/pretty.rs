use std::collections::BTreeSet;

use crate::mult::{Mult, Name};
use crate::subst::{Fold, RigidMap, Sort, Vars};
use crate::types::{PolyType, Type};

use super::ast::{Expr, ExprKind};

const MULT_NAMES: &[&str] = &["p", "q", "r", "s", "t", "u", "v"];

fn nth_name(base: &[&str], i: usize) -> Name {
    let n = base.len();
    if i < n {
        base[i].to_string()
    } else {
        format!("{}{}", base[i % n], i / n)
    }
}

fn type_name(i: usize) -> Name {
    // a..o, leaving `w` free for ω
    const LETTERS: &[&str] = &[
        "a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "m", "n", "o",
    ];
    nth_name(LETTERS, i)
}

fn mult_name(i: usize) -> Name {
    nth_name(MULT_NAMES, i)
}

/// Rename binders to `p q r …` and `a b c …` in order of first occurrence
/// (body first, then context). Binders that never occur keep their relative
/// order after the used ones.
pub fn canonical_polytype(a: &PolyType) -> PolyType {
    let mut fv = a.body.free_vars();
    a.context.collect_vars(&mut fv);
    let order = |sort: Sort, binders: &[Name]| -> Vec<Name> {
        let mut out: Vec<Name> = fv
            .rigid
            .iter()
            .filter(|(s, n)| *s == sort && binders.contains(n))
            .map(|(_, n)| n.clone())
            .collect();
        for b in binders {
            if !out.contains(b) {
                out.push(b.clone());
            }
        }
        out
    };
    let ms = order(Sort::Mult, &a.mult_binders);
    let ts = order(Sort::Type, &a.type_binders);
    let map = RigidMap {
        mults: ms
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), Mult::rigid(mult_name(i))))
            .collect(),
        types: ts
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), Type::rigid(type_name(i))))
            .collect(),
    };
    PolyType {
        mult_binders: (0..ms.len()).map(mult_name).collect(),
        type_binders: (0..ts.len()).map(type_name).collect(),
        context: a.context.fold(&map),
        body: a.body.fold(&map),
    }
}

/// Canonical rendering: `forall p q a. (p <= q) => a ->[p] a ->[q] a`.
///
/// Context predicates are sorted and deduplicated as strings.
pub fn pretty_polytype(a: &PolyType) -> String {
    let c = canonical_polytype(a);
    let mut out = String::new();
    if !c.mult_binders.is_empty() || !c.type_binders.is_empty() {
        out.push_str("forall");
        for b in c.mult_binders.iter().chain(&c.type_binders) {
            out.push(' ');
            out.push_str(b);
        }
        out.push_str(". ");
    }
    let preds: BTreeSet<String> = c.context.iter().map(|p| p.to_string()).collect();
    if !preds.is_empty() {
        out.push('(');
        out.push_str(&preds.into_iter().collect::<Vec<_>>().join(", "));
        out.push_str(") => ");
    }
    out.push_str(&c.body.to_string());
    out
}

/// Render an expression in surface syntax (without layout).
pub fn pretty_expr(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e, 0);
    s
}

fn write_expr(out: &mut String, e: &Expr, prec: u8) {
    // prec 0: anything, 1: application head, 2: argument
    match &e.kind {
        ExprKind::Var(x) => out.push_str(x),
        ExprKind::Lam(x, b) => {
            if prec > 0 {
                out.push('(');
            }
            out.push('\\');
            out.push_str(x);
            out.push_str(" -> ");
            write_expr(out, b, 0);
            if prec > 0 {
                out.push(')');
            }
        }
        ExprKind::App(f, a) => {
            if prec > 1 {
                out.push('(');
            }
            write_expr(out, f, 1);
            out.push(' ');
            write_expr(out, a, 2);
            if prec > 1 {
                out.push(')');
            }
        }
        ExprKind::Con(c, args) => {
            let paren = prec > 1 && !args.is_empty();
            if paren {
                out.push('(');
            }
            out.push_str(c);
            for a in args {
                out.push(' ');
                write_expr(out, a, 2);
            }
            if paren {
                out.push(')');
            }
        }
        ExprKind::Case(s, alts) => {
            if prec > 0 {
                out.push('(');
            }
            out.push_str("case ");
            write_expr(out, s, 0);
            out.push_str(" of { ");
            for (i, a) in alts.iter().enumerate() {
                if i > 0 {
                    out.push_str(" ; ");
                }
                out.push_str(&a.con);
                for b in &a.binders {
                    out.push(' ');
                    out.push_str(b);
                }
                out.push_str(" -> ");
                write_expr(out, &a.body, 0);
            }
            out.push_str(" }");
            if prec > 0 {
                out.push(')');
            }
        }
        ExprKind::LetA(x, sig, r, b) => {
            if prec > 0 {
                out.push('(');
            }
            out.push_str(&format!("let {x} : {} = ", pretty_polytype(sig)));
            write_expr(out, r, 0);
            out.push_str(" in ");
            write_expr(out, b, 0);
            if prec > 0 {
                out.push(')');
            }
        }
    }
}
