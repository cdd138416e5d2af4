use std::collections::BTreeSet;
use std::path::PathBuf;

use linfer::logic::Entailer;
use linfer::subst::Vars;
use linfer::{
    check_program, infer_expr, parse_expr, parse_program, render_types, DataEnv, Given, Mult, Predicate, SolveOptions,
    Solver, Type, TypeEnv, TypeError,
};

fn corpus(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name);
    std::fs::read_to_string(p).unwrap()
}

const FILES: &[&str] = &["funcs.lin", "app.lin", "app2.lin", "app3.lin", "app10.lin"];

fn opts(eliminate: bool) -> SolveOptions {
    SolveOptions {
        eliminate,
        ..SolveOptions::default()
    }
}

#[test]
fn application_leaves_one_predicate() {
    let data = DataEnv::new();
    let e = parse_expr("\\f -> \\x -> f x", &data).unwrap();
    let g = infer_expr(&data, &TypeEnv::new(), &e, 0).unwrap();
    let mut fv = g.wanted.free_vars();
    g.ty.collect_vars(&mut fv);
    let touch: BTreeSet<u32> = fv.uni_vars().map(|v| v.id).collect();
    let r = Solver::new(SolveOptions::default())
        .solve(&touch, &Given::top(), &g.wanted, &g.ty)
        .unwrap();
    assert_eq!(r.residual.len(), 1);
    let Type::Arrow(af, _, _) = &g.ty else { panic!() };
    assert!(matches!(r.subst.apply(&**af), Type::Arrow(..)));
    let p = r.residual.iter().next().unwrap();
    let Type::Arrow(_, _, rest) = r.subst.apply(&g.ty) else {
        panic!()
    };
    let Type::Arrow(_, px, _) = *rest else { panic!() };
    assert_eq!(p.rhs, px.into());
}

#[test]
fn wrapped_application_eliminates_to_one_predicate() {
    let r = check_program(&corpus("app2.lin"), SolveOptions::default()).unwrap();
    let rec = r.get("app2").unwrap().record.as_ref().unwrap();
    assert_eq!(rec.solution.residual.len(), 1);
    assert!(rec.solution.pre_elim.len() >= 3);
}

#[test]
fn given_discharges_wanted() {
    let (p, q) = (Mult::rigid("p"), Mult::rigid("q"));
    let given: Given = [Predicate::new(p.clone(), q.clone())].into_iter().collect();
    let w = linfer::Wanted::pred(Predicate::new(p, q));
    let r = Solver::new(SolveOptions::default())
        .solve(&BTreeSet::new(), &given, &w, &Type::con("Int"))
        .unwrap();
    assert!(r.residual.is_top());
    assert!(r.subst.is_empty());
}

const INT: &str = "data Int where { Zero : Int }\n";

#[test]
fn local_signature_with_unrestricted_unused_argument() {
    let src = format!("{INT}f = let y : forall c. Int -> c -o c = \\i -> \\z -> z in y");
    let r = check_program(&src, SolveOptions::default()).unwrap();
    let b = r.get("f").unwrap();
    assert!(b.outcome.is_ok(), "{:?}", b.outcome);
    let rec = b.record.as_ref().unwrap();
    assert_eq!(rec.solution.nested.len(), 1);
    linfer::replay(&r.data, rec).unwrap();
}

#[test]
fn local_signature_cannot_claim_an_unused_argument_is_linear() {
    let src = format!("{INT}f = let y : forall c. Int ->[1] c ->[1] c = \\i -> \\z -> z in y");
    let r = check_program(&src, SolveOptions::default()).unwrap();
    let e = r.get("f").unwrap().outcome.as_ref().unwrap_err();
    assert!(matches!(e, TypeError::Unsatisfiable { .. }), "{e}");
}

#[test]
fn implication_cannot_fix_an_outer_type() {
    let src = "f = \\y -> let g : forall c. c -o c = \\z -> y in g";
    let r = check_program(src, SolveOptions::default()).unwrap();
    let e = r.get("f").unwrap().outcome.as_ref().unwrap_err();
    assert!(matches!(e, TypeError::Touchability { .. }), "{e}");
}

#[test]
fn local_signature_captures_outer_variables_unrestrictedly() {
    // the case fixes y's type outside the implication, which may not do so itself
    let src = format!("{INT}f = \\y -> let g : forall c. c -> Int = \\z -> y in case y of {{ Zero -> g Zero }}");
    let r = check_program(&src, SolveOptions::default()).unwrap();
    let b = r.get("f").unwrap();
    // y is captured by a let-bound definition, so its use is ω
    assert_eq!(linfer::pretty_polytype(b.outcome.as_ref().unwrap()), "Int ->[w] Int");
    linfer::replay(&r.data, b.record.as_ref().unwrap()).unwrap();
}

#[test]
fn substitution_only_touches_touchables() {
    for file in FILES {
        let r = check_program(&corpus(file), SolveOptions::default()).unwrap();
        for b in &r.bindings {
            let rec = b.record.as_ref().unwrap();
            let mut fv = rec.generated.free_vars();
            rec.ty.collect_vars(&mut fv);
            for v in rec.solution.subst.domain() {
                assert!(fv.has_uni(&v), "{file}: {}: {v:?} is not touchable", b.name);
            }
            let dom: BTreeSet<_> = rec.solution.subst.domain().collect();
            assert!(rec.solution.residual.free_vars().uni_vars().all(|v| !dom.contains(&v)));
        }
    }
}

/// Every multiplicity predicate of the zonked wanted constraint follows from
/// what the solver kept, and every equality zonks to identical sides.
fn solution_is_sound(eliminate: bool) {
    for file in FILES {
        let r = check_program(&corpus(file), opts(eliminate)).unwrap();
        for b in &r.bindings {
            let rec = b.record.as_ref().unwrap();
            let s = &rec.solution;
            let mut kept = rec.given().and(&s.residual);
            if eliminate {
                kept = kept.and(&s.pre_elim);
            }
            let ent = Entailer::from_predicates(&kept);
            for p in &rec.generated.preds {
                let p = s.subst.apply(p);
                assert!(ent.entails(&p), "{file}: {}: {kept} does not entail {p}", b.name);
            }
            for (x, y) in &rec.generated.eqs {
                assert_eq!(s.subst.apply(x), s.subst.apply(y), "{file}: {}", b.name);
            }
        }
    }
}

#[test]
fn solution_is_sound_without_elimination() {
    solution_is_sound(false);
}

#[test]
fn solution_is_sound_with_elimination() {
    solution_is_sound(true);
}

/// Split `pre` into groups that share no hidden atom, with each group's hidden atoms.
fn components(pre: &[Predicate], hidden: &[Mult]) -> Vec<(Vec<Predicate>, Vec<Mult>)> {
    let mut groups: Vec<(Vec<Predicate>, Vec<Mult>)> = Vec::new();
    for p in pre {
        let mine: Vec<Mult> = linfer::oracle::atoms([p])
            .into_iter()
            .filter(|m| hidden.contains(m))
            .collect();
        let mut merged = (vec![p.clone()], mine.clone());
        groups.retain(|(ps, hs)| {
            if hs.iter().any(|h| mine.contains(h)) {
                merged.0.extend(ps.iter().cloned());
                merged.1.extend(hs.iter().cloned());
                false
            } else {
                true
            }
        });
        merged.1.sort();
        merged.1.dedup();
        groups.push(merged);
    }
    groups
}

#[test]
fn elimination_is_existential_projection() {
    for file in FILES {
        let r = check_program(&corpus(file), SolveOptions::default()).unwrap();
        for b in &r.bindings {
            let rec = b.record.as_ref().unwrap();
            let s = &rec.solution;
            let pre: Vec<Predicate> = rec.given().and(&s.pre_elim).into_iter().collect();
            let res: Vec<Predicate> = rec.given().and(&s.residual).into_iter().collect();
            let visible = s.subst.apply(&rec.ty).free_vars();
            let hidden: Vec<Mult> = linfer::oracle::atoms(&pre)
                .into_iter()
                .filter(|m| matches!(m, Mult::Uni(v) if !visible.has_uni(v)))
                .collect();
            // given ∧ residual ≡ ∃hidden. given ∧ pre_elim, by enumeration;
            // ∃ distributes over groups of predicates with disjoint hidden atoms
            let groups = components(&pre, &hidden);
            let all = linfer::oracle::atoms(pre.iter().chain(&res));
            let shown: Vec<Mult> = all.iter().filter(|m| !hidden.contains(m)).cloned().collect();
            let ok = linfer::oracle::for_all_valuations(&shown, |v| {
                let exists = groups.iter().all(|(ps, hs)| {
                    let none = linfer::oracle::for_all_valuations(hs, |h| {
                        let val = |m: &Mult| if hs.contains(m) { h.is_omega(m) } else { v.is_omega(m) };
                        !ps.iter()
                            .all(|p| !p.lhs.factors().iter().any(val) || p.rhs.factors().iter().any(val))
                    });
                    !none.expect("group small enough to enumerate")
                });
                exists == v.holds_all(&res)
            });
            assert_eq!(ok, Some(true), "{file}: {}", b.name);
        }
    }
}

#[test]
fn results_are_deterministic() {
    for file in FILES {
        let src = corpus(file);
        let o = SolveOptions {
            trace: true,
            ..SolveOptions::default()
        };
        let (a, b) = (check_program(&src, o).unwrap(), check_program(&src, o).unwrap());
        assert_eq!(render_types(&a), render_types(&b));
        assert_eq!(a.dump(), b.dump());
    }
}

#[test]
fn elimination_never_changes_acceptance_of_unannotated_programs() {
    for file in ["funcs.lin", "app.lin", "app2.lin", "app10.lin"] {
        let src = corpus(file);
        assert!(parse_program(&src).unwrap().bindings.iter().all(|b| b.sig.is_none()));
        let (a, b) = (
            check_program(&src, opts(true)).unwrap(),
            check_program(&src, opts(false)).unwrap(),
        );
        let ok = |r: &linfer::ProgramReport| r.bindings.iter().map(|b| b.outcome.is_ok()).collect::<Vec<_>>();
        assert_eq!(ok(&a), ok(&b), "{file}");
    }
}

#[test]
fn oracle_checked_corpus_agrees() {
    for file in FILES {
        let o = SolveOptions {
            oracle_check: true,
            ..SolveOptions::default()
        };
        let r = check_program(&corpus(file), o).unwrap();
        assert!(r.is_ok(), "{file}");
        assert!(r.stats.oracle_checks > 0);
    }
}
