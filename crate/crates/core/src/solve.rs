//! Constraint solving: equality simplification, multiplicity cleanup,
//! quantifier elimination and implication solving.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use petgraph::algo::tarjan_scc;
use petgraph::graphmap::DiGraphMap;

use crate::constraint::{ImplId, Implication, Wanted};
use crate::error::TypeError;
use crate::logic::{self, normalize, Entailer, NormalPred};
use crate::mult::{Given, Mult, Predicate, Var};
use crate::oracle;
use crate::subst::{Subst, Vars};
use crate::types::{PolyType, Type};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Run quantifier elimination on ambiguous multiplicity variables.
    pub eliminate: bool,
    /// Cross-check every logic query against brute-force enumeration.
    pub oracle_check: bool,
    /// Record a human-readable trace of solver steps.
    pub trace: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            eliminate: true,
            oracle_check: false,
            trace: false,
        }
    }
}

/// Counters of logic queries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub entail_calls: usize,
    pub sat_calls: usize,
    pub qe_calls: usize,
    pub oracle_checks: usize,
    /// Queries too large for the oracle.
    pub oracle_skipped: usize,
}

impl Stats {
    pub fn add(&mut self, other: &Stats) {
        self.entail_calls += other.entail_calls;
        self.sat_calls += other.sat_calls;
        self.qe_calls += other.qe_calls;
        self.oracle_checks += other.oracle_checks;
        self.oracle_skipped += other.oracle_skipped;
    }
}

/// What solving one implication produced, kept for replay.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestedResult {
    /// Substitution for the implication's own touchables.
    pub subst: Subst,
    /// Wanted predicates before elimination, zonked.
    pub pre_elim: Given,
    /// Everything assumed while solving it, zonked.
    pub given: Given,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub residual: Given,
    pub subst: Subst,
    pub pre_elim: Given,
    /// Results of every implication, at any depth.
    pub nested: BTreeMap<ImplId, NestedResult>,
}

pub struct Solver {
    pub opts: SolveOptions,
    pub stats: Stats,
    pub trace: Vec<String>,
}

/// Which unification variables the current solve may substitute.
struct Scope<'a> {
    touchables: &'a BTreeSet<u32>,
    /// Variables of the given constraint stay fixed even when touchable.
    given_vars: HashSet<Var>,
}

impl Scope<'_> {
    fn touchable(&self, v: &Var) -> bool {
        self.touchables.contains(&v.id)
    }

    fn substitutable(&self, m: &Mult) -> bool {
        matches!(m, Mult::Uni(v) if self.touchable(v) && !self.given_vars.contains(v))
    }
}

fn to_given(w: &BTreeSet<NormalPred>) -> Given {
    w.iter().map(NormalPred::to_predicate).collect()
}

fn to_preds(w: &BTreeSet<NormalPred>) -> Vec<Predicate> {
    w.iter().map(NormalPred::to_predicate).collect()
}

impl Solver {
    pub fn new(opts: SolveOptions) -> Self {
        Solver {
            opts,
            stats: Stats::default(),
            trace: Vec::new(),
        }
    }

    fn note(&mut self, depth: usize, line: impl FnOnce() -> String) {
        if self.opts.trace {
            let pad = "  ".repeat(depth);
            self.trace.push(format!("{pad}{}", line()));
        }
    }

    fn oracle(&mut self, what: &str, got: bool, expected: Option<bool>) -> Result<(), TypeError> {
        match expected {
            None => self.stats.oracle_skipped += 1,
            Some(e) => {
                self.stats.oracle_checks += 1;
                if e != got {
                    return Err(TypeError::OracleMismatch(format!(
                        "{what}: solver says {got}, oracle says {e}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn entails(&mut self, ent: &Entailer, q: &BTreeSet<NormalPred>, phi: &NormalPred) -> Result<bool, TypeError> {
        self.stats.entail_calls += 1;
        let got = ent.entails_normal(phi);
        if self.opts.oracle_check {
            let expected = oracle::brute_entails(&to_preds(q), &phi.to_predicate());
            self.oracle(&format!("{} |= {phi}", to_given(q)), got, expected)?;
        }
        Ok(got)
    }

    fn satisfiable(&mut self, q: &BTreeSet<NormalPred>) -> Result<bool, TypeError> {
        self.stats.sat_calls += 1;
        let got = logic::is_satisfiable(q);
        if self.opts.oracle_check {
            let expected = oracle::brute_satisfiable(&to_preds(q));
            self.oracle(&format!("sat({})", to_given(q)), got, expected)?;
        }
        Ok(got)
    }

    fn eliminate(&mut self, pi: Var, q: &BTreeSet<NormalPred>) -> Result<BTreeSet<NormalPred>, TypeError> {
        self.stats.qe_calls += 1;
        let out = logic::eliminate(pi, q);
        if self.opts.oracle_check {
            let agrees = oracle::brute_qe_agrees(pi, &to_preds(q), &to_preds(&out));
            self.oracle(&format!("exists {}. {}", Mult::Uni(pi), to_given(q)), true, agrees)?;
        }
        Ok(out)
    }

    /// Solve `wanted` under `given`, substituting only `touchables`.
    pub fn solve(
        &mut self,
        touchables: &BTreeSet<u32>,
        given: &Given,
        wanted: &Wanted,
        disamb: &Type,
    ) -> Result<SolveResult, TypeError> {
        self.solve_at(0, touchables, given, wanted, disamb)
    }

    fn solve_at(
        &mut self,
        depth: usize,
        touchables: &BTreeSet<u32>,
        given: &Given,
        wanted: &Wanted,
        disamb: &Type,
    ) -> Result<SolveResult, TypeError> {
        let scope = Scope {
            touchables,
            given_vars: given.free_vars().uni_vars().collect(),
        };
        let given_n = normalize(given);
        let mut theta = Subst::new();
        let mut preds = wanted.preds.clone();
        self.unify(&scope, &wanted.eqs, &mut theta, &mut preds, wanted.size())?;
        let mut w = normalize(theta.apply(&preds).iter());
        self.cleanup(&scope, &given_n, &mut w, &mut theta)?;
        self.note(depth, || format!("simplify: {theta} ; {}", to_given(&w)));

        let mut nested = BTreeMap::new();
        for imp in &wanted.implications {
            let imp = theta.apply(imp);
            let inner_given = given.and(&imp.given).and(&to_given(&w));
            self.note(depth, || {
                format!("implication #{}: {} |= {}", imp.id, inner_given, imp.wanted)
            });
            let r = self.solve_at(depth + 1, &imp.touchables, &inner_given, &imp.wanted, &imp.disamb)?;
            self.check_inner(&imp, &r.residual)?;
            nested.extend(r.nested);
            nested.insert(
                imp.id,
                NestedResult {
                    subst: r.subst,
                    pre_elim: r.pre_elim,
                    given: inner_given,
                },
            );
        }

        let before = w.clone();
        if self.opts.eliminate {
            let mut protect = theta.apply(disamb).free_vars();
            given.collect_vars(&mut protect);
            let targets: Vec<Var> = w
                .free_vars()
                .mult_unis()
                .filter(|v| scope.touchable(v) && !protect.has_uni(v))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            if !targets.is_empty() {
                for pi in &targets {
                    w = self.eliminate(*pi, &w)?;
                }
                self.note(depth, || {
                    let vs: Vec<String> = targets.iter().map(|v| Mult::Uni(*v).to_string()).collect();
                    format!("eliminate {}: {}", vs.join(" "), to_given(&w))
                });
                self.cleanup(&scope, &given_n, &mut w, &mut theta)?;
            }
        }
        let pre_elim = to_given(&theta.apply(&before));
        let residual = to_given(&w);
        self.note(depth, || format!("residual: {residual}"));
        Ok(SolveResult {
            residual,
            subst: theta,
            pre_elim,
            nested,
        })
    }

    /// An implication must be fully discharged by its own solve.
    fn check_inner(&self, imp: &Implication, residual: &Given) -> Result<(), TypeError> {
        if residual.is_top() {
            return Ok(());
        }
        let outer: Vec<String> = residual
            .free_vars()
            .uni_vars()
            .filter(|v| !imp.touchables.contains(&v.id))
            .map(|v| Mult::Uni(v).to_string())
            .collect();
        if outer.is_empty() {
            Err(TypeError::Unprovable {
                residual: residual.clone(),
            })
        } else {
            Err(TypeError::Touchability {
                detail: format!("constraint on {}", outer.join(", ")),
                residual: residual.clone(),
            })
        }
    }

    /// Decompose type equalities and bind touchable variables.
    fn unify(
        &mut self,
        scope: &Scope,
        eqs: &[(Type, Type)],
        theta: &mut Subst,
        preds: &mut Vec<Predicate>,
        size: usize,
    ) -> Result<(), TypeError> {
        let budget = 10 * size + 10;
        let mut steps = 0;
        let mut work: Vec<(Type, Type)> = eqs.iter().rev().cloned().collect();
        let mut stuck: Vec<(Type, Type)> = Vec::new();
        loop {
            let mut progress = false;
            while let Some((a, b)) = work.pop() {
                steps += 1;
                if steps > budget {
                    return Err(TypeError::StepBudget(budget));
                }
                let (a, b) = (theta.apply(&a), theta.apply(&b));
                match (&a, &b) {
                    _ if a == b => {}
                    (Type::Uni(v), _) if scope.touchable(v) => {
                        bind(*v, &b, theta)?;
                        progress = true;
                    }
                    (_, Type::Uni(v)) if scope.touchable(v) => {
                        bind(*v, &a, theta)?;
                        progress = true;
                    }
                    (Type::Uni(_), _) | (_, Type::Uni(_)) => stuck.push((a, b)),
                    (Type::Arrow(d1, m1, c1), Type::Arrow(d2, m2, c2)) => {
                        preds.push(Predicate::new(m1.clone(), m2.clone()));
                        preds.push(Predicate::new(m2.clone(), m1.clone()));
                        work.push(((**c1).clone(), (**c2).clone()));
                        work.push(((**d1).clone(), (**d2).clone()));
                    }
                    (Type::Data(n1, ms1, ts1), Type::Data(n2, ms2, ts2))
                        if n1 == n2 && ms1.len() == ms2.len() && ts1.len() == ts2.len() =>
                    {
                        for (m1, m2) in ms1.iter().zip(ms2) {
                            preds.push(Predicate::new(m1.clone(), m2.clone()));
                            preds.push(Predicate::new(m2.clone(), m1.clone()));
                        }
                        work.extend(ts1.iter().cloned().zip(ts2.iter().cloned()).rev());
                    }
                    _ => return Err(TypeError::Mismatch(Box::new(a), Box::new(b))),
                }
            }
            if stuck.is_empty() {
                return Ok(());
            }
            if !progress {
                let (a, b) = &stuck[0];
                let residual = theta.apply(preds).into_iter().collect();
                return Err(TypeError::Touchability {
                    detail: format!("cannot solve `{a} ~ {b}`"),
                    residual,
                });
            }
            work = std::mem::take(&mut stuck);
            work.reverse();
        }
    }

    /// Equality substitution, entailment by the given, minimization and a
    /// satisfiability check.
    fn cleanup(
        &mut self,
        scope: &Scope,
        given: &BTreeSet<NormalPred>,
        w: &mut BTreeSet<NormalPred>,
        theta: &mut Subst,
    ) -> Result<(), TypeError> {
        while let Some(s) = equalities(scope, w) {
            for (v, m) in s {
                let m = theta.apply(&m);
                if m != Mult::Uni(v) {
                    theta.bind_mult(v, m);
                }
            }
            *w = theta.apply(w);
        }
        let ent = Entailer::new(given);
        let mut kept = BTreeSet::new();
        for p in std::mem::take(w) {
            if !self.entails(&ent, given, &p)? {
                kept.insert(p);
            }
        }
        for p in kept.clone() {
            let mut rest: BTreeSet<NormalPred> = kept.iter().filter(|q| **q != p).cloned().collect();
            rest.extend(given.iter().cloned());
            let ent = Entailer::new(&rest);
            if self.entails(&ent, &rest, &p)? {
                kept.remove(&p);
            }
        }
        let all: BTreeSet<NormalPred> = kept.iter().chain(given).cloned().collect();
        if !self.satisfiable(&all)? {
            return Err(TypeError::Unsatisfiable {
                residual: to_given(&kept),
            });
        }
        *w = kept;
        Ok(())
    }
}

/// Substitutions forced by `w`: `π ≤ 1` fixes `π` to 1, `ω ≤ π` fixes it to
/// ω, and a cycle of single-variable bounds makes its members equal.
fn equalities(scope: &Scope, w: &BTreeSet<NormalPred>) -> Option<Vec<(Var, Mult)>> {
    let mut out: Vec<(Var, Mult)> = Vec::new();
    let mut seen = HashSet::new();
    for p in w {
        let lhs = p.lhs();
        if p.rhs().is_one() && scope.substitutable(lhs) {
            let v = lhs.as_uni().unwrap();
            if seen.insert(v) {
                out.push((v, Mult::One));
            }
        } else if *lhs == Mult::Omega {
            if let Some(m) = p.rhs().as_atom() {
                if scope.substitutable(&m) {
                    let v = m.as_uni().unwrap();
                    if seen.insert(v) {
                        out.push((v, Mult::Omega));
                    }
                }
            }
        }
    }
    if !out.is_empty() {
        return Some(out);
    }

    let mut index: HashMap<Mult, usize> = HashMap::new();
    let mut atoms: Vec<Mult> = Vec::new();
    let mut id = |m: &Mult, atoms: &mut Vec<Mult>| {
        *index.entry(m.clone()).or_insert_with(|| {
            atoms.push(m.clone());
            atoms.len() - 1
        })
    };
    let mut g = DiGraphMap::<usize, ()>::new();
    for p in w {
        if let Some(r) = p.rhs().as_atom() {
            if p.lhs().is_var() && r.is_var() {
                let (a, b) = (id(p.lhs(), &mut atoms), id(&r, &mut atoms));
                g.add_edge(a, b, ());
            }
        }
    }
    for scc in tarjan_scc(&g) {
        if scc.len() < 2 {
            continue;
        }
        let mut members: Vec<&Mult> = scc.iter().map(|i| &atoms[*i]).collect();
        members.sort();
        let rep = members
            .iter()
            .find(|m| !scope.substitutable(m))
            .copied()
            .unwrap_or(members[0])
            .clone();
        for m in members {
            if *m != rep && scope.substitutable(m) {
                out.push((m.as_uni().unwrap(), rep.clone()));
            }
        }
    }
    (!out.is_empty()).then_some(out)
}

fn bind(v: Var, t: &Type, theta: &mut Subst) -> Result<(), TypeError> {
    if t.free_vars().uni.contains(&(crate::subst::Sort::Type, v)) {
        return Err(TypeError::Occurs(Box::new(Type::Uni(v)), Box::new(t.clone())));
    }
    theta.bind_type(v, t.clone());
    Ok(())
}

/// Quantify over every unification variable of `ty` and `context`, naming
/// them in order of first occurrence.
pub fn generalize(ty: &Type, context: &Given) -> PolyType {
    let mut fv = ty.free_vars();
    context.collect_vars(&mut fv);
    let taken = fv.rigid.iter().map(|(_, n)| n.clone()).collect::<HashSet<_>>();
    let mut fresh = {
        let mut i = 0;
        move |prefix: &str| loop {
            i += 1;
            let n = format!("{prefix}{i}");
            if !taken.contains(&n) {
                return n;
            }
        }
    };
    let mut s = Subst::new();
    let mut mult_binders = Vec::new();
    let mut type_binders = Vec::new();
    for (sort, v) in &fv.uni {
        match sort {
            crate::subst::Sort::Mult => {
                let n = fresh("m");
                s.bind_mult(*v, Mult::rigid(n.clone()));
                mult_binders.push(n);
            }
            crate::subst::Sort::Type => {
                let n = fresh("t");
                s.bind_type(*v, Type::rigid(n.clone()));
                type_binders.push(n);
            }
        }
    }
    crate::syntax::canonical_polytype(&PolyType {
        mult_binders,
        type_binders,
        context: s.apply(context),
        body: s.apply(ty),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::pretty_polytype;

    fn u(id: u32) -> Var {
        Var::new(id, 0)
    }

    fn m(id: u32) -> Mult {
        Mult::Uni(u(id))
    }

    fn t(id: u32) -> Type {
        Type::Uni(u(id))
    }

    fn all(ids: impl IntoIterator<Item = u32>) -> BTreeSet<u32> {
        ids.into_iter().collect()
    }

    fn solver(eliminate: bool) -> Solver {
        Solver::new(SolveOptions {
            eliminate,
            oracle_check: true,
            trace: true,
        })
    }

    #[test]
    fn arrow_equality_equates_multiplicities() {
        let w = Wanted::eq(Type::arrow(t(0), m(1), t(0)), Type::arrow(Type::con("Int"), m(2), t(3)));
        let r = solver(true).solve(&all(0..4), &Given::top(), &w, &t(3)).unwrap();
        assert!(r.residual.is_top());
        assert_eq!(r.subst.apply(&t(0)), Type::con("Int"));
        assert_eq!(r.subst.apply(&m(1)), r.subst.apply(&m(2)));
    }

    #[test]
    fn forced_values() {
        let mut w = Wanted::pred(Predicate::new(m(0), Mult::One));
        w.preds.push(Predicate::new(Mult::Omega, m(1)));
        let ty = Type::arrow(
            Type::con("Int"),
            m(0),
            Type::arrow(Type::con("Int"), m(1), Type::con("Int")),
        );
        let r = solver(true).solve(&all(0..2), &Given::top(), &w, &ty).unwrap();
        assert!(r.residual.is_top());
        assert_eq!(r.subst.apply(&m(0)), Mult::One);
        assert_eq!(r.subst.apply(&m(1)), Mult::Omega);
    }

    #[test]
    fn contradiction_is_unsatisfiable() {
        let mut w = Wanted::pred(Predicate::new(Mult::Omega, m(0)));
        w.preds.push(Predicate::new(m(0), Mult::One));
        let e = solver(true)
            .solve(&all([0]), &Given::top(), &w, &Type::con("Int"))
            .unwrap_err();
        assert_eq!(
            e,
            TypeError::Unsatisfiable {
                residual: [Predicate::new(Mult::Omega, Mult::One)].into_iter().collect()
            }
        );
    }

    #[test]
    fn mismatch_and_occurs() {
        let w = Wanted::eq(Type::con("Int"), Type::con("Bool"));
        assert!(matches!(
            solver(true).solve(&all([]), &Given::top(), &w, &t(0)),
            Err(TypeError::Mismatch(..))
        ));
        let w = Wanted::eq(t(0), Type::arrow(t(0), Mult::One, t(0)));
        assert!(matches!(
            solver(true).solve(&all([0]), &Given::top(), &w, &t(0)),
            Err(TypeError::Occurs(..))
        ));
    }

    #[test]
    fn untouchable_equality_is_stuck() {
        let w = Wanted::eq(t(0), Type::con("Int"));
        let e = solver(true).solve(&all([]), &Given::top(), &w, &t(0)).unwrap_err();
        assert!(matches!(e, TypeError::Touchability { .. }));
    }

    #[test]
    fn cycles_collapse_onto_rigid_variables() {
        let p = Mult::rigid("p");
        let w = Wanted {
            preds: vec![Predicate::new(m(0), p.clone()), Predicate::new(p.clone(), m(0))],
            ..Wanted::new()
        };
        let ty = Type::arrow(Type::con("Int"), m(0), Type::con("Int"));
        let r = solver(true).solve(&all([0]), &Given::top(), &w, &ty).unwrap();
        assert!(r.residual.is_top());
        assert_eq!(r.subst.apply(&m(0)), p);
    }

    #[test]
    fn entailed_wanteds_are_dropped() {
        let (p, q, r) = (Mult::rigid("p"), Mult::rigid("q"), Mult::rigid("r"));
        let given: Given = [
            Predicate::new(p.clone(), q.clone()),
            Predicate::new(q.clone(), r.clone()),
        ]
        .into_iter()
        .collect();
        let w = Wanted::pred(Predicate::new(p, r));
        let res = solver(true).solve(&all([]), &given, &w, &Type::con("Int")).unwrap();
        assert!(res.residual.is_top());
    }

    #[test]
    fn elimination_keeps_only_visible_variables() {
        // m0 ≤ m2, m2 ≤ m1 with m2 ambiguous: ∃m2 gives m0 ≤ m1
        let w = Wanted {
            preds: vec![Predicate::new(m(0), m(2)), Predicate::new(m(2), m(1))],
            ..Wanted::new()
        };
        let ty = Type::arrow(
            Type::con("Int"),
            m(0),
            Type::arrow(Type::con("Int"), m(1), Type::con("Int")),
        );
        let r = solver(true).solve(&all(0..3), &Given::top(), &w, &ty).unwrap();
        assert_eq!(r.residual, [Predicate::new(m(0), m(1))].into_iter().collect());
        assert_eq!(r.pre_elim.len(), 2);
        let r = solver(false).solve(&all(0..3), &Given::top(), &w, &ty).unwrap();
        assert_eq!(r.residual.len(), 2);
    }

    #[test]
    fn implication_sees_outer_residual() {
        // outer: m0 ≤ m1 ; inner (touchables {5}): m5 ~ m0 via arrows, wants m5 ≤ m1
        let imp = Implication {
            id: 0,
            touchables: all([5]),
            level: 1,
            given: Given::top(),
            wanted: Wanted {
                preds: vec![Predicate::new(m(5), m(1))],
                eqs: vec![(
                    Type::arrow(Type::con("Int"), m(5), Type::con("Int")),
                    Type::arrow(Type::con("Int"), m(0), Type::con("Int")),
                )],
                implications: vec![],
            },
            disamb: Type::con("Int"),
        };
        let w = Wanted {
            preds: vec![Predicate::new(m(0), m(1))],
            eqs: vec![],
            implications: vec![imp],
        };
        let ty = Type::arrow(
            Type::con("Int"),
            m(0),
            Type::arrow(Type::con("Int"), m(1), Type::con("Int")),
        );
        let mut s = solver(true);
        let r = s.solve(&all([0, 1]), &Given::top(), &w, &ty).unwrap();
        assert_eq!(r.residual.len(), 1);
        assert!(r.nested.contains_key(&0));
        assert!(!s.trace.is_empty());
    }

    #[test]
    fn implication_cannot_constrain_outer_variables() {
        let imp = Implication {
            id: 0,
            touchables: all([5]),
            level: 1,
            given: Given::top(),
            wanted: Wanted::pred(Predicate::new(m(0), Mult::One)),
            disamb: Type::con("Int"),
        };
        let w = Wanted {
            implications: vec![imp],
            ..Wanted::new()
        };
        let ty = Type::arrow(Type::con("Int"), m(0), Type::con("Int"));
        let e = solver(true).solve(&all([0]), &Given::top(), &w, &ty).unwrap_err();
        assert!(matches!(e, TypeError::Touchability { .. }));
    }

    #[test]
    fn step_budget() {
        let mut s = solver(true);
        let mut theta = Subst::new();
        let scope = Scope {
            touchables: &all([]),
            given_vars: HashSet::new(),
        };
        let deep = (0..50).fold(Type::con("Int"), |acc, _| Type::arrow(Type::con("Int"), Mult::One, acc));
        let e = s.unify(&scope, &[(deep.clone(), deep.clone())], &mut theta, &mut Vec::new(), 0);
        assert!(e.is_ok(), "identical sides are trivial");
        let other = Type::arrow(deep.clone(), Mult::Omega, deep.clone());
        let e = s.unify(
            &scope,
            &[(other, Type::arrow(deep.clone(), Mult::One, deep))],
            &mut theta,
            &mut Vec::new(),
            0,
        );
        assert_eq!(e, Ok(()));
        let wide: Vec<(Type, Type)> = (0..20).map(|i| (t(i), t(i + 100))).collect();
        let e = s.unify(&scope, &wide, &mut theta, &mut Vec::new(), 0);
        assert_eq!(e, Err(TypeError::StepBudget(10)));
    }

    #[test]
    fn generalize_names_in_order() {
        let ty = Type::arrow(Type::arrow(t(7), m(3), t(8)), m(4), Type::arrow(t(7), m(5), t(8)));
        let ctx: Given = [Predicate::new(m(3), m(5))].into_iter().collect();
        assert_eq!(
            pretty_polytype(&generalize(&ty, &ctx)),
            "forall p q r a b. (p <= r) => (a ->[p] b) ->[q] a ->[r] b"
        );
    }
}
