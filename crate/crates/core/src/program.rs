//! Whole-program inference: top-level bindings in order, each generalized
//! before the next one is checked.

use std::fmt::Write as _;

use crate::constraint::Wanted;
use crate::env::{MultEnv, TypeEnv};
use crate::error::TypeError;
use crate::infer::{Deriv, Infer};
use crate::mult::{Given, Name};
use crate::solve::{generalize, SolveOptions, SolveResult, Solver, Stats};
use crate::subst::Vars;
use crate::syntax::{parse_program, pretty_polytype, Binding, DataEnv, ParseError, Program, Span};
use crate::types::{PolyType, Type};

/// Everything inference learned about one binding, kept for replay and dumps.
#[derive(Clone, Debug)]
pub struct Record {
    pub deriv: Deriv,
    /// `Γ` as seen by the body, including the binding itself.
    pub env: TypeEnv,
    pub generated: Wanted,
    pub usage: MultEnv,
    /// Inferred type before substitution.
    pub ty: Type,
    /// The user's signature, if any.
    pub sig: Option<PolyType>,
    pub solution: SolveResult,
    pub trace: Vec<String>,
}

impl Record {
    /// The given constraint the body was solved under.
    pub fn given(&self) -> Given {
        self.sig.as_ref().map(|s| s.context.clone()).unwrap_or_default()
    }
}

#[derive(Clone, Debug)]
pub struct BindingReport {
    pub name: Name,
    pub span: Span,
    pub outcome: Result<PolyType, TypeError>,
    /// Present once constraint generation succeeded.
    pub record: Option<Record>,
}

#[derive(Clone, Debug)]
pub struct ProgramReport {
    pub data: DataEnv,
    pub bindings: Vec<BindingReport>,
    pub stats: Stats,
}

impl ProgramReport {
    pub fn get(&self, name: &str) -> Option<&BindingReport> {
        self.bindings.iter().find(|b| b.name == name)
    }

    /// The accepted type of `name`.
    pub fn type_of(&self, name: &str) -> Option<&PolyType> {
        self.get(name).and_then(|b| b.outcome.as_ref().ok())
    }

    pub fn is_ok(&self) -> bool {
        self.bindings.iter().all(|b| b.outcome.is_ok())
    }

    pub fn errors(&self) -> impl Iterator<Item = Diagnostic> + '_ {
        self.bindings.iter().filter_map(|b| {
            b.outcome.as_ref().err().map(|e| Diagnostic {
                binding: Some(b.name.clone()),
                message: e.to_string(),
                span: b.span,
                residual: e.residual().map(Given::to_string),
            })
        })
    }

    /// Generated constraints, substitutions and residuals of every binding.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for b in &self.bindings {
            let Some(r) = &b.record else { continue };
            let _ = writeln!(out, "== {}", b.name);
            let _ = writeln!(out, "type:     {}", r.ty);
            let _ = writeln!(out, "usage:    {}", r.usage);
            let _ = writeln!(out, "wanted:   {}", r.generated);
            for line in &r.trace {
                let _ = writeln!(out, "  {line}");
            }
            let _ = writeln!(out, "subst:    {}", r.solution.subst);
            let _ = writeln!(out, "pre-elim: {}", r.solution.pre_elim);
            let _ = writeln!(out, "residual: {}", r.solution.residual);
        }
        out
    }
}

/// A user-facing error with a source location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub binding: Option<Name>,
    pub message: String,
    pub span: Span,
    pub residual: Option<String>,
}

impl Diagnostic {
    pub fn parse(e: &ParseError) -> Self {
        Diagnostic {
            binding: None,
            message: e.message.clone(),
            span: e.span,
            residual: None,
        }
    }

    /// `line:col: in `f`: message`, then the residual on its own line.
    pub fn render(&self, src: &str) -> String {
        let (l, c) = self.span.line_col(src);
        let mut s = format!("{l}:{c}: ");
        if let Some(b) = &self.binding {
            let _ = write!(s, "in `{b}`: ");
        }
        s.push_str(&self.message);
        if let Some(r) = &self.residual {
            let _ = write!(s, "\n  residual: {r}");
        }
        s
    }
}

/// Infer every binding of `program` in order.
///
/// A failing signature-annotated binding is still added to the environment
/// at its signature, so later bindings are checked. A failing unannotated
/// binding has no type to add, so checking stops there.
pub fn infer_program(program: &Program, opts: SolveOptions) -> ProgramReport {
    let data = DataEnv::from_decls(&program.data);
    let mut env = TypeEnv::new();
    let mut stats = Stats::default();
    let mut bindings = Vec::new();
    for b in &program.bindings {
        let (outcome, record, solver_stats) = infer_binding(&data, &mut env, b, opts);
        stats.add(&solver_stats);
        let stop = b.sig.is_none() && outcome.is_err();
        match (&outcome, &b.sig) {
            (Ok(a), _) => env.push(b.name.clone(), a.clone()),
            (Err(_), Some(sig)) => env.push(b.name.clone(), sig.clone()),
            (Err(_), None) => {}
        }
        bindings.push(BindingReport {
            name: b.name.clone(),
            span: b.span,
            outcome,
            record,
        });
        if stop {
            break;
        }
    }
    ProgramReport { data, bindings, stats }
}

fn infer_binding(
    data: &DataEnv,
    env: &mut TypeEnv,
    b: &Binding,
    opts: SolveOptions,
) -> (Result<PolyType, TypeError>, Option<Record>, Stats) {
    let mut inf = Infer::new(data);
    let mark = env.mark();
    let rec_ty = match &b.sig {
        Some(sig) => {
            env.push(b.name.clone(), sig.clone());
            None
        }
        None => {
            let alpha = inf.supply.fresh_type(0);
            inf.set_recursive(Some((b.name.clone(), env.len())));
            env.push_mono(b.name.clone(), alpha.clone());
            Some(alpha)
        }
    };
    let body_env = env.clone();
    let generated = inf.infer_expr(env, &b.body, 0);
    env.truncate(mark);
    let (g, deriv) = match generated {
        Ok(r) => r,
        Err(e) => return (Err(e), None, Stats::default()),
    };

    let mut wanted = g.wanted.clone();
    let (given, disamb) = match &b.sig {
        Some(sig) => {
            wanted.eqs.push((sig.body.clone(), g.ty.clone()));
            (sig.context.clone(), sig.body.clone())
        }
        None => {
            if let Some(alpha) = rec_ty.filter(|_| g.usage.contains(&b.name)) {
                wanted.eqs.push((alpha, g.ty.clone()));
            }
            (Given::top(), g.ty.clone())
        }
    };
    let mut fv = wanted.free_vars();
    g.ty.collect_vars(&mut fv);
    let touchables = fv.uni_vars().map(|v| v.id).collect();

    let mut solver = Solver::new(opts);
    let solved = solver.solve(&touchables, &given, &wanted, &disamb);
    let stats = solver.stats;
    let solution = match solved {
        Ok(s) => s,
        Err(e) => return (Err(e), None, stats),
    };
    let outcome = match &b.sig {
        Some(sig) if solution.residual.is_top() => Ok(sig.clone()),
        Some(_) => Err(TypeError::Unprovable {
            residual: solution.residual.clone(),
        }),
        None => Ok(generalize(&solution.subst.apply(&g.ty), &solution.residual)),
    };
    let record = Record {
        deriv,
        env: body_env,
        generated: wanted,
        usage: g.usage,
        ty: g.ty,
        sig: b.sig.clone(),
        solution,
        trace: solver.trace,
    };
    (outcome, Some(record), stats)
}

/// Parse and infer a whole source file.
pub fn check_program(src: &str, opts: SolveOptions) -> Result<ProgramReport, ParseError> {
    Ok(infer_program(&parse_program(src)?, opts))
}

/// `name : type` lines for the accepted bindings.
pub fn render_types(report: &ProgramReport) -> String {
    let mut out = String::new();
    for b in &report.bindings {
        if let Ok(a) = &b.outcome {
            let _ = writeln!(out, "{} : {}", b.name, pretty_polytype(a));
        }
    }
    out
}
