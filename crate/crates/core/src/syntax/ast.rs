use std::collections::HashMap;

use indexmap::IndexMap;

use crate::mult::{Mult, Name};
use crate::types::{PolyType, Type};

use super::Span;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Var(Name),
    Lam(Name, Box<Expr>),
    App(Box<Expr>, Box<Expr>),
    /// Saturated constructor application.
    Con(Name, Vec<Expr>),
    Case(Box<Expr>, Vec<Alt>),
    /// `let x : A = e1 in e2`
    LetA(Name, PolyType, Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alt {
    pub con: Name,
    pub binders: Vec<Name>,
    pub body: Expr,
    pub span: Span,
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }

    /// Expression with a dummy span, for building terms in code.
    pub fn synth(kind: ExprKind) -> Self {
        Expr::new(kind, Span::default())
    }

    pub fn var(x: impl Into<Name>) -> Self {
        Expr::synth(ExprKind::Var(x.into()))
    }

    pub fn lam(x: impl Into<Name>, body: Expr) -> Self {
        Expr::synth(ExprKind::Lam(x.into(), Box::new(body)))
    }

    pub fn app(f: Expr, a: Expr) -> Self {
        Expr::synth(ExprKind::App(Box::new(f), Box::new(a)))
    }

    pub fn con(c: impl Into<Name>, args: Vec<Expr>) -> Self {
        Expr::synth(ExprKind::Con(c.into(), args))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binding {
    pub name: Name,
    pub sig: Option<PolyType>,
    pub body: Expr,
    pub span: Span,
}

/// `C : τ₁ →ν₁ … τₙ →νₙ D p̄ ā`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConDecl {
    pub name: Name,
    /// Field types with the multiplicity of each field's arrow.
    pub fields: Vec<(Type, Mult)>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataDecl {
    pub name: Name,
    pub mult_params: Vec<Name>,
    pub type_params: Vec<Name>,
    pub constructors: Vec<ConDecl>,
    pub span: Span,
}

impl DataDecl {
    /// `D p̄ ā`
    pub fn result_type(&self) -> Type {
        Type::data(
            self.name.clone(),
            self.mult_params.iter().map(Mult::rigid).collect(),
            self.type_params.iter().map(Type::rigid).collect(),
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub data: Vec<DataDecl>,
    pub bindings: Vec<Binding>,
}

/// What constraint generation needs to know about a constructor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConInfo {
    pub name: Name,
    pub data: Name,
    pub mult_params: Vec<Name>,
    pub type_params: Vec<Name>,
    pub fields: Vec<(Type, Mult)>,
}

impl ConInfo {
    pub fn arity(&self) -> usize {
        self.fields.len()
    }

    pub fn result_type(&self) -> Type {
        Type::data(
            self.data.clone(),
            self.mult_params.iter().map(Mult::rigid).collect(),
            self.type_params.iter().map(Type::rigid).collect(),
        )
    }

    /// `∀p̄ā. τ₁ →ν₁ … → D p̄ ā`
    pub fn polytype(&self) -> PolyType {
        let body = self
            .fields
            .iter()
            .rev()
            .fold(self.result_type(), |acc, (t, m)| Type::arrow(t.clone(), m.clone(), acc));
        PolyType {
            mult_binders: self.mult_params.clone(),
            type_binders: self.type_params.clone(),
            context: Default::default(),
            body,
        }
    }
}

/// Declared datatypes and their constructors.
#[derive(Clone, Debug, Default)]
pub struct DataEnv {
    datas: IndexMap<Name, DataDecl>,
    cons: HashMap<Name, ConInfo>,
}

impl DataEnv {
    pub fn new() -> Self {
        DataEnv::default()
    }

    pub fn from_decls<'a>(decls: impl IntoIterator<Item = &'a DataDecl>) -> Self {
        let mut env = DataEnv::new();
        for d in decls {
            env.insert(d.clone());
        }
        env
    }

    /// Later declarations shadow earlier ones of the same name.
    pub fn insert(&mut self, d: DataDecl) {
        for c in &d.constructors {
            self.cons.insert(
                c.name.clone(),
                ConInfo {
                    name: c.name.clone(),
                    data: d.name.clone(),
                    mult_params: d.mult_params.clone(),
                    type_params: d.type_params.clone(),
                    fields: c.fields.clone(),
                },
            );
        }
        self.datas.insert(d.name.clone(), d);
    }

    pub fn con(&self, c: &str) -> Option<&ConInfo> {
        self.cons.get(c)
    }

    pub fn data(&self, d: &str) -> Option<&DataDecl> {
        self.datas.get(d)
    }

    /// `(number of multiplicity params, number of type params)`
    pub fn arity(&self, d: &str) -> Option<(usize, usize)> {
        self.datas.get(d).map(|d| (d.mult_params.len(), d.type_params.len()))
    }

    pub fn decls(&self) -> impl Iterator<Item = &DataDecl> {
        self.datas.values()
    }
}
