use std::collections::{HashMap, HashSet};

use indexmap::IndexMap;

use crate::mult::{Given, Mult, Name, Predicate, Product};
use crate::types::{PolyType, Type};

use super::ast::{Alt, Binding, ConDecl, DataDecl, DataEnv, Expr, ExprKind, Program};
use super::lexer::{lex, Tok, Token};
use super::{ParseError, Span};

type PResult<T> = Result<T, ParseError>;

/// Types before data arities are known.
#[derive(Clone, Debug)]
enum RawType {
    Var(Name, Span),
    Num(String, Span),
    Con(Name, Vec<RawType>, Span),
    Arrow(Box<RawType>, RawMult, Box<RawType>),
}

#[derive(Clone, Debug)]
enum RawMult {
    One,
    Omega,
    Var(Name, Span),
}

#[derive(Clone, Debug)]
struct RawSig {
    forall: Option<Vec<(Name, Span)>>,
    context: Vec<(Vec<RawMult>, Vec<RawMult>)>,
    body: RawType,
}

struct RawCon {
    name: Name,
    ty: RawType,
    span: Span,
}

struct RawData {
    name: Name,
    params: Vec<(Name, Span)>,
    cons: Vec<RawCon>,
    span: Span,
}

struct RawBinding {
    name: Name,
    sig: Option<RawSig>,
    body: Expr,
    span: Span,
}

impl RawType {
    fn span(&self) -> Span {
        match self {
            RawType::Var(_, s) | RawType::Num(_, s) | RawType::Con(_, _, s) => *s,
            RawType::Arrow(a, _, b) => a.span().to(b.span()),
        }
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    fresh: usize,
    /// Annotated lets found while parsing expressions, resolved after the
    /// data declarations are known. Indexed by a placeholder in the AST.
    pending_sigs: Vec<RawSig>,
}

const SIG_PLACEHOLDER: &str = "sig%";

impl Parser {
    fn new(src: &str) -> PResult<Self> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            fresh: 0,
            pending_sigs: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn prev_span(&self) -> Span {
        self.toks[self.pos.saturating_sub(1)].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected<T>(&self, what: &str) -> PResult<T> {
        Err(ParseError::new(
            format!("expected {what}, found {}", self.peek()),
            self.span(),
        ))
    }

    fn expect(&mut self, t: &Tok) -> PResult<Span> {
        if self.peek() == t {
            Ok(self.bump().span)
        } else {
            self.unexpected(&t.to_string())
        }
    }

    fn ident(&mut self) -> PResult<(Name, Span)> {
        match self.peek().clone() {
            Tok::Ident(s) => Ok((s, self.bump().span)),
            _ => self.unexpected("an identifier"),
        }
    }

    fn con_id(&mut self) -> PResult<(Name, Span)> {
        match self.peek().clone() {
            Tok::ConId(s) => Ok((s, self.bump().span)),
            _ => self.unexpected("a constructor name"),
        }
    }

    fn fresh_name(&mut self, base: &str) -> Name {
        self.fresh += 1;
        format!("{base}%{}", self.fresh)
    }

    /// A binder; `_` becomes a fresh name nobody can refer to.
    fn binder(&mut self) -> PResult<(Name, Span)> {
        let (n, s) = self.ident()?;
        if n == "_" {
            Ok((self.fresh_name("_"), s))
        } else {
            Ok((n, s))
        }
    }

    // ---- types ----

    fn mult_atom(&mut self) -> PResult<RawMult> {
        match self.peek().clone() {
            Tok::Num(n) if n == "1" => {
                self.bump();
                Ok(RawMult::One)
            }
            Tok::Ident(n) if n == "w" => {
                self.bump();
                Ok(RawMult::Omega)
            }
            Tok::Ident(n) => Ok(RawMult::Var(n, self.bump().span)),
            _ => self.unexpected("a multiplicity (`1`, `w` or a variable)"),
        }
    }

    fn product(&mut self) -> PResult<Vec<RawMult>> {
        let mut out = vec![self.mult_atom()?];
        while self.eat(&Tok::Star) {
            out.push(self.mult_atom()?);
        }
        Ok(out)
    }

    fn context(&mut self) -> PResult<Vec<(Vec<RawMult>, Vec<RawMult>)>> {
        self.expect(&Tok::LParen)?;
        let mut preds = Vec::new();
        if !self.eat(&Tok::RParen) {
            loop {
                let l = self.product()?;
                self.expect(&Tok::Le)?;
                let r = self.product()?;
                preds.push((l, r));
                if self.eat(&Tok::RParen) {
                    break;
                }
                self.expect(&Tok::Comma)?;
            }
        }
        self.expect(&Tok::FatArrow)?;
        Ok(preds)
    }

    fn sig(&mut self) -> PResult<RawSig> {
        let forall = if self.eat(&Tok::Forall) {
            let mut bs = Vec::new();
            while let Tok::Ident(_) = self.peek() {
                bs.push(self.ident()?);
            }
            self.expect(&Tok::Dot)?;
            Some(bs)
        } else {
            None
        };
        let context = if *self.peek() == Tok::LParen {
            let save = self.pos;
            match self.context() {
                Ok(c) => c,
                Err(_) => {
                    self.pos = save;
                    Vec::new()
                }
            }
        } else {
            Vec::new()
        };
        let body = self.ty()?;
        Ok(RawSig { forall, context, body })
    }

    fn ty(&mut self) -> PResult<RawType> {
        let lhs = self.btype()?;
        let m = match self.peek() {
            Tok::Arrow => {
                self.bump();
                RawMult::Omega
            }
            Tok::Lolli => {
                self.bump();
                RawMult::One
            }
            Tok::ArrowOpen => {
                self.bump();
                let m = self.mult_atom()?;
                if *self.peek() == Tok::Star {
                    return Err(ParseError::new(
                        "arrow annotations must be a single multiplicity",
                        self.span(),
                    ));
                }
                self.expect(&Tok::RBracket)?;
                m
            }
            _ => return Ok(lhs),
        };
        let rhs = self.ty()?;
        Ok(RawType::Arrow(Box::new(lhs), m, Box::new(rhs)))
    }

    fn starts_atype(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::ConId(_) | Tok::Num(_) | Tok::LParen)
    }

    fn btype(&mut self) -> PResult<RawType> {
        if let Tok::ConId(_) = self.peek() {
            let (d, s) = self.con_id()?;
            let mut args = Vec::new();
            while self.starts_atype() {
                args.push(self.atype()?);
            }
            let span = s.to(self.prev_span());
            return Ok(RawType::Con(d, args, span));
        }
        self.atype()
    }

    fn atype(&mut self) -> PResult<RawType> {
        match self.peek().clone() {
            Tok::Ident(n) => Ok(RawType::Var(n, self.bump().span)),
            Tok::Num(n) => Ok(RawType::Num(n, self.bump().span)),
            Tok::ConId(d) => Ok(RawType::Con(d, Vec::new(), self.bump().span)),
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            _ => self.unexpected("a type"),
        }
    }

    // ---- expressions ----

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::ConId(_) | Tok::LParen)
    }

    fn expr(&mut self) -> PResult<Expr> {
        match self.peek() {
            Tok::Backslash => self.lambda(),
            Tok::Case => self.case(),
            Tok::Let => self.let_(),
            _ => self.app(),
        }
    }

    fn lambda(&mut self) -> PResult<Expr> {
        let start = self.expect(&Tok::Backslash)?;
        let mut xs = vec![self.binder()?];
        while let Tok::Ident(_) = self.peek() {
            xs.push(self.binder()?);
        }
        self.expect(&Tok::Arrow)?;
        let body = self.expr()?;
        let span = start.to(body.span);
        Ok(wrap_lams(xs.into_iter().map(|(x, _)| x).collect(), body, span))
    }

    fn case(&mut self) -> PResult<Expr> {
        let start = self.expect(&Tok::Case)?;
        let scrut = self.expr()?;
        self.expect(&Tok::Of)?;
        self.expect(&Tok::LBrace)?;
        let mut alts = Vec::new();
        loop {
            if *self.peek() == Tok::RBrace && !alts.is_empty() {
                break;
            }
            let (con, cs) = self.con_id()?;
            let mut binders = Vec::new();
            while let Tok::Ident(_) = self.peek() {
                binders.push(self.binder()?.0);
            }
            self.expect(&Tok::Arrow)?;
            let body = self.expr()?;
            let span = cs.to(body.span);
            alts.push(Alt {
                con,
                binders,
                body,
                span,
            });
            if !self.eat(&Tok::Semi) {
                break;
            }
        }
        let end = self.expect(&Tok::RBrace)?;
        Ok(Expr::new(ExprKind::Case(Box::new(scrut), alts), start.to(end)))
    }

    fn let_(&mut self) -> PResult<Expr> {
        let start = self.expect(&Tok::Let)?;
        let (x, _) = self.binder()?;
        if self.eat(&Tok::Colon) {
            let sig = self.sig()?;
            self.expect(&Tok::Eq)?;
            let rhs = self.expr()?;
            self.expect(&Tok::In)?;
            let body = self.expr()?;
            let span = start.to(body.span);
            // The signature is resolved later; park it and leave its index.
            let idx = self.pending_sigs.len();
            self.pending_sigs.push(sig);
            let placeholder = PolyType::mono(Type::con(format!("{SIG_PLACEHOLDER}{idx}")));
            return Ok(Expr::new(
                ExprKind::LetA(x, placeholder, Box::new(rhs), Box::new(body)),
                span,
            ));
        }
        let mut params = Vec::new();
        while let Tok::Ident(_) = self.peek() {
            params.push(self.binder()?.0);
        }
        self.expect(&Tok::Eq)?;
        let rhs = self.expr()?;
        let rhs_span = rhs.span;
        let rhs = wrap_lams(params, rhs, rhs_span);
        self.expect(&Tok::In)?;
        let body = self.expr()?;
        let span = start.to(body.span);
        let lam = Expr::new(ExprKind::Lam(x, Box::new(body)), span);
        Ok(Expr::new(ExprKind::App(Box::new(lam), Box::new(rhs)), span))
    }

    fn app(&mut self) -> PResult<Expr> {
        let mut f = self.atom()?;
        loop {
            let arg = if self.starts_atom() {
                self.atom()?
            } else if matches!(self.peek(), Tok::Backslash | Tok::Case | Tok::Let) {
                self.expr()?
            } else {
                break;
            };
            let span = f.span.to(arg.span);
            f = Expr::new(ExprKind::App(Box::new(f), Box::new(arg)), span);
        }
        Ok(f)
    }

    fn atom(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Ident(x) if x == "_" => self.unexpected("an expression"),
            Tok::Ident(x) => Ok(Expr::new(ExprKind::Var(x), self.bump().span)),
            // Constructors are bare here; `resolve_expr` saturates them.
            Tok::ConId(c) => Ok(Expr::new(ExprKind::Con(c, Vec::new()), self.bump().span)),
            Tok::LParen => {
                let start = self.bump().span;
                let mut e = self.expr()?;
                let end = self.expect(&Tok::RParen)?;
                e.span = start.to(end);
                Ok(e)
            }
            _ => self.unexpected("an expression"),
        }
    }

    // ---- declarations ----

    fn data(&mut self) -> PResult<RawData> {
        let start = self.expect(&Tok::Data)?;
        let (name, _) = self.con_id()?;
        let mut params = Vec::new();
        while let Tok::Ident(_) = self.peek() {
            params.push(self.ident()?);
        }
        self.expect(&Tok::Where)?;
        self.expect(&Tok::LBrace)?;
        let mut cons = Vec::new();
        while *self.peek() != Tok::RBrace {
            let (cname, cs) = self.con_id()?;
            self.expect(&Tok::Colon)?;
            let ty = self.ty()?;
            let span = cs.to(self.prev_span());
            cons.push(RawCon { name: cname, ty, span });
            if !self.eat(&Tok::Semi) {
                break;
            }
        }
        let end = self.expect(&Tok::RBrace)?;
        Ok(RawData {
            name,
            params,
            cons,
            span: start.to(end),
        })
    }

    fn equation_rest(&mut self) -> PResult<Expr> {
        let mut params = Vec::new();
        while let Tok::Ident(_) = self.peek() {
            params.push(self.binder()?.0);
        }
        self.expect(&Tok::Eq)?;
        let body = self.expr()?;
        let span = body.span;
        Ok(wrap_lams(params, body, span))
    }

    fn binding(&mut self) -> PResult<RawBinding> {
        let (name, start) = self.ident()?;
        if self.eat(&Tok::Colon) {
            let sig = self.sig()?;
            let body = if self.eat(&Tok::Eq) {
                self.expr()?
            } else {
                // `f : A` on its own line, followed by the equation for `f`.
                self.expect(&Tok::Sep)?;
                let (n2, s2) = self.ident()?;
                if n2 != name {
                    return Err(ParseError::new(
                        format!("expected an equation for `{name}` after its signature"),
                        s2,
                    ));
                }
                self.equation_rest()?
            };
            let span = start.to(self.prev_span());
            return Ok(RawBinding {
                name,
                sig: Some(sig),
                body,
                span,
            });
        }
        let body = self.equation_rest()?;
        let span = start.to(self.prev_span());
        Ok(RawBinding {
            name,
            sig: None,
            body,
            span,
        })
    }

    fn end_of_item(&mut self) -> PResult<()> {
        match self.peek() {
            Tok::Sep => {
                self.bump();
                Ok(())
            }
            Tok::Eof => Ok(()),
            _ => self.unexpected("end of declaration (continuation lines must be indented)"),
        }
    }
}

fn wrap_lams(xs: Vec<Name>, body: Expr, span: Span) -> Expr {
    xs.into_iter()
        .rev()
        .fold(body, |acc, x| Expr::new(ExprKind::Lam(x, Box::new(acc)), span))
}

// ---- resolution ----

fn data_sorts(raws: &[RawData]) -> PResult<HashMap<Name, Vec<bool>>> {
    fn arrow_mults(t: &RawType, out: &mut HashSet<Name>) {
        match t {
            RawType::Arrow(a, m, b) => {
                if let RawMult::Var(n, _) = m {
                    out.insert(n.clone());
                }
                arrow_mults(a, out);
                arrow_mults(b, out);
            }
            RawType::Con(_, args, _) => args.iter().for_each(|a| arrow_mults(a, out)),
            _ => {}
        }
    }
    fn apps<'a>(t: &'a RawType, out: &mut Vec<(&'a Name, &'a [RawType])>) {
        match t {
            RawType::Arrow(a, _, b) => {
                apps(a, out);
                apps(b, out);
            }
            RawType::Con(d, args, _) => {
                out.push((d, args));
                args.iter().for_each(|a| apps(a, out));
            }
            _ => {}
        }
    }
    let mut mults: HashMap<&Name, HashSet<Name>> = HashMap::new();
    for d in raws {
        let mut s = HashSet::new();
        for c in &d.cons {
            arrow_mults(&c.ty, &mut s);
        }
        mults.insert(&d.name, s);
    }
    loop {
        let mut changed = false;
        for d in raws {
            let mut found = Vec::new();
            for c in &d.cons {
                let mut v = Vec::new();
                apps(&c.ty, &mut v);
                for (e, args) in v {
                    let Some(e_decl) = raws.iter().find(|r| &r.name == e) else {
                        continue;
                    };
                    for (i, a) in args.iter().enumerate() {
                        let Some((p, _)) = e_decl.params.get(i) else { continue };
                        if mults[e].contains(p) {
                            if let RawType::Var(n, _) = a {
                                found.push(n.clone());
                            }
                        }
                    }
                }
            }
            let set = mults.get_mut(&d.name).unwrap();
            for n in found {
                if d.params.iter().any(|(p, _)| *p == n) && set.insert(n) {
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut out = HashMap::new();
    for d in raws {
        let flags: Vec<bool> = d.params.iter().map(|(p, _)| mults[&d.name].contains(p)).collect();
        if let Some(i) = flags.iter().position(|m| !m) {
            if let Some((p, s)) = d.params.iter().skip(i).find(|(p, _)| mults[&d.name].contains(p)) {
                return Err(ParseError::new(
                    format!(
                        "multiplicity parameter `{p}` of `{}` must come before its type parameters",
                        d.name
                    ),
                    *s,
                ));
            }
        }
        out.insert(d.name.clone(), flags);
    }
    Ok(out)
}

/// Converts raw types once arities are known; `sorts` records the sort of
/// each variable on first use.
struct TypeResolver<'a> {
    arities: &'a dyn Fn(&str) -> Option<(usize, usize)>,
    seen: IndexMap<Name, (bool, Span)>,
}

impl TypeResolver<'_> {
    fn note(&mut self, n: &Name, is_mult: bool, span: Span) -> PResult<()> {
        match self.seen.get(n) {
            Some((m, _)) if *m != is_mult => Err(ParseError::new(
                format!("`{n}` is used both as a multiplicity and as a type"),
                span,
            )),
            Some(_) => Ok(()),
            None => {
                self.seen.insert(n.clone(), (is_mult, span));
                Ok(())
            }
        }
    }

    fn mult(&mut self, m: &RawMult) -> PResult<Mult> {
        Ok(match m {
            RawMult::One => Mult::One,
            RawMult::Omega => Mult::Omega,
            RawMult::Var(n, s) => {
                self.note(n, true, *s)?;
                Mult::rigid(n.clone())
            }
        })
    }

    fn mult_arg(&mut self, t: &RawType) -> PResult<Mult> {
        match t {
            RawType::Num(n, _) if n == "1" => Ok(Mult::One),
            RawType::Var(n, _) if n == "w" => Ok(Mult::Omega),
            RawType::Var(n, s) => self.mult(&RawMult::Var(n.clone(), *s)),
            other => Err(ParseError::new("expected a multiplicity argument", other.span())),
        }
    }

    fn ty(&mut self, t: &RawType) -> PResult<Type> {
        match t {
            RawType::Var(n, s) => {
                if n == "w" {
                    return Err(ParseError::new("`w` is reserved for the multiplicity ω", *s));
                }
                self.note(n, false, *s)?;
                Ok(Type::rigid(n.clone()))
            }
            RawType::Num(_, s) => Err(ParseError::new("expected a type, found a number", *s)),
            RawType::Arrow(a, m, b) => {
                let a = self.ty(a)?;
                let m = self.mult(m)?;
                let b = self.ty(b)?;
                Ok(Type::arrow(a, m, b))
            }
            RawType::Con(d, args, s) => {
                let Some((nm, nt)) = (self.arities)(d) else {
                    return Err(ParseError::new(format!("unknown type `{d}`"), *s));
                };
                if args.len() != nm + nt {
                    return Err(ParseError::new(
                        format!("`{d}` expects {} argument(s), found {}", nm + nt, args.len()),
                        *s,
                    ));
                }
                let ms = args[..nm]
                    .iter()
                    .map(|a| self.mult_arg(a))
                    .collect::<PResult<Vec<_>>>()?;
                let ts = args[nm..].iter().map(|a| self.ty(a)).collect::<PResult<Vec<_>>>()?;
                Ok(Type::data(d.clone(), ms, ts))
            }
        }
    }

    fn product(&mut self, ms: &[RawMult]) -> PResult<Product> {
        Ok(Product::from_factors(
            ms.iter().map(|m| self.mult(m)).collect::<PResult<Vec<_>>>()?,
        ))
    }
}

fn resolve_sig(sig: &RawSig, arities: &dyn Fn(&str) -> Option<(usize, usize)>) -> PResult<PolyType> {
    let mut r = TypeResolver {
        arities,
        seen: IndexMap::new(),
    };
    let body = r.ty(&sig.body)?;
    let mut context = Given::top();
    for (l, rr) in &sig.context {
        let l = r.product(l)?;
        let rr = r.product(rr)?;
        context.insert(Predicate::new(l, rr));
    }
    let (mult_binders, type_binders) = match &sig.forall {
        None => {
            let ms = r.seen.iter().filter(|(_, (m, _))| *m).map(|(n, _)| n.clone()).collect();
            let ts = r
                .seen
                .iter()
                .filter(|(_, (m, _))| !*m)
                .map(|(n, _)| n.clone())
                .collect();
            (ms, ts)
        }
        Some(bs) => {
            let mut seen_b = HashSet::new();
            for (b, s) in bs {
                if !seen_b.insert(b) {
                    return Err(ParseError::new(format!("`{b}` is bound twice"), *s));
                }
            }
            for (n, (_, s)) in &r.seen {
                if !bs.iter().any(|(b, _)| b == n) {
                    return Err(ParseError::new(
                        format!("type variable `{n}` is not bound by `forall`"),
                        *s,
                    ));
                }
            }
            let is_mult = |b: &Name| r.seen.get(b).is_some_and(|(m, _)| *m);
            let ms = bs.iter().filter(|(b, _)| is_mult(b)).map(|(b, _)| b.clone()).collect();
            let ts = bs.iter().filter(|(b, _)| !is_mult(b)).map(|(b, _)| b.clone()).collect();
            (ms, ts)
        }
    };
    Ok(PolyType {
        mult_binders,
        type_binders,
        context,
        body,
    })
}

fn resolve_data(raws: &[RawData]) -> PResult<DataEnv> {
    let sorts = data_sorts(raws)?;
    let mut seen_data = HashSet::new();
    let mut seen_con = HashSet::new();
    for d in raws {
        if !seen_data.insert(&d.name) {
            return Err(ParseError::new(
                format!("duplicate data declaration `{}`", d.name),
                d.span,
            ));
        }
        for c in &d.cons {
            if !seen_con.insert(&c.name) {
                return Err(ParseError::new(format!("duplicate constructor `{}`", c.name), c.span));
            }
        }
    }
    let arities = |d: &str| {
        sorts.get(d).map(|flags| {
            let nm = flags.iter().filter(|m| **m).count();
            (nm, flags.len() - nm)
        })
    };
    let mut env = DataEnv::new();
    for d in raws {
        let flags = &sorts[&d.name];
        let mult_params: Vec<Name> = d
            .params
            .iter()
            .zip(flags)
            .filter(|(_, m)| **m)
            .map(|((p, _), _)| p.clone())
            .collect();
        let type_params: Vec<Name> = d
            .params
            .iter()
            .zip(flags)
            .filter(|(_, m)| !**m)
            .map(|((p, _), _)| p.clone())
            .collect();
        let mut cons = Vec::new();
        for c in &d.cons {
            let mut r = TypeResolver {
                arities: &arities,
                seen: IndexMap::new(),
            };
            let ty = r.ty(&c.ty)?;
            for (n, (_, s)) in &r.seen {
                if !d.params.iter().any(|(p, _)| p == n) {
                    return Err(ParseError::new(format!("`{n}` is not a parameter of `{}`", d.name), *s));
                }
            }
            let mut fields = Vec::new();
            let mut t = ty;
            while let Type::Arrow(a, m, b) = t {
                fields.push((*a, m));
                t = *b;
            }
            let decl = DataDecl {
                name: d.name.clone(),
                mult_params: mult_params.clone(),
                type_params: type_params.clone(),
                constructors: Vec::new(),
                span: d.span,
            };
            if t != decl.result_type() {
                return Err(ParseError::new(
                    format!("constructor `{}` must return `{}`", c.name, decl.result_type()),
                    c.span,
                ));
            }
            cons.push(ConDecl {
                name: c.name.clone(),
                fields,
                span: c.span,
            });
        }
        env.insert(DataDecl {
            name: d.name.clone(),
            mult_params,
            type_params,
            constructors: cons,
            span: d.span,
        });
    }
    Ok(env)
}

struct ExprResolver<'a> {
    data: &'a DataEnv,
    sigs: &'a [PolyType],
    fresh: usize,
}

impl ExprResolver<'_> {
    fn go(&mut self, e: Expr) -> PResult<Expr> {
        let span = e.span;
        match e.kind {
            ExprKind::App(..) | ExprKind::Con(..) => {
                let mut args = Vec::new();
                let mut head = e;
                while let ExprKind::App(f, a) = head.kind {
                    args.push(*a);
                    head = *f;
                }
                args.reverse();
                let mut args = args.into_iter().map(|a| self.go(a)).collect::<PResult<Vec<_>>>()?;
                let mut f = match head.kind {
                    ExprKind::Con(c, _) => {
                        let Some(info) = self.data.con(&c) else {
                            return Err(ParseError::new(format!("unknown constructor `{c}`"), head.span));
                        };
                        let n = info.arity();
                        if args.len() >= n {
                            let rest = args.split_off(n);
                            let con = Expr::new(ExprKind::Con(c, args), span);
                            args = rest;
                            con
                        } else {
                            // eta-expand to saturate
                            let extra: Vec<Name> = (args.len()..n)
                                .map(|_| {
                                    self.fresh += 1;
                                    format!("eta%{}", self.fresh)
                                })
                                .collect();
                            let mut full = std::mem::take(&mut args);
                            full.extend(extra.iter().map(|x| Expr::new(ExprKind::Var(x.clone()), span)));
                            wrap_lams(extra, Expr::new(ExprKind::Con(c, full), span), span)
                        }
                    }
                    _ => self.go(head)?,
                };
                for a in args {
                    let s = f.span.to(a.span);
                    f = Expr::new(ExprKind::App(Box::new(f), Box::new(a)), s);
                }
                Ok(f)
            }
            ExprKind::Var(_) => Ok(e),
            ExprKind::Lam(x, b) => Ok(Expr::new(ExprKind::Lam(x, Box::new(self.go(*b)?)), span)),
            ExprKind::Case(s, alts) => {
                let s = self.go(*s)?;
                let alts = alts
                    .into_iter()
                    .map(|a| {
                        Ok(Alt {
                            body: self.go(a.body)?,
                            ..a
                        })
                    })
                    .collect::<PResult<Vec<_>>>()?;
                Ok(Expr::new(ExprKind::Case(Box::new(s), alts), span))
            }
            ExprKind::LetA(x, placeholder, r, b) => {
                let sig = match &placeholder.body {
                    Type::Data(n, _, _) if n.starts_with(SIG_PLACEHOLDER) => {
                        let i: usize = n[SIG_PLACEHOLDER.len()..].parse().expect("placeholder index");
                        self.sigs[i].clone()
                    }
                    _ => placeholder,
                };
                Ok(Expr::new(
                    ExprKind::LetA(x, sig, Box::new(self.go(*r)?), Box::new(self.go(*b)?)),
                    span,
                ))
            }
        }
    }
}

/// Parse a whole `.lin` program.
pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    let mut p = Parser::new(src)?;
    let mut raw_data = Vec::new();
    let mut raw_binds = Vec::new();
    while *p.peek() != Tok::Eof {
        match p.peek() {
            Tok::Data => raw_data.push(p.data()?),
            Tok::Ident(_) => raw_binds.push(p.binding()?),
            Tok::Sep => {
                p.bump();
                continue;
            }
            _ => return p.unexpected("a declaration"),
        }
        p.end_of_item()?;
    }
    let data = resolve_data(&raw_data)?;
    let arities = |d: &str| data.arity(d);
    let sigs = p
        .pending_sigs
        .iter()
        .map(|s| resolve_sig(s, &arities))
        .collect::<PResult<Vec<_>>>()?;
    let mut r = ExprResolver {
        data: &data,
        sigs: &sigs,
        fresh: 0,
    };
    let mut names = HashSet::new();
    let mut bindings = Vec::new();
    for b in raw_binds {
        if !names.insert(b.name.clone()) {
            return Err(ParseError::new(format!("duplicate binding `{}`", b.name), b.span));
        }
        let sig = match &b.sig {
            Some(s) => Some(resolve_sig(s, &arities)?),
            None => None,
        };
        bindings.push(Binding {
            name: b.name,
            sig,
            body: r.go(b.body)?,
            span: b.span,
        });
    }
    Ok(Program {
        data: data.decls().cloned().collect(),
        bindings,
    })
}

fn expect_eof(p: &mut Parser) -> PResult<()> {
    while p.eat(&Tok::Sep) {}
    if *p.peek() != Tok::Eof {
        return p.unexpected("end of input");
    }
    Ok(())
}

/// Parse a signature such as `forall p a. (p <= 1) => a ->[p] a`. Names not
/// under a `forall` are quantified implicitly, in order of first use.
pub fn parse_type(src: &str, data: &DataEnv) -> Result<PolyType, ParseError> {
    let mut p = Parser::new(src)?;
    let sig = p.sig()?;
    expect_eof(&mut p)?;
    resolve_sig(&sig, &|d| data.arity(d))
}

/// Parse a single expression against already-declared datatypes.
pub fn parse_expr(src: &str, data: &DataEnv) -> Result<Expr, ParseError> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    expect_eof(&mut p)?;
    let sigs = p
        .pending_sigs
        .iter()
        .map(|s| resolve_sig(s, &|d| data.arity(d)))
        .collect::<PResult<Vec<_>>>()?;
    ExprResolver {
        data,
        sigs: &sigs,
        fresh: 0,
    }
    .go(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PRELUDE: &str = "\
data List a where { Nil : List a ; Cons : a -o List a -o List a }
data Pair a b where { Pair : a -o b -o Pair a b }
data Many p a where { MkMany : a ->[p] Many p a }
";

    fn prelude() -> DataEnv {
        DataEnv::from_decls(&parse_program(PRELUDE).unwrap().data)
    }

    #[test]
    fn equation_sugar() {
        let p = parse_program("app f x = f x").unwrap();
        let b = &p.bindings[0];
        assert_eq!(b.name, "app");
        assert!(b.sig.is_none());
        let ExprKind::Lam(f, body) = &b.body.kind else { panic!() };
        assert_eq!(f, "f");
        let ExprKind::Lam(x, body) = &body.kind else { panic!() };
        assert_eq!(x, "x");
        assert!(matches!(body.kind, ExprKind::App(..)));
    }

    #[test]
    fn many_has_a_multiplicity_parameter() {
        let p = parse_program("data Many p a where { MkMany : a ->[p] Many p a }").unwrap();
        let d = &p.data[0];
        assert_eq!(d.mult_params, vec!["p"]);
        assert_eq!(d.type_params, vec!["a"]);
        assert_eq!(d.constructors[0].fields, vec![(Type::rigid("a"), Mult::rigid("p"))]);
    }

    #[test]
    fn annotated_binding() {
        let p = parse_program("f : forall p a. (p <= 1) => a ->[p] a = \\x -> x").unwrap();
        let sig = p.bindings[0].sig.as_ref().unwrap();
        assert_eq!(sig.mult_binders, vec!["p"]);
        assert_eq!(sig.type_binders, vec!["a"]);
        assert_eq!(sig.context.len(), 1);
    }

    #[test]
    fn implicit_binders_and_arrow_sugar() {
        let d = DataEnv::new();
        let a = parse_type("(a ->[p] b) ->[q] a ->[r] b", &d).unwrap();
        assert_eq!(a.mult_binders, vec!["p", "q", "r"]);
        assert_eq!(a.type_binders, vec!["a", "b"]);
        let a = parse_type("a -> b", &d).unwrap();
        assert_eq!(a.body, Type::arrow(Type::rigid("a"), Mult::Omega, Type::rigid("b")));
        let l = parse_type("List a -o List a", &prelude()).unwrap();
        let list = Type::data("List", vec![], vec![Type::rigid("a")]);
        assert_eq!(l.body, Type::arrow(list.clone(), Mult::One, list));
    }

    #[test]
    fn context_backtracking() {
        let d = prelude();
        let a = parse_type("(a ->[p] b) -> a", &d).unwrap();
        assert!(a.context.is_top());
        let b = parse_type("(p * q <= r, p <= 1) => a ->[p] a ->[q] a ->[r] a", &d).unwrap();
        assert_eq!(b.context.len(), 2);
    }

    #[test]
    fn unbound_under_forall_is_an_error() {
        assert!(parse_type("forall a. a ->[p] a", &DataEnv::new()).is_err());
    }

    #[test]
    fn product_annotation_rejected() {
        let e = parse_type("a ->[p * q] a", &DataEnv::new()).unwrap_err();
        assert!(e.message.contains("single multiplicity"));
    }

    #[test]
    fn constructors_are_saturated() {
        let d = prelude();
        let e = parse_expr("Cons x", &d).unwrap();
        let ExprKind::Lam(v, body) = &e.kind else {
            panic!("{e:?}")
        };
        let ExprKind::Con(c, args) = &body.kind else { panic!() };
        assert_eq!(c, "Cons");
        assert_eq!(args.len(), 2);
        assert_eq!(args[1].kind, ExprKind::Var(v.clone()));
        let e = parse_expr("Pair x y z", &d).unwrap();
        assert!(matches!(e.kind, ExprKind::App(..)));
    }

    #[test]
    fn constructor_declared_after_use() {
        let p = parse_program("one = Cons U Nil\ndata U where { U : U }\n".to_string().as_str());
        assert!(p.is_err(), "List is undeclared here");
        let src = format!("one = Cons U Nil\ndata U where {{ U : U }}\n{PRELUDE}");
        let p = parse_program(&src).unwrap();
        assert!(matches!(&p.bindings[0].body.kind, ExprKind::Con(c, a) if c == "Cons" && a.len() == 2));
    }

    #[test]
    fn unannotated_let_desugars() {
        let e = parse_expr("let y = x in y", &DataEnv::new()).unwrap();
        let ExprKind::App(f, a) = &e.kind else { panic!() };
        assert!(matches!(&f.kind, ExprKind::Lam(y, _) if y == "y"));
        assert_eq!(a.kind, ExprKind::Var("x".into()));
    }

    #[test]
    fn annotated_let() {
        let e = parse_expr("let g : forall a. a -o a = \\z -> z in g", &DataEnv::new()).unwrap();
        let ExprKind::LetA(x, sig, _, _) = &e.kind else {
            panic!()
        };
        assert_eq!(x, "g");
        assert_eq!(sig.type_binders, vec!["a"]);
    }

    #[test]
    fn signature_on_its_own_line() {
        let p = parse_program("id : a -o a\nid x = x\n").unwrap();
        assert_eq!(p.bindings.len(), 1);
        assert!(p.bindings[0].sig.is_some());
    }

    #[test]
    fn layout_requires_indentation() {
        assert!(parse_program("f x =\n  x\ng = f\n").is_ok());
        let e = parse_program("f x =\nx\n").unwrap_err();
        assert_eq!(e.span.start, 6);
    }

    #[test]
    fn duplicate_binding() {
        let e = parse_program("f = g\nf = g\n").unwrap_err();
        assert!(e.message.contains("duplicate"));
    }

    #[test]
    fn mult_params_must_come_first() {
        let e = parse_program("data M a p where { M : a ->[p] M a p }").unwrap_err();
        assert!(e.message.contains("before"));
    }

    #[test]
    fn case_alternatives() {
        let d = prelude();
        let e = parse_expr("case xs of { Nil -> Nil ; Cons y ys -> ys ; }", &d).unwrap();
        let ExprKind::Case(_, alts) = &e.kind else { panic!() };
        assert_eq!(alts.len(), 2);
        assert_eq!(alts[1].binders, vec!["y", "ys"]);
    }
}
