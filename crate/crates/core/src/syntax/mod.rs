//! Surface syntax of `.lin` programs.
//!
//! ```text
//! data List a where { Nil : List a ; Cons : a -o List a -o List a }
//!
//! map f xs = case xs of
//!   { Nil -> Nil
//!   ; Cons y ys -> Cons (f y) (map f ys) }
//!
//! app : forall p q r a b. (p <= r) => (a ->[p] b) ->[q] a ->[r] b
//! app f x = f x
//! ```
//!
//! A token in column 1 starts a new declaration, so continuation lines must
//! be indented. `->` is `->[w]` and `-o` is `->[1]`.

mod ast;
mod lexer;
mod parser;
mod pretty;

use std::fmt;

pub use ast::{Alt, Binding, ConDecl, ConInfo, DataDecl, DataEnv, Expr, ExprKind, Program};
pub use lexer::{lex, Tok, Token};
pub use parser::{parse_expr, parse_program, parse_type};
pub use pretty::{canonical_polytype, pretty_expr, pretty_polytype};

/// Byte range in the source text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn to(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }

    /// 1-based line and column (in characters) of `start`.
    pub fn line_col(&self, src: &str) -> (usize, usize) {
        line_col(src, self.start)
    }
}

pub fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(src.len());
    let before = &src[..offset];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map_or(0, |i| i + 1);
    let col = src[line_start..offset].chars().count() + 1;
    (line, col)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{message}")]
pub struct ParseError {
    pub message: String,
    pub span: Span,
}

impl ParseError {
    pub fn new(message: impl Into<String>, span: Span) -> Self {
        ParseError {
            message: message.into(),
            span,
        }
    }

    /// `line:col: message`
    pub fn render(&self, src: &str) -> String {
        let (l, c) = self.span.line_col(src);
        format!("{l}:{c}: {}", self.message)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_col_counts_from_one() {
        let src = "ab\ncd\n";
        assert_eq!(line_col(src, 0), (1, 1));
        assert_eq!(line_col(src, 4), (2, 2));
        assert_eq!(line_col(src, 6), (3, 1));
        assert_eq!(line_col(src, 99), (3, 1));
    }
}
