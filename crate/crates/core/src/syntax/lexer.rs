use std::fmt;

use super::{ParseError, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    /// Lowercase-initial identifier (or `_`).
    Ident(String),
    /// Uppercase-initial identifier.
    ConId(String),
    Num(String),
    Forall,
    Case,
    Of,
    Let,
    In,
    Data,
    Where,
    Backslash,
    /// `->`
    Arrow,
    /// `->[`
    ArrowOpen,
    /// `-o`
    Lolli,
    /// `=>`
    FatArrow,
    /// `<=`
    Le,
    Eq,
    Colon,
    Semi,
    Comma,
    Dot,
    Star,
    LParen,
    RParen,
    LBrace,
    RBrace,
    RBracket,
    /// Inserted before every token that starts in column 1, except the first.
    Sep,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) | Tok::ConId(s) | Tok::Num(s) => return write!(f, "`{s}`"),
            Tok::Forall => "`forall`",
            Tok::Case => "`case`",
            Tok::Of => "`of`",
            Tok::Let => "`let`",
            Tok::In => "`in`",
            Tok::Data => "`data`",
            Tok::Where => "`where`",
            Tok::Backslash => "`\\`",
            Tok::Arrow => "`->`",
            Tok::ArrowOpen => "`->[`",
            Tok::Lolli => "`-o`",
            Tok::FatArrow => "`=>`",
            Tok::Le => "`<=`",
            Tok::Eq => "`=`",
            Tok::Colon => "`:`",
            Tok::Semi => "`;`",
            Tok::Comma => "`,`",
            Tok::Dot => "`.`",
            Tok::Star => "`*`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::RBracket => "`]`",
            Tok::Sep => "start of a new declaration",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn keyword(s: &str) -> Option<Tok> {
    Some(match s {
        "forall" => Tok::Forall,
        "case" => Tok::Case,
        "of" => Tok::Of,
        "let" => Tok::Let,
        "in" => Tok::In,
        "data" => Tok::Data,
        "where" => Tok::Where,
        _ => return None,
    })
}

/// Tokenize `src`. The result always ends with [`Tok::Eof`].
pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out: Vec<Token> = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    let mut line_start = true;
    let mut col1 = true;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let peek = chars.get(i + 1).map(|&(_, c)| c);
        if c == '\n' {
            line_start = true;
            col1 = true;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col1 = false;
            i += 1;
            continue;
        }
        if c == '-' && peek == Some('-') {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        if line_start && col1 && !out.is_empty() {
            out.push(Token {
                tok: Tok::Sep,
                span: Span::new(pos, pos),
            });
        }
        line_start = false;
        col1 = false;
        let start = pos;
        let mut j = i + 1;
        let tok = if c.is_alphabetic() || c == '_' {
            while j < chars.len() && is_ident_char(chars[j].1) {
                j += 1;
            }
            let end = chars.get(j).map_or(src.len(), |&(p, _)| p);
            let s = &src[start..end];
            match keyword(s) {
                Some(k) => k,
                None if c.is_uppercase() => Tok::ConId(s.to_string()),
                None => Tok::Ident(s.to_string()),
            }
        } else if c.is_ascii_digit() {
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let end = chars.get(j).map_or(src.len(), |&(p, _)| p);
            Tok::Num(src[start..end].to_string())
        } else {
            let two = |a: char| peek == Some(a);
            match c {
                '-' if two('>') => {
                    j += 1;
                    if chars.get(j).map(|&(_, c)| c) == Some('[') {
                        j += 1;
                        Tok::ArrowOpen
                    } else {
                        Tok::Arrow
                    }
                }
                '-' if two('o') && !chars.get(i + 2).is_some_and(|&(_, c)| is_ident_char(c)) => {
                    j += 1;
                    Tok::Lolli
                }
                '=' if two('>') => {
                    j += 1;
                    Tok::FatArrow
                }
                '<' if two('=') => {
                    j += 1;
                    Tok::Le
                }
                '\\' => Tok::Backslash,
                '=' => Tok::Eq,
                ':' => Tok::Colon,
                ';' => Tok::Semi,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                '*' => Tok::Star,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ']' => Tok::RBracket,
                _ => {
                    return Err(ParseError::new(
                        format!("unexpected character `{c}`"),
                        Span::new(start, start + c.len_utf8()),
                    ))
                }
            }
        };
        let end = chars.get(j).map_or(src.len(), |&(p, _)| p);
        out.push(Token {
            tok,
            span: Span::new(start, end),
        });
        i = j;
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span::new(src.len(), src.len()),
    });
    Ok(out)
}
