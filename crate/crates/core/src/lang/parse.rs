//! Lexer and recursive-descent parser for the concrete grammar:
//!
//! ```text
//! e ::= let x = e in e | if v then e else e | new | v | v v'
//! v ::= x | true | false | <int> | fix f(x:T):T'. e | fun (x:T). e
//!     | v + v' | v = v' | (e)        -- parenthesized values only
//! T ::= int | bool | name | T -> T'  -- right-associative
//! ```
//!
//! `+` binds tighter than `=`; `=` does not associate. A parenthesized
//! computation is legal wherever a computation is expected, but a
//! computation in value position is a syntax error.

use super::ast::{Comp, SelfRef, Type, Value};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at line {line}, column {col}: {message}")]
pub struct SyntaxError {
    pub message: String,
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Let,
    In,
    If,
    Then,
    Else,
    New,
    Fix,
    Fun,
    True,
    False,
    Ident(String),
    Num(i64),
    Plus,
    Equals,
    LParen,
    RParen,
    Colon,
    Dot,
    Arrow,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Let => write!(f, "'let'"),
            Tok::In => write!(f, "'in'"),
            Tok::If => write!(f, "'if'"),
            Tok::Then => write!(f, "'then'"),
            Tok::Else => write!(f, "'else'"),
            Tok::New => write!(f, "'new'"),
            Tok::Fix => write!(f, "'fix'"),
            Tok::Fun => write!(f, "'fun'"),
            Tok::True => write!(f, "'true'"),
            Tok::False => write!(f, "'false'"),
            Tok::Ident(s) => write!(f, "identifier '{s}'"),
            Tok::Num(n) => write!(f, "integer '{n}'"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Equals => write!(f, "'='"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Colon => write!(f, "':'"),
            Tok::Dot => write!(f, "'.'"),
            Tok::Arrow => write!(f, "'->'"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        match c {
            '+' => {
                toks.push((Tok::Plus, start));
                i += 1;
            }
            '=' => {
                toks.push((Tok::Equals, start));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, start));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, start));
                i += 1;
            }
            ':' => {
                toks.push((Tok::Colon, start));
                i += 1;
            }
            '.' => {
                toks.push((Tok::Dot, start));
                i += 1;
            }
            '-' => {
                if i + 1 < bytes.len() && (bytes[i + 1] as char) == '>' {
                    toks.push((Tok::Arrow, start));
                    i += 2;
                } else if i + 1 < bytes.len() && (bytes[i + 1] as char).is_ascii_digit() {
                    i += 1;
                    let ds = i;
                    while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                        i += 1;
                    }
                    let n: i64 = src[ds..i].parse().map_err(|_| at(src, start, "integer literal out of range"))?;
                    toks.push((Tok::Num(-n), start));
                } else {
                    return Err(at(src, start, "expected '->' or a negative integer after '-'"));
                }
            }
            d if d.is_ascii_digit() => {
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let n: i64 = src[start..i]
                    .parse()
                    .map_err(|_| at(src, start, "integer literal out of range"))?;
                toks.push((Tok::Num(n), start));
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                while i < bytes.len() {
                    let c = bytes[i] as char;
                    if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                        i += 1;
                    } else {
                        break;
                    }
                }
                let word = &src[start..i];
                let tok = match word {
                    "let" => Tok::Let,
                    "in" => Tok::In,
                    "if" => Tok::If,
                    "then" => Tok::Then,
                    "else" => Tok::Else,
                    "new" => Tok::New,
                    "fix" => Tok::Fix,
                    "fun" => Tok::Fun,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(word.to_string()),
                };
                toks.push((tok, start));
            }
            other => {
                return Err(at(src, start, &format!("unexpected character '{other}'")));
            }
        }
    }
    toks.push((Tok::Eof, src.len()));
    Ok(toks)
}

fn at(src: &str, offset: usize, message: &str) -> SyntaxError {
    let mut line = 1;
    let mut col = 1;
    for (i, c) in src.char_indices() {
        if i >= offset {
            break;
        }
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    SyntaxError {
        message: message.to_string(),
        line,
        col,
    }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> SyntaxError {
        at(self.src, self.offset(), &message.into())
    }

    fn expect(&mut self, want: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(self.err(format!("expected {want}, found {}", self.peek())))
        }
    }

    fn expect_ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            other => Err(self.err(format!("expected an identifier, found {other}"))),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Ident(_)
                | Tok::Num(_)
                | Tok::True
                | Tok::False
                | Tok::Fix
                | Tok::Fun
                | Tok::LParen
        )
    }

    fn ty(&mut self) -> Result<Type, SyntaxError> {
        let lhs = self.ty_atom()?;
        if *self.peek() == Tok::Arrow {
            self.next();
            let rhs = self.ty()?;
            Ok(Type::arrow(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn ty_atom(&mut self) -> Result<Type, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) => match s.as_str() {
                "int" => {
                    self.next();
                    Ok(Type::Int)
                }
                "bool" => {
                    self.next();
                    Ok(Type::Bool)
                }
                "name" => {
                    self.next();
                    Ok(Type::Name)
                }
                other => Err(self.err(format!("unknown type '{other}'"))),
            },
            Tok::LParen => {
                self.next();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            other => Err(self.err(format!("expected a type, found {other}"))),
        }
    }

    fn comp(&mut self) -> Result<Comp, SyntaxError> {
        match self.peek().clone() {
            Tok::Let => {
                self.next();
                let var = self.expect_ident()?;
                self.expect(Tok::Equals)?;
                let bound = self.comp()?;
                self.expect(Tok::In)?;
                let body = self.comp()?;
                Ok(Comp::let_in(&var, bound, body))
            }
            Tok::If => {
                self.next();
                let cond = self.value()?;
                self.expect(Tok::Then)?;
                let then_branch = self.comp()?;
                self.expect(Tok::Else)?;
                let else_branch = self.comp()?;
                Ok(Comp::if_then_else(cond, then_branch, else_branch))
            }
            Tok::New => {
                self.next();
                Ok(Comp::New)
            }
            Tok::LParen => {
                self.next();
                let inner = self.comp()?;
                self.expect(Tok::RParen)?;
                match inner {
                    // a parenthesized value may continue as an operand or callee
                    Comp::Ret(v) => {
                        let v = self.value_from(v)?;
                        self.after_value(v)
                    }
                    other => Ok(other),
                }
            }
            _ => {
                let v = self.value()?;
                self.after_value(v)
            }
        }
    }

    /// A computation that begins with a complete value: either a returned
    /// value or a single application `v v'`.
    fn after_value(&mut self, v: Value) -> Result<Comp, SyntaxError> {
        if self.starts_atom() {
            let arg = self.value()?;
            if self.starts_atom() {
                return Err(self.err(
                    "chained application is not a computation; bind the first application with let",
                ));
            }
            Ok(Comp::App(v, arg))
        } else {
            Ok(Comp::Ret(v))
        }
    }

    fn value(&mut self) -> Result<Value, SyntaxError> {
        let first = self.atom()?;
        self.value_from(first)
    }

    /// Continues value parsing after an initial atom: `+` chains, then an
    /// optional `=` comparison.
    fn value_from(&mut self, first: Value) -> Result<Value, SyntaxError> {
        let mut v = first;
        while *self.peek() == Tok::Plus {
            self.next();
            let rhs = self.atom()?;
            v = Value::plus(v, rhs);
        }
        if *self.peek() == Tok::Equals {
            self.next();
            let mut rhs = self.atom()?;
            while *self.peek() == Tok::Plus {
                self.next();
                let r = self.atom()?;
                rhs = Value::plus(rhs, r);
            }
            v = Value::eq(v, rhs);
        }
        Ok(v)
    }

    fn atom(&mut self) -> Result<Value, SyntaxError> {
        match self.peek().clone() {
            Tok::True => {
                self.next();
                Ok(Value::Bool(true))
            }
            Tok::False => {
                self.next();
                Ok(Value::Bool(false))
            }
            Tok::Num(n) => {
                self.next();
                Ok(Value::Int(n))
            }
            Tok::Ident(x) => {
                self.next();
                Ok(Value::Var(x))
            }
            Tok::Fix => {
                self.next();
                let fname = self.expect_ident()?;
                self.expect(Tok::LParen)?;
                let param = self.expect_ident()?;
                self.expect(Tok::Colon)?;
                let param_ty = self.ty()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::Colon)?;
                let ret_ty = self.ty()?;
                self.expect(Tok::Dot)?;
                let body = self.comp()?;
                Ok(Value::Fix {
                    self_ref: Some(SelfRef {
                        name: fname,
                        ret_ty,
                    }),
                    param,
                    param_ty,
                    body: std::sync::Arc::new(body),
                })
            }
            Tok::Fun => {
                self.next();
                self.expect(Tok::LParen)?;
                let param = self.expect_ident()?;
                self.expect(Tok::Colon)?;
                let param_ty = self.ty()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::Dot)?;
                let body = self.comp()?;
                Ok(Value::Fix {
                    self_ref: None,
                    param,
                    param_ty,
                    body: std::sync::Arc::new(body),
                })
            }
            Tok::LParen => {
                self.next();
                let inner = self.comp()?;
                self.expect(Tok::RParen)?;
                match inner {
                    Comp::Ret(v) => Ok(v),
                    _ => Err(self.err("a computation may not appear in value position")),
                }
            }
            other => Err(self.err(format!("expected a value, found {other}"))),
        }
    }
}

fn finish<T>(p: Parser<'_>, item: T) -> Result<T, SyntaxError> {
    if *p.peek() == Tok::Eof {
        Ok(item)
    } else {
        Err(p.err(format!("expected end of input, found {}", p.peek())))
    }
}

/// Parses a computation. A bare value parses as the computation returning it.
pub fn parse_comp(src: &str) -> Result<Comp, SyntaxError> {
    let toks = lex(src)?;
    let mut p = Parser { src, toks, pos: 0 };
    let e = p.comp()?;
    finish(p, e)
}

/// Parses a value; rejects computations.
pub fn parse_value(src: &str) -> Result<Value, SyntaxError> {
    let toks = lex(src)?;
    let mut p = Parser { src, toks, pos: 0 };
    let v = p.value()?;
    finish(p, v)
}

pub fn parse_type(src: &str) -> Result<Type, SyntaxError> {
    let toks = lex(src)?;
    let mut p = Parser { src, toks, pos: 0 };
    let t = p.ty()?;
    finish(p, t)
}
