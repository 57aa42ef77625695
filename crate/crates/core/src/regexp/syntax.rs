//! Textual syntax for weighted expressions.
//!
//! ```text
//! program   := statement ((';' | newline) statement)*
//! statement := name '=' sum | sum
//! sum       := product ('+' product)*
//! product   := postfix ('*' postfix)*
//! postfix   := atom ('^*')*
//! atom      := 'c' | "word" | number | name | '(' sum ')'
//! ```
//!
//! Bindings may refer to each other and to themselves. The program denotes
//! its last statement (for a binding, the bound name).

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::algebra::Scalar;

use super::{smart_add, smart_mul, RegExp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at column {column}: {message}")]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Char(char),
    Str(String),
    Num(String),
    Ident(String),
    Plus,
    Times,
    StarOp,
    LParen,
    RParen,
    Equals,
    Sep,
}

fn err(column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        column,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let escape = |c: char| match c {
        'n' => '\n',
        't' => '\t',
        other => other,
    };
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' | '\r' => i += 1,
            '\n' | ';' => {
                out.push((Tok::Sep, col));
                i += 1;
            }
            '+' => {
                out.push((Tok::Plus, col));
                i += 1;
            }
            '*' => {
                out.push((Tok::Times, col));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, col));
                i += 1;
            }
            '=' => {
                out.push((Tok::Equals, col));
                i += 1;
            }
            '^' => {
                if chars.get(i + 1) == Some(&'*') {
                    out.push((Tok::StarOp, col));
                    i += 2;
                } else {
                    return Err(err(col, "expected `*` after `^`"));
                }
            }
            '\'' => {
                let (sym, next) = match chars.get(i + 1) {
                    Some('\\') => match chars.get(i + 2) {
                        Some(&e) => (escape(e), i + 3),
                        None => return Err(err(col, "unterminated character literal")),
                    },
                    Some('\'') | None => return Err(err(col, "empty character literal")),
                    Some(&s) => (s, i + 2),
                };
                if chars.get(next) != Some(&'\'') {
                    return Err(err(col, "unterminated character literal"));
                }
                out.push((Tok::Char(sym), col));
                i = next + 1;
            }
            '"' => {
                let mut s = String::new();
                let mut j = i + 1;
                loop {
                    match chars.get(j) {
                        None => return Err(err(col, "unterminated string literal")),
                        Some('"') => break,
                        Some('\\') => {
                            let Some(&e) = chars.get(j + 1) else {
                                return Err(err(col, "unterminated string literal"));
                            };
                            s.push(escape(e));
                            j += 2;
                        }
                        Some(&x) => {
                            s.push(x);
                            j += 1;
                        }
                    }
                }
                out.push((Tok::Str(s), col));
                i = j + 1;
            }
            c if c.is_ascii_digit() || c == '.' || c == '-' => {
                let mut j = i + 1;
                while j < chars.len()
                    && (chars[j].is_ascii_alphanumeric() || matches!(chars[j], '.' | '/'))
                {
                    j += 1;
                }
                out.push((Tok::Num(chars[i..j].iter().collect()), col));
                i = j;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i + 1;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                out.push((Tok::Ident(chars[i..j].iter().collect()), col));
                i = j;
            }
            other => return Err(err(col, format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Ast {
    Char(char),
    Str(String),
    Num(String, usize),
    Var(String, usize),
    Sum(Box<Ast>, Box<Ast>),
    Prod(Box<Ast>, Box<Ast>),
    Star(Box<Ast>),
}

enum Stmt {
    Bind(String, usize, Ast),
    Expr(Ast),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(_, c)| *c)
            .unwrap_or(self.end_col)
    }

    fn program(&mut self) -> Result<Vec<Stmt>, ParseError> {
        let mut stmts = Vec::new();
        loop {
            while self.peek() == Some(&Tok::Sep) {
                self.pos += 1;
            }
            if self.peek().is_none() {
                break;
            }
            stmts.push(self.statement()?);
            match self.peek() {
                None | Some(Tok::Sep) => {}
                Some(t) => return Err(err(self.col(), format!("unexpected {t:?}"))),
            }
        }
        if stmts.is_empty() {
            return Err(err(self.end_col, "empty expression"));
        }
        Ok(stmts)
    }

    fn statement(&mut self) -> Result<Stmt, ParseError> {
        if let (Some((Tok::Ident(name), col)), Some((Tok::Equals, _))) =
            (self.toks.get(self.pos), self.toks.get(self.pos + 1))
        {
            let (name, col) = (name.clone(), *col);
            self.pos += 2;
            return Ok(Stmt::Bind(name, col, self.sum()?));
        }
        Ok(Stmt::Expr(self.sum()?))
    }

    fn sum(&mut self) -> Result<Ast, ParseError> {
        let mut acc = self.product()?;
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            acc = Ast::Sum(Box::new(acc), Box::new(self.product()?));
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Ast, ParseError> {
        let mut acc = self.postfix()?;
        while self.peek() == Some(&Tok::Times) {
            self.pos += 1;
            acc = Ast::Prod(Box::new(acc), Box::new(self.postfix()?));
        }
        Ok(acc)
    }

    fn postfix(&mut self) -> Result<Ast, ParseError> {
        let mut acc = self.atom()?;
        while self.peek() == Some(&Tok::StarOp) {
            self.pos += 1;
            acc = Ast::Star(Box::new(acc));
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        let col = self.col();
        let Some((tok, _)) = self.toks.get(self.pos).cloned() else {
            return Err(err(col, "unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Tok::Char(c) => Ok(Ast::Char(c)),
            Tok::Str(s) => Ok(Ast::Str(s)),
            Tok::Num(n) => Ok(Ast::Num(n, col)),
            Tok::Ident(name) => Ok(Ast::Var(name, col)),
            Tok::LParen => {
                let inner = self.sum()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(err(self.col(), "expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            other => Err(err(col, format!("unexpected {other:?}"))),
        }
    }
}

type Env<B> = Arc<OnceLock<HashMap<String, RegExp<B>>>>;

fn check<B: Scalar>(ast: &Ast, names: &HashMap<String, Ast>) -> Result<(), ParseError> {
    match ast {
        Ast::Char(_) | Ast::Str(_) => Ok(()),
        Ast::Num(text, col) => B::parse_scalar(text)
            .map(|_| ())
            .map_err(|e| err(*col, e.to_string())),
        Ast::Var(name, col) => {
            if names.contains_key(name) {
                Ok(())
            } else {
                Err(err(*col, format!("unbound name `{name}`")))
            }
        }
        Ast::Sum(p, q) | Ast::Prod(p, q) => {
            check::<B>(p, names)?;
            check::<B>(q, names)
        }
        Ast::Star(p) => check::<B>(p, names),
    }
}

fn build<B: Scalar>(ast: &Ast, env: &HashMap<String, RegExp<B>>) -> RegExp<B> {
    match ast {
        Ast::Char(c) => RegExp::symbol(*c),
        Ast::Str(s) => RegExp::single(s),
        // Validated by `check` before any thunk can run.
        Ast::Num(text, _) => RegExp::value(B::parse_scalar(text).expect("validated literal")),
        Ast::Var(name, _) => env[name].clone(),
        Ast::Sum(p, q) => smart_add(&build(p, env), &build(q, env)),
        Ast::Prod(p, q) => smart_mul(&build(p, env), &build(q, env)),
        Ast::Star(p) => RegExp::star(build(p, env)),
    }
}

/// Parse a program into an expression over the scalar `B`.
pub fn parse_program<B: Scalar>(src: &str) -> Result<RegExp<B>, ParseError> {
    let toks = lex(src)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end_col: src.chars().count() + 1,
    };
    let stmts = parser.program()?;

    let mut bodies: HashMap<String, Ast> = HashMap::new();
    for stmt in &stmts {
        if let Stmt::Bind(name, col, body) = stmt {
            if bodies.insert(name.clone(), body.clone()).is_some() {
                return Err(err(*col, format!("`{name}` is bound twice")));
            }
        }
    }
    for stmt in &stmts {
        match stmt {
            Stmt::Bind(_, _, ast) | Stmt::Expr(ast) => check::<B>(ast, &bodies)?,
        }
    }

    let env: Env<B> = Arc::new(OnceLock::new());
    let mut defs = HashMap::new();
    for (name, body) in &bodies {
        let env2 = Arc::clone(&env);
        let body = body.clone();
        let def = RegExp::recursive(name.clone(), move |_| {
            build(&body, env2.get().expect("environment is set before use"))
        });
        defs.insert(name.clone(), def);
    }
    let _ = env.set(defs);
    let env = env.get().expect("just set");

    Ok(match stmts.last().expect("nonempty") {
        Stmt::Bind(name, _, _) => env[name].clone(),
        Stmt::Expr(ast) => build(ast, env),
    })
}
