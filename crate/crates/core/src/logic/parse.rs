//! S-expression syntax for formulas.
//!
//! ```text
//! phi := ident | #LABEL | (op phi ...) | (box phi) | (diamond phi) | (nabla phi)
//!      | (tau LABEL phi) | (T LABEL phi) | (kappa LABEL phi)
//! ```
//! `;` starts a comment running to the end of the line.

use super::formula::Formula;
use crate::algebra::{Algebra, FiniteAlgebra};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown operation {name:?} at {line}:{column}")]
    UnknownOperation { line: usize, column: usize, name: String },
    #[error("bad threshold index at {line}:{column}: {message}")]
    BadThresholdIndex { line: usize, column: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Atom(String),
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                column = 1;
            }
            ';' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    column += 1;
                }
            }
            c if c.is_whitespace() => {
                chars.next();
                column += 1;
            }
            '(' | ')' => {
                chars.next();
                column += 1;
                let tok = if c == '(' { Tok::Open } else { Tok::Close };
                out.push(Token { tok, line: l, column: col });
            }
            _ => {
                let mut atom = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    atom.push(c);
                    chars.next();
                    column += 1;
                }
                out.push(Token { tok: Tok::Atom(atom), line: l, column: col });
            }
        }
    }
    out.push(Token { tok: Tok::End, line, column });
    out
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    alg: &'a FiniteAlgebra,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn syntax(t: &Token, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: t.line, column: t.column, message: message.into() }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::End => Err(Self::syntax(&t, "expected a formula, found end of input")),
            Tok::Close => Err(Self::syntax(&t, "unexpected ')'")),
            Tok::Atom(a) => {
                if let Some(label) = a.strip_prefix('#') {
                    self.alg
                        .element_by_label(label)
                        .map(Formula::Const)
                        .ok_or_else(|| Self::syntax(&t, format!("unknown element label {label:?}")))
                } else {
                    Ok(Formula::Var(a.clone()))
                }
            }
            Tok::Open => {
                let head = self.next();
                let name = match &head.tok {
                    Tok::Atom(a) => a.clone(),
                    Tok::End => return Err(Self::syntax(&head, "expected an operator, found end of input")),
                    _ => return Err(Self::syntax(&head, "expected an operator")),
                };
                let f = match name.as_str() {
                    "box" => Formula::Box(Box::new(self.formula()?)),
                    "diamond" => Formula::Diamond(Box::new(self.formula()?)),
                    "nabla" => Formula::Nabla(Box::new(self.formula()?)),
                    "tau" | "T" | "kappa" => {
                        let d = self.threshold(&name)?;
                        let arg = Box::new(self.formula()?);
                        match name.as_str() {
                            "tau" => Formula::Tau(d, arg),
                            "T" => Formula::Tcap(d, arg),
                            _ => Formula::Kappa(d, arg),
                        }
                    }
                    _ => {
                        let op = self.alg.op_index(&name).ok_or(ParseError::UnknownOperation {
                            line: head.line,
                            column: head.column,
                            name: name.clone(),
                        })?;
                        let mut args = Vec::new();
                        while !matches!(self.peek().tok, Tok::Close | Tok::End) {
                            args.push(self.formula()?);
                        }
                        if args.len() != self.alg.arity(op) {
                            return Err(Self::syntax(
                                &head,
                                format!("{name} takes {} arguments, found {}", self.alg.arity(op), args.len()),
                            ));
                        }
                        Formula::Op(op, args)
                    }
                };
                let close = self.next();
                if close.tok != Tok::Close {
                    return Err(Self::syntax(&close, "expected ')'"));
                }
                Ok(f)
            }
        }
    }

    fn threshold(&mut self, kind: &str) -> Result<usize, ParseError> {
        let t = self.next();
        let bad = |message: String| ParseError::BadThresholdIndex { line: t.line, column: t.column, message };
        let label = match &t.tok {
            Tok::Atom(a) => a.strip_prefix('#').unwrap_or(a).to_string(),
            Tok::End => return Err(Self::syntax(&t, "expected an element label, found end of input")),
            _ => return Err(bad("expected an element label".into())),
        };
        let d = self.alg.element_by_label(&label).ok_or_else(|| bad(format!("unknown element {label:?}")))?;
        if kind == "tau" && d == self.alg.bottom() {
            return Err(bad(format!("tau needs an element above the bottom, found {label}")));
        }
        if kind == "kappa" && d == self.alg.top() {
            return Err(bad(format!("kappa needs an element below the top, found {label}")));
        }
        Ok(d)
    }
}

/// Parses exactly one formula.
pub fn parse_formula(text: &str, alg: &FiniteAlgebra) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: tokenize(text), pos: 0, alg };
    let f = p.formula()?;
    let t = p.next();
    if t.tok != Tok::End {
        return Err(Parser::syntax(&t, "trailing input after the formula"));
    }
    Ok(f)
}

/// Parses a whitespace-separated sequence of formulas.
pub fn parse_formulas(text: &str, alg: &FiniteAlgebra) -> Result<Vec<Formula>, ParseError> {
    let mut p = Parser { toks: tokenize(text), pos: 0, alg };
    let mut out = Vec::new();
    while p.peek().tok != Tok::End {
        out.push(p.formula()?);
    }
    Ok(out)
}

/// Canonical text: single spaces, no comments.
pub fn print_formula(f: &Formula, alg: &FiniteAlgebra) -> String {
    let mut out = String::new();
    write_formula(f, alg, &mut out);
    out
}

fn write_formula(f: &Formula, alg: &FiniteAlgebra, out: &mut String) {
    let unary = |out: &mut String, head: &str, g: &Formula| {
        out.push('(');
        out.push_str(head);
        out.push(' ');
        write_formula(g, alg, out);
        out.push(')');
    };
    match f {
        Formula::Var(v) => out.push_str(v),
        Formula::Const(c) => {
            out.push('#');
            out.push_str(&alg.label(*c));
        }
        Formula::Op(op, args) => {
            out.push('(');
            out.push_str(alg.op_name(*op));
            for a in args {
                out.push(' ');
                write_formula(a, alg, out);
            }
            out.push(')');
        }
        Formula::Tau(d, g) => unary(out, &format!("tau {}", alg.label(*d)), g),
        Formula::Tcap(d, g) => unary(out, &format!("T {}", alg.label(*d)), g),
        Formula::Kappa(d, g) => unary(out, &format!("kappa {}", alg.label(*d)), g),
        Formula::Box(g) => unary(out, "box", g),
        Formula::Diamond(g) => unary(out, "diamond", g),
        Formula::Nabla(g) => unary(out, "nabla", g),
    }
}
