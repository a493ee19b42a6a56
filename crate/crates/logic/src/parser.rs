//! Lexer and recursive-descent parser for the formula language.
//!
//! Grammar, loosest first:
//!
//! ```text
//! formula := ('forall' | 'exists') IDENT ':' formula | iff
//! iff     := imp ('<->' iff)?
//! imp     := or ('->' imp)?
//! or      := and ('|' and)*
//! and     := unary ('&' unary)*
//! unary   := '~' unary | '(' formula ')' | atom
//! atom    := '@'? IDENT '(' IDENT (',' IDENT)* ')'
//! ```
//!
//! Both arrows associate to the right; `&` and `|` to the left. A quantifier
//! used as an operand must be parenthesized. The parser rejects unbound
//! variables, binder shadowing, and inconsistent predicate arities, so every
//! `Formula` it returns is closed and arity-consistent.

use std::collections::HashMap;

use crate::ast::Formula;
use crate::error::LogicError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Forall,
    Exists,
    Ident(String),
    At,
    LParen,
    RParen,
    Comma,
    Colon,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    Eof,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

struct Lexer {
    chars: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
}

impl Lexer {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn bump(&mut self) -> char {
        let c = self.chars[self.i];
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>, LogicError> {
    let mut lx = Lexer {
        chars: text.chars().collect(),
        i: 0,
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    while let Some(c) = lx.peek() {
        let (tl, tc) = (lx.line, lx.col);
        if c.is_whitespace() {
            lx.bump();
            continue;
        }
        let syntax = |message: String| LogicError::Syntax {
            line: tl,
            col: tc,
            message,
        };
        let tok = match c {
            '(' => {
                lx.bump();
                Tok::LParen
            }
            ')' => {
                lx.bump();
                Tok::RParen
            }
            ',' => {
                lx.bump();
                Tok::Comma
            }
            ':' => {
                lx.bump();
                Tok::Colon
            }
            '~' => {
                lx.bump();
                Tok::Tilde
            }
            '&' => {
                lx.bump();
                Tok::Amp
            }
            '|' => {
                lx.bump();
                Tok::Pipe
            }
            '@' => {
                lx.bump();
                Tok::At
            }
            '-' => {
                lx.bump();
                if lx.peek() == Some('>') {
                    lx.bump();
                    Tok::Arrow
                } else {
                    return Err(syntax("expected `->`".into()));
                }
            }
            '<' => {
                lx.bump();
                if lx.peek() == Some('-') {
                    lx.bump();
                    if lx.peek() == Some('>') {
                        lx.bump();
                        Tok::DArrow
                    } else {
                        return Err(syntax("expected `<->`".into()));
                    }
                } else {
                    return Err(syntax("expected `<->`".into()));
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(c) = lx.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(lx.bump());
                    } else {
                        break;
                    }
                }
                match name.as_str() {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    _ => Tok::Ident(name),
                }
            }
            other => return Err(syntax(format!("unexpected character `{other}`"))),
        };
        out.push(Spanned {
            tok,
            line: tl,
            col: tc,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line: lx.line,
        col: lx.col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    scope: Vec<String>,
    // Task and known predicates live in separate namespaces.
    arities: HashMap<(bool, String), usize>,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn advance(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> LogicError {
        let s = self.peek();
        LogicError::Syntax {
            line: s.line,
            col: s.col,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Spanned, LogicError> {
        if self.peek().tok == tok {
            Ok(self.advance())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn formula(&mut self) -> Result<Formula, LogicError> {
        match self.peek().tok {
            Tok::Forall | Tok::Exists => {
                let is_forall = self.peek().tok == Tok::Forall;
                self.advance();
                let (var, line, col) = match self.advance() {
                    Spanned {
                        tok: Tok::Ident(v),
                        line,
                        col,
                    } => (v, line, col),
                    _ => return Err(self.err("expected a variable name after the quantifier")),
                };
                if self.scope.contains(&var) {
                    return Err(LogicError::ShadowedVariable { var, line, col });
                }
                self.expect(Tok::Colon, "`:` after the quantified variable")?;
                self.scope.push(var.clone());
                let body = self.formula()?;
                self.scope.pop();
                let body = Box::new(body);
                Ok(if is_forall {
                    Formula::Forall { var, body }
                } else {
                    Formula::Exists { var, body }
                })
            }
            _ => self.iff(),
        }
    }

    fn iff(&mut self) -> Result<Formula, LogicError> {
        let left = self.imp()?;
        if self.peek().tok == Tok::DArrow {
            self.advance();
            let right = self.iff()?;
            Ok(Formula::Iff(Box::new(left), Box::new(right)))
        } else {
            Ok(left)
        }
    }

    fn imp(&mut self) -> Result<Formula, LogicError> {
        let left = self.or()?;
        if self.peek().tok == Tok::Arrow {
            self.advance();
            let right = self.imp()?;
            Ok(Formula::Implies(Box::new(left), Box::new(right)))
        } else {
            Ok(left)
        }
    }

    fn or(&mut self) -> Result<Formula, LogicError> {
        let mut left = self.and()?;
        while self.peek().tok == Tok::Pipe {
            self.advance();
            let right = self.and()?;
            left = Formula::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula, LogicError> {
        let mut left = self.unary()?;
        while self.peek().tok == Tok::Amp {
            self.advance();
            let right = self.unary()?;
            left = Formula::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        match self.peek().tok {
            Tok::Tilde => {
                self.advance();
                Ok(Formula::Not(Box::new(self.unary()?)))
            }
            Tok::LParen => {
                self.advance();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::At => {
                self.advance();
                self.atom(true)
            }
            Tok::Ident(_) => self.atom(false),
            _ => Err(self.err("expected a formula")),
        }
    }

    fn atom(&mut self, known: bool) -> Result<Formula, LogicError> {
        let (pred, pline, pcol) = match self.advance() {
            Spanned {
                tok: Tok::Ident(p),
                line,
                col,
            } => (p, line, col),
            _ => return Err(self.err("expected a predicate name")),
        };
        self.expect(Tok::LParen, "`(` after the predicate name")?;
        let mut args = Vec::new();
        loop {
            let (var, line, col) = match self.advance() {
                Spanned {
                    tok: Tok::Ident(v),
                    line,
                    col,
                } => (v, line, col),
                _ => return Err(self.err("expected a variable name")),
            };
            if !self.scope.contains(&var) {
                return Err(LogicError::UnboundVariable { var, line, col });
            }
            args.push(var);
            match self.advance().tok {
                Tok::Comma => continue,
                Tok::RParen => break,
                _ => return Err(self.err("expected `,` or `)` in the argument list")),
            }
        }
        let key = (known, pred.clone());
        match self.arities.get(&key) {
            Some(&expected) if expected != args.len() => {
                return Err(LogicError::ArityMismatch {
                    pred,
                    expected,
                    found: args.len(),
                    line: pline,
                    col: pcol,
                });
            }
            Some(_) => {}
            None => {
                self.arities.insert(key, args.len());
            }
        }
        Ok(if known {
            Formula::KnownAtom { pred, args }
        } else {
            Formula::Atom { pred, args }
        })
    }
}

/// Parses one closed formula. Rejects unbound variables, binder shadowing
/// and arity inconsistencies with source positions.
pub fn parse_formula(text: &str) -> Result<Formula, LogicError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        scope: Vec::new(),
        arities: HashMap::new(),
    };
    let f = p.formula()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f)
}
