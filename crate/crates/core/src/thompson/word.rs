//! Words over named group elements.
//!
//! Grammar:
//!
//! ```text
//! expr   := term+
//! term   := factor [ '^' ( signed-integer | factor ) ]
//! factor := name | '(' expr ')' | '[' expr ',' expr ']'
//! ```
//!
//! Juxtaposition is word-order composition (the leftmost factor is applied
//! first), `^` binds tighter than juxtaposition, an integer exponent is a
//! power and a factor exponent is conjugation, and `[u, v]` is the
//! commutator u v u^-1 v^-1.

use std::collections::HashMap;

use thiserror::Error;

use crate::plmap::PLMap;
use crate::thompson::{g0_g1, standard_generators, ThompsonError};

/// Abstract syntax of a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordExpr {
    GeneratorRef(String),
    Product(Vec<WordExpr>),
    Power(Box<WordExpr>, i64),
    Conjugate(Box<WordExpr>, Box<WordExpr>),
    Commutator(Box<WordExpr>, Box<WordExpr>),
}

/// Parse failure, with the byte offset of the offending token.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("syntax error at offset {position}: {message}")]
pub struct SyntaxError {
    pub position: usize,
    pub message: String,
}

fn err(position: usize, message: impl Into<String>) -> SyntaxError {
    SyntaxError { position, message: message.into() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Name(String),
    Int(i64),
    Caret,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            '[' => {
                toks.push((i, Tok::LBrack));
                i += 1;
            }
            ']' => {
                toks.push((i, Tok::RBrack));
                i += 1;
            }
            ',' => {
                toks.push((i, Tok::Comma));
                i += 1;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((start, Tok::Name(input[start..i].to_owned())));
            }
            _ if c.is_ascii_digit() || c == '-' || c == '+' => {
                let start = i;
                i += 1;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let text = &input[start..i];
                let n: i64 = text
                    .parse()
                    .map_err(|_| err(start, format!("invalid integer `{text}`")))?;
                toks.push((start, Tok::Int(n)));
            }
            _ => return Err(err(i, format!("unexpected character `{c}`"))),
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    input_len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.input_len, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t);
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), SyntaxError> {
        let offset = self.offset();
        match self.bump() {
            Some(t) if *t == tok => Ok(()),
            _ => Err(err(offset, format!("expected {what}"))),
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Name(_) | Tok::LParen | Tok::LBrack))
    }

    fn parse_expr(&mut self) -> Result<WordExpr, SyntaxError> {
        let mut terms = Vec::new();
        while self.starts_factor() {
            terms.push(self.parse_term()?);
        }
        match terms.len() {
            0 => Err(err(self.offset(), "expected a name, `(` or `[`")),
            1 => Ok(terms.pop().expect("one term")),
            _ => Ok(WordExpr::Product(terms)),
        }
    }

    fn parse_term(&mut self) -> Result<WordExpr, SyntaxError> {
        let base = self.parse_factor()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        if let Some(Tok::Int(n)) = self.peek() {
            let n = *n;
            self.bump();
            return Ok(WordExpr::Power(Box::new(base), n));
        }
        if self.starts_factor() {
            let by = self.parse_factor()?;
            return Ok(WordExpr::Conjugate(Box::new(base), Box::new(by)));
        }
        Err(err(self.offset(), "expected an integer or a factor after `^`"))
    }

    fn parse_factor(&mut self) -> Result<WordExpr, SyntaxError> {
        let offset = self.offset();
        match self.bump().cloned() {
            Some(Tok::Name(name)) => Ok(WordExpr::GeneratorRef(name)),
            Some(Tok::LParen) => {
                let inner = self.parse_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::LBrack) => {
                let lhs = self.parse_expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let rhs = self.parse_expr()?;
                self.expect(Tok::RBrack, "`]`")?;
                Ok(WordExpr::Commutator(Box::new(lhs), Box::new(rhs)))
            }
            _ => Err(err(offset, "expected a name, `(` or `[`")),
        }
    }
}

/// Parses a word into its syntax tree.
pub fn parse_word(input: &str) -> Result<WordExpr, SyntaxError> {
    let toks = lex(input)?;
    let mut parser = Parser { toks: &toks, pos: 0, input_len: input.len() };
    let expr = parser.parse_expr()?;
    if parser.pos != toks.len() {
        return Err(err(parser.offset(), "unexpected trailing input"));
    }
    Ok(expr)
}

/// Evaluates a word against named elements, in word order.
pub fn eval_word(expr: &WordExpr, env: &HashMap<String, PLMap>) -> Result<PLMap, ThompsonError> {
    match expr {
        WordExpr::GeneratorRef(name) => env
            .get(name)
            .cloned()
            .ok_or_else(|| ThompsonError::UnboundName(name.clone())),
        WordExpr::Product(terms) => {
            let mut acc = PLMap::identity();
            for term in terms {
                acc = acc.compose(&eval_word(term, env)?);
            }
            Ok(acc)
        }
        WordExpr::Power(base, n) => Ok(eval_word(base, env)?.power(*n)),
        WordExpr::Conjugate(base, by) => Ok(eval_word(base, env)?.conjugate(&eval_word(by, env)?)),
        WordExpr::Commutator(lhs, rhs) => {
            Ok(eval_word(lhs, env)?.commutator(&eval_word(rhs, env)?))
        }
    }
}

/// The default name bindings: the standard generators under both common
/// names (`x0`/`x1` and `f0`/`f1`) and the bump pair `g0`/`g1`.
pub fn default_env() -> HashMap<String, PLMap> {
    let (x0, x1) = standard_generators();
    let (g0, g1) = g0_g1();
    HashMap::from([
        ("x0".to_owned(), x0.clone()),
        ("x1".to_owned(), x1.clone()),
        ("f0".to_owned(), x0),
        ("f1".to_owned(), x1),
        ("g0".to_owned(), g0),
        ("g1".to_owned(), g1),
    ])
}
