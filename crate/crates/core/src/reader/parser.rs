//! Operator-precedence parser over the token stream.

use std::collections::HashMap;

use thiserror::Error;

use super::lexer::{Pos, Token, TokenKind};
use super::ops::{OpTable, MAX_PRIORITY};
use crate::term::Term;

/// Priority of arguments and list elements.
pub const ARG_PRIORITY: u32 = 999;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{pos}: operator priority clash at `{op}`")]
    OperatorClash { op: String, pos: Pos },
    #[error("{pos}: unexpected {found}")]
    UnexpectedToken { found: String, pos: Pos },
    #[error("{pos}: unbalanced `{delimiter}`")]
    UnbalancedDelimiter { delimiter: char, pos: Pos },
    #[error("{pos}: unexpected end of input (missing `.`?)")]
    UnexpectedEof { pos: Pos },
}

impl ParseError {
    pub fn pos(&self) -> Pos {
        match self {
            ParseError::OperatorClash { pos, .. }
            | ParseError::UnexpectedToken { pos, .. }
            | ParseError::UnbalancedDelimiter { pos, .. }
            | ParseError::UnexpectedEof { pos } => *pos,
        }
    }
}

/// A top-level term with the source names of its variables, indexed by
/// ordinal. Anonymous variables are named `_`.
#[derive(Debug, Clone, PartialEq)]
pub struct Clause {
    pub term: Term,
    pub var_names: Vec<String>,
}

/// Reads one term ending in an `end` token starting at `start`. Returns the
/// clause and the index of the first token after the end token.
pub fn read_term(
    tokens: &[Token],
    start: usize,
    ops: &OpTable,
) -> Result<(Clause, usize), ParseError> {
    let mut parser = Parser {
        tokens,
        pos: start,
        ops,
        var_names: Vec::new(),
        var_index: HashMap::new(),
        failed: HashMap::new(),
    };
    let (term, _) = parser.parse(MAX_PRIORITY)?;
    match parser.peek() {
        Some(Token {
            kind: TokenKind::End,
            ..
        }) => parser.pos += 1,
        Some(tok) => return Err(parser.stray(tok)),
        None => return Err(parser.eof()),
    }
    let clause = Clause {
        term,
        var_names: parser.var_names,
    };
    Ok((clause, parser.pos))
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    ops: &'a OpTable,
    var_names: Vec<String>,
    var_index: HashMap<String, usize>,
    /// Known failures of `parse` by (token index, max priority); keeps
    /// prefix-operator backtracking polynomial.
    failed: HashMap<(usize, u32), ParseError>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Result<&'a Token, ParseError> {
        let tok = self.tokens.get(self.pos).ok_or_else(|| self.eof())?;
        self.pos += 1;
        Ok(tok)
    }

    fn eof(&self) -> ParseError {
        let pos = self
            .tokens
            .last()
            .map(|t| t.pos)
            .unwrap_or(Pos { line: 1, column: 1 });
        ParseError::UnexpectedEof { pos }
    }

    /// Error for a token that cannot continue the current term.
    fn stray(&self, tok: &Token) -> ParseError {
        match &tok.kind {
            TokenKind::CloseParen => unbalanced(')', tok.pos),
            TokenKind::CloseBracket => unbalanced(']', tok.pos),
            TokenKind::CloseCurly => unbalanced('}', tok.pos),
            TokenKind::Name(n) | TokenKind::QuotedName(n) if self.ops.is_op(n) => {
                ParseError::OperatorClash {
                    op: n.clone(),
                    pos: tok.pos,
                }
            }
            TokenKind::Comma => ParseError::OperatorClash {
                op: ",".to_owned(),
                pos: tok.pos,
            },
            kind => ParseError::UnexpectedToken {
                found: kind.describe(),
                pos: tok.pos,
            },
        }
    }

    fn expect_close(
        &mut self,
        kind: TokenKind,
        delimiter: char,
        open: Pos,
    ) -> Result<(), ParseError> {
        match self.peek() {
            Some(tok) if tok.kind == kind => {
                self.pos += 1;
                Ok(())
            }
            Some(tok) if matches!(tok.kind, TokenKind::End) => Err(unbalanced(delimiter, open)),
            Some(tok) => Err(self.stray(tok)),
            None => Err(unbalanced(delimiter, open)),
        }
    }

    fn variable(&mut self, name: &str) -> Term {
        if name == "_" {
            self.var_names.push(name.to_owned());
            return Term::Var(self.var_names.len() - 1);
        }
        if let Some(&v) = self.var_index.get(name) {
            return Term::Var(v);
        }
        self.var_names.push(name.to_owned());
        let v = self.var_names.len() - 1;
        self.var_index.insert(name.to_owned(), v);
        Term::Var(v)
    }

    fn snapshot(&self) -> (usize, usize) {
        (self.pos, self.var_names.len())
    }

    fn restore(&mut self, (pos, vars): (usize, usize)) {
        self.pos = pos;
        self.var_names.truncate(vars);
        self.var_index.retain(|_, v| *v < vars);
    }

    /// Whether the next token cannot begin a term, so a preceding operator
    /// name must stand for itself.
    fn at_delimiter(&self) -> bool {
        match self.peek() {
            None => true,
            Some(tok) => matches!(
                tok.kind,
                TokenKind::End
                    | TokenKind::Comma
                    | TokenKind::Bar
                    | TokenKind::CloseParen
                    | TokenKind::CloseBracket
                    | TokenKind::CloseCurly
            ),
        }
    }

    fn parse(&mut self, max: u32) -> Result<(Term, u32), ParseError> {
        let key = (self.pos, max);
        if let Some(err) = self.failed.get(&key) {
            return Err(err.clone());
        }
        let result = self
            .primary(max)
            .and_then(|(left, left_prec)| self.operators(left, left_prec, max));
        if let Err(err) = &result {
            self.failed.insert(key, err.clone());
        }
        result
    }

    /// Folds infix and postfix operators onto `left`.
    fn operators(
        &mut self,
        mut left: Term,
        mut left_prec: u32,
        max: u32,
    ) -> Result<(Term, u32), ParseError> {
        while let Some(tok) = self.peek() {
            let name = match &tok.kind {
                TokenKind::Name(n) | TokenKind::QuotedName(n) => n.as_str(),
                TokenKind::Comma => ",",
                TokenKind::Bar => {
                    // `a | b` reads as `a ; b`
                    if max >= 1100 && left_prec <= 1099 {
                        self.pos += 1;
                        let (right, _) = self.parse(1100)?;
                        left = Term::Compound(";".to_owned(), vec![left, right]);
                        left_prec = 1100;
                        continue;
                    }
                    break;
                }
                _ => break,
            };
            if let Some(def) = self.ops.infix(name) {
                let (lmax, rmax) = (def.left_max().unwrap(), def.right_max().unwrap());
                if def.priority <= max && left_prec <= lmax {
                    self.pos += 1;
                    let (right, _) = self.parse(rmax)?;
                    left = Term::Compound(name.to_owned(), vec![left, right]);
                    left_prec = def.priority;
                    continue;
                }
            }
            if let Some(def) = self.ops.postfix(name) {
                if def.priority <= max && left_prec <= def.left_max().unwrap() {
                    self.pos += 1;
                    left = Term::Compound(name.to_owned(), vec![left]);
                    left_prec = def.priority;
                    continue;
                }
            }
            break;
        }
        Ok((left, left_prec))
    }

    fn primary(&mut self, max: u32) -> Result<(Term, u32), ParseError> {
        let tok = self.next()?;
        let term = match &tok.kind {
            TokenKind::Int(i) => Term::Int(i.clone()),
            TokenKind::Float(x) => Term::Float(*x),
            TokenKind::Var(name) => self.variable(name),
            TokenKind::Codes(codes) => {
                Term::list(codes.iter().map(|&c| Term::int(c)).collect(), None)
            }
            TokenKind::OpenParen | TokenKind::OpenParenAfterName => {
                let (inner, _) = self.parse(MAX_PRIORITY)?;
                self.expect_close(TokenKind::CloseParen, '(', tok.pos)?;
                inner
            }
            TokenKind::OpenBracket => {
                if self.eat(&TokenKind::CloseBracket) {
                    return self.name("[]".to_owned(), false, max);
                }
                self.list_body(tok.pos)?
            }
            TokenKind::OpenCurly => {
                if self.eat(&TokenKind::CloseCurly) {
                    return self.name("{}".to_owned(), false, max);
                }
                let (inner, _) = self.parse(MAX_PRIORITY)?;
                self.expect_close(TokenKind::CloseCurly, '{', tok.pos)?;
                Term::Compound("{}".to_owned(), vec![inner])
            }
            TokenKind::Name(n) => return self.name(n.clone(), false, max),
            TokenKind::QuotedName(n) => return self.name(n.clone(), true, max),
            TokenKind::CloseParen
            | TokenKind::CloseBracket
            | TokenKind::CloseCurly
            | TokenKind::Comma
            | TokenKind::Bar
            | TokenKind::End => return Err(self.stray(tok)),
        };
        Ok((term, 0))
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek().is_some_and(|t| &t.kind == kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Elements after `[`, through the closing `]`.
    fn list_body(&mut self, open: Pos) -> Result<Term, ParseError> {
        let mut items = vec![self.parse(ARG_PRIORITY)?.0];
        let mut tail = None;
        loop {
            if self.eat(&TokenKind::Comma) {
                items.push(self.parse(ARG_PRIORITY)?.0);
                continue;
            }
            if self.eat(&TokenKind::Bar) {
                tail = Some(self.parse(ARG_PRIORITY)?.0);
            }
            self.expect_close(TokenKind::CloseBracket, '[', open)?;
            return Ok(Term::list(items, tail));
        }
    }

    /// A term starting with a name token.
    fn name(&mut self, name: String, quoted: bool, max: u32) -> Result<(Term, u32), ParseError> {
        let name_pos = self.tokens[self.pos - 1].pos;
        if let Some(open) = self
            .peek()
            .filter(|t| t.kind == TokenKind::OpenParenAfterName)
        {
            self.pos += 1;
            let mut args = vec![self.parse(ARG_PRIORITY)?.0];
            while self.eat(&TokenKind::Comma) {
                args.push(self.parse(ARG_PRIORITY)?.0);
            }
            self.expect_close(TokenKind::CloseParen, '(', open.pos)?;
            return Ok((Term::Compound(name, args), 0));
        }
        if name == "-" && !quoted {
            if let Some(tok) = self.peek().filter(|t| !t.layout_before) {
                match &tok.kind {
                    TokenKind::Int(i) => {
                        self.pos += 1;
                        return Ok((Term::Int(-i.clone()), 0));
                    }
                    TokenKind::Float(x) => {
                        self.pos += 1;
                        return Ok((Term::Float(-x), 0));
                    }
                    _ => {}
                }
            }
        }
        if self.at_delimiter() {
            return Ok((Term::Atom(name), 0));
        }
        if let Some(def) = self.ops.prefix(&name) {
            if def.priority <= max {
                let saved = self.snapshot();
                match self.parse(def.right_max().unwrap()) {
                    Ok((arg, _)) => return Ok((Term::Compound(name, vec![arg]), def.priority)),
                    Err(_) => self.restore(saved),
                }
            }
        }
        let prec = self.ops.max_priority(&name);
        if prec > max {
            return Err(ParseError::OperatorClash {
                op: name,
                pos: name_pos,
            });
        }
        Ok((Term::Atom(name), prec))
    }
}

fn unbalanced(delimiter: char, pos: Pos) -> ParseError {
    ParseError::UnbalancedDelimiter { delimiter, pos }
}
