//! Prolog source reader: tokenizer, operator table and operator-precedence
//! parser, plus the directive-aware program reader.

pub mod lexer;
pub mod ops;
pub mod parser;

use thiserror::Error;

pub use lexer::{tokenize, LexError, Pos, Token, TokenKind};
pub use ops::{Fixity, OpDef, OpError, OpTable, Specifier};
pub use parser::{read_term, Clause, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReadError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl ReadError {
    pub fn pos(&self) -> Pos {
        match self {
            ReadError::Lex(e) => e.pos(),
            ReadError::Parse(e) => e.pos(),
        }
    }
}

/// A directive that looked like `op/3` but could not be applied. The
/// directive stays in the term stream; the operator table is unchanged.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: bad op/3 directive: {source}")]
pub struct BadOpDirective {
    pub pos: Pos,
    pub source: OpError,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub clauses: Vec<Clause>,
    /// Operator table after the last directive.
    pub ops: OpTable,
    pub warnings: Vec<BadOpDirective>,
}

impl Program {
    pub fn terms(&self) -> impl Iterator<Item = &crate::term::Term> {
        self.clauses.iter().map(|c| &c.term)
    }
}

/// Reads every top-level term of `source`, starting from the standard
/// operator table and applying `op/3` directives as they are read.
pub fn read_program(source: &str) -> Result<Program, ReadError> {
    read_program_with(source, OpTable::standard())
}

pub fn read_program_with(source: &str, mut ops: OpTable) -> Result<Program, ReadError> {
    let tokens = tokenize(source)?;
    let mut clauses = Vec::new();
    let mut warnings = Vec::new();
    let mut at = 0;
    while at < tokens.len() {
        let start = tokens[at].pos;
        let (clause, next) = read_term(&tokens, at, &ops)?;
        if let Some(Err(source)) = ops.apply_directive(&clause.term) {
            warnings.push(BadOpDirective { pos: start, source });
        }
        clauses.push(clause);
        at = next;
    }
    Ok(Program {
        clauses,
        ops,
        warnings,
    })
}
