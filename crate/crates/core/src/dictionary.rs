//! The entity dictionary: one (text, arity, fixity) entry per distinct
//! lexical entity, variables first, the rest in first-occurrence order.

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::normalizer::{var_name, NormalizedProgram};
use crate::reader::{tokenize, Fixity, OpTable, TokenKind};
use crate::term::Term;
use crate::writer::{atom_text, float_text};

/// Name used for every anonymous variable in PCA₂ dictionaries.
pub const ANONYMOUS: &str = "_";

/// Which member of the algorithm family to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Variables renamed; their names are regenerated, not stored.
    Pca0,
    /// Variables keep their source names, which are stored.
    Pca2,
}

impl Mode {
    pub fn code(self) -> u8 {
        match self {
            Mode::Pca0 => 0,
            Mode::Pca2 => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Mode> {
        match code {
            0 => Some(Mode::Pca0),
            2 => Some(Mode::Pca2),
            _ => None,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Pca0 => "pca0",
            Mode::Pca2 => "pca2",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DictEntry {
    pub text: String,
    pub arity: u32,
    pub fixity: Fixity,
}

impl DictEntry {
    pub fn variable(name: String) -> DictEntry {
        DictEntry {
            text: name,
            arity: 0,
            fixity: Fixity::Prefix,
        }
    }
}

/// Something that occupies a dictionary slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entity<'a> {
    /// Canonical variable ordinal (PCA₀).
    Var(usize),
    /// Source variable name (PCA₂).
    NamedVar(&'a str),
    Symbol(Cow<'a, str>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DictError {
    #[error("no dictionary entry for {0}")]
    MissingEntry(String),
    #[error("index {index} out of range for a dictionary of {len} entries")]
    IndexOutOfRange { index: u64, len: usize },
    #[error("dictionary entry {index} duplicates {text}/{arity}")]
    DuplicateEntry {
        index: usize,
        text: String,
        arity: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dictionary {
    entries: Vec<DictEntry>,
    nvar: usize,
    lookup: HashMap<(String, u32), usize>,
}

/// Dictionary text and arity of a non-variable term node.
pub fn symbol_of(term: &Term) -> Option<(Cow<'_, str>, u32)> {
    match term {
        Term::Var(_) => None,
        Term::Atom(name) => Some((atom_text(name), 0)),
        Term::Int(i) => Some((Cow::Owned(i.to_string()), 0)),
        Term::Float(x) => Some((Cow::Owned(float_text(*x)), 0)),
        Term::Compound(name, args) => Some((atom_text(name), args.len() as u32)),
    }
}

/// Fixity column for `name/arity` under `ops`.
pub fn fixity_of(ops: &OpTable, name: &str, arity: u32) -> Fixity {
    match arity {
        2 if ops.infix(name).is_some() => Fixity::Infix,
        1 if ops.postfix(name).is_some() => Fixity::Postfix,
        _ => Fixity::Prefix,
    }
}

/// Builds the dictionary of `program` for `mode`.
///
/// PCA₀ reserves `max_vars` leading entries named `A`, `B`, ...; PCA₂ puts
/// the distinct source variable names first, in first-occurrence order.
pub fn build(program: &NormalizedProgram, mode: Mode) -> Dictionary {
    let mut dict = Dictionary::empty();
    match mode {
        Mode::Pca0 => {
            for v in 0..program.max_vars {
                dict.push(DictEntry::variable(var_name(v)));
            }
        }
        Mode::Pca2 => {
            for (term, names) in program.terms.iter().zip(&program.var_names) {
                for node in term.preorder() {
                    if let Term::Var(v) = node {
                        let name = names.get(*v).map_or(ANONYMOUS, String::as_str);
                        if !dict.lookup.contains_key(&(name.to_owned(), 0)) {
                            dict.push(DictEntry::variable(name.to_owned()));
                        }
                    }
                }
            }
        }
    }
    dict.nvar = dict.entries.len();
    for term in &program.terms {
        for node in term.preorder() {
            let Some((text, arity)) = symbol_of(node) else {
                continue;
            };
            if dict.lookup.contains_key(&(text.to_string(), arity)) {
                continue;
            }
            let fixity = match node {
                Term::Atom(name) | Term::Compound(name, _) => fixity_of(&program.ops, name, arity),
                _ => Fixity::Prefix,
            };
            dict.push(DictEntry {
                text: text.into_owned(),
                arity,
                fixity,
            });
        }
    }
    dict
}

impl Dictionary {
    pub fn empty() -> Dictionary {
        Dictionary {
            entries: Vec::new(),
            nvar: 0,
            lookup: HashMap::new(),
        }
    }

    /// Assembles a dictionary from decoded entries, the first `nvar` of
    /// which are variables.
    pub fn from_entries(entries: Vec<DictEntry>, nvar: usize) -> Result<Dictionary, DictError> {
        let mut dict = Dictionary::empty();
        for (index, entry) in entries.into_iter().enumerate() {
            if dict.lookup.contains_key(&(entry.text.clone(), entry.arity)) {
                return Err(DictError::DuplicateEntry {
                    index,
                    text: entry.text,
                    arity: entry.arity,
                });
            }
            dict.push(entry);
        }
        dict.nvar = nvar.min(dict.entries.len());
        Ok(dict)
    }

    fn push(&mut self, entry: DictEntry) {
        self.lookup
            .insert((entry.text.clone(), entry.arity), self.entries.len());
        self.entries.push(entry);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nvar(&self) -> usize {
        self.nvar
    }

    pub fn entries(&self) -> &[DictEntry] {
        &self.entries
    }

    /// Largest arity over all entries (AMAX).
    pub fn amax(&self) -> u32 {
        self.entries.iter().map(|e| e.arity).max().unwrap_or(0)
    }

    /// Whether any entry is a postfix operator (TF).
    pub fn has_postfix(&self) -> bool {
        self.entries.iter().any(|e| e.fixity == Fixity::Postfix)
    }

    pub fn index_of(&self, entity: &Entity<'_>) -> Result<usize, DictError> {
        match entity {
            Entity::Var(v) if *v < self.nvar => Ok(*v),
            Entity::Var(v) => Err(DictError::MissingEntry(format!("variable #{v}"))),
            Entity::NamedVar(name) => self.lookup_symbol(name, 0),
            Entity::Symbol(text, arity) => self.lookup_symbol(text, *arity),
        }
    }

    fn lookup_symbol(&self, text: &str, arity: u32) -> Result<usize, DictError> {
        // Borrowed-key lookups into a tuple key would need a wrapper type;
        // entry texts are short, so the allocation is acceptable.
        self.lookup
            .get(&(text.to_owned(), arity))
            .copied()
            .ok_or_else(|| DictError::MissingEntry(format!("{text}/{arity}")))
    }

    pub fn entry_at(&self, index: u64) -> Result<&DictEntry, DictError> {
        usize::try_from(index)
            .ok()
            .and_then(|i| self.entries.get(i))
            .ok_or(DictError::IndexOutOfRange {
                index,
                len: self.entries.len(),
            })
    }
}

/// A non-variable entry's text decoded back into term material.
#[derive(Debug, Clone, PartialEq)]
pub enum Symbol {
    Atom(String),
    Int(BigInt),
    Float(f64),
}

/// Re-reads the text of a non-variable entry. Returns `None` unless the
/// text is exactly one atom or (possibly negative) number token.
pub fn parse_symbol(text: &str) -> Option<Symbol> {
    let tokens = tokenize(text).ok()?;
    let no_gap = |i: usize| tokens.get(i).is_some_and(|t| !t.layout_before);
    match tokens.as_slice() {
        [t] => match &t.kind {
            TokenKind::Name(n) | TokenKind::QuotedName(n) => Some(Symbol::Atom(n.clone())),
            TokenKind::Int(i) => Some(Symbol::Int(i.clone())),
            TokenKind::Float(x) => Some(Symbol::Float(*x)),
            _ => None,
        },
        [a, b] if no_gap(1) => match (&a.kind, &b.kind) {
            (TokenKind::Name(m), TokenKind::Int(i)) if m == "-" => Some(Symbol::Int(-i.clone())),
            (TokenKind::Name(m), TokenKind::Float(x)) if m == "-" => Some(Symbol::Float(-x)),
            (TokenKind::OpenBracket, TokenKind::CloseBracket) => Some(Symbol::Atom("[]".into())),
            (TokenKind::OpenCurly, TokenKind::CloseCurly) => Some(Symbol::Atom("{}".into())),
            _ => None,
        },
        _ => None,
    }
}

/// Whether `text` reads as a single variable token.
pub fn is_variable_text(text: &str) -> bool {
    matches!(tokenize(text).as_deref(), Ok([t]) if matches!(t.kind, TokenKind::Var(_)))
}
