//! Prefix-order index streams: each node contributes one index, children
//! follow their parent, and arities make parentheses unnecessary.

use std::collections::HashMap;

use num_bigint::BigInt;

use super::CodecError;
use crate::dictionary::{parse_symbol, symbol_of, Dictionary, Entity, Mode, Symbol, ANONYMOUS};
use crate::normalizer::NormalizedProgram;
use crate::term::Term;

pub fn encode_term_stream(
    program: &NormalizedProgram,
    dict: &Dictionary,
    mode: Mode,
) -> Result<Vec<u32>, CodecError> {
    let mut out = Vec::new();
    for (t, term) in program.terms.iter().enumerate() {
        for node in term.preorder() {
            let entity = match (node, mode) {
                (Term::Var(v), Mode::Pca0) => Entity::Var(*v),
                (Term::Var(v), Mode::Pca2) => Entity::NamedVar(
                    program
                        .var_names
                        .get(t)
                        .and_then(|names| names.get(*v))
                        .map_or(ANONYMOUS, String::as_str),
                ),
                _ => {
                    let (text, arity) = symbol_of(node).expect("non-variable");
                    Entity::Symbol(text, arity)
                }
            };
            out.push(dict.index_of(&entity)? as u32);
        }
    }
    Ok(out)
}

/// A decoded top-level term with its variable names by ordinal.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodedTerm {
    pub term: Term,
    pub var_names: Vec<String>,
}

enum Head {
    Var,
    Atom(String),
    Int(BigInt),
    Float(f64),
}

fn heads(dict: &Dictionary) -> Result<Vec<Head>, CodecError> {
    dict.entries()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            if i < dict.nvar() {
                return Ok(Head::Var);
            }
            let bad = |reason: String| CodecError::NameDecodeError { index: i, reason };
            match parse_symbol(&e.text) {
                Some(Symbol::Atom(a)) => Ok(Head::Atom(a)),
                Some(_) if e.arity > 0 => Err(bad(format!("number `{}` with arguments", e.text))),
                Some(Symbol::Int(n)) => Ok(Head::Int(n)),
                Some(Symbol::Float(x)) => Ok(Head::Float(x)),
                None => Err(bad(format!(
                    "`{}` does not read as one atom or number",
                    e.text
                ))),
            }
        })
        .collect()
}

/// Arity-driven decoding of a whole index stream into top-level terms.
/// Variables are numbered per term by first occurrence; an `_` entry
/// stands for a fresh variable at each occurrence.
pub fn decode_term_stream(
    indices: &[u32],
    dict: &Dictionary,
) -> Result<Vec<DecodedTerm>, CodecError> {
    let heads = heads(dict)?;
    let mut out = Vec::new();
    let mut next = indices.iter();
    // Open compounds: functor, arity, arguments so far.
    let mut stack: Vec<(String, usize, Vec<Term>)> = Vec::new();
    let mut vars: HashMap<u32, usize> = HashMap::new();
    let mut var_names: Vec<String> = Vec::new();
    while !next.as_slice().is_empty() {
        let term = loop {
            let Some(&index) = next.next() else {
                return Err(CodecError::TruncatedStream);
            };
            let entry = dict.entry_at(index as u64)?;
            let mut node = match &heads[index as usize] {
                Head::Var => {
                    let fresh = entry.text == ANONYMOUS;
                    let ordinal = match vars.get(&index) {
                        Some(&o) if !fresh => o,
                        _ => {
                            var_names.push(entry.text.clone());
                            let o = var_names.len() - 1;
                            if !fresh {
                                vars.insert(index, o);
                            }
                            o
                        }
                    };
                    Term::Var(ordinal)
                }
                Head::Atom(name) if entry.arity > 0 => {
                    stack.push((
                        name.clone(),
                        entry.arity as usize,
                        Vec::with_capacity(entry.arity as usize),
                    ));
                    continue;
                }
                Head::Atom(name) => Term::Atom(name.clone()),
                Head::Int(n) => Term::Int(n.clone()),
                Head::Float(x) => Term::Float(*x),
            };
            // Attach the node, closing every compound it completes.
            let finished = loop {
                match stack.last_mut() {
                    None => break Some(node),
                    Some((_, arity, args)) => {
                        args.push(node);
                        if args.len() < *arity {
                            break None;
                        }
                        let (name, _, args) = stack.pop().unwrap();
                        node = Term::Compound(name, args);
                    }
                }
            };
            if let Some(term) = finished {
                break term;
            }
        };
        out.push(DecodedTerm {
            term,
            var_names: std::mem::take(&mut var_names),
        });
        vars.clear();
    }
    Ok(out)
}
