//! Prolog term trees as produced by the reader and consumed by every later
//! stage of the pipeline.

use std::collections::HashMap;

use num_bigint::BigInt;

/// A Prolog term.
///
/// Variables are identified by their 0-based ordinal of first occurrence in
/// the enclosing top-level term; names live beside the term (see
/// [`crate::reader::Clause`]).
#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Var(usize),
    Atom(String),
    Int(BigInt),
    Float(f64),
    /// Functor name and a non-empty argument list.
    Compound(String, Vec<Term>),
}

impl Term {
    pub fn atom(name: impl Into<String>) -> Term {
        Term::Atom(name.into())
    }

    pub fn int(value: impl Into<BigInt>) -> Term {
        Term::Int(value.into())
    }

    /// Builds a compound, collapsing to an atom when `args` is empty.
    pub fn compound(name: impl Into<String>, args: Vec<Term>) -> Term {
        if args.is_empty() {
            Term::Atom(name.into())
        } else {
            Term::Compound(name.into(), args)
        }
    }

    /// `'.'(head, tail)`
    pub fn cons(head: Term, tail: Term) -> Term {
        Term::Compound(".".to_owned(), vec![head, tail])
    }

    /// Builds a proper list ending in `[]`, or in `tail` when given.
    pub fn list(items: Vec<Term>, tail: Option<Term>) -> Term {
        let mut acc = tail.unwrap_or_else(|| Term::atom("[]"));
        for item in items.into_iter().rev() {
            acc = Term::cons(item, acc);
        }
        acc
    }

    pub fn arity(&self) -> usize {
        match self {
            Term::Compound(_, args) => args.len(),
            _ => 0,
        }
    }

    /// The functor name of a compound or the text of an atom.
    pub fn name(&self) -> Option<&str> {
        match self {
            Term::Atom(name) | Term::Compound(name, _) => Some(name),
            _ => None,
        }
    }

    /// Depth-first, left-to-right pre-order traversal. Iterative, so long
    /// list spines do not grow the call stack.
    pub fn preorder(&self) -> Preorder<'_> {
        Preorder { stack: vec![self] }
    }

    /// Number of distinct variables, assuming ordinals are dense.
    pub fn var_count(&self) -> usize {
        self.preorder()
            .filter_map(|t| match t {
                Term::Var(v) => Some(v + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Renumbers variables densely by first occurrence in pre-order and
    /// returns the old ordinal for each new one.
    pub fn renumber_vars(&mut self) -> Vec<usize> {
        let mut old_of_new: Vec<usize> = Vec::new();
        let mut new_of_old: HashMap<usize, usize> = HashMap::new();
        let mut stack: Vec<&mut Term> = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                Term::Var(v) => {
                    *v = *new_of_old.entry(*v).or_insert_with(|| {
                        old_of_new.push(*v);
                        old_of_new.len() - 1
                    });
                }
                Term::Compound(_, args) => stack.extend(args.iter_mut().rev()),
                _ => {}
            }
        }
        old_of_new
    }
}

pub struct Preorder<'a> {
    stack: Vec<&'a Term>,
}

impl<'a> Iterator for Preorder<'a> {
    type Item = &'a Term;

    fn next(&mut self) -> Option<&'a Term> {
        let t = self.stack.pop()?;
        if let Term::Compound(_, args) = t {
            self.stack.extend(args.iter().rev());
        }
        Some(t)
    }
}
