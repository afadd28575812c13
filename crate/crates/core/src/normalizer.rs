//! Normal form NF₀: the program as a `listing` would print it, with comments
//! gone and each clause's variables renamed `A`..`Z`, `A1`..`Z9`.

use crate::reader::{OpTable, Program};
use crate::term::Term;
use crate::writer;

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedProgram {
    pub terms: Vec<Term>,
    /// Source variable names per term, by ordinal; `_` for anonymous ones.
    /// Only PCA₂ mode consults these.
    pub var_names: Vec<Vec<String>>,
    /// Operator table after the last directive.
    pub ops: OpTable,
    /// Largest number of distinct variables in any single term.
    pub max_vars: usize,
}

impl NormalizedProgram {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Establishes canonical variable ordinals and `max_vars`.
pub fn normalize(program: Program) -> NormalizedProgram {
    let mut terms = Vec::with_capacity(program.clauses.len());
    let mut var_names = Vec::with_capacity(program.clauses.len());
    let mut max_vars = 0;
    for clause in program.clauses {
        let mut term = clause.term;
        let old_of_new = term.renumber_vars();
        max_vars = max_vars.max(old_of_new.len());
        var_names.push(
            old_of_new
                .into_iter()
                .map(|old| {
                    clause
                        .var_names
                        .get(old)
                        .cloned()
                        .unwrap_or_else(|| "_".to_owned())
                })
                .collect(),
        );
        terms.push(term);
    }
    NormalizedProgram {
        terms,
        var_names,
        ops: program.ops,
        max_vars,
    }
}

/// Canonical variable name for an ordinal: `A`..`Z`, then `A1`..`A9`,
/// `B1`..`Z9`, then `V260`, `V261`, ...
pub fn var_name(ordinal: usize) -> String {
    const LETTERS: &[u8; 26] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZ";
    match ordinal {
        0..=25 => (LETTERS[ordinal] as char).to_string(),
        26..=259 => {
            let k = ordinal - 26;
            format!("{}{}", LETTERS[k / 9] as char, k % 9 + 1)
        }
        _ => format!("V{ordinal}"),
    }
}

/// Inverse of [`var_name`].
pub fn var_ordinal(name: &str) -> Option<usize> {
    let mut chars = name.chars();
    let letter = chars.next().filter(char::is_ascii_uppercase)?;
    let letter_idx = (letter as u8 - b'A') as usize;
    let rest = chars.as_str();
    if rest.is_empty() {
        return Some(letter_idx);
    }
    if rest.len() == 1 {
        let d = rest.chars().next()?.to_digit(10)? as usize;
        if d == 0 {
            return None;
        }
        return Some(26 + letter_idx * 9 + d - 1);
    }
    if letter != 'V' || rest.starts_with('0') {
        return None;
    }
    rest.parse::<usize>().ok().filter(|&o| o >= 260)
}

/// Listing-style rendering of NF₀: one clause per line.
pub fn nf0_text(program: &NormalizedProgram) -> String {
    writer::write_program(&program.terms, &OpTable::standard())
}

/// Renders the program with the variable names it carries: canonical ones
/// after PCA₀, source names after PCA₂.
pub fn named_text(program: &NormalizedProgram) -> String {
    writer::write_named(&program.terms, &program.var_names, &OpTable::standard())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reader::read_program;

    fn norm(src: &str) -> NormalizedProgram {
        normalize(read_program(src).unwrap())
    }

    #[test]
    fn ordinals_and_max_vars() {
        let p = norm("p(X, Y, X).");
        assert_eq!(
            p.terms[0],
            Term::compound("p", vec![Term::Var(0), Term::Var(1), Term::Var(0)])
        );
        assert_eq!(p.max_vars, 2);
    }

    #[test]
    fn max_vars_over_clauses() {
        let three = "p(A,B,C).";
        let vars: Vec<String> = (0..26).map(|i| format!("V{i}x")).collect();
        let many = format!("q({}).", vars.join(","));
        let p = norm(&format!("{three}\n{many}"));
        assert_eq!(p.max_vars, 26);
        assert!(norm("").terms.is_empty());
        assert_eq!(norm("").max_vars, 0);
    }

    #[test]
    fn var_name_scheme() {
        assert_eq!(var_name(0), "A");
        assert_eq!(var_name(25), "Z");
        assert_eq!(var_name(26), "A1");
        assert_eq!(var_name(34), "A9");
        assert_eq!(var_name(35), "B1");
        assert_eq!(var_name(259), "Z9");
        assert_eq!(var_name(260), "V260");
    }

    #[test]
    fn var_names_are_injective_and_invertible() {
        let mut seen = std::collections::HashSet::new();
        for o in 0..2000 {
            let n = var_name(o);
            assert!(seen.insert(n.clone()), "duplicate {n}");
            assert_eq!(var_ordinal(&n), Some(o));
        }
        assert_eq!(var_ordinal("A0"), None);
        assert_eq!(var_ordinal("V12"), None);
        assert_eq!(var_ordinal("V0260"), None);
        assert_eq!(var_ordinal("a"), None);
    }

    #[test]
    fn worked_example_renames_b_to_a() {
        let p = norm("p(a,B,f(c,d,e)).");
        let text = nf0_text(&p);
        assert_eq!(text, "p(a,A,f(c,d,e)).\n");
        assert_eq!(text.trim_end().trim_end_matches('.').len(), 15);
    }

    #[test]
    fn nf0_is_a_fixed_point() {
        let src = ":- op(700,xfx,===).";
        let once = nf0_text(&norm(src));
        assert_eq!(once, ":- op(700,xfx,===).\n");
        assert_eq!(nf0_text(&norm(&once)), once);
    }

    #[test]
    fn nf0_of_empty_program() {
        assert_eq!(nf0_text(&norm("% nothing\n")), "");
    }

    #[test]
    fn anonymous_variables_get_names() {
        let p = norm("p(_, _, X) :- q(X).");
        assert_eq!(nf0_text(&p), "p(A,B,C):-q(C).\n");
        assert_eq!(p.var_names[0], ["_", "_", "X"]);
    }

    #[test]
    fn named_text_keeps_source_names() {
        let p = norm("p(Foo, _, _) :- q(Foo).");
        assert_eq!(named_text(&p), "p(Foo,_,_):-q(Foo).\n");
    }

    #[test]
    fn idempotent_on_a_mixed_program() {
        let src = "% header\n:- module(m, [f/2]).\n:- op(200, xfy, ::).\n\
                   f(X, Y) :- X :: Y, Y > 0 ; /* alt */ X = \"ab\".\n\
                   g([H|T], {Z}) --> [H], g(T, Z), !.\n";
        let p = norm(src);
        let text = nf0_text(&p);
        let q = norm(&text);
        assert_eq!(q.terms, p.terms);
        assert_eq!(nf0_text(&q), text);
    }
}
