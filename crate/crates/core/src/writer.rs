//! Operator-aware, quoting-correct term writer. Its output re-reads to the
//! same term under the same operator table; minimal layout is not a goal
//! beyond what keeps the output compact.

use std::borrow::Cow;

use crate::normalizer::var_name;
use crate::reader::lexer::{is_alnum, is_atom_start, is_graphic};
use crate::reader::parser::ARG_PRIORITY;
use crate::reader::{Clause, OpDef, OpTable};
use crate::term::Term;

/// Source text of an atom, quoted when the bare spelling would not read
/// back as the same atom.
pub fn atom_text(name: &str) -> Cow<'_, str> {
    if atom_is_bare(name) {
        Cow::Borrowed(name)
    } else {
        Cow::Owned(quote_atom(name))
    }
}

/// Atom text for functor position (`name(`), where `[]` and `{}` need quotes.
pub fn functor_text(name: &str) -> Cow<'_, str> {
    match name {
        "[]" | "{}" => Cow::Owned(quote_atom(name)),
        _ => atom_text(name),
    }
}

fn atom_is_bare(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    match name {
        "[]" | "{}" | "!" | ";" => return true,
        "." => return false,
        _ => {}
    }
    if is_atom_start(first) {
        return chars.all(is_alnum);
    }
    is_graphic(first) && name.chars().all(is_graphic) && !name.contains("/*")
}

fn quote_atom(name: &str) -> String {
    let mut out = String::with_capacity(name.len() + 2);
    out.push('\'');
    for c in name.chars() {
        match c {
            '\'' => out.push_str("\\'"),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => out.push_str(&format!("\\x{:x}\\", c as u32)),
            c => out.push(c),
        }
    }
    out.push('\'');
    out
}

/// Shortest text that reads back as the same float; always carries a
/// decimal point so it never reads as an integer.
pub fn float_text(x: f64) -> String {
    debug_assert!(x.is_finite());
    let s = format!("{x:?}");
    if s.contains('.') {
        return s;
    }
    match s.find('e') {
        Some(e) => format!("{}.0{}", &s[..e], &s[e..]),
        None => format!("{s}.0"),
    }
}

/// Whether an operator-atom may stand bare (delimiter follows) or must be
/// parenthesized (it is an operand of an operator).
#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    Argument,
    Operand,
}

struct Writer<'a, F> {
    ops: &'a OpTable,
    var_name: F,
    out: String,
}

/// Writes `term` at priority 1200 using `var_name` to name variables.
pub fn write_term<F, S>(term: &Term, ops: &OpTable, var_name: F) -> String
where
    F: Fn(usize) -> S,
    S: AsRef<str>,
{
    let mut w = Writer {
        ops,
        var_name,
        out: String::new(),
    };
    w.term(term, 1200, Slot::Argument);
    w.out
}

/// Writes clauses one per line with canonical variable names, replaying
/// `op/3` directives so later clauses use the operators a reader will know.
pub fn write_program(terms: &[Term], initial_ops: &OpTable) -> String {
    let mut ops = initial_ops.clone();
    let mut out = String::new();
    for term in terms {
        push_clause(&mut out, term, &ops, var_name);
        ops.apply_directive(term);
    }
    out
}

/// As [`write_program`], naming variables with each clause's own names.
pub fn write_clauses(clauses: &[Clause], initial_ops: &OpTable) -> String {
    let mut ops = initial_ops.clone();
    let mut out = String::new();
    for clause in clauses {
        push_clause(&mut out, &clause.term, &ops, |v| {
            clause.var_names[v].as_str()
        });
        ops.apply_directive(&clause.term);
    }
    out
}

/// As [`write_program`], naming variables from `names[clause][ordinal]`.
pub fn write_named(terms: &[Term], names: &[Vec<String>], initial_ops: &OpTable) -> String {
    let mut ops = initial_ops.clone();
    let mut out = String::new();
    for (term, names) in terms.iter().zip(names) {
        push_clause(&mut out, term, &ops, |v| names[v].as_str());
        ops.apply_directive(term);
    }
    out
}

fn push_clause<F, S>(out: &mut String, term: &Term, ops: &OpTable, var_name: F)
where
    F: Fn(usize) -> S,
    S: AsRef<str>,
{
    let text = write_term(term, ops, var_name);
    out.push_str(&text);
    if text.ends_with(is_graphic) {
        out.push(' ');
    }
    out.push_str(".\n");
}

impl<'a, F, S> Writer<'a, F>
where
    F: Fn(usize) -> S,
    S: AsRef<str>,
{
    /// Appends a token, separating it from the previous one when the two
    /// would otherwise fuse.
    fn token(&mut self, text: &str) {
        if let (Some(prev), Some(next)) = (self.out.chars().last(), text.chars().next()) {
            let fuse = (is_alnum(prev) && is_alnum(next))
                || (is_graphic(prev) && is_graphic(next))
                || (prev == '\'' && next == '\'')
                || (is_alnum(prev) && next == '\'');
            if fuse {
                self.out.push(' ');
            }
        }
        self.out.push_str(text);
    }

    /// Opens a grouping parenthesis. After an infix operator `(` may touch
    /// the name; after a letter-digit name it must not.
    fn open_group(&mut self) {
        if self.out.chars().last().is_some_and(is_alnum) {
            self.out.push(' ');
        }
        self.out.push('(');
    }

    fn term(&mut self, term: &Term, max: u32, slot: Slot) {
        match term {
            Term::Var(v) => {
                let name = (self.var_name)(*v);
                self.token(name.as_ref());
            }
            Term::Int(i) => self.token(&i.to_string()),
            Term::Float(x) => self.token(&float_text(*x)),
            Term::Atom(name) => {
                if slot == Slot::Operand && self.ops.is_op(name) {
                    self.open_group();
                    self.token(&atom_text(name));
                    self.out.push(')');
                } else {
                    self.token(&atom_text(name));
                }
            }
            Term::Compound(name, args) => self.compound(name, args, max),
        }
    }

    fn compound(&mut self, name: &str, args: &[Term], max: u32) {
        match (name, args) {
            (".", [_, _]) => return self.list(args),
            ("{}", [inner]) => {
                self.out.push('{');
                self.term(inner, 1200, Slot::Argument);
                self.out.push('}');
                return;
            }
            _ => {}
        }
        let op = match args.len() {
            2 => self.ops.infix(name).map(|d| (d, Form::Infix)),
            1 => self
                .ops
                .prefix(name)
                .map(|d| (d, Form::Prefix))
                .or_else(|| self.ops.postfix(name).map(|d| (d, Form::Postfix))),
            _ => None,
        };
        let Some((def, form)) = op else {
            return self.canonical(name, args);
        };
        let open = def.priority > max;
        if open {
            self.open_group();
        }
        match form {
            Form::Infix => {
                let (lhs, rhs) = (&args[0], &args[1]);
                self.left_operand(lhs, def);
                if name == "," {
                    self.out.push(',');
                } else if name.chars().next().is_some_and(is_alnum) {
                    self.out.push(' ');
                    self.out.push_str(&atom_text(name));
                    self.out.push(' ');
                } else {
                    self.token(&atom_text(name));
                }
                self.term(rhs, def.right_max().unwrap(), Slot::Operand);
            }
            Form::Prefix => {
                self.token(&atom_text(name));
                self.out.push(' ');
                self.term(&args[0], def.right_max().unwrap(), Slot::Operand);
            }
            Form::Postfix => {
                self.left_operand(&args[0], def);
                self.token(&atom_text(name));
            }
        }
        if open {
            self.out.push(')');
        }
    }

    /// Left operand of an infix or postfix operator. Bracketed when its
    /// right edge is an open operand slot that would swallow the operator.
    fn left_operand(&mut self, lhs: &Term, def: OpDef) {
        let lmax = def.left_max().unwrap();
        if self.right_edge_max(lhs).is_some_and(|m| m >= def.priority) {
            self.open_group();
            self.term(lhs, 1200, Slot::Argument);
            self.out.push(')');
        } else {
            self.term(lhs, lmax, Slot::Operand);
        }
    }

    /// Largest priority accepted by an open operand slot on the right edge
    /// of `term` when written bare.
    fn right_edge_max(&self, term: &Term) -> Option<u32> {
        let mut best: Option<u32> = None;
        let mut cur = term;
        loop {
            let Term::Compound(name, args) = cur else {
                return best;
            };
            let slot = match args.len() {
                2 if name != "." => self.ops.infix(name),
                1 if name != "{}" => self.ops.prefix(name),
                _ => None,
            };
            let Some(def) = slot else {
                return best;
            };
            let m = def.right_max().unwrap();
            best = Some(best.map_or(m, |b| b.max(m)));
            cur = args.last().unwrap();
        }
    }

    fn canonical(&mut self, name: &str, args: &[Term]) {
        self.token(&functor_text(name));
        self.out.push('(');
        for (i, arg) in args.iter().enumerate() {
            if i > 0 {
                self.out.push(',');
            }
            self.term(arg, ARG_PRIORITY, Slot::Argument);
        }
        self.out.push(')');
    }

    fn list(&mut self, cell: &[Term]) {
        self.out.push('[');
        self.term(&cell[0], ARG_PRIORITY, Slot::Argument);
        let mut tail = &cell[1];
        loop {
            match tail {
                Term::Compound(dot, next) if dot == "." && next.len() == 2 => {
                    self.out.push(',');
                    self.term(&next[0], ARG_PRIORITY, Slot::Argument);
                    tail = &next[1];
                }
                Term::Atom(nil) if nil == "[]" => break,
                other => {
                    self.out.push('|');
                    self.term(other, ARG_PRIORITY, Slot::Argument);
                    break;
                }
            }
        }
        self.out.push(']');
    }
}

#[derive(Clone, Copy)]
enum Form {
    Infix,
    Prefix,
    Postfix,
}
