//! Random Prolog programs for round-trip testing.
//!
//! Programs are built as term trees and printed with the crate's writer
//! under made-up source variable names, so reading them back exercises
//! the reader, the writer and every codec stage.

#![allow(dead_code)]

use num_bigint::BigInt;
use pca::reader::OpTable;
use pca::term::Term;
use pca::writer::write_named;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type Rng8 = ChaCha8Rng;

pub const MAX_DEPTH: u32 = 6;
pub const MAX_VARS: usize = 40;

/// Operator declarations a generated program may start with.
const USER_OPS: &[(u32, &str, &str)] = &[
    (700, "xfx", "===>"),
    (200, "xfy", "^^"),
    (900, "fy", "~"),
    (100, "yf", "++"),
    (650, "yfx", "<+>"),
    (700, "xfx", "likes"),
    (150, "fx", "#"),
];

const INFIX: &[&str] = &[
    "+", "-", "*", "/", "//", "mod", "=", "\\=", "==", "is", "=..", "<", ">=", ",", ";", "->", ":",
    "^", "**", ":-", "===>", "^^", "<+>", "likes",
];
const PREFIX: &[&str] = &["-", "+", "\\+", "\\", "~", "#", ":-", "dynamic"];
const POSTFIX: &[&str] = &["++"];

const ATOMS: &[&str] = &[
    "a",
    "b",
    "foo",
    "bar_baz",
    "x1",
    "hello world",
    "[]",
    "{}",
    "it's",
    "Ünïcödé",
    "",
    "!",
    ";",
    ",",
    "|",
    "a.b",
    "end_of_file",
    "-",
    "\\",
    "+",
    "mod",
    "[ ]",
    "'",
    "\n",
    "\\n",
    "ÿ",
    "dynamic",
    "~",
    "===>",
    "++",
];

const FUNCTORS: &[&str] = &[
    "f", "g", "h", "node", "Point", "[]", "{}", "a b", "-", "is", "[|]", ".",
];

const FLOATS: &[f64] = &[
    0.5, -2.25, 1.0e-10, 123456.789, 1.0e300, 3.0, -0.0, 2.5e-300,
];

pub struct Generated {
    pub source: String,
    pub terms: Vec<Term>,
}

struct Clause {
    nvars: usize,
}

impl Clause {
    fn var(&self, rng: &mut Rng8) -> Term {
        Term::Var(rng.gen_range(0..self.nvars.max(1)))
    }
}

fn leaf(rng: &mut Rng8, c: &Clause) -> Term {
    match rng.gen_range(0..10) {
        0..=3 if c.nvars > 0 => c.var(rng),
        0..=4 => Term::atom(*ATOMS.choose(rng).unwrap()),
        5 | 6 => Term::int(rng.gen_range(-1000i64..1000)),
        7 => {
            let big: BigInt = BigInt::from(rng.gen::<u64>()) << rng.gen_range(0..128);
            Term::Int(if rng.gen() { -big } else { big })
        }
        _ => Term::Float(*FLOATS.choose(rng).unwrap()),
    }
}

fn term(rng: &mut Rng8, c: &Clause, depth: u32) -> Term {
    if depth <= 1 || rng.gen_ratio(1, 4) {
        return leaf(rng, c);
    }
    let sub = |rng: &mut Rng8| term(rng, c, depth - 1);
    match rng.gen_range(0..10) {
        0..=2 => {
            let name = *INFIX.choose(rng).unwrap();
            Term::compound(name, vec![sub(rng), sub(rng)])
        }
        3 => {
            let name = *PREFIX.choose(rng).unwrap();
            Term::compound(name, vec![sub(rng)])
        }
        4 => {
            let name = *POSTFIX.choose(rng).unwrap();
            Term::compound(name, vec![sub(rng)])
        }
        5 => {
            // Each cons cell is one level of nesting.
            let n = rng.gen_range(0..depth.min(4));
            let items = (0..n).map(|_| term(rng, c, depth - n)).collect();
            let tail = rng.gen_ratio(1, 3).then(|| term(rng, c, depth - n));
            Term::list(items, tail)
        }
        6 => Term::compound("{}", vec![sub(rng)]),
        _ => {
            let name = *FUNCTORS.choose(rng).unwrap();
            let arity = rng.gen_range(1..=4);
            Term::compound(name, (0..arity).map(|_| sub(rng)).collect())
        }
    }
}

fn directive(prio: u32, spec: &str, name: &str) -> Term {
    Term::compound(
        ":-",
        vec![Term::compound(
            "op",
            vec![Term::int(prio), Term::atom(spec), Term::atom(name)],
        )],
    )
}

/// A clause mentioning every one of its `nvars` variables at least once
/// (unless it is a bare random term), of depth at most [`MAX_DEPTH`].
fn clause(rng: &mut Rng8, nvars: usize, all_vars: bool) -> Term {
    let c = Clause { nvars };
    let head_name = ["p", "q", "r", "main", "step"].choose(rng).unwrap();
    let rule = rng.gen_ratio(1, 2);
    let head_depth = if rule { MAX_DEPTH - 2 } else { MAX_DEPTH - 1 };
    let mut head_args: Vec<Term> = (0..nvars).map(Term::Var).collect();
    head_args.shuffle(rng);
    let extra = rng.gen_range(0..3);
    head_args.extend((0..extra).map(|_| term(rng, &c, head_depth)));
    let head = Term::compound(*head_name, head_args);
    if rule {
        let goals = rng.gen_range(1..4);
        let budget = MAX_DEPTH - goals;
        let mut body = term(rng, &c, budget);
        for _ in 1..goals {
            body = Term::compound(",", vec![term(rng, &c, budget), body]);
        }
        Term::compound(":-", vec![head, body])
    } else if !all_vars && rng.gen_ratio(1, 3) {
        term(rng, &c, MAX_DEPTH)
    } else {
        head
    }
}

pub fn depth(t: &Term) -> u32 {
    match t {
        Term::Compound(_, args) => 1 + args.iter().map(depth).max().unwrap_or(0),
        _ => 1,
    }
}

/// Distinct source-style names for a clause's variables; `_` now and then.
fn var_names(rng: &mut Rng8, n: usize) -> Vec<String> {
    const STEMS: &[&str] = &[
        "X", "Acc", "List", "Tail", "H", "T", "Key", "Val", "N", "Out",
    ];
    (0..n)
        .map(|i| {
            if rng.gen_ratio(1, 8) {
                format!("_{}{}", STEMS.choose(rng).unwrap(), i)
            } else {
                format!("{}{}", STEMS.choose(rng).unwrap(), i)
            }
        })
        .collect()
}

/// One random program: optional operator directives, then up to eight
/// clauses of term depth at most [`MAX_DEPTH`] and at most `max_vars`
/// distinct variables each (at least `min_vars` when a clause has any).
pub fn program_with(rng: &mut Rng8, min_vars: usize, max_vars: usize) -> Generated {
    let mut terms = Vec::new();
    let mut names = Vec::new();
    for &(prio, spec, name) in USER_OPS {
        if rng.gen_ratio(1, 2) {
            terms.push(directive(prio, spec, name));
            names.push(Vec::new());
        }
    }
    let count = rng.gen_range(0..=8);
    for _ in 0..count {
        let nvars = rng.gen_range(min_vars..=max_vars);
        let t = clause(rng, nvars, min_vars > 0);
        debug_assert!(depth(&t) <= MAX_DEPTH);
        names.push(var_names(rng, nvars));
        terms.push(t);
    }
    let source = write_named(&terms, &names, &OpTable::standard());
    Generated { source, terms }
}

pub fn program(rng: &mut Rng8) -> Generated {
    program_with(rng, 0, MAX_VARS)
}

pub fn seeded(seed: u64) -> Rng8 {
    Rng8::seed_from_u64(seed)
}

/// Runs `f` on a thread with a stack big enough for deep terms.
pub fn with_big_stack<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> T {
    std::thread::Builder::new()
        .stack_size(256 << 20)
        .spawn(f)
        .unwrap()
        .join()
        .unwrap()
}
