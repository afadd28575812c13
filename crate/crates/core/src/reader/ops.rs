//! Operator definitions driving both the reader and the writer.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::term::Term;

pub const MAX_PRIORITY: u32 = 1200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Specifier {
    Xfx,
    Xfy,
    Yfx,
    Fy,
    Fx,
    Xf,
    Yf,
}

/// Dictionary type column: `0=prefix, 1=infix, 2=postfix`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fixity {
    Prefix = 0,
    Infix = 1,
    Postfix = 2,
}

impl Fixity {
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Fixity> {
        match code {
            0 => Some(Fixity::Prefix),
            1 => Some(Fixity::Infix),
            2 => Some(Fixity::Postfix),
            _ => None,
        }
    }
}

impl Specifier {
    pub fn fixity(self) -> Fixity {
        match self {
            Specifier::Fx | Specifier::Fy => Fixity::Prefix,
            Specifier::Xfx | Specifier::Xfy | Specifier::Yfx => Fixity::Infix,
            Specifier::Xf | Specifier::Yf => Fixity::Postfix,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Specifier::Xfx => "xfx",
            Specifier::Xfy => "xfy",
            Specifier::Yfx => "yfx",
            Specifier::Fy => "fy",
            Specifier::Fx => "fx",
            Specifier::Xf => "xf",
            Specifier::Yf => "yf",
        }
    }
}

impl FromStr for Specifier {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "xfx" => Specifier::Xfx,
            "xfy" => Specifier::Xfy,
            "yfx" => Specifier::Yfx,
            "fy" => Specifier::Fy,
            "fx" => Specifier::Fx,
            "xf" => Specifier::Xf,
            "yf" => Specifier::Yf,
            _ => return Err(()),
        })
    }
}

impl fmt::Display for Specifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OpDef {
    pub priority: u32,
    pub specifier: Specifier,
}

impl OpDef {
    pub fn new(priority: u32, specifier: Specifier) -> Self {
        OpDef {
            priority,
            specifier,
        }
    }

    /// Maximum priority of the left operand (`None` for prefix operators).
    pub fn left_max(&self) -> Option<u32> {
        let p = self.priority;
        match self.specifier {
            Specifier::Xfx | Specifier::Xfy | Specifier::Xf => Some(p - 1),
            Specifier::Yfx | Specifier::Yf => Some(p),
            Specifier::Fx | Specifier::Fy => None,
        }
    }

    /// Maximum priority of the right operand (`None` for postfix operators).
    pub fn right_max(&self) -> Option<u32> {
        let p = self.priority;
        match self.specifier {
            Specifier::Xfx | Specifier::Yfx | Specifier::Fx => Some(p - 1),
            Specifier::Xfy | Specifier::Fy => Some(p),
            Specifier::Xf | Specifier::Yf => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct OpSlots {
    prefix: Option<OpDef>,
    /// Infix or postfix; a name never carries both.
    other: Option<OpDef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpError {
    #[error("operator priority {0} outside 0..=1200")]
    BadPriority(BigInt),
    #[error("`{0}` is not an operator specifier")]
    BadSpecifier(String),
    #[error("`{0}` cannot be redefined as an operator")]
    ReservedName(String),
    #[error("malformed op/3 argument: {0}")]
    Malformed(String),
}

/// The operator table in effect at some point of a program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpTable {
    entries: HashMap<String, OpSlots>,
}

const STANDARD_OPS: &[(u32, Specifier, &[&str])] = &[
    (1200, Specifier::Xfx, &[":-", "-->"]),
    (1200, Specifier::Fx, &[":-", "?-"]),
    (
        1150,
        Specifier::Fx,
        &[
            "dynamic",
            "discontiguous",
            "initialization",
            "meta_predicate",
            "module_transparent",
            "multifile",
            "public",
            "mode",
            "block",
            "volatile",
        ],
    ),
    (1100, Specifier::Xfy, &[";"]),
    (1050, Specifier::Xfy, &["->", "*->"]),
    (1000, Specifier::Xfy, &[","]),
    (900, Specifier::Fy, &["\\+"]),
    (
        700,
        Specifier::Xfx,
        &[
            "=", "\\=", "==", "\\==", "@<", "@>", "@=<", "@>=", "=..", "is", "=:=", "=\\=", "<",
            ">", "=<", ">=",
        ],
    ),
    (600, Specifier::Xfy, &[":"]),
    (500, Specifier::Yfx, &["+", "-", "/\\", "\\/", "xor"]),
    (
        400,
        Specifier::Yfx,
        &["*", "/", "//", "rem", "mod", "div", "<<", ">>", "rdiv"],
    ),
    (200, Specifier::Xfx, &["**"]),
    (200, Specifier::Xfy, &["^"]),
    (200, Specifier::Fy, &["-", "+", "\\"]),
];

impl Default for OpTable {
    fn default() -> Self {
        OpTable::standard()
    }
}

impl OpTable {
    pub fn empty() -> Self {
        OpTable {
            entries: HashMap::new(),
        }
    }

    /// The ISO operator set plus the usual declaration prefixes.
    pub fn standard() -> Self {
        let mut table = OpTable::empty();
        for &(priority, spec, names) in STANDARD_OPS {
            for name in names {
                table.set(name, OpDef::new(priority, spec));
            }
        }
        table
    }

    fn set(&mut self, name: &str, def: OpDef) {
        let slots = self.entries.entry(name.to_owned()).or_default();
        match def.specifier.fixity() {
            Fixity::Prefix => slots.prefix = Some(def),
            _ => slots.other = Some(def),
        }
    }

    pub fn prefix(&self, name: &str) -> Option<OpDef> {
        self.entries.get(name)?.prefix
    }

    pub fn infix(&self, name: &str) -> Option<OpDef> {
        self.entries
            .get(name)?
            .other
            .filter(|d| d.specifier.fixity() == Fixity::Infix)
    }

    pub fn postfix(&self, name: &str) -> Option<OpDef> {
        self.entries
            .get(name)?
            .other
            .filter(|d| d.specifier.fixity() == Fixity::Postfix)
    }

    pub fn is_op(&self, name: &str) -> bool {
        self.entries
            .get(name)
            .is_some_and(|s| s.prefix.is_some() || s.other.is_some())
    }

    /// Highest priority among the definitions of `name`, 0 if none.
    pub fn max_priority(&self, name: &str) -> u32 {
        self.entries.get(name).map_or(0, |s| {
            let a = s.prefix.map_or(0, |d| d.priority);
            let b = s.other.map_or(0, |d| d.priority);
            a.max(b)
        })
    }

    /// Applies `op(priority, specifier, name)`. Priority 0 removes the
    /// definition of the same class.
    pub fn add(&mut self, priority: u32, specifier: Specifier, name: &str) -> Result<(), OpError> {
        if priority > MAX_PRIORITY {
            return Err(OpError::BadPriority(priority.into()));
        }
        if matches!(name, "," | "|" | "[]" | "{}") {
            return Err(OpError::ReservedName(name.to_owned()));
        }
        if priority > 0 {
            self.set(name, OpDef::new(priority, specifier));
            return Ok(());
        }
        if let Some(slots) = self.entries.get_mut(name) {
            match specifier.fixity() {
                Fixity::Prefix => slots.prefix = None,
                fixity => {
                    if slots.other.is_some_and(|d| d.specifier.fixity() == fixity) {
                        slots.other = None;
                    }
                }
            }
            if slots.prefix.is_none() && slots.other.is_none() {
                self.entries.remove(name);
            }
        }
        Ok(())
    }

    /// If `term` is a `:- op(P, S, N)` directive, applies it and returns
    /// `Some(result)`; otherwise `None`. A malformed directive leaves the
    /// table unchanged.
    pub fn apply_directive(&mut self, term: &Term) -> Option<Result<(), OpError>> {
        let Term::Compound(neck, body) = term else {
            return None;
        };
        if neck != ":-" || body.len() != 1 {
            return None;
        }
        let Term::Compound(name, args) = &body[0] else {
            return None;
        };
        if name != "op" || args.len() != 3 {
            return None;
        }
        Some(self.apply_op_args(&args[0], &args[1], &args[2]))
    }

    fn apply_op_args(&mut self, prio: &Term, spec: &Term, names: &Term) -> Result<(), OpError> {
        let priority = match prio {
            Term::Int(p) => u32::try_from(p)
                .ok()
                .filter(|p| *p <= MAX_PRIORITY)
                .ok_or_else(|| OpError::BadPriority(p.clone()))?,
            other => return Err(OpError::Malformed(format!("priority {other:?}"))),
        };
        let specifier = match spec {
            Term::Atom(s) => s
                .parse::<Specifier>()
                .map_err(|_| OpError::BadSpecifier(s.clone()))?,
            other => return Err(OpError::Malformed(format!("specifier {other:?}"))),
        };
        let names = op_names(names)?;
        // validate everything before touching the table
        let mut staged = self.clone();
        for name in &names {
            staged.add(priority, specifier, name)?;
        }
        *self = staged;
        Ok(())
    }
}

fn op_names(names: &Term) -> Result<Vec<String>, OpError> {
    match names {
        Term::Atom(a) if a != "[]" => Ok(vec![a.clone()]),
        _ => {
            let mut out = Vec::new();
            let mut cur = names;
            loop {
                match cur {
                    Term::Atom(a) if a == "[]" => return Ok(out),
                    Term::Compound(dot, cell) if dot == "." && cell.len() == 2 => {
                        match &cell[0] {
                            Term::Atom(a) => out.push(a.clone()),
                            other => {
                                return Err(OpError::Malformed(format!("operator name {other:?}")))
                            }
                        }
                        cur = &cell[1];
                    }
                    other => return Err(OpError::Malformed(format!("operator names {other:?}"))),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op_directive(p: i64, spec: &str, names: Term) -> Term {
        Term::compound(
            ":-",
            vec![Term::compound(
                "op",
                vec![Term::int(p), Term::atom(spec), names],
            )],
        )
    }

    #[test]
    fn standard_table_contents() {
        let t = OpTable::standard();
        assert_eq!(t.infix(":-"), Some(OpDef::new(1200, Specifier::Xfx)));
        assert_eq!(t.prefix(":-"), Some(OpDef::new(1200, Specifier::Fx)));
        assert_eq!(t.infix(","), Some(OpDef::new(1000, Specifier::Xfy)));
        assert_eq!(t.infix("+"), Some(OpDef::new(500, Specifier::Yfx)));
        assert_eq!(t.prefix("-"), Some(OpDef::new(200, Specifier::Fy)));
        assert_eq!(t.prefix("dynamic"), Some(OpDef::new(1150, Specifier::Fx)));
        assert_eq!(t.infix("mod"), Some(OpDef::new(400, Specifier::Yfx)));
        assert_eq!(t.max_priority("-"), 500);
        assert!(!t.is_op("foo"));
    }

    #[test]
    fn operand_bounds() {
        let xfx = OpDef::new(700, Specifier::Xfx);
        assert_eq!((xfx.left_max(), xfx.right_max()), (Some(699), Some(699)));
        let yfx = OpDef::new(500, Specifier::Yfx);
        assert_eq!((yfx.left_max(), yfx.right_max()), (Some(500), Some(499)));
        let fy = OpDef::new(200, Specifier::Fy);
        assert_eq!((fy.left_max(), fy.right_max()), (None, Some(200)));
    }

    #[test]
    fn directive_adds_and_removes() {
        let mut t = OpTable::standard();
        let d = op_directive(700, "xfx", Term::atom("==="));
        assert_eq!(t.apply_directive(&d), Some(Ok(())));
        assert_eq!(t.infix("==="), Some(OpDef::new(700, Specifier::Xfx)));
        let d = op_directive(0, "xfx", Term::atom("==="));
        assert_eq!(t.apply_directive(&d), Some(Ok(())));
        assert!(!t.is_op("==="));
    }

    #[test]
    fn directive_with_name_list() {
        let mut t = OpTable::standard();
        let names = Term::list(vec![Term::atom("aa"), Term::atom("bb")], None);
        t.apply_directive(&op_directive(200, "xf", names))
            .unwrap()
            .unwrap();
        assert_eq!(t.postfix("aa"), Some(OpDef::new(200, Specifier::Xf)));
        assert_eq!(t.postfix("bb"), Some(OpDef::new(200, Specifier::Xf)));
    }

    #[test]
    fn malformed_directive_leaves_table_unchanged() {
        let mut t = OpTable::standard();
        let before = t.clone();
        let bad = [
            op_directive(1201, "xfx", Term::atom("q")),
            op_directive(100, "zzz", Term::atom("q")),
            op_directive(100, "xfx", Term::atom(",")),
            op_directive(
                100,
                "xfx",
                Term::list(vec![Term::atom("q"), Term::int(1)], None),
            ),
        ];
        for d in &bad {
            assert!(matches!(t.apply_directive(d), Some(Err(_))));
            assert_eq!(t, before);
        }
    }

    #[test]
    fn non_op_terms_are_ignored() {
        let mut t = OpTable::standard();
        assert_eq!(t.apply_directive(&Term::atom("a")), None);
        let d = Term::compound(":-", vec![Term::compound("dynamic", vec![Term::atom("a")])]);
        assert_eq!(t.apply_directive(&d), None);
    }

    #[test]
    fn infix_replaces_postfix() {
        let mut t = OpTable::empty();
        t.add(100, Specifier::Xf, "q").unwrap();
        t.add(100, Specifier::Xfx, "q").unwrap();
        assert_eq!(t.postfix("q"), None);
        assert!(t.infix("q").is_some());
    }
}
