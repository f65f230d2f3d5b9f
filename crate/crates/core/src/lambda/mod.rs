//! Linear implicational types and linear λ-terms.

mod reduce;
mod semantics;
mod syntax;
mod typing;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use reduce::{beta_normalize, free_variables, is_linear};
pub use semantics::{interpret_derivation, interpret_type, Interpretation, SemanticsError};
pub use syntax::{parse_term, parse_type, SyntaxError};
pub use typing::{check_derivation, infer, Rule, TypeError, TypingDerivation, TypingViolation};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinType {
    Atom(String),
    Imp(Box<LinType>, Box<LinType>),
}

impl LinType {
    pub fn atom(name: &str) -> LinType {
        LinType::Atom(name.to_string())
    }

    pub fn imp(a: LinType, b: LinType) -> LinType {
        LinType::Imp(Box::new(a), Box::new(b))
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            LinType::Atom(a) => {
                out.insert(a);
            }
            LinType::Imp(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Splits `A1 -> ... -> An -> p` into `([A1..An], p)`.
    pub fn uncurried(&self) -> (Vec<&LinType>, &str) {
        let mut args = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                LinType::Atom(a) => return (args, a),
                LinType::Imp(a, b) => {
                    args.push(a.as_ref());
                    cur = b;
                }
            }
        }
    }

    /// Replaces every atom through `f`.
    pub fn substitute(&self, f: &impl Fn(&str) -> Option<LinType>) -> Option<LinType> {
        match self {
            LinType::Atom(a) => f(a),
            LinType::Imp(a, b) => Some(LinType::imp(a.substitute(f)?, b.substitute(f)?)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            LinType::Atom(_) => 1,
            LinType::Imp(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl fmt::Display for LinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinType::Atom(a) => f.write_str(a),
            LinType::Imp(a, b) => match a.as_ref() {
                LinType::Atom(_) => write!(f, "{a} -> {b}"),
                _ => write!(f, "({a}) -> {b}"),
            },
        }
    }
}

impl fmt::Debug for LinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    App(Box<Term>, Box<Term>),
    Lam(String, Box<Term>),
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(x.to_string())
    }

    pub fn constant(c: &str) -> Term {
        Term::Const(c.to_string())
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn lam(x: &str, body: Term) -> Term {
        Term::Lam(x.to_string(), Box::new(body))
    }

    /// `f a1 ... an`.
    pub fn apply(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Lam(_, b) => 1 + b.size(),
        }
    }

    pub fn constants(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                Term::Var(_) => {}
                Term::Const(c) => {
                    out.insert(c.as_str());
                }
                Term::App(f, a) => {
                    stack.push(f);
                    stack.push(a);
                }
                Term::Lam(_, b) => stack.push(b),
            }
        }
        out
    }

    /// Replaces constants through `f`, leaving other constants untouched.
    pub fn map_constants(&self, f: &impl Fn(&str) -> Option<Term>) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::Const(c) => f(c).unwrap_or_else(|| self.clone()),
            Term::App(g, a) => Term::app(g.map_constants(f), a.map_constants(f)),
            Term::Lam(x, b) => Term::lam(x, b.map_constants(f)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) | Term::Const(x) => f.write_str(x),
            Term::Lam(x, b) => write!(f, "\\{x}. {b}"),
            Term::App(g, a) => {
                match g.as_ref() {
                    Term::Lam(..) => write!(f, "({g})")?,
                    _ => write!(f, "{g}")?,
                }
                match a.as_ref() {
                    Term::Var(_) | Term::Const(_) => write!(f, " {a}"),
                    _ => write!(f, " ({a})"),
                }
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A signature `(N, C, 𝔗)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub atoms: BTreeSet<String>,
    pub constants: BTreeMap<String, LinType>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_atom(&mut self, a: &str) {
        self.atoms.insert(a.to_string());
    }

    pub fn add_constant(&mut self, c: &str, ty: LinType) {
        self.constants.insert(c.to_string(), ty);
    }

    pub fn type_of(&self, c: &str) -> Option<&LinType> {
        self.constants.get(c)
    }
}
