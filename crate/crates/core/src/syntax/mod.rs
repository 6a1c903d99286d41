//! First-order modal formulas with equality: the AST, parsing, rendering and
//! the syntactic fragment tests (monadic, monodic, positive).

mod parser;
mod printer;

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use parser::{parse, ParseError};
pub use printer::render;

/// An individual variable. Names follow the variable alphabet
/// `x|y|z|u|v|w` followed by optional digits.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Var(pub String);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A predicate letter together with its arity. Arity 0 letters are
/// propositional letters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PredicateLetter {
    pub name: String,
    pub arity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formula {
    Atom { letter: String, args: Vec<Var> },
    Equality(Var, Var),
    Falsum,
    Verum,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Diamond(Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

/// Returns true if `name` belongs to the reserved variable alphabet.
pub fn is_variable_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some('x' | 'y' | 'z' | 'u' | 'v' | 'w') => chars.all(|c| c.is_ascii_digit()),
        _ => false,
    }
}

pub(crate) const KEYWORDS: [&str; 4] = ["forall", "exists", "true", "false"];

/// Returns true if `name` can be used as a predicate letter: an identifier
/// that is neither a variable nor a keyword.
pub fn is_letter_name(name: &str) -> bool {
    let mut chars = name.chars();
    let head_ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_');
    head_ok
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !is_variable_name(name)
        && !KEYWORDS.contains(&name)
}

// Constructors. These keep test code and translations readable.
impl Formula {
    pub fn atom(letter: impl Into<String>, args: &[&str]) -> Self {
        Formula::Atom {
            letter: letter.into(),
            args: args.iter().map(|a| Var::new(*a)).collect(),
        }
    }

    pub fn prop(letter: impl Into<String>) -> Self {
        Formula::Atom {
            letter: letter.into(),
            args: Vec::new(),
        }
    }

    pub fn eq(a: &str, b: &str) -> Self {
        Formula::Equality(Var::new(a), Var::new(b))
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Self {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    pub fn boxed(f: Formula) -> Self {
        Formula::Box(Box::new(f))
    }

    pub fn diamond(f: Formula) -> Self {
        Formula::Diamond(Box::new(f))
    }

    pub fn forall(x: &str, f: Formula) -> Self {
        Formula::Forall(Var::new(x), Box::new(f))
    }

    pub fn exists(x: &str, f: Formula) -> Self {
        Formula::Exists(Var::new(x), Box::new(f))
    }
}

impl Formula {
    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom { .. } | Formula::Equality(..) | Formula::Falsum | Formula::Verum => {
                Vec::new()
            }
            Formula::Not(g)
            | Formula::Box(g)
            | Formula::Diamond(g)
            | Formula::Forall(_, g)
            | Formula::Exists(_, g) => vec![g],
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => vec![l, r],
        }
    }

    /// Pre-order traversal of all subformulas, including `self`.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            out.push(f);
            for c in f.children().into_iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    pub fn free_variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        collect_free(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// Every variable occurring in the formula, bound, free or as a binder.
    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for f in self.subformulas() {
            match f {
                Formula::Atom { args, .. } => out.extend(args.iter().cloned()),
                Formula::Equality(a, b) => {
                    out.insert(a.clone());
                    out.insert(b.clone());
                }
                Formula::Forall(x, _) | Formula::Exists(x, _) => {
                    out.insert(x.clone());
                }
                _ => {}
            }
        }
        out
    }

    /// Letters with the arity of their first occurrence, or the name of a
    /// letter that occurs with two different arities.
    pub fn letters(&self) -> Result<BTreeMap<String, usize>, (String, usize, usize)> {
        let mut out: BTreeMap<String, usize> = BTreeMap::new();
        for f in self.subformulas() {
            if let Formula::Atom { letter, args } = f {
                match out.get(letter) {
                    Some(&n) if n != args.len() => return Err((letter.clone(), n, args.len())),
                    Some(_) => {}
                    None => {
                        out.insert(letter.clone(), args.len());
                    }
                }
            }
        }
        Ok(out)
    }

    /// Letter names occurring in the formula, regardless of arity.
    pub fn letter_names(&self) -> BTreeSet<String> {
        self.subformulas()
            .into_iter()
            .filter_map(|f| match f {
                Formula::Atom { letter, .. } => Some(letter.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Box(g) | Formula::Diamond(g) => 1 + g.modal_depth(),
            _ => self
                .children()
                .into_iter()
                .map(Formula::modal_depth)
                .max()
                .unwrap_or(0),
        }
    }

    pub fn has_equality(&self) -> bool {
        self.subformulas()
            .iter()
            .any(|f| matches!(f, Formula::Equality(..)))
    }

    pub fn size(&self) -> usize {
        self.subformulas().len()
    }

    /// Universal closure over the free variables, in variable order.
    pub fn universal_closure(&self) -> Formula {
        self.free_variables()
            .into_iter()
            .rev()
            .fold(self.clone(), |acc, x| Formula::Forall(x, Box::new(acc)))
    }

    /// Existential closure over the free variables, in variable order.
    pub fn existential_closure(&self) -> Formula {
        self.free_variables()
            .into_iter()
            .rev()
            .fold(self.clone(), |acc, x| Formula::Exists(x, Box::new(acc)))
    }

    /// Renames every occurrence of a variable (free, bound and binder)
    /// through `map`. Variables missing from `map` are kept.
    pub fn rename_variables(&self, map: &BTreeMap<Var, Var>) -> Formula {
        let r = |x: &Var| map.get(x).cloned().unwrap_or_else(|| x.clone());
        let b = |g: &Formula| Box::new(g.rename_variables(map));
        match self {
            Formula::Atom { letter, args } => Formula::Atom {
                letter: letter.clone(),
                args: args.iter().map(r).collect(),
            },
            Formula::Equality(a, c) => Formula::Equality(r(a), r(c)),
            Formula::Falsum => Formula::Falsum,
            Formula::Verum => Formula::Verum,
            Formula::Not(g) => Formula::Not(b(g)),
            Formula::And(l, rr) => Formula::And(b(l), b(rr)),
            Formula::Or(l, rr) => Formula::Or(b(l), b(rr)),
            Formula::Implies(l, rr) => Formula::Implies(b(l), b(rr)),
            Formula::Iff(l, rr) => Formula::Iff(b(l), b(rr)),
            Formula::Box(g) => Formula::Box(b(g)),
            Formula::Diamond(g) => Formula::Diamond(b(g)),
            Formula::Forall(x, g) => Formula::Forall(r(x), b(g)),
            Formula::Exists(x, g) => Formula::Exists(r(x), b(g)),
        }
    }
}

fn collect_free(f: &Formula, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
    match f {
        Formula::Atom { args, .. } => {
            for a in args {
                if !bound.contains(a) {
                    out.insert(a.clone());
                }
            }
        }
        Formula::Equality(a, b) => {
            for v in [a, b] {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
        }
        Formula::Forall(x, g) | Formula::Exists(x, g) => {
            bound.push(x.clone());
            collect_free(g, bound, out);
            bound.pop();
        }
        _ => {
            for c in f.children() {
                collect_free(c, bound, out);
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

/// Syntactic profile of a formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentReport {
    pub is_monadic: bool,
    pub is_monodic: bool,
    pub is_positive: bool,
    pub has_equality: bool,
    pub variable_count: usize,
    pub modal_depth: usize,
    pub max_letter_arity: usize,
}

pub fn free_variables(f: &Formula) -> BTreeSet<Var> {
    f.free_variables()
}

pub fn classify(f: &Formula) -> FragmentReport {
    let subs = f.subformulas();
    let max_letter_arity = subs
        .iter()
        .filter_map(|g| match g {
            Formula::Atom { args, .. } => Some(args.len()),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let is_monodic = subs.iter().all(|g| match g {
        Formula::Box(body) | Formula::Diamond(body) => body.free_variables().len() <= 1,
        _ => true,
    });
    let is_positive = !subs
        .iter()
        .any(|g| matches!(g, Formula::Not(_) | Formula::Falsum));
    FragmentReport {
        is_monadic: max_letter_arity <= 1,
        is_monodic,
        is_positive,
        has_equality: f.has_equality(),
        variable_count: f.variables().len(),
        modal_depth: f.modal_depth(),
        max_letter_arity,
    }
}
