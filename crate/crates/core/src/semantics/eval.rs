use super::{Individual, Mode, Model, World};
use crate::syntax::{Formula, Var};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("modal operators are not allowed in intuitionistic mode")]
    ModalityInIntuitionisticMode,
    #[error("variable `{0}` is not assigned")]
    Unassigned(Var),
    #[error("`{var}` is assigned an individual outside the domain of world `{world}`")]
    OutsideDomain { var: Var, world: String },
    #[error("world index {0} is out of range")]
    UnknownWorld(World),
    #[error("letter `{letter}` has arity {model} in the model but {formula} in the formula")]
    ArityMismatch {
        letter: String,
        model: usize,
        formula: usize,
    },
}

/// A partial map from variables to individuals.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(BTreeMap<Var, Individual>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, x: &str, a: Individual) -> Self {
        self.0.insert(Var::new(x), a);
        self
    }

    pub fn insert(&mut self, x: Var, a: Individual) {
        self.0.insert(x, a);
    }

    pub fn get(&self, x: &Var) -> Option<Individual> {
        self.0.get(x).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Individual)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(Var, Individual)> for Assignment {
    fn from_iter<T: IntoIterator<Item = (Var, Individual)>>(iter: T) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone)]
enum Node {
    Atom { letter: Option<usize>, args: Vec<usize> },
    Equal(usize, usize),
    False,
    True,
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Box(Box<Node>),
    Diamond(Box<Node>),
    Forall(usize, Box<Node>),
    Exists(usize, Box<Node>),
}

/// A formula resolved against a model's letters, with variables mapped to
/// environment slots. Reusable across all models that share the letter
/// table of the model it was prepared for.
#[derive(Debug, Clone)]
pub struct Prepared {
    root: Node,
    slots: usize,
    free: Vec<(Var, usize)>,
    mode: Mode,
}

impl Model {
    pub fn prepare(&self, f: &Formula) -> Result<Prepared, EvalError> {
        if self.mode == Mode::Intuitionistic && f.modal_depth() > 0 {
            return Err(EvalError::ModalityInIntuitionisticMode);
        }
        let vars: Vec<Var> = f.variables().into_iter().collect();
        let slot = |x: &Var| vars.binary_search(x).expect("variable collected");
        let root = self.compile(f, &slot)?;
        let free = f
            .free_variables()
            .into_iter()
            .map(|x| {
                let s = slot(&x);
                (x, s)
            })
            .collect();
        Ok(Prepared {
            root,
            slots: vars.len(),
            free,
            mode: self.mode,
        })
    }

    fn compile(&self, f: &Formula, slot: &dyn Fn(&Var) -> usize) -> Result<Node, EvalError> {
        let c = |g: &Formula| self.compile(g, slot).map(Box::new);
        Ok(match f {
            Formula::Atom { letter, args } => {
                let idx = self.letter_index(letter);
                if let Some(i) = idx {
                    let arity = self.letters()[i].arity;
                    if arity != args.len() {
                        return Err(EvalError::ArityMismatch {
                            letter: letter.clone(),
                            model: arity,
                            formula: args.len(),
                        });
                    }
                }
                Node::Atom {
                    letter: idx,
                    args: args.iter().map(slot).collect(),
                }
            }
            Formula::Equality(a, b) => Node::Equal(slot(a), slot(b)),
            Formula::Falsum => Node::False,
            Formula::Verum => Node::True,
            Formula::Not(g) => Node::Not(c(g)?),
            Formula::And(l, r) => Node::And(c(l)?, c(r)?),
            Formula::Or(l, r) => Node::Or(c(l)?, c(r)?),
            Formula::Implies(l, r) => Node::Implies(c(l)?, c(r)?),
            Formula::Iff(l, r) => Node::Iff(c(l)?, c(r)?),
            Formula::Box(g) => Node::Box(c(g)?),
            Formula::Diamond(g) => Node::Diamond(c(g)?),
            Formula::Forall(x, g) => Node::Forall(slot(x), c(g)?),
            Formula::Exists(x, g) => Node::Exists(slot(x), c(g)?),
        })
    }
}

impl Prepared {
    /// Free variables in variable order; [`Prepared::holds`] takes their
    /// values in this order.
    pub fn free_variables(&self) -> impl Iterator<Item = &Var> {
        self.free.iter().map(|(x, _)| x)
    }

    pub fn free_count(&self) -> usize {
        self.free.len()
    }

    /// Truth at `w` with the free variables bound to `values`. The caller
    /// guarantees that every value lies in the domain of `w`.
    pub fn holds(&self, m: &Model, w: World, values: &[Individual]) -> bool {
        debug_assert_eq!(values.len(), self.free.len());
        let mut env = vec![0; self.slots];
        for ((_, s), &a) in self.free.iter().zip(values) {
            env[*s] = a;
        }
        match self.mode {
            Mode::Modal => modal(m, w, &self.root, &mut env),
            Mode::Intuitionistic => intuitionistic(m, w, &self.root, &mut env),
        }
    }

    /// Checked evaluation under an [`Assignment`].
    pub fn eval(&self, m: &Model, w: World, s: &Assignment) -> Result<bool, EvalError> {
        if w >= m.frame().len() {
            return Err(EvalError::UnknownWorld(w));
        }
        let mut values = Vec::with_capacity(self.free.len());
        for (x, _) in &self.free {
            let a = s.get(x).ok_or_else(|| EvalError::Unassigned(x.clone()))?;
            if a >= m.individuals().len() || !m.in_domain(w, a) {
                return Err(EvalError::OutsideDomain {
                    var: x.clone(),
                    world: m.frame().name(w).to_string(),
                });
            }
            values.push(a);
        }
        Ok(self.holds(m, w, &values))
    }
}

fn atom(m: &Model, w: World, letter: Option<usize>, args: &[usize], env: &[Individual]) -> bool {
    match letter {
        None => false,
        Some(l) => {
            let n = m.individuals().len();
            let code = args.iter().fold(0, |acc, &s| acc * n + env[s]);
            m.fact_code(w, l, code)
        }
    }
}

fn modal(m: &Model, w: World, f: &Node, env: &mut [Individual]) -> bool {
    match f {
        Node::Atom { letter, args } => atom(m, w, *letter, args, env),
        Node::Equal(a, b) => m.equal_at(w, env[*a], env[*b]),
        Node::False => false,
        Node::True => true,
        Node::Not(g) => !modal(m, w, g, env),
        Node::And(l, r) => modal(m, w, l, env) && modal(m, w, r, env),
        Node::Or(l, r) => modal(m, w, l, env) || modal(m, w, r, env),
        Node::Implies(l, r) => !modal(m, w, l, env) || modal(m, w, r, env),
        Node::Iff(l, r) => modal(m, w, l, env) == modal(m, w, r, env),
        Node::Box(g) => m
            .frame()
            .successors(w)
            .iter()
            .all(|&v| modal(m, v, g, env)),
        Node::Diamond(g) => m
            .frame()
            .successors(w)
            .iter()
            .any(|&v| modal(m, v, g, env)),
        Node::Forall(x, g) => quantify(m, w, *x, g, env, true, modal),
        Node::Exists(x, g) => quantify(m, w, *x, g, env, false, modal),
    }
}

type Evaluator = fn(&Model, World, &Node, &mut [Individual]) -> bool;

// Actualist quantification over the domain of `w`.
fn quantify(
    m: &Model,
    w: World,
    x: usize,
    body: &Node,
    env: &mut [Individual],
    universal: bool,
    ev: Evaluator,
) -> bool {
    let saved = env[x];
    let mut result = universal;
    for &a in m.domain(w) {
        env[x] = a;
        if ev(m, w, body, env) != universal {
            result = !universal;
            break;
        }
    }
    env[x] = saved;
    result
}

fn intuitionistic(m: &Model, w: World, f: &Node, env: &mut [Individual]) -> bool {
    let up = |w: World| m.frame().successors(w);
    match f {
        Node::Atom { letter, args } => atom(m, w, *letter, args, env),
        Node::Equal(a, b) => m.equal_at(w, env[*a], env[*b]),
        Node::False => false,
        Node::True => true,
        Node::And(l, r) => intuitionistic(m, w, l, env) && intuitionistic(m, w, r, env),
        Node::Or(l, r) => intuitionistic(m, w, l, env) || intuitionistic(m, w, r, env),
        Node::Not(g) => up(w).iter().all(|&v| !intuitionistic(m, v, g, env)),
        Node::Implies(l, r) => up(w)
            .iter()
            .all(|&v| !intuitionistic(m, v, l, env) || intuitionistic(m, v, r, env)),
        Node::Iff(l, r) => up(w).iter().all(|&v| {
            let (a, b) = (intuitionistic(m, v, l, env), intuitionistic(m, v, r, env));
            a == b
        }),
        Node::Exists(x, g) => quantify(m, w, *x, g, env, false, intuitionistic),
        Node::Forall(x, g) => up(w)
            .iter()
            .all(|&v| quantify(m, v, *x, g, env, true, intuitionistic)),
        Node::Box(_) | Node::Diamond(_) => unreachable!("rejected by prepare"),
    }
}

/// Truth of `f` at world `w` under assignment `s`.
///
/// Modal mode uses the classical clauses at each world, `[]`/`<>` over
/// successors and actualist quantifiers. Intuitionistic mode evaluates
/// `->`, `~`, `<->` and `forall` over all successors (the frame is expected
/// to be a preorder) and rejects modal operators.
pub fn eval(m: &Model, w: World, s: &Assignment, f: &Formula) -> Result<bool, EvalError> {
    m.prepare(f)?.eval(m, w, s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validity {
    Valid,
    /// The first falsifying world and assignment in world order, then
    /// lexicographic assignment order.
    Falsified { world: World, assignment: Assignment },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

/// Truth of `f` at every world under every assignment of its free
/// variables into that world's domain.
pub fn valid_in_model(m: &Model, f: &Formula) -> Result<Validity, EvalError> {
    let p = m.prepare(f)?;
    Ok(p.first_falsifier(m).map_or(Validity::Valid, |(world, values)| {
        Validity::Falsified {
            world,
            assignment: p.free_variables().cloned().zip(values).collect(),
        }
    }))
}

impl Prepared {
    /// First (world, values) at which the formula fails.
    pub fn first_falsifier(&self, m: &Model) -> Option<(World, Vec<Individual>)> {
        self.first_with(m, false)
    }

    /// First (world, values) at which the formula holds.
    pub fn first_satisfier(&self, m: &Model) -> Option<(World, Vec<Individual>)> {
        self.first_with(m, true)
    }

    fn first_with(&self, m: &Model, target: bool) -> Option<(World, Vec<Individual>)> {
        let k = self.free.len();
        for w in m.frame().worlds() {
            let dom = m.domain(w);
            if dom.is_empty() && k > 0 {
                continue;
            }
            let mut idx = vec![0usize; k];
            'odometer: loop {
                let values: Vec<Individual> = idx.iter().map(|&i| dom[i]).collect();
                if self.holds(m, w, &values) == target {
                    return Some((w, values));
                }
                // last variable varies fastest
                let mut pos = k;
                loop {
                    if pos == 0 {
                        break 'odometer;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < dom.len() {
                        continue 'odometer;
                    }
                    idx[pos] = 0;
                }
            }
        }
        None
    }
}
