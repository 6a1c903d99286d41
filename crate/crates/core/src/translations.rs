//! The Kripke trick and its variants: rewriting every atom `P(s,t)` of a
//! classical formula over one binary letter into a formula over unary
//! letters, plus the companion Kripke models that make the rewriting
//! truth-preserving on a given finite structure.

use crate::semantics::{EqPrinciple, Frame, Individual, Mode, Model, World};
use crate::syntax::{is_letter_name, Formula, Var};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// `P(s,t)` becomes `<>(Q1(s) & Q2(t))`.
    Diamond2,
    /// `P(s,t)` becomes `~<>(Q(s) & Q(t))`; for symmetric irreflexive `P`.
    NegDiamond1,
    /// `P(s,t)` becomes `(Q1(s) & Q2(t) -> p) | q`.
    PositiveImp,
    /// `P(s,t)` becomes `~(Q1(s) & Q2(t)) | q`.
    NegDisj,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Diamond2,
        Variant::NegDiamond1,
        Variant::PositiveImp,
        Variant::NegDisj,
    ];

    /// Short tag used on the command line.
    pub fn tag(self) -> &'static str {
        match self {
            Variant::Diamond2 => "d2",
            Variant::NegDiamond1 => "nd1",
            Variant::PositiveImp => "pi",
            Variant::NegDisj => "ndj",
        }
    }

    pub fn has_companion_model(self) -> bool {
        matches!(self, Variant::Diamond2 | Variant::NegDiamond1)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Variant::ALL
            .into_iter()
            .find(|v| v.tag() == s)
            .ok_or_else(|| format!("unknown variant `{s}` (expected d2, nd1, pi or ndj)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("input contains a modal operator")]
    Modality,
    #[error("input contains an equality atom")]
    Equality,
    #[error("input contains two binary letters, `{0}` and `{1}`")]
    SecondBinaryLetter(String, String),
    #[error("letter `{0}` has arity {1}; only one binary letter is supported")]
    UnsupportedArity(String, usize),
    #[error("letter `{letter}` is used with arity {first} and with arity {second}")]
    ArityConflict {
        letter: String,
        first: usize,
        second: usize,
    },
    #[error("fresh name `{0}` collides with a letter of the input or another fresh name")]
    NameCollision(String),
    #[error("`{0}` is not a valid letter name")]
    InvalidName(String),
    #[error("structure violates a precondition: {0}")]
    Precondition(String),
    #[error("variant {0} has no companion-model construction")]
    NoCompanion(Variant),
}

/// Names of the fresh letters introduced by a translation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamingScheme {
    pub q1_name: String,
    pub q2_name: String,
    pub q_name: String,
    pub p_name: String,
    pub q_prop_name: String,
}

impl Default for NamingScheme {
    fn default() -> Self {
        NamingScheme {
            q1_name: "Q1".into(),
            q2_name: "Q2".into(),
            q_name: "Q".into(),
            p_name: "p_neg".into(),
            q_prop_name: "q_aux".into(),
        }
    }
}

/// `base`, or `base_1`, `base_2`, ... avoiding `taken`.
pub fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}_{i}"))
        .find(|n| !taken.contains(n))
        .expect("unbounded suffixes")
}

impl NamingScheme {
    /// The default names, suffixed where they would collide with letters
    /// of `f`.
    pub fn avoiding(f: &Formula) -> Self {
        let mut taken = f.letter_names();
        let d = NamingScheme::default();
        let mut pick = |base: &str| {
            let n = fresh_name(base, &taken);
            taken.insert(n.clone());
            n
        };
        NamingScheme {
            q1_name: pick(&d.q1_name),
            q2_name: pick(&d.q2_name),
            q_name: pick(&d.q_name),
            p_name: pick(&d.p_name),
            q_prop_name: pick(&d.q_prop_name),
        }
    }

    fn names(&self) -> [&str; 5] {
        [
            &self.q1_name,
            &self.q2_name,
            &self.q_name,
            &self.p_name,
            &self.q_prop_name,
        ]
    }

    fn check(&self, letters: &BTreeSet<String>) -> Result<(), TranslateError> {
        let names = self.names();
        for (i, n) in names.iter().enumerate() {
            if !is_letter_name(n) {
                return Err(TranslateError::InvalidName(n.to_string()));
            }
            if letters.contains(*n) || names[..i].contains(n) {
                return Err(TranslateError::NameCollision(n.to_string()));
            }
        }
        Ok(())
    }
}

/// Replaces every `~A` by `A -> fresh` and every `false` by `fresh`.
pub fn positivize(f: &Formula, fresh: &str) -> Result<Formula, TranslateError> {
    if !is_letter_name(fresh) {
        return Err(TranslateError::InvalidName(fresh.to_string()));
    }
    if f.letter_names().contains(fresh) {
        return Err(TranslateError::NameCollision(fresh.to_string()));
    }
    Ok(replace_negation(f, fresh))
}

fn replace_negation(f: &Formula, fresh: &str) -> Formula {
    let r = |g: &Formula| Box::new(replace_negation(g, fresh));
    match f {
        Formula::Falsum => Formula::prop(fresh),
        Formula::Not(g) => Formula::Implies(r(g), Box::new(Formula::prop(fresh))),
        Formula::Atom { .. } | Formula::Equality(..) | Formula::Verum => f.clone(),
        Formula::And(l, rr) => Formula::And(r(l), r(rr)),
        Formula::Or(l, rr) => Formula::Or(r(l), r(rr)),
        Formula::Implies(l, rr) => Formula::Implies(r(l), r(rr)),
        Formula::Iff(l, rr) => Formula::Iff(r(l), r(rr)),
        Formula::Box(g) => Formula::Box(r(g)),
        Formula::Diamond(g) => Formula::Diamond(r(g)),
        Formula::Forall(x, g) => Formula::Forall(x.clone(), r(g)),
        Formula::Exists(x, g) => Formula::Exists(x.clone(), r(g)),
    }
}

/// Output of [`kripke_trick`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Translation {
    pub formula: Formula,
    /// The binary letter that was replaced, if the input had one.
    pub binary_letter: Option<String>,
    pub warnings: Vec<String>,
}

/// The binary letter of a classical formula admissible for the trick.
pub fn binary_letter(f: &Formula) -> Result<Option<String>, TranslateError> {
    if f.modal_depth() > 0 {
        return Err(TranslateError::Modality);
    }
    if f.has_equality() {
        return Err(TranslateError::Equality);
    }
    let letters = f
        .letters()
        .map_err(|(letter, first, second)| TranslateError::ArityConflict {
            letter,
            first,
            second,
        })?;
    let mut binary: Option<String> = None;
    for (name, &arity) in &letters {
        match arity {
            0 | 1 => {}
            2 => {
                if let Some(b) = &binary {
                    return Err(TranslateError::SecondBinaryLetter(b.clone(), name.clone()));
                }
                binary = Some(name.clone());
            }
            n => return Err(TranslateError::UnsupportedArity(name.clone(), n)),
        }
    }
    Ok(binary)
}

/// Rewrites every atom of the binary letter of `f`, keeping argument
/// variables in place and all other structure unchanged.
pub fn kripke_trick(
    f: &Formula,
    variant: Variant,
    names: &NamingScheme,
) -> Result<Translation, TranslateError> {
    let binary = binary_letter(f)?;
    names.check(&f.letter_names())?;
    let mut warnings = Vec::new();
    if matches!(variant, Variant::PositiveImp | Variant::NegDisj)
        && !crate::syntax::classify(f).is_positive
    {
        warnings.push(format!(
            "input is not positive; consider positivizing before the {variant} translation"
        ));
    }
    let formula = match &binary {
        Some(p) => rewrite(f, p, variant, names),
        None => f.clone(),
    };
    Ok(Translation {
        formula,
        binary_letter: binary,
        warnings,
    })
}

fn replacement(s: &Var, t: &Var, variant: Variant, names: &NamingScheme) -> Formula {
    let unary = |name: &str, x: &Var| Formula::Atom {
        letter: name.to_string(),
        args: vec![x.clone()],
    };
    let pair = |a: &str, b: &str| Formula::and(unary(a, s), unary(b, t));
    match variant {
        Variant::Diamond2 => Formula::diamond(pair(&names.q1_name, &names.q2_name)),
        Variant::NegDiamond1 => Formula::not(Formula::diamond(pair(&names.q_name, &names.q_name))),
        Variant::PositiveImp => Formula::or(
            Formula::implies(
                pair(&names.q1_name, &names.q2_name),
                Formula::prop(&names.p_name),
            ),
            Formula::prop(&names.q_prop_name),
        ),
        Variant::NegDisj => Formula::or(
            Formula::not(pair(&names.q1_name, &names.q2_name)),
            Formula::prop(&names.q_prop_name),
        ),
    }
}

fn rewrite(f: &Formula, p: &str, variant: Variant, names: &NamingScheme) -> Formula {
    let r = |g: &Formula| Box::new(rewrite(g, p, variant, names));
    match f {
        Formula::Atom { letter, args } if letter == p => {
            replacement(&args[0], &args[1], variant, names)
        }
        Formula::Atom { .. } | Formula::Equality(..) | Formula::Falsum | Formula::Verum => {
            f.clone()
        }
        Formula::Not(g) => Formula::Not(r(g)),
        Formula::And(l, rr) => Formula::And(r(l), r(rr)),
        Formula::Or(l, rr) => Formula::Or(r(l), r(rr)),
        Formula::Implies(l, rr) => Formula::Implies(r(l), r(rr)),
        Formula::Iff(l, rr) => Formula::Iff(r(l), r(rr)),
        Formula::Box(g) => Formula::Box(r(g)),
        Formula::Diamond(g) => Formula::Diamond(r(g)),
        Formula::Forall(x, g) => Formula::Forall(x.clone(), r(g)),
        Formula::Exists(x, g) => Formula::Exists(x.clone(), r(g)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassicalError {
    #[error("modal operators have no classical reading")]
    Modality,
    #[error("variable `{0}` is free")]
    Unassigned(Var),
    #[error("the structure has no interpretation for letter `{0}` of arity {1}")]
    UnsupportedLetter(String, usize),
    #[error("input contains two binary letters, `{0}` and `{1}`")]
    SecondBinaryLetter(String, String),
}

/// A finite classical structure: domain `{0..size-1}`, one binary relation
/// (interpreting whichever binary letter a formula uses) and optional
/// interpretations of unary and propositional letters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassicalStructure {
    pub size: usize,
    pub relation: BTreeSet<(usize, usize)>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub unary: BTreeMap<String, BTreeSet<usize>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub nullary: BTreeMap<String, bool>,
}

impl ClassicalStructure {
    pub fn new(size: usize, relation: impl IntoIterator<Item = (usize, usize)>) -> Self {
        ClassicalStructure {
            size,
            relation: relation.into_iter().collect(),
            ..Default::default()
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.relation.iter().all(|&(a, b)| self.relation.contains(&(b, a)))
    }

    pub fn is_irreflexive(&self) -> bool {
        self.relation.iter().all(|&(a, b)| a != b)
    }

    /// Classical truth of a sentence; equality is identity. Letters the
    /// structure does not interpret are false.
    pub fn satisfies(&self, f: &Formula) -> Result<bool, ClassicalError> {
        let mut binary: Option<&str> = None;
        for g in f.subformulas() {
            match g {
                Formula::Box(_) | Formula::Diamond(_) => return Err(ClassicalError::Modality),
                Formula::Atom { letter, args } if args.len() == 2 => match binary {
                    Some(b) if b != letter => {
                        return Err(ClassicalError::SecondBinaryLetter(
                            b.to_string(),
                            letter.clone(),
                        ))
                    }
                    _ => binary = Some(letter),
                },
                Formula::Atom { letter, args } if args.len() > 2 => {
                    return Err(ClassicalError::UnsupportedLetter(letter.clone(), args.len()))
                }
                _ => {}
            }
        }
        self.holds(f, &mut BTreeMap::new())
    }

    fn holds(&self, f: &Formula, env: &mut BTreeMap<Var, usize>) -> Result<bool, ClassicalError> {
        let val = |x: &Var, env: &BTreeMap<Var, usize>| {
            env.get(x)
                .copied()
                .ok_or_else(|| ClassicalError::Unassigned(x.clone()))
        };
        Ok(match f {
            Formula::Atom { letter, args } => match args.len() {
                0 => self.nullary.get(letter).copied().unwrap_or(false),
                1 => {
                    let a = val(&args[0], env)?;
                    self.unary.get(letter).is_some_and(|s| s.contains(&a))
                }
                _ => {
                    let (a, b) = (val(&args[0], env)?, val(&args[1], env)?);
                    self.relation.contains(&(a, b))
                }
            },
            Formula::Equality(x, y) => val(x, env)? == val(y, env)?,
            Formula::Falsum => false,
            Formula::Verum => true,
            Formula::Not(g) => !self.holds(g, env)?,
            Formula::And(l, r) => self.holds(l, env)? && self.holds(r, env)?,
            Formula::Or(l, r) => self.holds(l, env)? || self.holds(r, env)?,
            Formula::Implies(l, r) => !self.holds(l, env)? || self.holds(r, env)?,
            Formula::Iff(l, r) => self.holds(l, env)? == self.holds(r, env)?,
            Formula::Box(_) | Formula::Diamond(_) => return Err(ClassicalError::Modality),
            Formula::Forall(x, g) | Formula::Exists(x, g) => {
                let universal = matches!(f, Formula::Forall(..));
                let saved = env.get(x).copied();
                let mut result = universal;
                for a in 0..self.size {
                    env.insert(x.clone(), a);
                    if self.holds(g, env)? != universal {
                        result = !universal;
                        break;
                    }
                }
                match saved {
                    Some(a) => env.insert(x.clone(), a),
                    None => env.remove(x),
                };
                result
            }
        })
    }
}

/// The Kripke model in which the translation of `P(a,b)` holds at the root
/// exactly when `(a,b)` is in `m.relation`.
///
/// All worlds see each other and share the domain of `m`. For `Diamond2`
/// there is one world per pair in the relation, where `Q1` holds of the
/// first and `Q2` of the second component. For `NegDiamond1` there is one
/// world per unordered pair (loops included) outside the relation, where
/// `Q` holds of both members. The root carries no `Q` facts. Unary and
/// propositional letters of `m` are copied to every world.
pub fn build_companion_model(
    m: &ClassicalStructure,
    variant: Variant,
    names: &NamingScheme,
) -> Result<(Model, World), TranslateError> {
    if m.size == 0 {
        return Err(TranslateError::Precondition("domain is empty".into()));
    }
    if let Some(&(a, b)) = m.relation.iter().find(|&&(a, b)| a >= m.size || b >= m.size) {
        return Err(TranslateError::Precondition(format!(
            "pair ({a},{b}) lies outside the domain"
        )));
    }
    let mut pairs: Vec<(Individual, Individual)> = Vec::new();
    match variant {
        Variant::Diamond2 => pairs.extend(m.relation.iter().copied()),
        Variant::NegDiamond1 => {
            if !m.is_symmetric() {
                return Err(TranslateError::Precondition("relation is not symmetric".into()));
            }
            if !m.is_irreflexive() {
                return Err(TranslateError::Precondition("relation is not irreflexive".into()));
            }
            for a in 0..m.size {
                for b in a..m.size {
                    if !m.relation.contains(&(a, b)) {
                        pairs.push((a, b));
                    }
                }
            }
        }
        v => return Err(TranslateError::NoCompanion(v)),
    }
    let used: BTreeSet<String> = m.unary.keys().chain(m.nullary.keys()).cloned().collect();
    names.check(&used)?;

    let mut worlds = vec!["root".to_string()];
    worlds.extend(pairs.iter().map(|(a, b)| format!("w_{a}_{b}")));
    let n = worlds.len();
    let edges = (0..n).flat_map(|w| (0..n).map(move |v| (w, v)));
    let frame = Frame::new(worlds, edges).expect("distinct world names");
    let individuals = (0..m.size).map(|a| a.to_string()).collect();
    let domain: Vec<Individual> = (0..m.size).collect();
    let mut model = Model::new(
        frame,
        individuals,
        vec![domain; n],
        Mode::Modal,
        EqPrinciple::Eq3,
        true,
    )
    .expect("domain in range");

    match variant {
        Variant::Diamond2 => {
            let q1 = model.add_letter(&names.q1_name, 1).expect("fresh");
            let q2 = model.add_letter(&names.q2_name, 1).expect("fresh");
            for (i, &(a, b)) in pairs.iter().enumerate() {
                model.set_fact(i + 1, q1, &[a], true);
                model.set_fact(i + 1, q2, &[b], true);
            }
        }
        _ => {
            let q = model.add_letter(&names.q_name, 1).expect("fresh");
            for (i, &(a, b)) in pairs.iter().enumerate() {
                model.set_fact(i + 1, q, &[a], true);
                model.set_fact(i + 1, q, &[b], true);
            }
        }
    }
    for (name, ext) in &m.unary {
        let l = model.add_letter(name, 1).expect("fresh");
        for w in 0..n {
            for &a in ext {
                model.set_fact(w, l, &[a], true);
            }
        }
    }
    for (name, &value) in &m.nullary {
        let l = model.add_letter(name, 0).expect("fresh");
        for w in 0..n {
            model.set_fact(w, l, &[], value);
        }
    }
    Ok((model, 0))
}
