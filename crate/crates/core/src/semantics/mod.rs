//! Kripke models with expanding (or constant) domains, modal and
//! intuitionistic evaluation, and the three equality principles.
//!
//! Equality is stored per world as a partition of the world's domain. The
//! partition is meant to be a congruence, and depending on the principle it
//! is required to be inherited upwards (`Eq1`), upwards and downwards
//! (`Eq2`), or to be plain identity (`Eq3`). None of this is assumed:
//! [`validate_model`] checks it and reports violations as data.

mod eval;
mod json;
mod validate;

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

pub use eval::{eval, valid_in_model, Assignment, EvalError, Prepared, Validity};
pub use json::{FrameFile, ModelFile};
pub use validate::{validate_model, Violation};

/// Index of a world in a [`Frame`].
pub type World = usize;

/// Index of an individual in a model's individual pool.
pub type Individual = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "modal")]
    Modal,
    #[serde(rename = "int")]
    Intuitionistic,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Modal => "modal",
            Mode::Intuitionistic => "int",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "modal" => Ok(Mode::Modal),
            "int" | "intuitionistic" => Ok(Mode::Intuitionistic),
            _ => Err(format!("unknown mode `{s}` (expected modal or int)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EqPrinciple {
    /// Upward-hereditary congruence.
    Eq1,
    /// Upward- and downward-hereditary congruence.
    Eq2,
    /// The coincidence (identity) relation.
    Eq3,
}

impl fmt::Display for EqPrinciple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EqPrinciple::Eq1 => "eq1",
            EqPrinciple::Eq2 => "eq2",
            EqPrinciple::Eq3 => "eq3",
        })
    }
}

impl std::str::FromStr for EqPrinciple {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "eq1" => Ok(EqPrinciple::Eq1),
            "eq2" => Ok(EqPrinciple::Eq2),
            "eq3" => Ok(EqPrinciple::Eq3),
            _ => Err(format!("unknown equality principle `{s}` (expected eq1, eq2 or eq3)")),
        }
    }
}

/// Structural problems that prevent a model from being built at all.
/// Semantic invariant failures are [`Violation`]s instead.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("world `{0}` is declared twice")]
    DuplicateWorld(String),
    #[error("frame has no worlds")]
    NoWorlds,
    #[error("unknown individual `{0}`")]
    UnknownIndividual(String),
    #[error("individual index {0} is out of range")]
    IndividualOutOfRange(usize),
    #[error("letter `{letter}` is used with arity {first} and with arity {second}")]
    ArityConflict {
        letter: String,
        first: usize,
        second: usize,
    },
    #[error("equality classes at world `{world}` are not a partition of its domain: {reason}")]
    BadPartition { world: String, reason: String },
    #[error("malformed model file: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    names: Vec<String>,
    adj: Vec<Vec<bool>>,
    succ: Vec<Vec<World>>,
}

impl Frame {
    pub fn new(
        names: Vec<String>,
        edges: impl IntoIterator<Item = (World, World)>,
    ) -> Result<Self, ModelError> {
        if names.is_empty() {
            return Err(ModelError::NoWorlds);
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(ModelError::DuplicateWorld(n.clone()));
            }
        }
        let n = names.len();
        let mut adj = vec![vec![false; n]; n];
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(ModelError::UnknownWorld(format!("#{}", a.max(b))));
            }
            adj[a][b] = true;
        }
        Ok(Self::from_parts(names, adj))
    }

    /// A frame on worlds `w0..w{n-1}`.
    pub fn canonical(n: usize, edges: impl IntoIterator<Item = (World, World)>) -> Self {
        Self::new((0..n).map(|i| format!("w{i}")).collect(), edges)
            .expect("canonical frame edges in range")
    }

    pub(crate) fn from_parts(names: Vec<String>, adj: Vec<Vec<bool>>) -> Self {
        let succ = adj
            .iter()
            .map(|row| (0..row.len()).filter(|&j| row[j]).collect())
            .collect();
        Frame { names, adj, succ }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn worlds(&self) -> std::ops::Range<World> {
        0..self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, w: World) -> &str {
        &self.names[w]
    }

    pub fn index_of(&self, name: &str) -> Option<World> {
        self.names.iter().position(|n| n == name)
    }

    pub fn sees(&self, w: World, v: World) -> bool {
        self.adj[w][v]
    }

    pub fn successors(&self, w: World) -> &[World] {
        &self.succ[w]
    }

    pub fn edges(&self) -> Vec<(World, World)> {
        self.worlds()
            .flat_map(|w| self.succ[w].iter().map(move |&v| (w, v)))
            .collect()
    }
}

/// A predicate letter interpreted by a model.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Letter {
    pub name: String,
    pub arity: usize,
}

/// A Kripke model. Letters that the model does not mention are empty at
/// every world.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Model {
    frame: Frame,
    individuals: Vec<String>,
    domains: Vec<Vec<Individual>>,
    in_domain: Vec<Vec<bool>>,
    constant_domains: bool,
    letters: Vec<Letter>,
    /// `ext[w][l][code]`, where `code` is the base-`individuals.len()`
    /// encoding of the argument tuple.
    ext: Vec<Vec<Vec<bool>>>,
    principle: EqPrinciple,
    /// `class_of[w][a]` is the least member of the class of `a` at `w`.
    class_of: Vec<Vec<Individual>>,
    mode: Mode,
}

impl Model {
    /// A model with empty valuation and identity equality at every world.
    pub fn new(
        frame: Frame,
        individuals: Vec<String>,
        domains: Vec<Vec<Individual>>,
        mode: Mode,
        principle: EqPrinciple,
        constant_domains: bool,
    ) -> Result<Self, ModelError> {
        if domains.len() != frame.len() {
            return Err(ModelError::UnknownWorld(format!(
                "domain list has {} entries for {} worlds",
                domains.len(),
                frame.len()
            )));
        }
        let n = individuals.len();
        let mut in_domain = vec![vec![false; n]; frame.len()];
        let mut sorted = Vec::with_capacity(domains.len());
        for (w, d) in domains.into_iter().enumerate() {
            let mut d = d;
            d.sort_unstable();
            d.dedup();
            for &a in &d {
                if a >= n {
                    return Err(ModelError::IndividualOutOfRange(a));
                }
                in_domain[w][a] = true;
            }
            sorted.push(d);
        }
        let class_of = vec![(0..n).collect(); frame.len()];
        let worlds = frame.len();
        Ok(Model {
            frame,
            individuals,
            domains: sorted,
            in_domain,
            constant_domains,
            letters: Vec::new(),
            ext: vec![Vec::new(); worlds],
            principle,
            class_of,
            mode,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn principle(&self) -> EqPrinciple {
        self.principle
    }

    pub fn constant_domains(&self) -> bool {
        self.constant_domains
    }

    pub fn individuals(&self) -> &[String] {
        &self.individuals
    }

    pub fn individual_name(&self, a: Individual) -> &str {
        &self.individuals[a]
    }

    pub fn individual_index(&self, name: &str) -> Option<Individual> {
        self.individuals.iter().position(|n| n == name)
    }

    pub fn domain(&self, w: World) -> &[Individual] {
        &self.domains[w]
    }

    pub fn in_domain(&self, w: World, a: Individual) -> bool {
        self.in_domain[w][a]
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        self.letters.iter().position(|l| l.name == name)
    }

    /// Declares a letter, or returns the index of an existing one.
    pub fn add_letter(&mut self, name: &str, arity: usize) -> Result<usize, ModelError> {
        if let Some(i) = self.letter_index(name) {
            let first = self.letters[i].arity;
            if first != arity {
                return Err(ModelError::ArityConflict {
                    letter: name.to_string(),
                    first,
                    second: arity,
                });
            }
            return Ok(i);
        }
        let size = self.individuals.len().pow(arity as u32);
        self.letters.push(Letter {
            name: name.to_string(),
            arity,
        });
        for row in &mut self.ext {
            row.push(vec![false; size]);
        }
        Ok(self.letters.len() - 1)
    }

    pub(crate) fn tuple_code(&self, tuple: &[Individual]) -> usize {
        let n = self.individuals.len();
        tuple.iter().fold(0, |acc, &a| acc * n + a)
    }

    pub(crate) fn decode_tuple(&self, mut code: usize, arity: usize) -> Vec<Individual> {
        let n = self.individuals.len();
        let mut out = vec![0; arity];
        for slot in out.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        out
    }

    /// Sets whether `letter(tuple)` holds at `w`.
    pub fn set_fact(&mut self, w: World, letter: usize, tuple: &[Individual], value: bool) {
        assert_eq!(tuple.len(), self.letters[letter].arity, "tuple arity");
        let code = self.tuple_code(tuple);
        self.ext[w][letter][code] = value;
    }

    pub fn fact(&self, w: World, letter: usize, tuple: &[Individual]) -> bool {
        self.ext[w][letter][self.tuple_code(tuple)]
    }

    pub(crate) fn fact_code(&self, w: World, letter: usize, code: usize) -> bool {
        self.ext[w][letter][code]
    }

    pub(crate) fn set_fact_code(&mut self, w: World, letter: usize, code: usize, value: bool) {
        self.ext[w][letter][code] = value;
    }

    /// Tuples over the whole individual pool for which `letter` holds at `w`.
    pub fn extension(&self, w: World, letter: usize) -> Vec<Vec<Individual>> {
        let arity = self.letters[letter].arity;
        self.ext[w][letter]
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(code, _)| self.decode_tuple(code, arity))
            .collect()
    }

    /// Replaces the equality partition at `w`. The classes must partition
    /// the domain of `w`.
    pub fn set_partition(
        &mut self,
        w: World,
        classes: &[Vec<Individual>],
    ) -> Result<(), ModelError> {
        let bad = |reason: String| ModelError::BadPartition {
            world: self.frame.name(w).to_string(),
            reason,
        };
        let mut seen = vec![false; self.individuals.len()];
        let mut class_of: Vec<Individual> = (0..self.individuals.len()).collect();
        for class in classes {
            let Some(&rep) = class.iter().min() else {
                return Err(bad("empty class".into()));
            };
            for &a in class {
                if a >= self.individuals.len() || !self.in_domain[w][a] {
                    return Err(bad(format!("`{}` is not in the domain", self.name_or_index(a))));
                }
                if seen[a] {
                    return Err(bad(format!("`{}` occurs twice", self.individuals[a])));
                }
                seen[a] = true;
                class_of[a] = rep;
            }
        }
        if let Some(&a) = self.domains[w].iter().find(|&&a| !seen[a]) {
            return Err(bad(format!("`{}` is not covered", self.individuals[a])));
        }
        self.class_of[w] = class_of;
        Ok(())
    }

    fn name_or_index(&self, a: Individual) -> String {
        self.individuals
            .get(a)
            .cloned()
            .unwrap_or_else(|| format!("#{a}"))
    }

    /// Representation used by the enumerator: `reps[a]` is the least member
    /// of `a`'s class. Entries outside the domain must map to themselves.
    pub(crate) fn set_class_reps(&mut self, w: World, reps: &[Individual]) {
        self.class_of[w].copy_from_slice(reps);
    }

    pub fn class_rep(&self, w: World, a: Individual) -> Individual {
        self.class_of[w][a]
    }

    pub fn equal_at(&self, w: World, a: Individual, b: Individual) -> bool {
        self.class_of[w][a] == self.class_of[w][b]
    }

    /// The equality partition at `w`, classes ordered by least member.
    pub fn partition(&self, w: World) -> Vec<Vec<Individual>> {
        let mut out: Vec<Vec<Individual>> = Vec::new();
        let mut slot: std::collections::BTreeMap<Individual, usize> = std::collections::BTreeMap::new();
        for &a in &self.domains[w] {
            let rep = self.class_of[w][a];
            match slot.get(&rep) {
                Some(&i) => out[i].push(a),
                None => {
                    slot.insert(rep, out.len());
                    out.push(vec![a]);
                }
            }
        }
        out
    }

    /// Renders an assignment using individual names.
    pub fn describe_assignment(&self, s: &Assignment) -> String {
        let parts: Vec<String> = s
            .iter()
            .map(|(x, &a)| format!("{x}={}", self.individual_name(a)))
            .collect();
        if parts.is_empty() {
            "{}".to_string()
        } else {
            parts.join(",")
        }
    }
}
