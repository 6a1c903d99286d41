//! Oracles and generators shared by the integration tests. The oracles are
//! written from the definitions and do not call the library's evaluators.

#![allow(dead_code)]

use monotrick::search::{domain_maps, frame_from_mask};
use monotrick::semantics::{EqPrinciple, Mode, Model};
use monotrick::syntax::{parse, Formula};
use rand::Rng;
use std::collections::BTreeSet;
use std::path::PathBuf;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn data(name: &str) -> String {
    std::fs::read_to_string(data_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn corpus(name: &str) -> Vec<Formula> {
    data(name)
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse(l).unwrap_or_else(|e| panic!("{l}: {e}")))
        .collect()
}

/// Classical truth over domain `0..size`, with every binary atom read
/// through `rel`, unary atoms through `unary` (by letter name), and
/// equality as identity. Environment is a list of (name, value) pairs,
/// innermost binding last.
pub fn classical_truth(
    f: &Formula,
    size: usize,
    rel: &BTreeSet<(usize, usize)>,
    unary: &dyn Fn(&str, usize) -> bool,
    env: &mut Vec<(String, usize)>,
) -> bool {
    let look = |env: &Vec<(String, usize)>, x: &str| {
        env.iter()
            .rev()
            .find(|(n, _)| n == x)
            .map(|&(_, v)| v)
            .unwrap_or_else(|| panic!("unbound {x}"))
    };
    match f {
        Formula::Atom { letter, args } => match args.len() {
            1 => unary(letter, look(env, args[0].name())),
            2 => rel.contains(&(look(env, args[0].name()), look(env, args[1].name()))),
            n => panic!("oracle has no letters of arity {n}"),
        },
        Formula::Equality(a, b) => look(env, a.name()) == look(env, b.name()),
        Formula::Falsum => false,
        Formula::Verum => true,
        Formula::Not(g) => !classical_truth(g, size, rel, unary, env),
        Formula::And(a, b) => {
            classical_truth(a, size, rel, unary, env) && classical_truth(b, size, rel, unary, env)
        }
        Formula::Or(a, b) => {
            classical_truth(a, size, rel, unary, env) || classical_truth(b, size, rel, unary, env)
        }
        Formula::Implies(a, b) => {
            !classical_truth(a, size, rel, unary, env) || classical_truth(b, size, rel, unary, env)
        }
        Formula::Iff(a, b) => {
            classical_truth(a, size, rel, unary, env) == classical_truth(b, size, rel, unary, env)
        }
        Formula::Forall(x, g) | Formula::Exists(x, g) => {
            let universal = matches!(f, Formula::Forall(..));
            let mut results = (0..size).map(|a| {
                env.push((x.name().to_string(), a));
                let r = classical_truth(g, size, rel, unary, env);
                env.pop();
                r
            });
            if universal {
                results.all(|r| r)
            } else {
                results.any(|r| r)
            }
        }
        Formula::Box(_) | Formula::Diamond(_) => panic!("classical oracle got a modality"),
    }
}

/// The upward heredity condition, read off the model's equality: for every
/// edge `w -> v` and `a, b` in `D(w)`, equal at `w` implies equal at `v`.
pub fn eq1_upward(m: &Model) -> bool {
    m.frame().edges().into_iter().all(|(w, v)| {
        let d = m.domain(w);
        d.iter()
            .all(|&a| d.iter().all(|&b| !m.equal_at(w, a, b) || m.equal_at(v, a, b)))
    })
}

/// The downward condition: for every edge `w -> v` and `a, b` in `D(w)`,
/// equal at `v` implies equal at `w`.
pub fn eq2_downward(m: &Model) -> bool {
    m.frame().edges().into_iter().all(|(w, v)| {
        let d = m.domain(w);
        d.iter()
            .all(|&a| d.iter().all(|&b| !m.equal_at(v, a, b) || m.equal_at(w, a, b)))
    })
}

/// Drops every modal operator; on a single reflexive world this preserves
/// truth.
pub fn strip_modalities(f: &Formula) -> Formula {
    let s = |g: &Formula| Box::new(strip_modalities(g));
    match f {
        Formula::Box(g) | Formula::Diamond(g) => strip_modalities(g),
        Formula::Not(g) => Formula::Not(s(g)),
        Formula::And(a, b) => Formula::And(s(a), s(b)),
        Formula::Or(a, b) => Formula::Or(s(a), s(b)),
        Formula::Implies(a, b) => Formula::Implies(s(a), s(b)),
        Formula::Iff(a, b) => Formula::Iff(s(a), s(b)),
        Formula::Forall(x, g) => Formula::Forall(x.clone(), s(g)),
        Formula::Exists(x, g) => Formula::Exists(x.clone(), s(g)),
        other => other.clone(),
    }
}

/// What a random formula may contain.
#[derive(Debug, Clone)]
pub struct Gen {
    pub letters: Vec<(&'static str, usize)>,
    pub vars: Vec<&'static str>,
    pub modal: bool,
    pub equality: bool,
}

impl Gen {
    /// A formula of depth at most `depth` (atoms have depth 0).
    pub fn formula(&self, rng: &mut impl Rng, depth: usize) -> Formula {
        if depth == 0 || rng.gen_bool(0.25) {
            return self.atom(rng);
        }
        let d = depth - 1;
        let x = self.vars[rng.gen_range(0..self.vars.len())];
        let choices = if self.modal { 9 } else { 7 };
        match rng.gen_range(0..choices) {
            0 => Formula::not(self.formula(rng, d)),
            1 => Formula::and(self.formula(rng, d), self.formula(rng, d)),
            2 => Formula::or(self.formula(rng, d), self.formula(rng, d)),
            3 => Formula::implies(self.formula(rng, d), self.formula(rng, d)),
            4 => Formula::iff(self.formula(rng, d), self.formula(rng, d)),
            5 => Formula::forall(x, self.formula(rng, d)),
            6 => Formula::exists(x, self.formula(rng, d)),
            7 => Formula::boxed(self.formula(rng, d)),
            _ => Formula::diamond(self.formula(rng, d)),
        }
    }

    fn atom(&self, rng: &mut impl Rng) -> Formula {
        let var = |rng: &mut dyn rand::RngCore| self.vars[rng.gen_range(0..self.vars.len())];
        let extra = if self.equality { 3 } else { 2 };
        let k = rng.gen_range(0..self.letters.len() + extra);
        if k < self.letters.len() {
            let (name, arity) = self.letters[k];
            let args: Vec<&str> = (0..arity).map(|_| var(rng)).collect();
            return Formula::atom(name, &args);
        }
        match k - self.letters.len() {
            0 => Formula::Falsum,
            1 => Formula::Verum,
            _ => Formula::eq(var(rng), var(rng)),
        }
    }
}

/// A random Eq3 modal model on at most 3 worlds with letters `Q`, `R`, `p`.
pub fn random_model(rng: &mut impl Rng) -> Model {
    let k = rng.gen_range(1..=3);
    let mask = rng.gen_range(0..1u64 << (k * k));
    let fr = frame_from_mask(k, mask);
    let maps = domain_maps(&fr, 3, false, true);
    let dm = &maps[rng.gen_range(0..maps.len())];
    let mut m = Model::new(
        fr,
        (0..dm.pool).map(|a| a.to_string()).collect(),
        dm.domains.clone(),
        Mode::Modal,
        EqPrinciple::Eq3,
        false,
    )
    .unwrap();
    let q = m.add_letter("Q", 1).unwrap();
    let r = m.add_letter("R", 1).unwrap();
    let p = m.add_letter("p", 0).unwrap();
    for w in 0..k {
        for a in m.domain(w).to_vec() {
            m.set_fact(w, q, &[a], rng.gen_bool(0.5));
            m.set_fact(w, r, &[a], rng.gen_bool(0.5));
        }
        m.set_fact(w, p, &[], rng.gen_bool(0.5));
    }
    m
}

/// Depth of the syntax tree; atoms have depth 0.
pub fn depth(f: &Formula) -> usize {
    f.children().into_iter().map(|g| depth(g) + 1).max().unwrap_or(0)
}

/// Proptest strategy over the whole syntax: letters of arity 0 to 2,
/// equality, both constants, every connective, both modalities.
pub fn arb_formula(depth: u32) -> impl proptest::strategy::Strategy<Value = Formula> {
    use proptest::prelude::*;
    let var = prop::sample::select(vec!["x", "y", "z", "u", "x1", "w2"]);
    let leaf = prop_oneof![
        Just(Formula::Verum),
        Just(Formula::Falsum),
        prop::sample::select(vec!["p", "q", "r_neg"]).prop_map(Formula::prop),
        (prop::sample::select(vec!["Q", "R1"]), var.clone()).prop_map(|(l, x)| Formula::atom(l, &[x])),
        (var.clone(), var.clone()).prop_map(|(x, y)| Formula::atom("P", &[x, y])),
        (var.clone(), var.clone()).prop_map(|(x, y)| Formula::eq(x, y)),
    ];
    leaf.prop_recursive(depth, 64, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::boxed),
            inner.clone().prop_map(Formula::diamond),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (var.clone(), inner.clone()).prop_map(|(x, a)| Formula::forall(x, a)),
            (var.clone(), inner).prop_map(|(x, a)| Formula::exists(x, a)),
        ]
    })
}

/// Renames every bound variable to a fresh `z{n}`, leaving free ones alone.
pub fn alpha_rename(f: &Formula, next: &mut usize) -> Formula {
    fn go(f: &Formula, env: &mut Vec<(String, String)>, next: &mut usize) -> Formula {
        let name = |env: &Vec<(String, String)>, x: &str| {
            env.iter()
                .rev()
                .find(|(from, _)| from == x)
                .map(|(_, to)| to.clone())
                .unwrap_or_else(|| x.to_string())
        };
        let r = |g: &Formula, env: &mut Vec<(String, String)>, next: &mut usize| Box::new(go(g, env, next));
        match f {
            Formula::Atom { letter, args } => {
                let names: Vec<String> = args.iter().map(|a| name(env, a.name())).collect();
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                Formula::atom(letter.clone(), &refs)
            }
            Formula::Equality(a, b) => Formula::eq(&name(env, a.name()), &name(env, b.name())),
            Formula::Forall(x, g) | Formula::Exists(x, g) => {
                let fresh = format!("z{next}");
                *next += 1;
                env.push((x.name().to_string(), fresh.clone()));
                let body = go(g, env, next);
                env.pop();
                if matches!(f, Formula::Forall(..)) {
                    Formula::forall(&fresh, body)
                } else {
                    Formula::exists(&fresh, body)
                }
            }
            Formula::Not(g) => Formula::Not(r(g, env, next)),
            Formula::Box(g) => Formula::Box(r(g, env, next)),
            Formula::Diamond(g) => Formula::Diamond(r(g, env, next)),
            Formula::And(a, b) => Formula::And(r(a, env, next), r(b, env, next)),
            Formula::Or(a, b) => Formula::Or(r(a, env, next), r(b, env, next)),
            Formula::Implies(a, b) => Formula::Implies(r(a, env, next), r(b, env, next)),
            Formula::Iff(a, b) => Formula::Iff(r(a, env, next), r(b, env, next)),
            other => other.clone(),
        }
    }
    go(f, &mut Vec::new(), next)
}
