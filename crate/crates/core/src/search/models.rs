//! Exhaustive enumeration of the Kripke models over a fixed frame.
//!
//! A model is built in three layers: a domain map, a valuation of the
//! requested letters, and a family of per-world equality partitions. Each
//! layer is enumerated in a fixed order, so the sequence of models for a
//! given frame and [`ModelSpace`] is deterministic.

use crate::semantics::{EqPrinciple, Frame, Individual, Mode, Model, World};
use crate::syntax::Formula;
use std::ops::ControlFlow;

/// Which equality partition families are admitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqFilter {
    /// Families satisfying the space's principle.
    Principle,
    /// Every family of congruences, whatever the principle says.
    CongruenceOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSpace {
    pub mode: Mode,
    pub principle: EqPrinciple,
    pub constant_domains: bool,
    pub domain_bound: usize,
    /// Letters to valuate, with arities. Other letters stay empty.
    pub letters: Vec<(String, usize)>,
    /// Skip domain maps that differ only by renaming individuals.
    pub symmetry_cut: bool,
    pub eq_filter: EqFilter,
}

impl ModelSpace {
    pub fn new(mode: Mode, principle: EqPrinciple, domain_bound: usize) -> Self {
        ModelSpace {
            mode,
            principle,
            constant_domains: false,
            domain_bound,
            letters: Vec::new(),
            symmetry_cut: true,
            eq_filter: EqFilter::Principle,
        }
    }

    /// Valuate exactly the letters of `f`.
    pub fn letters_of(mut self, f: &Formula) -> Result<Self, (String, usize, usize)> {
        self.letters = f.letters()?.into_iter().collect();
        Ok(self)
    }

    pub fn with_letters<S: Into<String>>(mut self, letters: impl IntoIterator<Item = (S, usize)>) -> Self {
        self.letters = letters.into_iter().map(|(n, a)| (n.into(), a)).collect();
        self
    }
}

/// Per-world domains over the individuals `0..pool`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DomainMap {
    pub pool: usize,
    pub domains: Vec<Vec<Individual>>,
}

fn members(mask: u32) -> Vec<Individual> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

/// Expanding domain maps on `fr` with at most `bound` individuals in total.
///
/// With `symmetry_cut`, individuals are numbered in order of first
/// appearance, world by world, so every map is produced once up to
/// renaming; the pool is then exactly the set of individuals used. Without
/// it every map over the pool `0..bound` is produced. Worlds are filled in
/// index order; at each world the choices are ordered by the number of new
/// individuals, then by the mask of old ones.
pub fn domain_maps(
    fr: &Frame,
    bound: usize,
    constant: bool,
    symmetry_cut: bool,
) -> Vec<DomainMap> {
    assert!((1..=16).contains(&bound), "domain bound must be in 1..=16");
    let mut out = Vec::new();
    let mut masks = Vec::with_capacity(fr.len());
    fill(fr, bound, constant, symmetry_cut, 0, &mut masks, &mut out);
    out
}

fn fill(
    fr: &Frame,
    bound: usize,
    constant: bool,
    cut: bool,
    used: usize,
    masks: &mut Vec<u32>,
    out: &mut Vec<DomainMap>,
) {
    let w = masks.len();
    if w == fr.len() {
        let pool = if cut { used } else { bound };
        out.push(DomainMap {
            pool,
            domains: masks.iter().map(|&m| members(m)).collect(),
        });
        return;
    }
    let fits = |mask: u32, masks: &[u32]| {
        (0..w).all(|u| {
            let (du, dw) = (masks[u], mask);
            if constant {
                return du == dw;
            }
            (!fr.sees(u, w) || du & !dw == 0) && (!fr.sees(w, u) || dw & !du == 0)
        })
    };
    let mut choices: Vec<(u32, usize)> = Vec::new();
    if cut {
        for fresh in 0..=bound - used {
            let block = ((1u32 << fresh) - 1) << used;
            for old in 0..1u32 << used {
                if old | block != 0 {
                    choices.push((old | block, used + fresh));
                }
            }
        }
    } else {
        choices.extend((1..1u32 << bound).map(|m| (m, bound)));
    }
    for (mask, next_used) in choices {
        if fits(mask, masks) {
            masks.push(mask);
            fill(fr, bound, constant, cut, next_used, masks, out);
            masks.pop();
        }
    }
}

/// All tuples of `arity` individuals from `dom`, lexicographically.
fn tuples_over(dom: &[Individual], arity: usize) -> Vec<Vec<Individual>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                dom.iter().map(move |&a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

/// Set partitions of `dom` as representative arrays over `0..pool`
/// (`reps[a]` is the least member of `a`'s class; identity off `dom`), in
/// restricted-growth order starting from the identity.
fn partitions(dom: &[Individual], pool: usize) -> Vec<Vec<Individual>> {
    let mut out = Vec::new();
    let mut block_of: Vec<usize> = Vec::with_capacity(dom.len());
    fn go(
        dom: &[Individual],
        pool: usize,
        block_of: &mut Vec<usize>,
        blocks: usize,
        out: &mut Vec<Vec<Individual>>,
    ) {
        let i = block_of.len();
        if i == dom.len() {
            let mut reps: Vec<Individual> = (0..pool).collect();
            let mut first = vec![usize::MAX; blocks];
            for (j, &b) in block_of.iter().enumerate() {
                if first[b] == usize::MAX {
                    first[b] = dom[j];
                }
                reps[dom[j]] = first[b];
            }
            out.push(reps);
            return;
        }
        // a fresh block first, so the identity partition comes first
        for b in std::iter::once(blocks).chain(0..blocks) {
            block_of.push(b);
            go(dom, pool, block_of, blocks.max(b + 1), out);
            block_of.pop();
        }
    }
    go(dom, pool, &mut block_of, 0, &mut out);
    out
}

/// One letter-tuple slot of the valuation and the world sets it may hold
/// at.
struct Slot {
    letter: usize,
    code: usize,
    options: Vec<u32>,
}

/// Calls `visit` on every model over `fr` with domain map `dm` admitted by
/// `space`, in enumeration order, until it breaks. Valuations vary slower
/// than equality families; within each, the last slot varies fastest.
pub fn for_each_model(
    fr: &Frame,
    dm: &DomainMap,
    space: &ModelSpace,
    visit: &mut dyn FnMut(&Model) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let mut m = base_model(fr, dm, space);
    let n = fr.len();

    let mut slots = Vec::new();
    let union: Vec<Individual> = {
        let mut u: Vec<Individual> = dm.domains.iter().flatten().copied().collect();
        u.sort_unstable();
        u.dedup();
        u
    };
    for (l, (_, arity)) in space.letters.iter().enumerate() {
        for t in tuples_over(&union, *arity) {
            let allowed: u32 = (0..n)
                .filter(|&w| t.iter().all(|&a| m.in_domain(w, a)))
                .fold(0, |acc, w| acc | 1 << w);
            let options = (0..=allowed)
                .filter(|s| s & !allowed == 0)
                .filter(|&s| space.mode == Mode::Modal || upward_closed(fr, s))
                .collect();
            slots.push(Slot {
                letter: l,
                code: m.tuple_code(&t),
                options,
            });
        }
    }

    let world_partitions: Vec<Vec<Vec<Individual>>> = (0..n)
        .map(|w| {
            if space.principle == EqPrinciple::Eq3 && space.eq_filter == EqFilter::Principle {
                vec![(0..dm.pool).collect()]
            } else {
                partitions(m.domain(w), dm.pool)
            }
        })
        .collect();

    let mut idx = vec![0usize; slots.len()];
    loop {
        for (s, &i) in slots.iter().zip(&idx) {
            let set = s.options[i];
            for w in 0..n {
                m.set_fact_code(w, s.letter, s.code, set >> w & 1 == 1);
            }
        }
        equality_families(&mut m, &world_partitions, space, visit)?;
        if !advance(&mut idx, |p| slots[p].options.len()) {
            return ControlFlow::Continue(());
        }
    }
}

/// Odometer step; false once every position has wrapped.
fn advance(idx: &mut [usize], len: impl Fn(usize) -> usize) -> bool {
    for p in (0..idx.len()).rev() {
        idx[p] += 1;
        if idx[p] < len(p) {
            return true;
        }
        idx[p] = 0;
    }
    false
}

fn upward_closed(fr: &Frame, set: u32) -> bool {
    fr.worlds()
        .filter(|&w| set >> w & 1 == 1)
        .all(|w| fr.successors(w).iter().all(|&v| set >> v & 1 == 1))
}

fn base_model(fr: &Frame, dm: &DomainMap, space: &ModelSpace) -> Model {
    let mut m = Model::new(
        fr.clone(),
        (0..dm.pool).map(|a| a.to_string()).collect(),
        dm.domains.clone(),
        space.mode,
        space.principle,
        space.constant_domains,
    )
    .expect("enumerated domains lie in the pool");
    for (name, arity) in &space.letters {
        m.add_letter(name, *arity).expect("letters are distinct");
    }
    m
}

fn congruent(m: &Model, w: World, reps: &[Individual], letters: &[(String, usize)]) -> bool {
    let dom = m.domain(w);
    letters.iter().enumerate().all(|(l, (_, arity))| {
        tuples_over(dom, *arity).iter().all(|t| {
            let r: Vec<Individual> = t.iter().map(|&a| reps[a]).collect();
            m.fact(w, l, t) == m.fact(w, l, &r)
        })
    })
}

fn family_ok(m: &Model, family: &[&Vec<Individual>], principle: EqPrinciple) -> bool {
    let fr = m.frame();
    fr.edges().into_iter().all(|(w, v)| {
        let dom = m.domain(w);
        dom.iter().enumerate().all(|(i, &a)| {
            dom[i + 1..].iter().all(|&b| {
                let at_w = family[w][a] == family[w][b];
                let at_v = family[v][a] == family[v][b];
                match principle {
                    EqPrinciple::Eq1 => !at_w || at_v,
                    EqPrinciple::Eq2 | EqPrinciple::Eq3 => at_w == at_v,
                }
            })
        })
    })
}

fn equality_families(
    m: &mut Model,
    world_partitions: &[Vec<Vec<Individual>>],
    space: &ModelSpace,
    visit: &mut dyn FnMut(&Model) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let n = world_partitions.len();
    let admissible: Vec<Vec<&Vec<Individual>>> = (0..n)
        .map(|w| {
            world_partitions[w]
                .iter()
                .filter(|reps| congruent(m, w, reps, &space.letters))
                .collect()
        })
        .collect();
    if admissible.iter().any(|a| a.is_empty()) {
        return ControlFlow::Continue(());
    }
    let mut idx = vec![0usize; n];
    loop {
        let family: Vec<&Vec<Individual>> = (0..n).map(|w| admissible[w][idx[w]]).collect();
        if space.eq_filter == EqFilter::CongruenceOnly || family_ok(m, &family, space.principle) {
            for (w, reps) in family.iter().enumerate() {
                m.set_class_reps(w, reps);
            }
            visit(m)?;
        }
        if !advance(&mut idx, |w| admissible[w].len()) {
            return ControlFlow::Continue(());
        }
    }
}

/// Every model over every frame in `frames`, with every domain map of
/// `space`, in enumeration order.
pub fn for_each_model_over<'a>(
    frames: impl IntoIterator<Item = &'a Frame>,
    space: &ModelSpace,
    visit: &mut dyn FnMut(&Model) -> ControlFlow<()>,
) -> ControlFlow<()> {
    for fr in frames {
        for dm in domain_maps(fr, space.domain_bound, space.constant_domains, space.symmetry_cut) {
            for_each_model(fr, &dm, space, visit)?;
        }
    }
    ControlFlow::Continue(())
}
