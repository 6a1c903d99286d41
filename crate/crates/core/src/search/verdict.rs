//! Bounded satisfiability and validity search with deterministic witnesses.
//!
//! The search space is split into jobs, one per (frame, domain map), taken
//! in enumeration order and processed in fixed-size chunks. Jobs of a chunk
//! run in parallel and each searches its own models sequentially; the
//! reducer then walks the chunk in order and keeps the first witness. A
//! step cap is handled the same way: every job of a chunk may use whatever
//! was left when the chunk started, and the reducer charges steps in order,
//! so the result is that of a sequential search with the same cap. Neither
//! the witness nor the step count depends on the number of workers.

use super::frames::{enumerate_frames, FrameClass, FrameProperty};
use super::models::{domain_maps, for_each_model, DomainMap, ModelSpace};
use crate::semantics::{
    validate_model, EqPrinciple, EvalError, Frame, Mode, Model, ModelFile, World,
};
use crate::syntax::{classify, Formula};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::ops::ControlFlow;
use thiserror::Error;

const CHUNK: usize = 64;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("letter `{letter}` is used with arity {first} and with arity {second}")]
    ArityConflict {
        letter: String,
        first: usize,
        second: usize,
    },
    #[error("intuitionistic models need a reflexive and transitive frame")]
    NotPreorder,
    #[error("{0}")]
    Bound(String),
    #[error("could not build worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Valid,
    Countermodel,
    Satisfiable,
    UnsatisfiableUpToBound,
    BoundExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub worlds: usize,
    pub domain: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub model: ModelFile,
    pub world: String,
    /// Free variable to individual name.
    pub assignment: BTreeMap<String, String>,
}

impl Witness {
    fn new(m: &Model, w: World, vars: &[String], values: &[usize]) -> Self {
        Witness {
            model: ModelFile::from_model(m),
            world: m.frame().name(w).to_string(),
            assignment: vars
                .iter()
                .cloned()
                .zip(values.iter().map(|&a| m.individual_name(a).to_string()))
                .collect(),
        }
    }

    /// Rebuilds the model, validates it, and evaluates `f` at the witness
    /// world and assignment.
    pub fn recheck(&self, f: &Formula) -> Result<bool, String> {
        let m = self.model.to_model().map_err(|e| e.to_string())?;
        let violations = validate_model(&m);
        if let Some(v) = violations.first() {
            return Err(format!("witness model is invalid: {v}"));
        }
        let w = m
            .frame()
            .index_of(&self.world)
            .ok_or_else(|| format!("unknown witness world `{}`", self.world))?;
        let mut s = crate::semantics::Assignment::new();
        for (x, a) in &self.assignment {
            let a = m
                .individual_index(a)
                .ok_or_else(|| format!("unknown individual `{a}`"))?;
            s.insert(crate::syntax::Var::new(x.as_str()), a);
        }
        crate::semantics::eval(&m, w, &s, f).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub bounds_used: Bounds,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default)]
    pub warnings: Vec<String>,
    /// The domain bound was the built-in default, not a proven bound.
    #[serde(default)]
    pub heuristic_domain_bound: bool,
    pub models_checked: u64,
}

impl Verdict {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdict serializes")
    }

    /// The value the witness claims for the formula: false for a
    /// countermodel, true for a satisfying model.
    pub fn claimed_value(&self) -> Option<bool> {
        match self.outcome {
            Outcome::Countermodel => Some(false),
            Outcome::Satisfiable => Some(true),
            _ => None,
        }
    }

    /// Checks that the witness, if any, validates and evaluates `f` to the
    /// claimed value.
    pub fn recheck(&self, f: &Formula) -> Result<(), String> {
        match (&self.witness, self.claimed_value()) {
            (None, None) => Ok(()),
            (Some(w), Some(claim)) => match w.recheck(f)? {
                v if v == claim => Ok(()),
                v => Err(format!("witness evaluates to {v}, verdict claims {claim}")),
            },
            (Some(_), None) => Err("witness attached to a verdict without one".into()),
            (None, Some(_)) => Err("verdict lacks its witness".into()),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Worker threads; 0 lets the thread pool decide.
    pub workers: usize,
    /// Stop with `bound_exhausted` after this many candidate models.
    pub max_steps: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchParams {
    pub mode: Mode,
    pub principle: EqPrinciple,
    pub constant_domains: bool,
    /// `None` selects [`default_domain_bound`].
    pub domain_bound: Option<usize>,
    pub options: SearchOptions,
}

impl SearchParams {
    pub fn new(mode: Mode, principle: EqPrinciple, domain_bound: usize) -> Self {
        SearchParams {
            mode,
            principle,
            constant_domains: false,
            domain_bound: Some(domain_bound),
            options: SearchOptions::default(),
        }
    }
}

/// `2^u * (v + 1)` for `u` unary letters and `v` variables of `f`. A
/// heuristic: no bound that guarantees completeness is known.
pub fn default_domain_bound(f: &Formula) -> usize {
    let unary = f
        .letters()
        .map(|ls| ls.values().filter(|&&a| a == 1).count())
        .unwrap_or(0);
    (1usize << unary.min(16)) * (f.variables().len() + 1)
}

enum JobOutcome {
    Found(Witness),
    Exhausted,
    Done,
}

struct JobResult {
    steps: u64,
    outcome: JobOutcome,
}

/// Searches one job for a (model, world, assignment) where `f` has truth
/// value `target`, within `budget` candidate models.
fn run_job(
    fr: &Frame,
    dm: &DomainMap,
    space: &ModelSpace,
    f: &Formula,
    target: bool,
    budget: Option<u64>,
) -> Result<JobResult, SearchError> {
    let vars: Vec<String> = f.free_variables().iter().map(|x| x.name().to_string()).collect();
    let mut steps = 0u64;
    let mut found = None;
    let mut exhausted = false;
    let mut prepared = None;
    let mut error = None;
    let _ = for_each_model(fr, dm, space, &mut |m| {
        if budget.is_some_and(|b| steps >= b) {
            exhausted = true;
            return ControlFlow::Break(());
        }
        steps += 1;
        if prepared.is_none() {
            match m.prepare(f) {
                Ok(p) => prepared = Some(p),
                Err(e) => {
                    error = Some(e);
                    return ControlFlow::Break(());
                }
            }
        }
        let p = prepared.as_ref().expect("prepared above");
        let hit = if target {
            p.first_satisfier(m)
        } else {
            p.first_falsifier(m)
        };
        match hit {
            Some((w, values)) => {
                found = Some(Witness::new(m, w, &vars, &values));
                ControlFlow::Break(())
            }
            None => ControlFlow::Continue(()),
        }
    });
    if let Some(e) = error {
        return Err(e.into());
    }
    let outcome = match (found, exhausted) {
        (Some(w), _) => JobOutcome::Found(w),
        (None, true) => JobOutcome::Exhausted,
        (None, false) => JobOutcome::Done,
    };
    Ok(JobResult { steps, outcome })
}

enum Search {
    Found(Witness),
    Exhausted,
    Complete,
}

fn search(
    jobs: impl Iterator<Item = (Frame, DomainMap)>,
    space: &ModelSpace,
    f: &Formula,
    target: bool,
    options: SearchOptions,
) -> Result<(Search, u64), SearchError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers)
        .build()
        .map_err(|e| SearchError::Pool(e.to_string()))?;
    let mut total = 0u64;
    let mut chunk: Vec<(Frame, DomainMap)> = Vec::with_capacity(CHUNK);
    let mut jobs = jobs.peekable();
    while jobs.peek().is_some() {
        chunk.clear();
        chunk.extend(jobs.by_ref().take(CHUNK));
        let budget = options.max_steps.map(|m| m.saturating_sub(total));
        let results: Vec<Result<JobResult, SearchError>> = pool.install(|| {
            use rayon::prelude::*;
            chunk
                .par_iter()
                .map(|(fr, dm)| run_job(fr, dm, space, f, target, budget))
                .collect()
        });
        // Each job ran with at least the budget it would have had in a
        // sequential search, so its prefix up to that budget is exact.
        for r in results {
            let r = r?;
            let remaining = options.max_steps.map(|m| m - total);
            let over = remaining.is_some_and(|rem| r.steps > rem);
            match r.outcome {
                JobOutcome::Found(w) if !over => return Ok((Search::Found(w), total + r.steps)),
                JobOutcome::Done if !over => total += r.steps,
                _ => {
                    let rem = remaining.expect("only a capped search runs out");
                    return Ok((Search::Exhausted, total + rem));
                }
            }
        }
    }
    Ok((Search::Complete, total))
}

fn space_for(f: &Formula, params: &SearchParams, domain_bound: usize) -> Result<ModelSpace, SearchError> {
    let mut space = ModelSpace::new(params.mode, params.principle, domain_bound)
        .letters_of(f)
        .map_err(|(letter, first, second)| SearchError::ArityConflict {
            letter,
            first,
            second,
        })?;
    space.constant_domains = params.constant_domains;
    Ok(space)
}

fn check_formula(f: &Formula, mode: Mode) -> Result<(), SearchError> {
    if mode == Mode::Intuitionistic && f.modal_depth() > 0 {
        return Err(EvalError::ModalityInIntuitionisticMode.into());
    }
    Ok(())
}

fn resolve_bound(f: &Formula, params: &SearchParams) -> Result<(usize, bool), SearchError> {
    let (bound, heuristic) = match params.domain_bound {
        Some(b) => (b, false),
        None => (default_domain_bound(f), true),
    };
    if !(1..=16).contains(&bound) {
        return Err(SearchError::Bound(format!(
            "domain bound {bound} is outside 1..=16"
        )));
    }
    Ok((bound, heuristic))
}

/// Looks for a model on a frame of `cls` with at most `world_bound` worlds,
/// a world, and an assignment of the free variables where `f` holds.
pub fn sat_bounded(
    f: &Formula,
    cls: &FrameClass,
    world_bound: usize,
    params: &SearchParams,
) -> Result<Verdict, SearchError> {
    if !(1..=5).contains(&world_bound) {
        return Err(SearchError::Bound(format!(
            "world bound {world_bound} is outside 1..=5"
        )));
    }
    check_formula(f, params.mode)?;
    let (bound, heuristic) = resolve_bound(f, params)?;
    let space = space_for(f, params, bound)?;
    let mut warnings = Vec::new();
    let mut cls = cls.clone();
    if params.mode == Mode::Intuitionistic {
        let before = cls.properties.len();
        cls = cls
            .with(FrameProperty::Reflexive)
            .with(FrameProperty::Transitive);
        if cls.properties.len() != before {
            warnings.push("frame class extended with reflexive,transitive for intuitionistic mode".into());
        }
    }
    let jobs = enumerate_frames(world_bound, &cls).flat_map(|fr| {
        domain_maps(&fr, bound, space.constant_domains, space.symmetry_cut)
            .into_iter()
            .map(move |dm| (fr.clone(), dm))
    });
    let (result, steps) = search(jobs, &space, f, true, params.options)?;
    let (outcome, witness) = match result {
        Search::Found(w) => (Outcome::Satisfiable, Some(w)),
        Search::Exhausted => (Outcome::BoundExhausted, None),
        Search::Complete => (Outcome::UnsatisfiableUpToBound, None),
    };
    Ok(Verdict {
        outcome,
        bounds_used: Bounds {
            worlds: world_bound,
            domain: bound,
        },
        witness,
        warnings,
        heuristic_domain_bound: heuristic,
        models_checked: steps,
    })
}

/// Looks for a model on exactly `fr` falsifying `f` at some world under
/// some assignment of its free variables.
pub fn decide_valid_over_frame(
    fr: &Frame,
    f: &Formula,
    params: &SearchParams,
) -> Result<Verdict, SearchError> {
    check_formula(f, params.mode)?;
    if params.mode == Mode::Intuitionistic
        && !(FrameProperty::Reflexive.holds(fr) && FrameProperty::Transitive.holds(fr))
    {
        return Err(SearchError::NotPreorder);
    }
    let (bound, heuristic) = resolve_bound(f, params)?;
    let space = space_for(f, params, bound)?;
    let mut warnings = Vec::new();
    if !classify(f).is_monadic {
        warnings.push("formula is not monadic; the decidability guarantee does not apply".into());
    }
    let jobs = domain_maps(fr, bound, space.constant_domains, space.symmetry_cut)
        .into_iter()
        .map(|dm| (fr.clone(), dm));
    let (result, steps) = search(jobs, &space, f, false, params.options)?;
    let (outcome, witness) = match result {
        Search::Found(w) => (Outcome::Countermodel, Some(w)),
        Search::Exhausted => (Outcome::BoundExhausted, None),
        Search::Complete => (Outcome::Valid, None),
    };
    Ok(Verdict {
        outcome,
        bounds_used: Bounds {
            worlds: fr.len(),
            domain: bound,
        },
        witness,
        warnings,
        heuristic_domain_bound: heuristic,
        models_checked: steps,
    })
}
