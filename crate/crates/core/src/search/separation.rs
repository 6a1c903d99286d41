//! Searching small frames for formulas whose validity depends on the
//! equality principle.

use super::frames::{enumerate_frames, FrameClass};
use super::verdict::{decide_valid_over_frame, Outcome, SearchError, SearchParams, Verdict};
use crate::semantics::{EqPrinciple, FrameFile, Mode};
use crate::syntax::{parse, render, Formula};
use serde::{Deserialize, Serialize};

/// Candidate formulas over equality alone.
pub const CANDIDATES: &[&str] = &[
    "x = y -> [](x = y)",
    "[](x = y) -> x = y",
    "~(x = y) -> []~(x = y)",
    "<>(x = y) -> x = y",
    "<>(x = y) -> [](x = y)",
    "[](x = y) -> [][](x = y)",
    "<>(x = y) -> <>[](x = y)",
    "x = y | []~(x = y)",
    "forall y (x = y) -> [] forall y (x = y)",
    "<> forall y (x = y) -> [] forall y (x = y)",
    "exists y ~(x = y) -> [] exists y ~(x = y)",
    "<> exists y ~(x = y) -> [] exists y ~(x = y)",
    "<>(x = y) & <>~(x = y) -> false",
    "[] forall y (x = y) -> forall y [](x = y)",
];

/// One principle pair that was searched for: a formula valid under
/// `stronger` but not under `weaker` on the same frame.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Separation {
    Found {
        stronger: EqPrinciple,
        weaker: EqPrinciple,
        frame: FrameFile,
        formula: String,
        /// Valid under `stronger` within the domain bound.
        stronger_verdict: Verdict,
        /// A countermodel under `weaker`.
        weaker_verdict: Verdict,
    },
    NotFound {
        stronger: EqPrinciple,
        weaker: EqPrinciple,
        message: String,
    },
}

impl Separation {
    pub fn is_found(&self) -> bool {
        matches!(self, Separation::Found { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub world_bound: usize,
    pub domain_bound: usize,
    pub frames_searched: usize,
    pub formulas: Vec<String>,
    pub eq3_over_eq2: Separation,
    pub eq2_over_eq1: Separation,
}

/// Walks every frame with at most `world_bound` worlds, in enumeration
/// order, and every candidate formula, looking for one valid under `Eq3`
/// but not `Eq2` and one valid under `Eq2` but not `Eq1` (modal reading,
/// expanding domains). A miss is reported explicitly.
pub fn eq_separation(
    world_bound: usize,
    domain_bound: usize,
    formulas: &[Formula],
    base: &SearchParams,
) -> Result<SeparationReport, SearchError> {
    let params = |p: EqPrinciple| SearchParams {
        mode: Mode::Modal,
        principle: p,
        domain_bound: Some(domain_bound),
        ..base.clone()
    };
    let frames: Vec<_> = enumerate_frames(world_bound, &FrameClass::all()).collect();
    let mut pairs = [
        (EqPrinciple::Eq3, EqPrinciple::Eq2, None),
        (EqPrinciple::Eq2, EqPrinciple::Eq1, None),
    ];
    for fr in &frames {
        for f in formulas {
            for (stronger, weaker, found) in pairs.iter_mut() {
                if found.is_some() {
                    continue;
                }
                let weak = decide_valid_over_frame(fr, f, &params(*weaker))?;
                if weak.outcome != Outcome::Countermodel {
                    continue;
                }
                let strong = decide_valid_over_frame(fr, f, &params(*stronger))?;
                if strong.outcome == Outcome::Valid {
                    *found = Some(Separation::Found {
                        stronger: *stronger,
                        weaker: *weaker,
                        frame: FrameFile::from_frame(fr),
                        formula: render(f),
                        stronger_verdict: strong,
                        weaker_verdict: weak,
                    });
                }
            }
        }
        if pairs.iter().all(|p| p.2.is_some()) {
            break;
        }
    }
    let [a, b] = pairs.map(|(stronger, weaker, found)| {
        found.unwrap_or_else(|| Separation::NotFound {
            stronger,
            weaker,
            message: format!(
                "not found within bounds: no candidate formula is valid under {stronger} \
                 and refuted under {weaker} on any frame with at most {world_bound} worlds \
                 (domain bound {domain_bound}, {} formulas)",
                formulas.len()
            ),
        })
    });
    Ok(SeparationReport {
        world_bound,
        domain_bound,
        frames_searched: frames.len(),
        formulas: formulas.iter().map(render).collect(),
        eq3_over_eq2: a,
        eq2_over_eq1: b,
    })
}

pub fn candidate_formulas() -> Vec<Formula> {
    CANDIDATES
        .iter()
        .map(|s| parse(s).expect("candidate parses"))
        .collect()
}
