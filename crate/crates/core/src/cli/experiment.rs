//! The translation experiment: classical truth against truth of the
//! translation at the companion root, over every small structure.

use crate::search::{all_structures, symmetric_irreflexive_structures};
use crate::syntax::{parse, render, Formula, ParseError};
use crate::translations::{
    build_companion_model, kripke_trick, ClassicalStructure, NamingScheme, TranslateError, Variant,
};
use serde::{Deserialize, Serialize};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("corpus line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error("size bound must be at least 1")]
    ZeroBound,
    #[error("size bound {0} is too large to enumerate")]
    TooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub formula: String,
    pub structure: ClassicalStructure,
    pub classical: bool,
    pub modal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skipped {
    pub formula: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub variant: Variant,
    /// Formulas actually compared; skipped ones are listed separately.
    pub corpus_size: usize,
    pub structure_count: usize,
    pub agreements: usize,
    pub disagreements: Vec<Disagreement>,
    pub skipped: Vec<Skipped>,
    pub wall_time_ms: u64,
}

impl ExperimentReport {
    pub fn all_agree(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// One formula per line; blank lines and `#` comments are ignored.
pub fn parse_corpus(text: &str) -> Result<Vec<Formula>, ExperimentError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| parse(l).map_err(|source| ExperimentError::Parse { line: i + 1, source }))
        .collect()
}

/// The structures a variant is checked on: every relation for `Diamond2`,
/// symmetric irreflexive ones for `NegDiamond1`.
pub fn structures_for(variant: Variant, size_bound: usize) -> Result<Vec<ClassicalStructure>, ExperimentError> {
    match variant {
        Variant::Diamond2 if size_bound <= 4 => Ok(all_structures(size_bound)),
        Variant::NegDiamond1 if size_bound <= 6 => Ok(symmetric_irreflexive_structures(size_bound)),
        Variant::Diamond2 | Variant::NegDiamond1 => Err(ExperimentError::TooLarge(size_bound)),
        v => Err(TranslateError::NoCompanion(v).into()),
    }
}

pub fn trick_experiment(
    corpus: &[Formula],
    variant: Variant,
    size_bound: usize,
) -> Result<ExperimentReport, ExperimentError> {
    let start = Instant::now();
    if size_bound == 0 {
        return Err(ExperimentError::ZeroBound);
    }
    let structures = structures_for(variant, size_bound)?;
    let names = {
        let all = corpus
            .iter()
            .fold(Formula::Verum, |acc, f| Formula::and(acc, f.clone()));
        NamingScheme::avoiding(&all)
    };
    let companions = structures
        .iter()
        .map(|m| build_companion_model(m, variant, &names))
        .collect::<Result<Vec<_>, _>>()?;

    let mut report = ExperimentReport {
        variant,
        corpus_size: 0,
        structure_count: structures.len(),
        agreements: 0,
        disagreements: Vec::new(),
        skipped: Vec::new(),
        wall_time_ms: 0,
    };
    for f in corpus {
        let text = render(f);
        let skip = |reason: String| Skipped {
            formula: text.clone(),
            reason,
        };
        if !f.is_closed() {
            let vars = f.free_variables();
            let free: Vec<&str> = vars.iter().map(|x| x.name()).collect();
            report
                .skipped
                .push(skip(format!("formula has free variables: {}", free.join(", "))));
            continue;
        }
        let translated = match kripke_trick(f, variant, &names) {
            Ok(t) => t.formula,
            Err(e) => {
                report.skipped.push(skip(e.to_string()));
                continue;
            }
        };
        let prepared = match companions[0].0.prepare(&translated) {
            Ok(p) => p,
            Err(e) => {
                report.skipped.push(skip(e.to_string()));
                continue;
            }
        };
        report.corpus_size += 1;
        for (m, (model, root)) in structures.iter().zip(&companions) {
            let classical = m.satisfies(f).expect("admissible closed formula");
            // companions share one letter table, so one prepared form serves all
            let modal = prepared.holds(model, *root, &[]);
            if classical == modal {
                report.agreements += 1;
            } else {
                report.disagreements.push(Disagreement {
                    formula: text.clone(),
                    structure: m.clone(),
                    classical,
                    modal,
                });
            }
        }
    }
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}
