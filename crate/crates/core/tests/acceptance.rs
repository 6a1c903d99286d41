//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line for
//! each, and exits non-zero if any fails.

mod common;

use common::{classical_truth, corpus, data, eq1_upward, eq2_downward, random_model, strip_modalities, Gen};
use monotrick::cli::experiment::trick_experiment;
use monotrick::search::{
    all_structures, candidate_formulas, classical_sat, decide_valid_over_frame,
    enumerate_frames, eq_separation, for_each_model_over, sat_bounded, symmetric_irreflexive_structures,
    EqFilter, FrameClass, FrameProperty, ModelSpace, Outcome, SearchParams, Separation, Verdict,
};
use monotrick::semantics::{
    eval, valid_in_model, validate_model, Assignment, EqPrinciple, Frame, FrameFile, Mode, Model,
};
use monotrick::syntax::{classify, parse, Formula};
use monotrick::translations::Variant;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

type Report = Result<String, String>;
type Criterion = (&'static str, fn() -> Report);

fn check(cond: bool, ok: String, bad: String) -> Report {
    if cond {
        Ok(ok)
    } else {
        Err(bad)
    }
}

fn only_letter_p(f: &Formula) -> bool {
    f.letters()
        .map(|ls| ls.len() == 1 && ls.get("P") == Some(&2))
        .unwrap_or(false)
}

fn faithfulness(
    file: &str,
    variant: Variant,
    size: usize,
    expected_structures: usize,
    min_corpus: usize,
    limit: Duration,
) -> Report {
    let start = Instant::now();
    let fs = corpus(file);
    if fs.len() < min_corpus {
        return Err(format!("corpus has {} formulas, need {min_corpus}", fs.len()));
    }
    for f in &fs {
        if !f.is_closed() || f.variables().len() > 3 || !only_letter_p(f) {
            return Err(format!("corpus formula `{f}` is not a closed sentence over P with <= 3 variables"));
        }
    }
    let structures = match variant {
        Variant::NegDiamond1 => symmetric_irreflexive_structures(size),
        _ => all_structures(size),
    };
    if structures.len() != expected_structures {
        return Err(format!("{} structures, expected {expected_structures}", structures.len()));
    }
    let report = trick_experiment(&fs, variant, size).map_err(|e| e.to_string())?;
    // the experiment's classical side against the test oracle
    let mut oracle_disagreements = 0;
    for f in &fs {
        for m in &structures {
            let truth = classical_truth(f, m.size, &m.relation, &|_, _| false, &mut Vec::new());
            if truth != m.satisfies(f).unwrap() {
                oracle_disagreements += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let total = fs.len() * structures.len();
    check(
        report.corpus_size == fs.len()
            && report.structure_count == expected_structures
            && report.agreements == total
            && report.disagreements.is_empty()
            && report.skipped.is_empty()
            && oracle_disagreements == 0
            && elapsed < limit,
        format!(
            "{} formulas x {} structures, {}/{} agree, {:.2?}",
            fs.len(),
            structures.len(),
            report.agreements,
            total,
            elapsed
        ),
        format!(
            "agreements {}/{total}, {} disagreements, {} skipped, {oracle_disagreements} oracle mismatches, {:.2?} (limit {:?})",
            report.agreements,
            report.disagreements.len(),
            report.skipped.len(),
            elapsed,
            limit
        ),
    )
}

fn c1_diamond2() -> Report {
    faithfulness("d2_corpus.txt", Variant::Diamond2, 3, 530, 20, Duration::from_secs(60))
}

fn c2_neg_diamond1() -> Report {
    faithfulness("nd1_graphs.txt", Variant::NegDiamond1, 4, 75, 10, Duration::from_secs(120))
}

/// Runs `f` on every model and counts (models, exceptions, oracle true).
fn sweep(
    frames: &[Frame],
    space: &ModelSpace,
    mut f: impl FnMut(&Model) -> (bool, bool),
) -> (usize, usize, usize) {
    let (mut models, mut bad, mut positive) = (0, 0, 0);
    let _ = for_each_model_over(frames, space, &mut |m| {
        models += 1;
        let (agree, oracle) = f(m);
        if !agree {
            bad += 1;
        }
        if oracle {
            positive += 1;
        }
        ControlFlow::Continue(())
    });
    (models, bad, positive)
}

fn c3_eq1_correspondence() -> Report {
    let f = parse("x = y -> [](x = y)").unwrap();
    let frames: Vec<Frame> = enumerate_frames(2, &FrameClass::all()).collect();
    let space = ModelSpace {
        symmetry_cut: false,
        eq_filter: EqFilter::CongruenceOnly,
        ..ModelSpace::new(Mode::Modal, EqPrinciple::Eq1, 2).with_letters([("Q", 1)])
    };
    let (models, bad, positive) = sweep(&frames, &space, |m| {
        let oracle = eq1_upward(m);
        (valid_in_model(m, &f).unwrap().is_valid() == oracle, oracle)
    });
    check(
        bad == 0 && positive > 0 && positive < models,
        format!("{models} models on {} frames, {positive} satisfy Eq1, 0 exceptions", frames.len()),
        format!("{bad} exceptions among {models} models ({positive} satisfy Eq1)"),
    )
}

fn c4_int_eq2() -> Report {
    let f = parse("x = y | ~(x = y)").unwrap();
    let cls = FrameClass::of([FrameProperty::Reflexive, FrameProperty::Transitive]);
    let frames: Vec<Frame> = enumerate_frames(3, &cls).collect();
    let space = ModelSpace {
        symmetry_cut: false,
        ..ModelSpace::new(Mode::Intuitionistic, EqPrinciple::Eq1, 2).with_letters([("Q", 1)])
    };
    let (models, bad, positive) = sweep(&frames, &space, |m| {
        let oracle = eq2_downward(m);
        (valid_in_model(m, &f).unwrap().is_valid() == oracle, oracle)
    });
    check(
        bad == 0 && positive > 0 && positive < models,
        format!("{models} models on {} preorders, {positive} satisfy the downward condition, 0 exceptions", frames.len()),
        format!("{bad} exceptions among {models} models"),
    )
}

fn c5_serial_eq2() -> Report {
    let f = parse("x = y <-> [](x = y)").unwrap();
    let frames: Vec<Frame> = enumerate_frames(3, &FrameClass::of([FrameProperty::Serial])).collect();
    let space = ModelSpace {
        symmetry_cut: false,
        ..ModelSpace::new(Mode::Modal, EqPrinciple::Eq2, 2).with_letters([("Q", 1)])
    };
    let (models, bad, _) = sweep(&frames, &space, |m| {
        (eq2_downward(m) && eq1_upward(m) && valid_in_model(m, &f).unwrap().is_valid(), true)
    });
    check(
        bad == 0 && models > 0,
        format!("{models} Eq2 models on {} serial frames, all valid", frames.len()),
        format!("{bad} of {models} models falsify the formula"),
    )
}

fn heredity_violations(m: &Model, f: &Formula) -> usize {
    let p = m.prepare(f).unwrap();
    let k = p.free_count();
    let mut bad = 0;
    for (w, v) in m.frame().edges() {
        let dom = m.domain(w);
        let mut idx = vec![0usize; k];
        loop {
            let values: Vec<usize> = idx.iter().map(|&i| dom[i]).collect();
            if p.holds(m, w, &values) && !p.holds(m, v, &values) {
                bad += 1;
            }
            let mut pos = k;
            let mut done = true;
            while pos > 0 {
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < dom.len() {
                    done = false;
                    break;
                }
                idx[pos] = 0;
            }
            if done {
                break;
            }
        }
    }
    bad
}

fn c6_heredity() -> Report {
    const FORMULAS: usize = 10_000;
    let gen = Gen {
        letters: vec![("Q", 1), ("R", 1)],
        vars: vec!["x", "y"],
        modal: false,
        equality: true,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut seen = HashSet::new();
    let mut formulas = Vec::new();
    while formulas.len() < FORMULAS {
        let f = gen.formula(&mut rng, 3);
        if seen.insert(f.clone()) {
            formulas.push(f);
        }
    }
    if formulas.iter().any(|f| common::depth(f) > 3) {
        return Err("generator exceeded depth 3".into());
    }
    let cls = FrameClass::of([FrameProperty::Reflexive, FrameProperty::Transitive]);
    let frames: Vec<Frame> = enumerate_frames(3, &cls).collect();
    let space = ModelSpace::new(Mode::Intuitionistic, EqPrinciple::Eq1, 2).with_letters([("Q", 1), ("R", 1)]);
    let (models, _, _) = sweep(&frames, &space, |_| (true, false));
    // every model meets a window of formulas; consecutive windows rotate
    // through the whole list, so every formula meets many models
    let window = (FORMULAS / models + 1).max(16);
    let (mut i, mut checks, mut violations, mut invalid) = (0usize, 0usize, 0usize, 0usize);
    let mut used = vec![false; FORMULAS];
    let _ = for_each_model_over(&frames, &space, &mut |m| {
        if !validate_model(m).is_empty() {
            invalid += 1;
        }
        for j in 0..window {
            let k = (i * window + j) % FORMULAS;
            used[k] = true;
            violations += heredity_violations(m, &formulas[k]);
            checks += 1;
        }
        i += 1;
        ControlFlow::Continue(())
    });
    let covered = used.iter().filter(|&&u| u).count();
    check(
        violations == 0 && invalid == 0 && covered == FORMULAS,
        format!("{models} models x window {window} ({checks} model-formula pairs, {covered} distinct formulas), 0 violations"),
        format!("{violations} violations, {invalid} invalid models, {covered}/{FORMULAS} formulas used"),
    )
}

fn c7_dualities() -> Report {
    let gen = Gen {
        letters: vec![("Q", 1), ("R", 1), ("p", 0)],
        vars: vec!["x", "y"],
        modal: true,
        equality: true,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut bad, mut invalid) = (0, 0);
    for _ in 0..1000 {
        let m = random_model(&mut rng);
        if !validate_model(&m).is_empty() {
            invalid += 1;
        }
        let f = gen.formula(&mut rng, 3);
        let w = rng.gen_range(0..m.frame().len());
        let dom = m.domain(w);
        let s = Assignment::new()
            .with("x", dom[rng.gen_range(0..dom.len())])
            .with("y", dom[rng.gen_range(0..dom.len())]);
        let e = |g: &Formula| eval(&m, w, &s, g).unwrap();
        let modal = e(&Formula::diamond(f.clone()))
            == e(&Formula::not(Formula::boxed(Formula::not(f.clone()))));
        let quant = e(&Formula::exists("x", f.clone()))
            == e(&Formula::not(Formula::forall("x", Formula::not(f.clone()))));
        if !(modal && quant) {
            bad += 1;
        }
    }
    check(
        bad == 0 && invalid == 0,
        "1000 sampled cases, both dualities agree pointwise".into(),
        format!("{bad} violating cases, {invalid} invalid models"),
    )
}

fn c8_classifier() -> Report {
    let table: serde_json::Value = serde_json::from_str(&data("classifier_table.json")).unwrap();
    let rows = table.as_array().unwrap();
    let mut wrong = Vec::new();
    for row in rows {
        let text = row["formula"].as_str().unwrap();
        let r = classify(&parse(text).unwrap());
        let got = [r.is_monadic, r.is_monodic, r.is_positive, r.has_equality];
        let want = ["is_monadic", "is_monodic", "is_positive", "has_equality"].map(|k| row[k].as_bool().unwrap());
        if got != want {
            wrong.push(format!("{text}: got {got:?}, want {want:?}"));
        }
    }
    check(
        rows.len() == 10 && wrong.is_empty(),
        format!("{} labelled formulas classified exactly", rows.len()),
        format!("{} rows, mismatches: {}", rows.len(), wrong.join("; ")),
    )
}

fn c9_oracle_agreement() -> Report {
    let fs = corpus("monadic_corpus.txt");
    if fs.len() < 15 || fs.iter().any(|f| !classify(f).is_monadic) {
        return Err("monadic corpus needs at least 15 monadic formulas".into());
    }
    let point = Frame::canonical(1, [(0, 0)]);
    let mut mismatches = Vec::new();
    let mut valid_count = 0;
    for f in &fs {
        let negated = Formula::not(strip_modalities(f).universal_closure());
        let classically_valid = classical_sat(&negated, 3).map_err(|e| e.to_string())?.is_none();
        for p in [EqPrinciple::Eq1, EqPrinciple::Eq2, EqPrinciple::Eq3] {
            let v = decide_valid_over_frame(&point, f, &SearchParams::new(Mode::Modal, p, 3))
                .map_err(|e| e.to_string())?;
            let valid = v.outcome == Outcome::Valid;
            if valid != classically_valid {
                mismatches.push(format!("{f} under {p}: decide {valid}, oracle {classically_valid}"));
            }
            if v.recheck(f).is_err() {
                mismatches.push(format!("{f} under {p}: witness fails re-check"));
            }
        }
        valid_count += classically_valid as usize;
    }
    check(
        mismatches.is_empty(),
        format!("{} formulas x 3 principles agree ({valid_count} valid)", fs.len()),
        mismatches.join("; "),
    )
}

enum Query {
    Sat(&'static str, &'static str, usize, Mode, EqPrinciple, usize),
    Decide(Frame, &'static str, Mode, EqPrinciple, usize),
}

fn c10_witnesses_and_determinism() -> Report {
    let chain = Frame::canonical(2, [(0, 0), (0, 1), (1, 1)]);
    let fork = Frame::canonical(3, [(0, 1), (0, 2), (1, 1)]);
    let queries = vec![
        Query::Sat("exists x exists y <>(Q1(x) & Q2(y))", "all", 2, Mode::Modal, EqPrinciple::Eq3, 2),
        Query::Sat("~([](x = y) -> x = y)", "all", 2, Mode::Modal, EqPrinciple::Eq1, 2),
        Query::Sat("~(Q(x) | ~Q(x))", "all", 2, Mode::Intuitionistic, EqPrinciple::Eq1, 2),
        Query::Sat("exists x <>~Q(x) & forall x []Q(x)", "S4", 3, Mode::Modal, EqPrinciple::Eq3, 2),
        Query::Sat("<>(Q(x) & ~R(x)) & [](R(x) | p)", "K", 3, Mode::Modal, EqPrinciple::Eq2, 2),
        Query::Sat("exists x exists y (Q(x) & ~Q(y)) & <>forall x Q(x)", "KD", 3, Mode::Modal, EqPrinciple::Eq1, 3),
        Query::Decide(chain.clone(), "x = y | ~(x = y)", Mode::Intuitionistic, EqPrinciple::Eq1, 2),
        Query::Decide(fork.clone(), "[]Q(x) -> Q(x)", Mode::Modal, EqPrinciple::Eq3, 2),
        Query::Decide(fork.clone(), "<>exists y Q(y) -> exists y <>Q(y)", Mode::Modal, EqPrinciple::Eq3, 2),
        Query::Decide(fork, "x = y -> [](x = y)", Mode::Modal, EqPrinciple::Eq1, 3),
        Query::Decide(chain, "~~Q(x) -> Q(x)", Mode::Intuitionistic, EqPrinciple::Eq2, 3),
    ];
    let mut problems = Vec::new();
    let (mut witnesses, mut runs, mut exhausted) = (0, 0, 0);
    for q in &queries {
        for cap in [None, Some(40)] {
            let run = |workers: usize| -> Result<(Formula, Verdict), String> {
                let (text, params) = match q {
                    Query::Sat(t, _, _, mode, p, d) | Query::Decide(_, t, mode, p, d) => {
                        let mut params = SearchParams::new(*mode, *p, *d);
                        params.options.workers = workers;
                        params.options.max_steps = cap;
                        (*t, params)
                    }
                };
                let f = parse(text).unwrap();
                let v = match q {
                    Query::Sat(_, cls, worlds, ..) => sat_bounded(&f, &cls.parse().unwrap(), *worlds, &params),
                    Query::Decide(fr, ..) => decide_valid_over_frame(fr, &f, &params),
                }
                .map_err(|e| e.to_string())?;
                Ok((f, v))
            };
            let (f, one) = run(1)?;
            let (_, many) = run(4)?;
            runs += 1;
            if one.outcome == Outcome::BoundExhausted {
                exhausted += 1;
            }
            if one.to_json() != many.to_json() {
                problems.push(format!("`{f}` (cap {cap:?}): 1 and 4 workers differ"));
            }
            for v in [&one, &many] {
                if v.witness.is_some() {
                    witnesses += 1;
                }
                if let Err(e) = v.recheck(&f) {
                    problems.push(format!("`{f}`: {e}"));
                }
            }
        }
    }
    check(
        problems.is_empty() && witnesses > 0 && exhausted > 0,
        format!("{runs} query runs ({exhausted} hit the step cap), {witnesses} witnesses re-validated, JSON identical across worker counts"),
        format!("{exhausted} capped runs exhausted; {}", problems.join("; ")),
    )
}

fn c11_separation() -> Report {
    let formulas = candidate_formulas();
    let base = SearchParams::new(Mode::Modal, EqPrinciple::Eq1, 2);
    let report = eq_separation(3, 2, &formulas, &base).map_err(|e| e.to_string())?;
    let mut lines = Vec::new();
    for sep in [&report.eq3_over_eq2, &report.eq2_over_eq1] {
        match sep {
            Separation::Found {
                stronger,
                weaker,
                frame,
                formula,
                stronger_verdict,
                weaker_verdict,
            } => {
                let f = parse(formula).unwrap();
                let fr = FrameFile::to_frame(frame).unwrap();
                weaker_verdict
                    .recheck(&f)
                    .map_err(|e| format!("{weaker} countermodel fails re-check: {e}"))?;
                if weaker_verdict.outcome != Outcome::Countermodel {
                    return Err(format!("{weaker} verdict is not a countermodel"));
                }
                let again = decide_valid_over_frame(&fr, &f, &SearchParams::new(Mode::Modal, *stronger, 2))
                    .map_err(|e| e.to_string())?;
                if again.outcome != Outcome::Valid || stronger_verdict.outcome != Outcome::Valid {
                    return Err(format!("`{formula}` is not valid under {stronger} on re-evaluation"));
                }
                lines.push(format!(
                    "{stronger} over {weaker}: `{formula}` on {} worlds, re-verified",
                    frame.worlds.len()
                ));
            }
            Separation::NotFound { stronger, weaker, message } => {
                if !message.starts_with("not found within bounds") {
                    return Err(format!("{stronger} over {weaker}: miss without an explicit report"));
                }
                lines.push(format!("{stronger} over {weaker}: {message}"));
            }
        }
    }
    Ok(lines.join("; "))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("Diamond2 faithfulness", c1_diamond2),
        ("NegDiamond1 faithfulness", c2_neg_diamond1),
        ("Eq1 correspondence", c3_eq1_correspondence),
        ("intuitionistic Eq2 correspondence", c4_int_eq2),
        ("serial Eq2 direction", c5_serial_eq2),
        ("heredity", c6_heredity),
        ("dualities", c7_dualities),
        ("classifier table", c8_classifier),
        ("decision procedure vs classical oracle", c9_oracle_agreement),
        ("witness integrity and determinism", c10_witnesses_and_determinism),
        ("equality separation harness", c11_separation),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let t = start.elapsed();
        match result {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail} ({t:.2?})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {detail} ({t:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
