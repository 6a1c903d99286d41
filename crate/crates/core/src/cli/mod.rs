//! The `monotrick` command line.
//!
//! Exit status: 0 for an affirmative answer (valid, satisfiable, clean
//! validation, full agreement), 1 for a negative one (countermodel, unsat,
//! violations, disagreements), 2 for usage or input errors, 3 when a
//! search bound or the step cap ran out.

pub mod experiment;

use crate::search::{
    candidate_formulas, decide_valid_over_frame, eq_separation, frame_properties, sat_bounded,
    FrameClass, Outcome, SearchOptions, SearchParams, Separation, SeparationReport, Verdict,
};
use crate::semantics::{
    validate_model, valid_in_model, Assignment, EqPrinciple, FrameFile, Mode, Model, Validity,
};
use crate::syntax::{classify, parse, render, Formula, Var};
use crate::translations::{kripke_trick, positivize, NamingScheme, Variant};
use clap::{Parser, Subcommand};
use experiment::{parse_corpus, trick_experiment, ExperimentReport};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BOUND: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "monotrick", version)]
#[command(about = "Kripke-trick translations, Kripke semantics with equality, and bounded search")]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Give up with exit status 3 after this many candidate models.
    #[arg(long, global = true, env = "MONOTRICK_MAX_STEPS")]
    pub max_steps: Option<u64>,

    /// Worker threads for search (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a formula and print it back.
    Parse { formula: String },
    /// Report the syntactic fragment of a formula.
    Classify { formula: String },
    /// Apply a Kripke-trick variant.
    Translate {
        #[arg(long, value_parser = parse_variant)]
        variant: Variant,
        /// Replace negations by implications into a fresh letter first.
        #[arg(long)]
        positivize: bool,
        /// Fresh letter for --positivize.
        #[arg(long, default_value = "r_neg")]
        fresh: String,
        formula: String,
    },
    /// Check a model file against every semantic invariant.
    Validate {
        #[arg(long)]
        model: PathBuf,
    },
    /// Evaluate a formula at one world.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        world: String,
        /// Comma-separated `var=individual` pairs.
        #[arg(long, default_value = "")]
        assign: String,
        formula: String,
    },
    /// Truth at every world under every assignment.
    Check {
        #[arg(long)]
        model: PathBuf,
        formula: String,
    },
    /// Bounded satisfiability over a frame class.
    Sat {
        #[arg(long, default_value = "modal", value_parser = parse_mode)]
        mode: Mode,
        #[arg(long, default_value = "all", value_parser = parse_class)]
        class: FrameClass,
        #[arg(long, default_value_t = 2)]
        worlds: usize,
        #[arg(long, default_value_t = 2)]
        domain: usize,
        #[arg(long, default_value = "eq3", value_parser = parse_principle)]
        eq: EqPrinciple,
        #[arg(long)]
        constant: bool,
        formula: String,
    },
    /// Validity over all models on one frame, up to a domain bound.
    Decide {
        #[arg(long)]
        frame: PathBuf,
        /// Domain bound; defaults to a heuristic based on the formula.
        #[arg(long)]
        domain: Option<usize>,
        #[arg(long, default_value = "eq3", value_parser = parse_principle)]
        eq: EqPrinciple,
        #[arg(long, default_value = "modal", value_parser = parse_mode)]
        mode: Mode,
        #[arg(long)]
        constant: bool,
        formula: String,
    },
    /// Properties of a frame.
    FrameProps {
        #[arg(long)]
        frame: PathBuf,
    },
    /// Compare classical truth with truth of the translation on every
    /// structure up to a size.
    Experiment {
        #[arg(long, value_parser = parse_variant)]
        variant: Variant,
        /// One closed formula per line.
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 3)]
        size: usize,
    },
    /// Search small frames for formulas separating the equality principles.
    Separate {
        #[arg(long, default_value_t = 3)]
        worlds: usize,
        #[arg(long, default_value_t = 2)]
        domain: usize,
        /// Extra candidate formulas, one per line.
        #[arg(long)]
        formulas: Option<PathBuf>,
    },
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse()
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

fn parse_principle(s: &str) -> Result<EqPrinciple, String> {
    s.parse()
}

fn parse_class(s: &str) -> Result<FrameClass, String> {
    s.parse()
}

/// Exit status and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    fn ok(code: i32, stdout: String) -> Self {
        CliOutput {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(msg: impl std::fmt::Display) -> Self {
        CliOutput {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn dispatch<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                CliOutput {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CliOutput::ok(EXIT_YES, text)
            }
        }
    }
}

pub fn run(cli: &Cli) -> CliOutput {
    match execute(cli) {
        Ok(out) => out,
        Err(msg) => CliOutput::usage(msg),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

/// Formula text, or the contents of a file when written `@path`.
fn formula_arg(text: &str) -> Result<Formula, String> {
    let owned;
    let source = match text.strip_prefix('@') {
        Some(path) => {
            owned = read(Path::new(path))?;
            owned.as_str()
        }
        None => text,
    };
    parse(source).map_err(|e| e.to_string())
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load_model(path: &Path) -> Result<Model, String> {
    Model::from_json(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn execute(cli: &Cli) -> Result<CliOutput, String> {
    let options = SearchOptions {
        workers: cli.workers,
        max_steps: cli.max_steps,
    };
    match &cli.command {
        Command::Parse { formula } => {
            let f = formula_arg(formula)?;
            let out = if cli.json { json(&f) } else { format!("{}\n", render(&f)) };
            Ok(CliOutput::ok(EXIT_YES, out))
        }
        Command::Classify { formula } => {
            let report = classify(&formula_arg(formula)?);
            let out = if cli.json {
                json(&report)
            } else {
                let v = serde_json::to_value(&report).expect("report serializes");
                let mut s = String::new();
                for (k, v) in v.as_object().expect("report is an object") {
                    let _ = writeln!(s, "{k}: {v}");
                }
                s
            };
            Ok(CliOutput::ok(EXIT_YES, out))
        }
        Command::Translate {
            variant,
            positivize: pos,
            fresh,
            formula,
        } => {
            let mut f = formula_arg(formula)?;
            if *pos {
                f = positivize(&f, fresh).map_err(|e| e.to_string())?;
            }
            let t = kripke_trick(&f, *variant, &NamingScheme::avoiding(&f)).map_err(|e| e.to_string())?;
            if cli.json {
                #[derive(Serialize)]
                struct Out<'a> {
                    formula: String,
                    variant: Variant,
                    warnings: &'a [String],
                }
                let out = Out {
                    formula: render(&t.formula),
                    variant: *variant,
                    warnings: &t.warnings,
                };
                Ok(CliOutput::ok(EXIT_YES, json(&out)))
            } else {
                let stderr = t.warnings.iter().map(|w| format!("warning: {w}\n")).collect();
                Ok(CliOutput {
                    code: EXIT_YES,
                    stdout: format!("{}\n", render(&t.formula)),
                    stderr,
                })
            }
        }
        Command::Validate { model } => {
            let m = load_model(model)?;
            let violations = validate_model(&m);
            let code = if violations.is_empty() { EXIT_YES } else { EXIT_NO };
            let out = if cli.json {
                #[derive(Serialize)]
                struct Out<'a> {
                    valid: bool,
                    violations: &'a [crate::semantics::Violation],
                }
                json(&Out {
                    valid: violations.is_empty(),
                    violations: &violations,
                })
            } else if violations.is_empty() {
                "ok\n".to_string()
            } else {
                violations.iter().map(|v| format!("{v}\n")).collect()
            };
            Ok(CliOutput::ok(code, out))
        }
        Command::Eval {
            model,
            world,
            assign,
            formula,
        } => {
            let m = load_model(model)?;
            let f = formula_arg(formula)?;
            let w = m
                .frame()
                .index_of(world)
                .ok_or_else(|| format!("unknown world `{world}`"))?;
            let s = parse_assignment(&m, assign)?;
            let value = crate::semantics::eval(&m, w, &s, &f).map_err(|e| e.to_string())?;
            let code = if value { EXIT_YES } else { EXIT_NO };
            let out = if cli.json {
                json(&serde_json::json!({ "value": value }))
            } else {
                format!("{value}\n")
            };
            Ok(CliOutput::ok(code, out))
        }
        Command::Check { model, formula } => {
            let m = load_model(model)?;
            let f = formula_arg(formula)?;
            let validity = valid_in_model(&m, &f).map_err(|e| e.to_string())?;
            let (code, out) = match &validity {
                Validity::Valid => (
                    EXIT_YES,
                    if cli.json {
                        json(&serde_json::json!({ "valid": true }))
                    } else {
                        "valid\n".to_string()
                    },
                ),
                Validity::Falsified { world, assignment } => {
                    let wn = m.frame().name(*world);
                    let out = if cli.json {
                        let a: std::collections::BTreeMap<String, String> = assignment
                            .iter()
                            .map(|(x, &v)| (x.to_string(), m.individual_name(v).to_string()))
                            .collect();
                        json(&serde_json::json!({ "valid": false, "world": wn, "assignment": a }))
                    } else {
                        format!("invalid at world {wn} with {}\n", m.describe_assignment(assignment))
                    };
                    (EXIT_NO, out)
                }
            };
            Ok(CliOutput::ok(code, out))
        }
        Command::Sat {
            mode,
            class,
            worlds,
            domain,
            eq,
            constant,
            formula,
        } => {
            let f = formula_arg(formula)?;
            let params = SearchParams {
                mode: *mode,
                principle: *eq,
                constant_domains: *constant,
                domain_bound: Some(*domain),
                options,
            };
            let v = sat_bounded(&f, class, *worlds, &params).map_err(|e| e.to_string())?;
            Ok(verdict_output(&v, cli.json))
        }
        Command::Decide {
            frame,
            domain,
            eq,
            mode,
            constant,
            formula,
        } => {
            let fr = FrameFile::from_json(&read(frame)?).map_err(|e| format!("{}: {e}", frame.display()))?;
            let f = formula_arg(formula)?;
            let params = SearchParams {
                mode: *mode,
                principle: *eq,
                constant_domains: *constant,
                domain_bound: *domain,
                options,
            };
            let v = decide_valid_over_frame(&fr, &f, &params).map_err(|e| e.to_string())?;
            Ok(verdict_output(&v, cli.json))
        }
        Command::FrameProps { frame } => {
            let fr = FrameFile::from_json(&read(frame)?).map_err(|e| format!("{}: {e}", frame.display()))?;
            let report = frame_properties(&fr);
            let out = if cli.json {
                json(&report)
            } else {
                let v = serde_json::to_value(&report).expect("report serializes");
                v.as_object()
                    .expect("report is an object")
                    .iter()
                    .map(|(k, v)| format!("{k}: {v}\n"))
                    .collect()
            };
            Ok(CliOutput::ok(EXIT_YES, out))
        }
        Command::Experiment {
            variant,
            corpus,
            size,
        } => {
            let corpus = parse_corpus(&read(corpus)?).map_err(|e| e.to_string())?;
            let report = trick_experiment(&corpus, *variant, *size).map_err(|e| e.to_string())?;
            let code = if report.all_agree() { EXIT_YES } else { EXIT_NO };
            let out = if cli.json { json(&report) } else { experiment_text(&report) };
            Ok(CliOutput::ok(code, out))
        }
        Command::Separate {
            worlds,
            domain,
            formulas,
        } => {
            if !(1..=3).contains(worlds) || !(1..=3).contains(domain) {
                return Err("separate supports at most 3 worlds and domain bound 3".into());
            }
            let mut fs = candidate_formulas();
            if let Some(path) = formulas {
                fs.extend(parse_corpus(&read(path)?).map_err(|e| e.to_string())?);
            }
            let base = SearchParams {
                options,
                ..SearchParams::new(Mode::Modal, EqPrinciple::Eq1, *domain)
            };
            let report = eq_separation(*worlds, *domain, &fs, &base).map_err(|e| e.to_string())?;
            let code = if report.eq3_over_eq2.is_found() && report.eq2_over_eq1.is_found() {
                EXIT_YES
            } else {
                EXIT_NO
            };
            let out = if cli.json { json(&report) } else { separation_text(&report) };
            Ok(CliOutput::ok(code, out))
        }
    }
}

fn parse_assignment(m: &Model, text: &str) -> Result<Assignment, String> {
    let mut s = Assignment::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (x, a) = part
            .split_once('=')
            .ok_or_else(|| format!("expected var=individual, got `{part}`"))?;
        let (x, a) = (x.trim(), a.trim());
        if !crate::syntax::is_variable_name(x) {
            return Err(format!("`{x}` is not a variable"));
        }
        let i = m
            .individual_index(a)
            .ok_or_else(|| format!("unknown individual `{a}`"))?;
        s.insert(Var::new(x), i);
    }
    Ok(s)
}

fn verdict_output(v: &Verdict, as_json: bool) -> CliOutput {
    let code = match v.outcome {
        Outcome::Valid | Outcome::Satisfiable => EXIT_YES,
        Outcome::Countermodel | Outcome::UnsatisfiableUpToBound => EXIT_NO,
        Outcome::BoundExhausted => EXIT_BOUND,
    };
    if as_json {
        return CliOutput::ok(code, json(v));
    }
    let outcome = serde_json::to_value(v.outcome).expect("outcome serializes");
    let mut s = format!(
        "{} (worlds <= {}, domain <= {}{}, {} models checked)\n",
        outcome.as_str().unwrap_or_default(),
        v.bounds_used.worlds,
        v.bounds_used.domain,
        if v.heuristic_domain_bound { " heuristic" } else { "" },
        v.models_checked
    );
    if let Some(w) = &v.witness {
        let a: Vec<String> = w.assignment.iter().map(|(x, a)| format!("{x}={a}")).collect();
        let _ = writeln!(s, "at world {} with {{{}}}", w.world, a.join(","));
        s.push_str(&json(&w.model));
    }
    let stderr = v.warnings.iter().map(|w| format!("warning: {w}\n")).collect();
    CliOutput {
        code,
        stdout: s,
        stderr,
    }
}

fn experiment_text(r: &ExperimentReport) -> String {
    let mut s = format!(
        "variant {}: {} formulas x {} structures, {} agreements, {} disagreements, {} skipped, {} ms\n",
        r.variant,
        r.corpus_size,
        r.structure_count,
        r.agreements,
        r.disagreements.len(),
        r.skipped.len(),
        r.wall_time_ms
    );
    for d in &r.disagreements {
        let _ = writeln!(
            s,
            "disagreement: {} on size {} relation {:?}: classical {}, modal {}",
            d.formula, d.structure.size, d.structure.relation, d.classical, d.modal
        );
    }
    for k in &r.skipped {
        let _ = writeln!(s, "skipped: {}: {}", k.formula, k.reason);
    }
    s
}

fn separation_text(r: &SeparationReport) -> String {
    let mut s = format!(
        "searched {} frames (<= {} worlds), domain bound {}, {} formulas\n",
        r.frames_searched,
        r.world_bound,
        r.domain_bound,
        r.formulas.len()
    );
    for sep in [&r.eq3_over_eq2, &r.eq2_over_eq1] {
        match sep {
            Separation::Found {
                stronger,
                weaker,
                frame,
                formula,
                ..
            } => {
                let edges: Vec<String> = frame.access.iter().map(|(a, b)| format!("{a}->{b}")).collect();
                let _ = writeln!(
                    s,
                    "{stronger} over {weaker}: found `{formula}` on worlds {:?} with access [{}]",
                    frame.worlds,
                    edges.join(", ")
                );
            }
            Separation::NotFound {
                stronger,
                weaker,
                message,
            } => {
                let _ = writeln!(s, "{stronger} over {weaker}: {message}");
            }
        }
    }
    s
}
