use super::{EqPrinciple, Individual, Mode, Model, World};
use serde::Serialize;
use std::fmt;

/// A violated model invariant together with a concrete witness. Names are
/// world, individual and letter names from the model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "invariant", rename_all = "snake_case")]
pub enum Violation {
    EmptyDomain { world: String },
    DomainNotExpanding { from: String, to: String, individual: String },
    DomainNotConstant { world: String, other: String },
    TupleOutsideDomain { world: String, letter: String, tuple: Vec<String> },
    ValuationNotHereditary { from: String, to: String, letter: String, tuple: Vec<String> },
    NotACongruence { world: String, letter: String, tuple: Vec<String>, equal_to: Vec<String> },
    Eq1UpwardHeredity { from: String, to: String, a: String, b: String },
    Eq2DownwardHeredity { from: String, to: String, a: String, b: String },
    Eq3NotIdentity { world: String, a: String, b: String },
    NotReflexive { world: String },
    NotTransitive { first: String, second: String, third: String },
}

impl Violation {
    /// Short name of the violated invariant.
    pub fn invariant(&self) -> &'static str {
        match self {
            Violation::EmptyDomain { .. } => "domains are nonempty",
            Violation::DomainNotExpanding { .. } => "domains expand along accessibility",
            Violation::DomainNotConstant { .. } => "constant domains",
            Violation::TupleOutsideDomain { .. } => "valuation within domain",
            Violation::ValuationNotHereditary { .. } => "intuitionistic valuation is hereditary",
            Violation::NotACongruence { .. } => "equality is a congruence",
            Violation::Eq1UpwardHeredity { .. } => "Eq1 upward heredity",
            Violation::Eq2DownwardHeredity { .. } => "Eq2 downward heredity",
            Violation::Eq3NotIdentity { .. } => "Eq3 equality is identity",
            Violation::NotReflexive { .. } | Violation::NotTransitive { .. } => {
                "intuitionistic frame must be a preorder"
            }
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tuple = |t: &[String]| format!("({})", t.join(","));
        write!(f, "{}: ", self.invariant())?;
        match self {
            Violation::EmptyDomain { world } => write!(f, "world {world}"),
            Violation::DomainNotExpanding { from, to, individual } => {
                write!(f, "{individual} in D({from}) but not in D({to})")
            }
            Violation::DomainNotConstant { world, other } => {
                write!(f, "D({world}) differs from D({other})")
            }
            Violation::TupleOutsideDomain { world, letter, tuple: t } => {
                write!(f, "{letter}{} at {world}", tuple(t))
            }
            Violation::ValuationNotHereditary { from, to, letter, tuple: t } => {
                write!(f, "{letter}{} holds at {from} but not at {to}", tuple(t))
            }
            Violation::NotACongruence { world, letter, tuple: t, equal_to } => write!(
                f,
                "{letter}{} and {letter}{} differ at {world} although the arguments are equal",
                tuple(t),
                tuple(equal_to)
            ),
            Violation::Eq1UpwardHeredity { from, to, a, b } => {
                write!(f, "{a} = {b} at {from} but not at {to}")
            }
            Violation::Eq2DownwardHeredity { from, to, a, b } => {
                write!(f, "{a} = {b} at {to} but not at {from}")
            }
            Violation::Eq3NotIdentity { world, a, b } => {
                write!(f, "{a} and {b} are identified at {world}")
            }
            Violation::NotReflexive { world } => write!(f, "{world} does not see itself"),
            Violation::NotTransitive { first, second, third } => {
                write!(f, "{first} -> {second} -> {third} but not {first} -> {third}")
            }
        }
    }
}

/// Checks every model invariant and returns the violations found, each with
/// a witness. An empty report means the model is fit for evaluation.
pub fn validate_model(m: &Model) -> Vec<Violation> {
    let mut out = Vec::new();
    let fr = m.frame();
    let wn = |w: World| fr.name(w).to_string();
    let ind = |a: Individual| m.individual_name(a).to_string();
    let names = |t: &[Individual]| t.iter().map(|&a| ind(a)).collect::<Vec<_>>();

    for w in fr.worlds() {
        if m.domain(w).is_empty() {
            out.push(Violation::EmptyDomain { world: wn(w) });
        }
    }
    for (w, v) in fr.edges() {
        for &a in m.domain(w) {
            if !m.in_domain(v, a) {
                out.push(Violation::DomainNotExpanding {
                    from: wn(w),
                    to: wn(v),
                    individual: ind(a),
                });
            }
        }
    }
    if m.constant_domains() {
        for w in fr.worlds().skip(1) {
            if m.domain(w) != m.domain(0) {
                out.push(Violation::DomainNotConstant {
                    world: wn(w),
                    other: wn(0),
                });
            }
        }
    }

    if m.mode() == Mode::Intuitionistic {
        for w in fr.worlds() {
            if !fr.sees(w, w) {
                out.push(Violation::NotReflexive { world: wn(w) });
            }
        }
        for (w, v) in fr.edges() {
            for &u in fr.successors(v) {
                if !fr.sees(w, u) {
                    out.push(Violation::NotTransitive {
                        first: wn(w),
                        second: wn(v),
                        third: wn(u),
                    });
                }
            }
        }
    }

    for (l, letter) in m.letters().iter().enumerate() {
        for w in fr.worlds() {
            for t in m.extension(w, l) {
                if t.iter().any(|&a| !m.in_domain(w, a)) {
                    out.push(Violation::TupleOutsideDomain {
                        world: wn(w),
                        letter: letter.name.clone(),
                        tuple: names(&t),
                    });
                }
            }
            // t and its representative tuple must agree, for every t
            for t in tuples(m.domain(w), letter.arity) {
                let reps: Vec<Individual> = t.iter().map(|&a| m.class_rep(w, a)).collect();
                if reps != t && m.fact(w, l, &t) != m.fact(w, l, &reps) {
                    out.push(Violation::NotACongruence {
                        world: wn(w),
                        letter: letter.name.clone(),
                        tuple: names(&t),
                        equal_to: names(&reps),
                    });
                }
            }
        }
        if m.mode() == Mode::Intuitionistic {
            for (w, v) in fr.edges() {
                for t in m.extension(w, l) {
                    if !m.fact(v, l, &t) {
                        out.push(Violation::ValuationNotHereditary {
                            from: wn(w),
                            to: wn(v),
                            letter: letter.name.clone(),
                            tuple: names(&t),
                        });
                    }
                }
            }
        }
    }

    match m.principle() {
        EqPrinciple::Eq3 => {
            for w in fr.worlds() {
                for &a in m.domain(w) {
                    let rep = m.class_rep(w, a);
                    if rep != a {
                        out.push(Violation::Eq3NotIdentity {
                            world: wn(w),
                            a: ind(rep),
                            b: ind(a),
                        });
                    }
                }
            }
        }
        p => {
            for (w, v) in fr.edges() {
                for (i, &a) in m.domain(w).iter().enumerate() {
                    for &b in &m.domain(w)[i + 1..] {
                        if !m.in_domain(v, a) || !m.in_domain(v, b) {
                            continue;
                        }
                        let here = m.equal_at(w, a, b);
                        let there = m.equal_at(v, a, b);
                        if here && !there {
                            out.push(Violation::Eq1UpwardHeredity {
                                from: wn(w),
                                to: wn(v),
                                a: ind(a),
                                b: ind(b),
                            });
                        }
                        if p == EqPrinciple::Eq2 && there && !here {
                            out.push(Violation::Eq2DownwardHeredity {
                                from: wn(w),
                                to: wn(v),
                                a: ind(a),
                                b: ind(b),
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// All tuples of the given arity over `domain`, in lexicographic order.
pub(crate) fn tuples(domain: &[Individual], arity: usize) -> Vec<Vec<Individual>> {
    let mut out: Vec<Vec<Individual>> = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                domain.iter().map(move |&b| {
                    let mut p = prefix.clone();
                    p.push(b);
                    p
                })
            })
            .collect();
    }
    out
}
