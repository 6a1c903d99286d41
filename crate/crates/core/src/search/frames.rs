//! Frame conditions, named logics, and frame enumeration.

use crate::semantics::{Frame, World};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameProperty {
    Reflexive,
    Transitive,
    Symmetric,
    Serial,
    Euclidean,
    /// Any two distinct worlds are related one way or the other.
    Linear,
    /// Reflexive, transitive and antisymmetric.
    PartialOrder,
    IrreflexiveTransitive,
    /// Every world has at most `n` successors.
    AltN(usize),
}

impl fmt::Display for FrameProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameProperty::Reflexive => f.write_str("reflexive"),
            FrameProperty::Transitive => f.write_str("transitive"),
            FrameProperty::Symmetric => f.write_str("symmetric"),
            FrameProperty::Serial => f.write_str("serial"),
            FrameProperty::Euclidean => f.write_str("euclidean"),
            FrameProperty::Linear => f.write_str("linear"),
            FrameProperty::PartialOrder => f.write_str("partial_order"),
            FrameProperty::IrreflexiveTransitive => f.write_str("irreflexive_transitive"),
            FrameProperty::AltN(n) => write!(f, "alt_{n}"),
        }
    }
}

impl FrameProperty {
    pub fn holds(self, fr: &Frame) -> bool {
        let ws = || fr.worlds();
        let r = |a: World, b: World| fr.sees(a, b);
        match self {
            FrameProperty::Reflexive => ws().all(|w| r(w, w)),
            FrameProperty::Transitive => ws().all(|a| {
                fr.successors(a)
                    .iter()
                    .all(|&b| fr.successors(b).iter().all(|&c| r(a, c)))
            }),
            FrameProperty::Symmetric => ws().all(|a| fr.successors(a).iter().all(|&b| r(b, a))),
            FrameProperty::Serial => ws().all(|w| !fr.successors(w).is_empty()),
            FrameProperty::Euclidean => ws().all(|a| {
                let s = fr.successors(a);
                s.iter().all(|&b| s.iter().all(|&c| r(b, c)))
            }),
            FrameProperty::Linear => {
                ws().all(|a| ws().all(|b| a == b || r(a, b) || r(b, a)))
            }
            FrameProperty::PartialOrder => {
                FrameProperty::Reflexive.holds(fr)
                    && FrameProperty::Transitive.holds(fr)
                    && ws().all(|a| ws().all(|b| a == b || !(r(a, b) && r(b, a))))
            }
            FrameProperty::IrreflexiveTransitive => {
                ws().all(|w| !r(w, w)) && FrameProperty::Transitive.holds(fr)
            }
            FrameProperty::AltN(n) => max_out_degree(fr) <= n,
        }
    }
}

pub fn max_out_degree(fr: &Frame) -> usize {
    fr.worlds().map(|w| fr.successors(w).len()).max().unwrap_or(0)
}

/// A conjunction of frame properties. The empty class is the class of all
/// frames.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrameClass {
    pub properties: BTreeSet<FrameProperty>,
}

impl FrameClass {
    pub fn all() -> Self {
        FrameClass::default()
    }

    pub fn of(props: impl IntoIterator<Item = FrameProperty>) -> Self {
        FrameClass {
            properties: props.into_iter().collect(),
        }
    }

    pub fn with(mut self, p: FrameProperty) -> Self {
        self.properties.insert(p);
        self
    }

    pub fn contains(&self, fr: &Frame) -> bool {
        self.properties.iter().all(|p| p.holds(fr))
    }

    /// The frame conditions of a named logic, if the name is known. Finite
    /// frames only, so GL is irreflexive and transitive, Grz is a partial
    /// order, and Int is a preorder.
    pub fn logic(name: &str) -> Option<Self> {
        use FrameProperty::*;
        let name = name.trim_start_matches('Q');
        let props: &[FrameProperty] = match name {
            "K" => &[],
            "T" => &[Reflexive],
            "K4" => &[Transitive],
            "K5" => &[Euclidean],
            "K45" => &[Transitive, Euclidean],
            "KD" | "D" => &[Serial],
            "KD4" | "D4" => &[Serial, Transitive],
            "KD45" | "D45" => &[Serial, Transitive, Euclidean],
            "KB" | "B" => &[Symmetric],
            "KTB" | "TB" => &[Reflexive, Symmetric],
            "S4" => &[Reflexive, Transitive],
            "S4.3" => &[Reflexive, Transitive, Linear],
            "S5" => &[Reflexive, Transitive, Symmetric],
            "GL" => &[IrreflexiveTransitive],
            "Grz" => &[PartialOrder],
            "Int" => &[Reflexive, Transitive],
            _ => {
                let n = name.strip_prefix("Alt")?.parse().ok()?;
                return Some(FrameClass::of([AltN(n)]));
            }
        };
        Some(FrameClass::of(props.iter().copied()))
    }
}

impl fmt::Display for FrameClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.properties.is_empty() {
            return f.write_str("all");
        }
        let parts: Vec<String> = self.properties.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl std::str::FromStr for FrameClass {
    type Err = String;

    /// A comma-separated list of property names and logic names, e.g.
    /// `S4`, `serial,alt_1`, or `all`.
    fn from_str(s: &str) -> Result<Self, String> {
        let mut class = FrameClass::all();
        for token in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let prop = match token {
                "all" => continue,
                "reflexive" => FrameProperty::Reflexive,
                "transitive" => FrameProperty::Transitive,
                "symmetric" => FrameProperty::Symmetric,
                "serial" => FrameProperty::Serial,
                "euclidean" => FrameProperty::Euclidean,
                "linear" => FrameProperty::Linear,
                "partial_order" => FrameProperty::PartialOrder,
                "irreflexive_transitive" => FrameProperty::IrreflexiveTransitive,
                t => {
                    if let Some(n) = t.strip_prefix("alt_").and_then(|n| n.parse().ok()) {
                        FrameProperty::AltN(n)
                    } else if let Some(c) = FrameClass::logic(t) {
                        class.properties.extend(c.properties);
                        continue;
                    } else {
                        return Err(format!("unknown frame property or logic `{t}`"));
                    }
                }
            };
            class.properties.insert(prop);
        }
        Ok(class)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub reflexive: bool,
    pub transitive: bool,
    pub symmetric: bool,
    pub serial: bool,
    pub euclidean: bool,
    pub linear: bool,
    pub partial_order: bool,
    pub irreflexive_transitive: bool,
    /// Least `n` such that the frame is an Alt_n frame.
    pub max_out_degree: usize,
}

pub fn frame_properties(fr: &Frame) -> PropertyReport {
    use FrameProperty::*;
    PropertyReport {
        reflexive: Reflexive.holds(fr),
        transitive: Transitive.holds(fr),
        symmetric: Symmetric.holds(fr),
        serial: Serial.holds(fr),
        euclidean: Euclidean.holds(fr),
        linear: Linear.holds(fr),
        partial_order: PartialOrder.holds(fr),
        irreflexive_transitive: IrreflexiveTransitive.holds(fr),
        max_out_degree: max_out_degree(fr),
    }
}

/// The frame on `k` worlds whose edge `(i,j)` is bit `i*k+j` of `mask`.
pub fn frame_from_mask(k: usize, mask: u64) -> Frame {
    let adj = (0..k)
        .map(|i| (0..k).map(|j| mask >> (i * k + j) & 1 == 1).collect())
        .collect();
    Frame::from_parts((0..k).map(|i| format!("w{i}")).collect(), adj)
}

/// Frames on `w0..w{k-1}` for `k = 1..=world_bound` that belong to `cls`,
/// ordered by world count, then by edge mask (edge `(i,j)` is bit `i*k+j`).
pub fn enumerate_frames(world_bound: usize, cls: &FrameClass) -> impl Iterator<Item = Frame> + '_ {
    assert!(world_bound <= 7, "frames on more than 7 worlds cannot be enumerated");
    (1..=world_bound).flat_map(move |k| {
        (0..1u64 << (k * k))
            .map(move |mask| frame_from_mask(k, mask))
            .filter(move |fr| cls.contains(fr))
    })
}
