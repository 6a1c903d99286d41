//! The JSON model and frame file formats.

use super::{EqPrinciple, Frame, Individual, Mode, Model, ModelError, World};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EqualityFile {
    pub principle: EqPrinciple,
    /// World name to a partition of that world's domain. Worlds left out
    /// get the identity partition.
    #[serde(default)]
    pub classes: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub mode: Mode,
    #[serde(default)]
    pub constant_domains: bool,
    pub worlds: Vec<String>,
    #[serde(default)]
    pub access: Vec<(String, String)>,
    pub domains: BTreeMap<String, Vec<String>>,
    /// World name to letter name to the tuples where the letter holds. A
    /// propositional letter holds when its list is `[[]]`.
    #[serde(default)]
    pub valuation: BTreeMap<String, BTreeMap<String, Vec<Vec<String>>>>,
    pub equality: EqualityFile,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameFile {
    pub worlds: Vec<String>,
    #[serde(default)]
    pub access: Vec<(String, String)>,
}

fn build_frame(worlds: &[String], access: &[(String, String)]) -> Result<Frame, ModelError> {
    let index: BTreeMap<&str, World> = worlds
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let lookup = |n: &String| {
        index
            .get(n.as_str())
            .copied()
            .ok_or_else(|| ModelError::UnknownWorld(n.clone()))
    };
    let edges = access
        .iter()
        .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
        .collect::<Result<Vec<_>, ModelError>>()?;
    Frame::new(worlds.to_vec(), edges)
}

impl FrameFile {
    pub fn from_json(text: &str) -> Result<Frame, ModelError> {
        // A full model file also describes a frame.
        match serde_json::from_str::<FrameFile>(text) {
            Ok(ff) => ff.to_frame(),
            Err(e) => match serde_json::from_str::<ModelFile>(text) {
                Ok(mf) => build_frame(&mf.worlds, &mf.access),
                Err(_) => Err(e.into()),
            },
        }
    }

    pub fn to_frame(&self) -> Result<Frame, ModelError> {
        build_frame(&self.worlds, &self.access)
    }

    pub fn from_frame(fr: &Frame) -> Self {
        FrameFile {
            worlds: fr.names().to_vec(),
            access: fr
                .edges()
                .into_iter()
                .map(|(a, b)| (fr.name(a).to_string(), fr.name(b).to_string()))
                .collect(),
        }
    }
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Builds the model. Individuals are indexed in order of first
    /// appearance when reading the domains world by world.
    pub fn to_model(&self) -> Result<Model, ModelError> {
        let frame = build_frame(&self.worlds, &self.access)?;
        for w in self.domains.keys() {
            if frame.index_of(w).is_none() {
                return Err(ModelError::UnknownWorld(w.clone()));
            }
        }
        let mut individuals: Vec<String> = Vec::new();
        for w in &self.worlds {
            for a in self.domains.get(w).into_iter().flatten() {
                if !individuals.contains(a) {
                    individuals.push(a.clone());
                }
            }
        }
        let ind = |name: &String| {
            individuals
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| ModelError::UnknownIndividual(name.clone()))
        };
        let domains = self
            .worlds
            .iter()
            .map(|w| {
                self.domains
                    .get(w)
                    .into_iter()
                    .flatten()
                    .map(ind)
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut m = Model::new(
            frame,
            individuals.clone(),
            domains,
            self.mode,
            self.equality.principle,
            self.constant_domains,
        )?;

        for (wname, letters) in &self.valuation {
            let w = m
                .frame()
                .index_of(wname)
                .ok_or_else(|| ModelError::UnknownWorld(wname.clone()))?;
            for (lname, tuples) in letters {
                for t in tuples {
                    let l = m.add_letter(lname, t.len())?;
                    let t = t.iter().map(ind).collect::<Result<Vec<_>, _>>()?;
                    m.set_fact(w, l, &t, true);
                }
            }
        }

        for (wname, classes) in &self.equality.classes {
            let w = m
                .frame()
                .index_of(wname)
                .ok_or_else(|| ModelError::UnknownWorld(wname.clone()))?;
            let classes = classes
                .iter()
                .map(|c| c.iter().map(ind).collect::<Result<Vec<Individual>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            m.set_partition(w, &classes)?;
        }
        Ok(m)
    }

    pub fn from_model(m: &Model) -> Self {
        let fr = m.frame();
        let name = |a: &Individual| m.individual_name(*a).to_string();
        let mut domains = BTreeMap::new();
        let mut valuation = BTreeMap::new();
        let mut classes = BTreeMap::new();
        for w in fr.worlds() {
            let wn = fr.name(w).to_string();
            domains.insert(wn.clone(), m.domain(w).iter().map(name).collect());
            let mut letters = BTreeMap::new();
            for (l, letter) in m.letters().iter().enumerate() {
                let tuples: Vec<Vec<String>> = m
                    .extension(w, l)
                    .iter()
                    .map(|t| t.iter().map(name).collect())
                    .collect();
                // an empty list carries no arity, and absent letters read as false
                if !tuples.is_empty() {
                    letters.insert(letter.name.clone(), tuples);
                }
            }
            valuation.insert(wn.clone(), letters);
            let partition: Vec<Vec<String>> = m
                .partition(w)
                .iter()
                .map(|c| c.iter().map(name).collect())
                .collect();
            classes.insert(wn, partition);
        }
        ModelFile {
            mode: m.mode(),
            constant_domains: m.constant_domains(),
            worlds: fr.names().to_vec(),
            access: FrameFile::from_frame(fr).access,
            domains,
            valuation,
            equality: EqualityFile {
                principle: m.principle(),
                classes,
            },
        }
    }
}

impl Model {
    pub fn from_json(text: &str) -> Result<Model, ModelError> {
        ModelFile::from_json(text)?.to_model()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ModelFile::from_model(self)).expect("model serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::validate_model;

    const CHAIN: &str = r#"{
        "mode": "int",
        "constant_domains": false,
        "worlds": ["w", "v"],
        "access": [["w","w"],["w","v"],["v","v"]],
        "domains": {"w": ["a","b"], "v": ["a","b"]},
        "valuation": {"v": {"Q": [["a"],["b"]], "p": [[]]}},
        "equality": {"principle": "eq1", "classes": {"v": [["a","b"]]}}
    }"#;

    #[test]
    fn loads_and_validates() {
        let m = Model::from_json(CHAIN).unwrap();
        assert_eq!(m.frame().len(), 2);
        assert_eq!(m.mode(), Mode::Intuitionistic);
        assert!(m.equal_at(1, 0, 1));
        assert!(!m.equal_at(0, 0, 1));
        let p = m.letter_index("p").unwrap();
        assert!(m.fact(1, p, &[]));
        assert!(!m.fact(0, p, &[]));
        assert!(validate_model(&m).is_empty());
    }

    #[test]
    fn round_trip_through_file() {
        let m = Model::from_json(CHAIN).unwrap();
        let again = Model::from_json(&m.to_json()).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = CHAIN.replace("\"mode\"", "\"colour\": 1, \"mode\"");
        assert!(matches!(Model::from_json(&text), Err(ModelError::Json(_))));
    }

    #[test]
    fn structural_errors() {
        let bad_world = CHAIN.replace("[\"w\",\"v\"],[\"v\",\"v\"]", "[\"w\",\"u\"]");
        assert!(matches!(Model::from_json(&bad_world), Err(ModelError::UnknownWorld(_))));
        let bad_ind = CHAIN.replace("[[\"a\"],[\"b\"]]", "[[\"c\"]]");
        assert!(matches!(Model::from_json(&bad_ind), Err(ModelError::UnknownIndividual(_))));
        let bad_part = CHAIN.replace("[[\"a\",\"b\"]]}}", "[[\"a\"]]}}");
        assert!(matches!(Model::from_json(&bad_part), Err(ModelError::BadPartition { .. })));
        let arity = CHAIN.replace("[[\"a\"],[\"b\"]]", "[[\"a\"],[\"a\",\"b\"]]");
        assert!(matches!(Model::from_json(&arity), Err(ModelError::ArityConflict { .. })));
    }

    #[test]
    fn frame_from_frame_or_model_file() {
        let fr = FrameFile::from_json(r#"{"worlds":["a","b"],"access":[["a","b"]]}"#).unwrap();
        assert!(fr.sees(0, 1));
        let fr2 = FrameFile::from_json(CHAIN).unwrap();
        assert_eq!(fr2.len(), 2);
        assert!(FrameFile::from_json(r#"{"worlds":["a"],"bogus":1}"#).is_err());
    }
}
