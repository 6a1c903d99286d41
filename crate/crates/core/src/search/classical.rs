//! Finite classical structures: exhaustive enumeration and a bounded
//! satisfiability oracle.

use crate::syntax::Formula;
use crate::translations::{ClassicalError, ClassicalStructure};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassicalSatError {
    #[error("formula has free variables; close it first")]
    Open,
    #[error("modal operators have no classical reading")]
    Modality,
    #[error("letter `{0}` has arity {1}; at most one binary letter is supported")]
    UnsupportedLetter(String, usize),
    #[error("letter `{letter}` is used with arity {first} and with arity {second}")]
    ArityConflict {
        letter: String,
        first: usize,
        second: usize,
    },
    #[error("{bits} interpretation bits at size {size}; at most 30 can be enumerated")]
    TooLarge { size: usize, bits: usize },
    #[error(transparent)]
    Eval(#[from] ClassicalError),
}

/// All structures with domain size `1..=size_bound`, by size and then by
/// relation mask, where pair `(a,b)` is bit `a*size+b`.
pub fn all_structures(size_bound: usize) -> Vec<ClassicalStructure> {
    let mut out = Vec::new();
    for n in 1..=size_bound {
        let bits = n * n;
        assert!(bits < 32, "too many relations to enumerate");
        for mask in 0..1u64 << bits {
            let rel = (0..bits)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| (i / n, i % n));
            out.push(ClassicalStructure::new(n, rel));
        }
    }
    out
}

/// All structures with a symmetric irreflexive relation (simple graphs on
/// `0..size`), by size and then by edge mask over pairs `a<b` in
/// lexicographic order.
pub fn symmetric_irreflexive_structures(size_bound: usize) -> Vec<ClassicalStructure> {
    let mut out = Vec::new();
    for n in 1..=size_bound {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        assert!(pairs.len() < 32, "too many graphs to enumerate");
        for mask in 0..1u64 << pairs.len() {
            let rel = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .flat_map(|(_, &(a, b))| [(a, b), (b, a)]);
            out.push(ClassicalStructure::new(n, rel));
        }
    }
    out
}

/// The first structure of size at most `size_bound` in which the closed
/// formula `f` is true.
///
/// Structures are ordered by size, then by a mask over interpretation
/// bits: the pairs of the binary letter (pair `(a,b)` at `a*size+b`),
/// then each unary letter in name order (one bit per individual), then the
/// propositional letters in name order. Every letter of `f` appears in the
/// returned structure's maps, possibly with an empty extension.
pub fn classical_sat(
    f: &Formula,
    size_bound: usize,
) -> Result<Option<ClassicalStructure>, ClassicalSatError> {
    if !f.is_closed() {
        return Err(ClassicalSatError::Open);
    }
    if f.modal_depth() > 0 {
        return Err(ClassicalSatError::Modality);
    }
    let letters = f
        .letters()
        .map_err(|(letter, first, second)| ClassicalSatError::ArityConflict {
            letter,
            first,
            second,
        })?;
    let mut binary = None;
    let mut unary = Vec::new();
    let mut nullary = Vec::new();
    for (name, &arity) in &letters {
        match arity {
            0 => nullary.push(name.clone()),
            1 => unary.push(name.clone()),
            2 if binary.is_none() => binary = Some(name.clone()),
            n => return Err(ClassicalSatError::UnsupportedLetter(name.clone(), n)),
        }
    }
    for n in 1..=size_bound {
        let rel_bits = if binary.is_some() { n * n } else { 0 };
        let bits = rel_bits + unary.len() * n + nullary.len();
        if bits > 30 {
            return Err(ClassicalSatError::TooLarge { size: n, bits });
        }
        for mask in 0..1u64 << bits {
            let bit = |i: usize| mask >> i & 1 == 1;
            let mut m = ClassicalStructure::new(
                n,
                (0..rel_bits).filter(|&i| bit(i)).map(|i| (i / n, i % n)),
            );
            let mut offset = rel_bits;
            for name in &unary {
                let ext = (0..n).filter(|&a| bit(offset + a)).collect();
                m.unary.insert(name.clone(), ext);
                offset += n;
            }
            m.nullary = nullary
                .iter()
                .enumerate()
                .map(|(i, name)| (name.clone(), bit(offset + i)))
                .collect::<BTreeMap<_, _>>();
            if m.satisfies(f)? {
                return Ok(Some(m));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn structure_counts() {
        assert_eq!(all_structures(2).len(), 18);
        assert_eq!(all_structures(3).len(), 530);
        assert_eq!(symmetric_irreflexive_structures(3).len(), 11);
        assert_eq!(symmetric_irreflexive_structures(4).len(), 75);
        assert!(symmetric_irreflexive_structures(4)
            .iter()
            .all(|m| m.is_symmetric() && m.is_irreflexive()));
    }

    #[test]
    fn sat_examples() {
        let f = parse("exists x exists y (P(x,y) & ~P(y,x))").unwrap();
        let m = classical_sat(&f, 2).unwrap().unwrap();
        assert_eq!(m.size, 2);
        assert_eq!(m.relation, [(0, 1)].into());

        assert_eq!(classical_sat(&parse("false").unwrap(), 3).unwrap(), None);

        let m = classical_sat(&parse("exists x P(x,x)").unwrap(), 1).unwrap().unwrap();
        assert_eq!((m.size, m.relation.clone()), (1, [(0, 0)].into()));
    }

    #[test]
    fn sat_with_unary_letters_and_equality() {
        let f = parse("exists x exists y (~(x = y) & R(x) & ~R(y)) & p").unwrap();
        let m = classical_sat(&f, 3).unwrap().unwrap();
        assert_eq!(m.size, 2);
        assert_eq!(m.unary["R"], [0].into());
        assert!(m.nullary["p"]);
        let g = parse("exists x exists y exists z (~(x = y) & ~(y = z) & ~(x = z))").unwrap();
        assert_eq!(classical_sat(&g, 2).unwrap(), None);
        assert_eq!(classical_sat(&g, 3).unwrap().unwrap().size, 3);
    }

    #[test]
    fn sat_errors() {
        assert_eq!(classical_sat(&parse("P(x,y)").unwrap(), 2), Err(ClassicalSatError::Open));
        assert_eq!(
            classical_sat(&parse("<>p").unwrap(), 2),
            Err(ClassicalSatError::Modality)
        );
        assert!(matches!(
            classical_sat(&parse("exists x (P(x,x) & R(x,x))").unwrap(), 2),
            Err(ClassicalSatError::UnsupportedLetter(..))
        ));
    }
}
