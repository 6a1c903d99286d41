//! Kripke-trick translations between binary-predicate classical logic and
//! monadic modal or intuitionistic predicate logic, Kripke semantics under
//! three readings of equality, and bounded decision and countermodel search
//! over finite frames.

pub mod cli;
pub mod search;
pub mod semantics;
pub mod syntax;
pub mod translations;
