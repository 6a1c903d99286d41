//! Exhaustive finite search: frame classes and frame enumeration, the
//! classical satisfiability oracle, model enumeration, bounded
//! satisfiability and validity search, and the equality-separation
//! harness.

mod classical;
mod frames;
pub mod models;
mod separation;
mod verdict;

pub use classical::{
    all_structures, classical_sat, symmetric_irreflexive_structures, ClassicalSatError,
};
pub use frames::{
    enumerate_frames, frame_from_mask, frame_properties, max_out_degree, FrameClass,
    FrameProperty, PropertyReport,
};
pub use models::{domain_maps, for_each_model, for_each_model_over, DomainMap, EqFilter, ModelSpace};
pub use separation::{candidate_formulas, eq_separation, Separation, SeparationReport, CANDIDATES};
pub use verdict::{
    decide_valid_over_frame, default_domain_bound, sat_bounded, Bounds, Outcome, SearchError,
    SearchOptions, SearchParams, Verdict, Witness,
};
