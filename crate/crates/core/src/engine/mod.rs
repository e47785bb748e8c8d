//! Conflict checks, illegal-entity scans, pair enumeration and what-if queries.

pub mod check;
pub mod coverage;
pub mod index;
pub mod pairs;
pub mod report;
pub mod verdict;
pub mod whatif;

pub use check::Mode;
pub use index::{Capability, CapabilityIndex, PairKind};
pub use pairs::{PairEnumeration, PairQuery, Strategy};
pub use report::{
    AnalysisReport, AnalysisSettings, Finding, FindingKind, PairSection, PairSelection, SetKind,
    SetQuery, PAIR_LISTING_LIMIT,
};
pub use verdict::{ConflictVerdict, Witness, WitnessPolicy};
pub use whatif::{Mutation, WhatIfOutcome};
