//! The worked example policy, bundled as text.

use crate::decl::ModelDocument;
use crate::io::parse_model;
use crate::policy::Policy;

/// Nine roles, nine permissions, ten activities, eight groupings, two
/// domains and the constraint `sod 3 a2,a4,a10`.
pub const FIG1_TEXT: &str = include_str!("../../fixtures/fig1.sod");

/// One user holding r2, r5 and r8, with three sessions over those roles.
/// Meant to be appended to [`FIG1_TEXT`].
pub const FIG1_SESSIONS_TEXT: &str = include_str!("../../fixtures/fig1_sessions.sod");

pub fn fig1_document() -> ModelDocument {
    parse_model(FIG1_TEXT).expect("bundled fixture parses")
}

pub fn fig1_sessions_document() -> ModelDocument {
    parse_model(&fig1_with(FIG1_SESSIONS_TEXT)).expect("bundled fixture parses")
}

/// The worked example followed by `extra` statements.
pub fn fig1_with(extra: &str) -> String {
    format!("{FIG1_TEXT}\n{extra}\n")
}

pub fn fig1_policy() -> Policy {
    Policy::from_document(&fig1_document()).expect("bundled fixture is valid")
}

/// The worked example extended with `extra`, which must keep it valid.
pub fn fig1_policy_with(extra: &str) -> Policy {
    crate::io::load_policy(&fig1_with(extra)).expect("extended fixture is valid")
}
