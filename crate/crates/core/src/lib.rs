//! Activity-based separation of duty analysis for RBAC policies.
//!
//! A policy couples an RBAC model (users, roles, permissions, a role
//! hierarchy and sessions) with a tree of business activities. Groupings say
//! which permission sets perform an activity, and a constraint `⟨A, n⟩`
//! forbids any single entity from being able to perform `n` activities of
//! `A`. Optional SoD domains restrict conflicts to permissions that operate
//! on a shared set of objects.
//!
//! ```
//! use activity_sod::{io::load_policy, Mode};
//!
//! let policy = load_policy(activity_sod::testkit::fixtures::FIG1_TEXT).unwrap();
//! let roles: Vec<_> = ["r2", "r5", "r8"]
//!     .iter()
//!     .map(|r| policy.rbac().role_id(r).unwrap())
//!     .collect();
//! assert!(policy.check_role_set(&roles, Mode::default()).conflicting);
//! ```

pub mod activity;
pub mod cli;
pub mod decl;
pub mod engine;
pub mod error;
pub mod ids;
pub mod io;
pub mod policy;
pub mod rbac;
pub mod testkit;

pub use activity::{ActivityModel, ActivityTree};
pub use decl::{ModelDocument, Statement};
pub use engine::{
    AnalysisReport, AnalysisSettings, ConflictVerdict, Mode, Mutation, PairKind, PairQuery,
    Witness, WitnessPolicy,
};
pub use error::{Diagnostic, Diagnostics, Error, Span};
pub use policy::Policy;
pub use rbac::RbacModel;
