//! Hypothetical administration changes, evaluated without touching the model.

use super::check::Mode;
use super::verdict::{ConflictVerdict, Witness};
use crate::error::{Error, Result};
use crate::ids::PermId;
use crate::policy::Policy;

/// A single administrative change to evaluate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mutation {
    AssignUserToRole { user: String, role: String },
    ActivateRoleInSession { session: String, role: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WhatIfOutcome {
    pub before: ConflictVerdict,
    pub after: ConflictVerdict,
    /// Witnesses of `after` whose constraint and domain set had no witness
    /// in `before`.
    pub introduced: Vec<Witness>,
}

impl WhatIfOutcome {
    pub fn newly_conflicting(&self) -> bool {
        self.after.conflicting && !self.before.conflicting
    }

    pub fn is_empty(&self) -> bool {
        self.introduced.is_empty()
    }
}

impl Policy {
    /// Verdicts for the affected user or session before and after `mutation`.
    pub fn whatif(&self, mutation: &Mutation, mode: Mode) -> Result<WhatIfOutcome> {
        let rbac = self.rbac();
        let (before, after): (Vec<PermId>, Vec<PermId>) = match mutation {
            Mutation::AssignUserToRole { user, role } => {
                let u = rbac.user_id(user)?;
                let r = rbac.role_id(role)?;
                let held = rbac.user_roles(u);
                let before = rbac.union_permissions(held.iter().copied(), mode.effective);
                let after = rbac.union_permissions(
                    held.iter().copied().chain(std::iter::once(r)),
                    mode.effective,
                );
                (before, after)
            }
            Mutation::ActivateRoleInSession { session, role } => {
                let s = rbac.session_id(session)?;
                let r = rbac.role_id(role)?;
                let current = &rbac.session(s).active_roles;
                let mut roles = current.clone();
                roles.push(r);
                rbac.check_activation(s, rbac.session(s).user, &roles, mode.effective)?;
                let before = rbac.union_permissions(current.iter().copied(), mode.effective);
                let after = rbac.union_permissions(roles, mode.effective);
                (before, after)
            }
        };
        let before = self.check_perm_set(&before, mode.domains);
        let after = self.check_perm_set(&after, mode.domains);
        let seen: Vec<_> = before
            .witnesses
            .iter()
            .map(|w| (w.constraint, &w.domain_witness))
            .collect();
        let introduced = after
            .witnesses
            .iter()
            .filter(|w| !seen.contains(&(w.constraint, &w.domain_witness)))
            .cloned()
            .collect();
        Ok(WhatIfOutcome {
            before,
            after,
            introduced,
        })
    }
}

/// Parses `left:right`, as used by the command-line mutation flags.
pub(crate) fn split_pair(text: &str) -> Result<(String, String)> {
    match text.split_once(':') {
        Some((l, r)) if !l.is_empty() && !r.is_empty() && !r.contains(':') => {
            Ok((l.to_string(), r.to_string()))
        }
        _ => Err(Error::Syntax {
            expected: format!("<id>:<role>, found `{text}`"),
        }),
    }
}
