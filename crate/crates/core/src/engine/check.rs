//! Set checks for permissions, roles, users and sessions, and the illegal
//! entity scans built on them.

use rayon::prelude::*;

use super::coverage::{normalize, Scratch};
use super::verdict::{ConflictVerdict, WitnessPolicy};
use crate::error::Result;
use crate::ids::{PermId, RoleId, SessionId, UserId};
use crate::policy::Policy;

/// Analysis settings shared by the role, user and session checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mode {
    /// Use inherited permissions (authperms) rather than direct assignments.
    pub effective: bool,
    /// Require conflicting groupings to share an SoD domain.
    pub domains: bool,
}

impl Default for Mode {
    fn default() -> Self {
        Self {
            effective: true,
            domains: false,
        }
    }
}

impl Mode {
    pub fn new(effective: bool, domains: bool) -> Self {
        Self { effective, domains }
    }
}

impl Policy {
    pub fn check_perm_set(&self, perms: &[PermId], domain_mode: bool) -> ConflictVerdict {
        self.check_perm_set_with(perms, domain_mode, WitnessPolicy::First)
    }

    pub fn check_perm_set_with(
        &self,
        perms: &[PermId],
        domain_mode: bool,
        policy: WitnessPolicy,
    ) -> ConflictVerdict {
        let perms = normalize(perms);
        let covered = self.index().covered_groupings(&perms);
        self.evaluate(&covered, domain_mode, policy)
    }

    /// Check over the union of the roles' permissions.
    pub fn check_role_set(&self, roles: &[RoleId], mode: Mode) -> ConflictVerdict {
        let perms = self
            .rbac()
            .union_permissions(roles.iter().copied(), mode.effective);
        self.check_perm_set(&perms, mode.domains)
    }

    /// Check over the union of the users' permissions.
    pub fn check_user_set(&self, users: &[UserId], mode: Mode) -> ConflictVerdict {
        let perms = self.users_permissions(users, mode.effective);
        self.check_perm_set(&perms, mode.domains)
    }

    /// Dynamic check: only the roles active in the session count.
    pub fn check_session(&self, session: SessionId, mode: Mode) -> Result<ConflictVerdict> {
        let perms = self.rbac().session_permissions(session, mode.effective)?;
        Ok(self.check_perm_set(&perms, mode.domains))
    }

    pub(crate) fn users_permissions(&self, users: &[UserId], effective: bool) -> Vec<PermId> {
        let rbac = self.rbac();
        rbac.union_permissions(
            users.iter().flat_map(|&u| rbac.user_roles(u).iter().copied()),
            effective,
        )
    }

    /// Permissions that satisfy a constraint on their own.
    pub fn illegal_permissions(&self, domain_mode: bool) -> Vec<PermId> {
        self.rbac()
            .permissions()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map_init(Scratch::default, |scratch, p| {
                let cov = self.index().cover(&[p], scratch);
                self.covers_conflict(&cov.covered, domain_mode).then_some(p)
            })
            .flatten()
            .collect()
    }

    /// Roles whose permissions alone satisfy a constraint.
    pub fn illegal_roles(&self, mode: Mode) -> Vec<RoleId> {
        self.rbac()
            .roles()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map_init(Scratch::default, |scratch, r| {
                let perms = self.rbac().role_permissions(r, mode.effective);
                let cov = self.index().cover(perms, scratch);
                self.covers_conflict(&cov.covered, mode.domains).then_some(r)
            })
            .flatten()
            .collect()
    }

    /// Users whose permissions alone satisfy a constraint (illegal users).
    pub fn conflicting_users(&self, mode: Mode) -> Vec<UserId> {
        self.rbac()
            .users()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map_init(Scratch::default, |scratch, u| {
                let perms = self.rbac().user_permissions(u, mode.effective);
                let cov = self.index().cover(&perms, scratch);
                self.covers_conflict(&cov.covered, mode.domains).then_some(u)
            })
            .flatten()
            .collect()
    }
}
