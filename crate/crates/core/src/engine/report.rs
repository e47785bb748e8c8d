//! The full analysis pipeline and its name-resolved result.

use rayon::prelude::*;

use super::check::Mode;
use super::index::{CapabilityIndex, PairKind};
use super::pairs::{PairQuery, Strategy};
use super::verdict::{ConflictVerdict, Witness, WitnessPolicy};
use crate::error::Result;
use crate::ids::ConstraintId;
use crate::policy::Policy;

/// Above this many pairs the listing is omitted unless explicitly requested.
pub const PAIR_LISTING_LIMIT: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairSelection {
    None,
    #[default]
    Roles,
    Permissions,
    Both,
}

impl PairSelection {
    fn includes(self, kind: PairKind) -> bool {
        matches!(
            (self, kind),
            (PairSelection::Both, _)
                | (PairSelection::Roles, PairKind::Roles)
                | (PairSelection::Permissions, PairKind::Permissions)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SetKind {
    Permissions,
    Roles,
    Users,
}

/// An ad-hoc set to check alongside the scans, by entity names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetQuery {
    pub kind: SetKind,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisSettings {
    pub mode: Mode,
    pub pairs: PairSelection,
    pub discard_illegal: bool,
    /// List every pair even above [`PAIR_LISTING_LIMIT`].
    pub list_pairs: bool,
    pub set_checks: Vec<SetQuery>,
    pub strategy: Strategy,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        Self {
            mode: Mode::default(),
            pairs: PairSelection::Roles,
            discard_illegal: true,
            list_pairs: false,
            set_checks: Vec::new(),
            strategy: Strategy::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FindingKind {
    IllegalPermission,
    IllegalRole,
    IllegalUser,
    RolePair,
    PermissionPair,
    PermissionSet,
    RoleSet,
    UserSet,
}

impl FindingKind {
    pub fn label(self) -> &'static str {
        match self {
            FindingKind::IllegalPermission => "illegal_permission",
            FindingKind::IllegalRole => "illegal_role",
            FindingKind::IllegalUser => "illegal_user",
            FindingKind::RolePair => "role_pair",
            FindingKind::PermissionPair => "permission_pair",
            FindingKind::PermissionSet => "permission_set",
            FindingKind::RoleSet => "role_set",
            FindingKind::UserSet => "user_set",
        }
    }
}

/// One conflicting entity, pair or set, with the witness that shows it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub kind: FindingKind,
    pub entities: Vec<String>,
    pub constraint: ConstraintId,
    pub activities: Vec<String>,
    /// Empty outside domain mode.
    pub domains: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSection {
    pub kind: PairKind,
    pub count: u64,
    /// `None` when the listing was suppressed for size.
    pub listed: Option<Vec<Finding>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCheckResult {
    pub query: SetQuery,
    pub conflicting: bool,
    pub finding: Option<Finding>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModelSummary {
    pub users: usize,
    pub roles: usize,
    pub permissions: usize,
    pub activities: usize,
    pub groupings: usize,
    pub domains: usize,
    pub constraints: usize,
    pub sessions: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub settings: AnalysisSettings,
    pub summary: ModelSummary,
    pub illegal_permissions: Vec<Finding>,
    pub illegal_roles: Vec<Finding>,
    pub illegal_users: Vec<Finding>,
    pub pair_sections: Vec<PairSection>,
    pub set_checks: Vec<SetCheckResult>,
}

impl AnalysisReport {
    pub fn has_findings(&self) -> bool {
        !self.illegal_permissions.is_empty()
            || !self.illegal_roles.is_empty()
            || !self.illegal_users.is_empty()
            || self.pair_sections.iter().any(|s| s.count > 0)
            || self.set_checks.iter().any(|s| s.conflicting)
    }

    pub fn pair_section(&self, kind: PairKind) -> Option<&PairSection> {
        self.pair_sections.iter().find(|s| s.kind == kind)
    }
}

impl Policy {
    /// Illegal entities first, then conflicting pairs, then requested sets.
    pub fn analyze(&self, settings: &AnalysisSettings) -> Result<AnalysisReport> {
        let mode = settings.mode;
        let rbac = self.rbac();

        let resolved: Vec<Vec<crate::ids::PermId>> = settings
            .set_checks
            .iter()
            .map(|q| self.set_permissions(q, mode.effective))
            .collect::<Result<_>>()?;

        let illegal_permissions = self
            .illegal_permissions(mode.domains)
            .into_par_iter()
            .map(|p| {
                let v = self.check_perm_set(&[p], mode.domains);
                self.finding(FindingKind::IllegalPermission, vec![rbac.permission_name(p).into()], &v)
            })
            .collect();
        let illegal_roles = self
            .illegal_roles(mode)
            .into_par_iter()
            .map(|r| {
                let v = self.check_role_set(&[r], mode);
                self.finding(FindingKind::IllegalRole, vec![rbac.role_name(r).into()], &v)
            })
            .collect();
        let illegal_users = self
            .conflicting_users(mode)
            .into_par_iter()
            .map(|u| {
                let v = self.check_user_set(&[u], mode);
                self.finding(FindingKind::IllegalUser, vec![rbac.user_name(u).into()], &v)
            })
            .collect();

        let mut pair_sections = Vec::new();
        for kind in [PairKind::Roles, PairKind::Permissions] {
            if settings.pairs.includes(kind) {
                pair_sections.push(self.pair_section(kind, settings));
            }
        }

        let set_checks = settings
            .set_checks
            .iter()
            .zip(resolved)
            .map(|(q, perms)| {
                let v = self.check_perm_set(&perms, mode.domains);
                let kind = match q.kind {
                    SetKind::Permissions => FindingKind::PermissionSet,
                    SetKind::Roles => FindingKind::RoleSet,
                    SetKind::Users => FindingKind::UserSet,
                };
                let mut members = q.members.clone();
                members.sort();
                members.dedup();
                SetCheckResult {
                    query: q.clone(),
                    conflicting: v.conflicting,
                    finding: v.conflicting.then(|| self.finding(kind, members, &v)),
                }
            })
            .collect();

        Ok(AnalysisReport {
            settings: settings.clone(),
            summary: self.summary(),
            illegal_permissions,
            illegal_roles,
            illegal_users,
            pair_sections,
            set_checks,
        })
    }

    pub fn summary(&self) -> ModelSummary {
        let rbac = self.rbac();
        let act = self.activities();
        let tree = act.tree();
        ModelSummary {
            users: rbac.user_count(),
            roles: rbac.role_count(),
            permissions: rbac.permission_count(),
            activities: tree.len() - usize::from(tree.has_synthetic_root()),
            groupings: act.grouping_count(),
            domains: act.domains().len(),
            constraints: act.constraints().len(),
            sessions: rbac.session_count(),
        }
    }

    fn set_permissions(&self, q: &SetQuery, effective: bool) -> Result<Vec<crate::ids::PermId>> {
        let rbac = self.rbac();
        Ok(match q.kind {
            SetKind::Permissions => {
                let mut perms = q
                    .members
                    .iter()
                    .map(|m| rbac.permission_id(m))
                    .collect::<Result<Vec<_>>>()?;
                perms.sort_unstable();
                perms.dedup();
                perms
            }
            SetKind::Roles => {
                let roles = q.members.iter().map(|m| rbac.role_id(m)).collect::<Result<Vec<_>>>()?;
                rbac.union_permissions(roles, effective)
            }
            SetKind::Users => {
                let users = q.members.iter().map(|m| rbac.user_id(m)).collect::<Result<Vec<_>>>()?;
                self.users_permissions(&users, effective)
            }
        })
    }

    fn pair_section(&self, kind: PairKind, settings: &AnalysisSettings) -> PairSection {
        let index = match kind {
            PairKind::Roles => CapabilityIndex::for_roles(self, settings.mode.effective),
            PairKind::Permissions => CapabilityIndex::for_permissions(self),
        };
        let query = PairQuery {
            kind,
            mode: settings.mode,
            discard_illegal: settings.discard_illegal,
            collect: true,
            strategy: settings.strategy,
        };
        let found = self.enumerate_with_index(&index, &query);
        let listed = (settings.list_pairs || found.count <= PAIR_LISTING_LIMIT).then(|| {
            let finding_kind = match kind {
                PairKind::Roles => FindingKind::RolePair,
                PairKind::Permissions => FindingKind::PermissionPair,
            };
            found
                .pairs
                .unwrap_or_default()
                .into_par_iter()
                .map(|(x, y)| {
                    let covered = index.pair_covered(self, x as usize, y as usize);
                    let v = self.evaluate(&covered, settings.mode.domains, WitnessPolicy::First);
                    let names = vec![self.entity_name(kind, x), self.entity_name(kind, y)];
                    self.finding(finding_kind, names, &v)
                })
                .collect()
        });
        PairSection {
            kind,
            count: found.count,
            listed,
        }
    }

    fn entity_name(&self, kind: PairKind, i: u32) -> String {
        let rbac = self.rbac();
        match kind {
            PairKind::Roles => rbac.role_name((i as usize).into()).to_string(),
            PairKind::Permissions => rbac.permission_name((i as usize).into()).to_string(),
        }
    }

    fn finding(&self, kind: FindingKind, entities: Vec<String>, verdict: &ConflictVerdict) -> Finding {
        let w: &Witness = verdict
            .first()
            .expect("a conflicting verdict carries a witness");
        let act = self.activities();
        Finding {
            kind,
            entities,
            constraint: w.constraint,
            activities: w
                .activity_subset
                .iter()
                .map(|&a| act.activity_name(a).to_string())
                .collect(),
            domains: w
                .domain_witness
                .iter()
                .flatten()
                .map(|&d| act.domains().name(d).to_string())
                .collect(),
        }
    }
}
