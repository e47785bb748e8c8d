//! Precomputed per-entity capabilities for pair enumeration.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::coverage::{activity_mask, Scratch};
use crate::ids::{ActivityId, ActivitySet, DomainId, GroupingId, PermId};
use crate::policy::Policy;

/// Entity kind enumerated in pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairKind {
    Roles,
    Permissions,
}

/// What one entity can do on its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Capability {
    pub perms: Vec<PermId>,
    /// Groupings fully held.
    pub covered: Vec<GroupingId>,
    /// Groupings partly held; another entity may complete them.
    pub partial: Vec<GroupingId>,
    /// Activities performed.
    pub cover: ActivitySet,
    /// Activities performed or partly supported (`cover` plus the ancestors
    /// of every partly held grouping).
    pub reach: ActivitySet,
    /// `cover` and `reach` restricted to groupings operating in one domain,
    /// per domain, sorted by domain.
    pub by_domain: Vec<DomainView>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainView {
    pub domain: DomainId,
    pub cover: ActivitySet,
    pub reach: ActivitySet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapabilityIndex {
    kind: PairKind,
    effective: bool,
    entries: Vec<Capability>,
}

fn domain_views(policy: &Policy, covered: &[GroupingId], partial: &[GroupingId]) -> Vec<DomainView> {
    let act = policy.activities();
    let tree = act.tree();
    let mut views: BTreeMap<DomainId, DomainView> = BTreeMap::new();
    for (groupings, full) in [(covered, true), (partial, false)] {
        for &g in groupings {
            let anc = tree.ancestor_mask(act.grouping(g).activity);
            for &d in policy.index().common_domains(g) {
                let view = views.entry(d).or_insert_with(|| DomainView {
                    domain: d,
                    cover: tree.empty_mask(),
                    reach: tree.empty_mask(),
                });
                if full {
                    view.cover.union_with(anc);
                }
                view.reach.union_with(anc);
            }
        }
    }
    views.into_values().collect()
}

impl CapabilityIndex {
    fn build(policy: &Policy, kind: PairKind, effective: bool, perm_sets: Vec<Vec<PermId>>) -> Self {
        let act = policy.activities();
        let entries = perm_sets
            .into_par_iter()
            .map_init(Scratch::default, |scratch, perms| {
                let cov = policy.index().cover(&perms, scratch);
                let cover = activity_mask(act, &cov.covered);
                let mut reach = cover.clone();
                reach.union_with(&activity_mask(act, &cov.partial));
                let by_domain = domain_views(policy, &cov.covered, &cov.partial);
                Capability {
                    perms,
                    covered: cov.covered,
                    partial: cov.partial,
                    cover,
                    reach,
                    by_domain,
                }
            })
            .collect();
        Self {
            kind,
            effective,
            entries,
        }
    }

    pub fn for_roles(policy: &Policy, effective: bool) -> Self {
        let rbac = policy.rbac();
        let sets = rbac
            .roles()
            .map(|r| rbac.role_permissions(r, effective).to_vec())
            .collect();
        Self::build(policy, PairKind::Roles, effective, sets)
    }

    pub fn for_permissions(policy: &Policy) -> Self {
        let sets = policy.rbac().permissions().map(|p| vec![p]).collect();
        Self::build(policy, PairKind::Permissions, false, sets)
    }

    pub fn kind(&self) -> PairKind {
        self.kind
    }

    pub fn effective(&self) -> bool {
        self.effective
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> &Capability {
        &self.entries[i]
    }

    /// `(activity, grouping)` pairs performable by entity `i`.
    pub fn coverage(&self, policy: &Policy, i: usize) -> BTreeSet<(ActivityId, GroupingId)> {
        let act = policy.activities();
        self.entries[i]
            .covered
            .iter()
            .flat_map(|&g| {
                act.tree()
                    .ancestors(act.grouping(g).activity)
                    .iter()
                    .map(move |&a| (a, g))
            })
            .collect()
    }

    pub fn is_illegal(&self, policy: &Policy, i: usize, domain_mode: bool) -> bool {
        let e = &self.entries[i];
        if domain_mode {
            policy.covers_conflict(&e.covered, true)
        } else {
            policy
                .activities()
                .constraints()
                .iter()
                .any(|c| e.cover.intersection_count(&c.mask) >= c.threshold)
        }
    }

    /// Groupings held by neither entity alone but by the two together.
    pub fn split_groupings(&self, policy: &Policy, x: usize, y: usize) -> Vec<GroupingId> {
        let (ex, ey) = (&self.entries[x], &self.entries[y]);
        let act = policy.activities();
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < ex.partial.len() && j < ey.partial.len() {
            let (gx, gy) = (ex.partial[i], ey.partial[j]);
            if gx < gy {
                i += 1;
            } else if gy < gx {
                j += 1;
            } else {
                let held = act.grouping(gx).perms.iter().all(|p| {
                    ex.perms.binary_search(p).is_ok() || ey.perms.binary_search(p).is_ok()
                });
                if held {
                    out.push(gx);
                }
                i += 1;
                j += 1;
            }
        }
        out
    }

    /// Activities performed by the two entities together.
    pub fn pair_cover(&self, policy: &Policy, x: usize, y: usize) -> ActivitySet {
        let mut mask = self.entries[x].cover.clone();
        mask.union_with(&self.entries[y].cover);
        let split = self.split_groupings(policy, x, y);
        if !split.is_empty() {
            mask.union_with(&activity_mask(policy.activities(), &split));
        }
        mask
    }

    /// Groupings held by the two entities together, sorted.
    pub fn pair_covered(&self, policy: &Policy, x: usize, y: usize) -> Vec<GroupingId> {
        let mut all: Vec<GroupingId> = self.entries[x]
            .covered
            .iter()
            .chain(&self.entries[y].covered)
            .copied()
            .chain(self.split_groupings(policy, x, y))
            .collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    /// Exact two-element set check computed from the index.
    pub fn pair_conflicts(&self, policy: &Policy, x: usize, y: usize, domain_mode: bool) -> bool {
        if domain_mode {
            policy.covers_conflict(&self.pair_covered(policy, x, y), true)
        } else {
            let mask = self.pair_cover(policy, x, y);
            policy
                .activities()
                .constraints()
                .iter()
                .any(|c| mask.intersection_count(&c.mask) >= c.threshold)
        }
    }
}

impl Policy {
    /// Capability index over roles.
    pub fn build_capability_index(&self, effective: bool) -> CapabilityIndex {
        CapabilityIndex::for_roles(self, effective)
    }
}
