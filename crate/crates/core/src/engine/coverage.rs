//! Which groupings a permission set fully covers.

use crate::activity::ActivityModel;
use crate::ids::{ActivitySet, ConstraintId, DomainId, GroupingId, PermId};
use crate::rbac::RbacModel;

/// Inverted indexes shared by every check: permission → groupings,
/// grouping → common domains, activity → constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupingIndex {
    perm_groupings: Vec<Vec<GroupingId>>,
    sizes: Vec<u32>,
    common_domains: Vec<Vec<DomainId>>,
    activity_constraints: Vec<Vec<ConstraintId>>,
}

/// Groupings fully contained in a permission set (`covered`) and groupings
/// only partly contained (`partial`). Both sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Coverage {
    pub covered: Vec<GroupingId>,
    pub partial: Vec<GroupingId>,
}

/// Reusable buffers for [`GroupingIndex::cover`].
#[derive(Debug, Clone, Default)]
pub struct Scratch {
    counts: Vec<u32>,
    touched: Vec<GroupingId>,
}

impl GroupingIndex {
    pub fn build(rbac: &RbacModel, activities: &ActivityModel) -> Self {
        let mut perm_groupings = vec![Vec::new(); rbac.permission_count()];
        let mut sizes = Vec::with_capacity(activities.grouping_count());
        let mut common_domains = Vec::with_capacity(activities.grouping_count());
        for g in activities.groupings() {
            let grouping = activities.grouping(g);
            sizes.push(grouping.perms.len() as u32);
            let mut common: Option<Vec<DomainId>> = None;
            for &p in &grouping.perms {
                perm_groupings[p.index()].push(g);
                let ds = activities.perm_domains(p);
                common = Some(match common {
                    None => ds.to_vec(),
                    Some(c) => c.into_iter().filter(|d| ds.binary_search(d).is_ok()).collect(),
                });
            }
            common_domains.push(common.unwrap_or_default());
        }
        let mut activity_constraints = vec![Vec::new(); activities.tree().len()];
        for c in activities.constraint_ids() {
            for &a in &activities.constraint(c).activities {
                activity_constraints[a.index()].push(c);
            }
        }
        Self {
            perm_groupings,
            sizes,
            common_domains,
            activity_constraints,
        }
    }

    pub fn groupings_with(&self, p: PermId) -> &[GroupingId] {
        &self.perm_groupings[p.index()]
    }

    /// Domains shared by every permission of `g`.
    pub fn common_domains(&self, g: GroupingId) -> &[DomainId] {
        &self.common_domains[g.index()]
    }

    /// Constraints that mention `a`.
    pub fn constraints_with(&self, a: crate::ids::ActivityId) -> &[ConstraintId] {
        &self.activity_constraints[a.index()]
    }

    /// Splits the groupings touched by `perms` into fully and partly covered.
    /// `perms` must be sorted and duplicate-free.
    pub fn cover(&self, perms: &[PermId], scratch: &mut Scratch) -> Coverage {
        if scratch.counts.len() < self.sizes.len() {
            scratch.counts.resize(self.sizes.len(), 0);
        }
        scratch.touched.clear();
        for &p in perms {
            for &g in &self.perm_groupings[p.index()] {
                let c = &mut scratch.counts[g.index()];
                if *c == 0 {
                    scratch.touched.push(g);
                }
                *c += 1;
            }
        }
        scratch.touched.sort_unstable();
        let mut out = Coverage::default();
        for &g in &scratch.touched {
            if scratch.counts[g.index()] == self.sizes[g.index()] {
                out.covered.push(g);
            } else {
                out.partial.push(g);
            }
            scratch.counts[g.index()] = 0;
        }
        out
    }

    pub fn covered_groupings(&self, perms: &[PermId]) -> Vec<GroupingId> {
        self.cover(perms, &mut Scratch::default()).covered
    }
}

/// Activities performed through `groupings` (their attachment points and
/// every ancestor).
pub fn activity_mask(activities: &ActivityModel, groupings: &[GroupingId]) -> ActivitySet {
    let tree = activities.tree();
    let mut mask = tree.empty_mask();
    for &g in groupings {
        mask.union_with(tree.ancestor_mask(activities.grouping(g).activity));
    }
    mask
}

/// Sorted, duplicate-free copy of `perms`.
pub fn normalize<T: Ord + Copy>(items: &[T]) -> Vec<T> {
    let mut v = items.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}
