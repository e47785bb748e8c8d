//! Conflict verdicts and the witnesses that justify them.
//!
//! A permission set conflicts on `⟨A, n⟩` when at least `n` activities of `A`
//! are performable with it. In domain mode the groupings used must also share
//! at least one SoD domain; the witness then records the full set of domains
//! they share.

use std::collections::BTreeMap;

use crate::ids::{ActivityId, ConstraintId, DomainId, GroupingId};
use crate::policy::Policy;

/// How many witnesses to produce for a conflicting set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WitnessPolicy {
    /// One witness per constraint (and, in domain mode, per distinct shared
    /// domain set): every performable activity of the constraint, each with
    /// its least grouping.
    #[default]
    First,
    /// Every activity subset reaching the threshold combined with every
    /// grouping choice, stopping after `limit` witnesses.
    Exhaustive { limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Witness {
    pub constraint: ConstraintId,
    pub activity_subset: Vec<ActivityId>,
    pub chosen_groupings: BTreeMap<ActivityId, GroupingId>,
    /// Domains shared by every chosen grouping; `None` outside domain mode.
    pub domain_witness: Option<Vec<DomainId>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConflictVerdict {
    pub conflicting: bool,
    pub witnesses: Vec<Witness>,
    /// Set when an exhaustive listing hit its limit.
    pub truncated: bool,
}

impl ConflictVerdict {
    pub fn clear() -> Self {
        Self::default()
    }

    pub fn from_witnesses(witnesses: Vec<Witness>, truncated: bool) -> Self {
        Self {
            conflicting: !witnesses.is_empty(),
            witnesses,
            truncated,
        }
    }

    pub fn first(&self) -> Option<&Witness> {
        self.witnesses.first()
    }
}

impl Policy {
    /// Whether the covered groupings satisfy any constraint. This is the
    /// allocation-light path used by bulk scans; it agrees with
    /// [`Policy::evaluate`] on `conflicting`.
    pub fn covers_conflict(&self, covered: &[GroupingId], domain_mode: bool) -> bool {
        let act = self.activities();
        if covered.is_empty() || act.constraints().is_empty() {
            return false;
        }
        let tree = act.tree();
        if !domain_mode {
            let mask = super::coverage::activity_mask(act, covered);
            return act
                .constraints()
                .iter()
                .any(|c| mask.intersection_count(&c.mask) >= c.threshold);
        }
        let mut masks: BTreeMap<DomainId, crate::ids::ActivitySet> = BTreeMap::new();
        for &g in covered {
            let anc = tree.ancestor_mask(act.grouping(g).activity);
            for &d in self.index().common_domains(g) {
                masks
                    .entry(d)
                    .or_insert_with(|| tree.empty_mask())
                    .union_with(anc);
            }
        }
        masks.values().any(|mask| {
            act.constraints()
                .iter()
                .any(|c| mask.intersection_count(&c.mask) >= c.threshold)
        })
    }

    /// Full verdict for a set of covered groupings (sorted).
    pub fn evaluate(
        &self,
        covered: &[GroupingId],
        domain_mode: bool,
        policy: WitnessPolicy,
    ) -> ConflictVerdict {
        match policy {
            WitnessPolicy::First => self.first_witnesses(covered, domain_mode),
            WitnessPolicy::Exhaustive { limit } => {
                self.exhaustive_witnesses(covered, domain_mode, limit)
            }
        }
    }

    fn first_witnesses(&self, covered: &[GroupingId], domain_mode: bool) -> ConflictVerdict {
        let act = self.activities();
        let tree = act.tree();
        let mut witnesses = Vec::new();

        // least grouping per performable activity, optionally restricted to
        // groupings operating in one domain
        let best_for = |domain: Option<DomainId>| -> BTreeMap<ActivityId, GroupingId> {
            let mut best = BTreeMap::new();
            for &g in covered {
                if let Some(d) = domain {
                    if self.index().common_domains(g).binary_search(&d).is_err() {
                        continue;
                    }
                }
                for &a in tree.ancestors(act.grouping(g).activity) {
                    best.entry(a).or_insert(g);
                }
            }
            best
        };

        let mut emit = |best: &BTreeMap<ActivityId, GroupingId>, domain_mode: bool| {
            for c in act.constraint_ids() {
                let constraint = act.constraint(c);
                let chosen: BTreeMap<ActivityId, GroupingId> = constraint
                    .activities
                    .iter()
                    .filter_map(|a| best.get(a).map(|&g| (*a, g)))
                    .collect();
                if chosen.len() < constraint.threshold {
                    continue;
                }
                let domain_witness = domain_mode.then(|| self.shared_domains(chosen.values()));
                let w = Witness {
                    constraint: c,
                    activity_subset: chosen.keys().copied().collect(),
                    chosen_groupings: chosen,
                    domain_witness,
                };
                if !witnesses.contains(&w) {
                    witnesses.push(w);
                }
            }
        };

        if domain_mode {
            let mut domains: Vec<DomainId> = covered
                .iter()
                .flat_map(|&g| self.index().common_domains(g).iter().copied())
                .collect();
            domains.sort_unstable();
            domains.dedup();
            for d in domains {
                emit(&best_for(Some(d)), true);
            }
        } else {
            emit(&best_for(None), false);
        }
        witnesses.sort();
        ConflictVerdict::from_witnesses(witnesses, false)
    }

    /// Intersection of the common domains of `groupings`.
    pub(crate) fn shared_domains<'a>(
        &self,
        groupings: impl IntoIterator<Item = &'a GroupingId>,
    ) -> Vec<DomainId> {
        let mut shared: Option<Vec<DomainId>> = None;
        for &g in groupings {
            let ds = self.index().common_domains(g);
            shared = Some(match shared {
                None => ds.to_vec(),
                Some(s) => s.into_iter().filter(|d| ds.binary_search(d).is_ok()).collect(),
            });
        }
        shared.unwrap_or_default()
    }

    fn exhaustive_witnesses(
        &self,
        covered: &[GroupingId],
        domain_mode: bool,
        limit: usize,
    ) -> ConflictVerdict {
        let act = self.activities();
        let tree = act.tree();
        let mut witnesses = Vec::new();
        let mut truncated = false;

        'constraints: for c in act.constraint_ids() {
            let constraint = act.constraint(c);
            // options[i]: covered groupings performing the i-th performable activity
            let mut performable: Vec<(ActivityId, Vec<GroupingId>)> = Vec::new();
            for &a in &constraint.activities {
                let opts: Vec<GroupingId> = covered
                    .iter()
                    .copied()
                    .filter(|&g| tree.ancestor_mask(act.grouping(g).activity).contains(a))
                    .collect();
                if !opts.is_empty() {
                    performable.push((a, opts));
                }
            }
            let k = performable.len();
            if k < constraint.threshold {
                continue;
            }
            if k >= 64 {
                truncated = true;
                continue;
            }
            for subset in 1u64..(1u64 << k) {
                if (subset.count_ones() as usize) < constraint.threshold {
                    continue;
                }
                let members: Vec<&(ActivityId, Vec<GroupingId>)> = (0..k)
                    .filter(|i| subset & (1 << i) != 0)
                    .map(|i| &performable[i])
                    .collect();
                let mut choice = vec![0usize; members.len()];
                loop {
                    let chosen: BTreeMap<ActivityId, GroupingId> = members
                        .iter()
                        .zip(&choice)
                        .map(|((a, opts), &i)| (*a, opts[i]))
                        .collect();
                    let domain_witness = if domain_mode {
                        let shared = self.shared_domains(chosen.values());
                        if shared.is_empty() {
                            None
                        } else {
                            Some(Some(shared))
                        }
                    } else {
                        Some(None)
                    };
                    if let Some(domain_witness) = domain_witness {
                        if witnesses.len() == limit {
                            truncated = true;
                            break 'constraints;
                        }
                        witnesses.push(Witness {
                            constraint: c,
                            activity_subset: chosen.keys().copied().collect(),
                            chosen_groupings: chosen,
                            domain_witness,
                        });
                    }
                    // odometer over grouping choices
                    let mut i = 0;
                    while i < members.len() {
                        choice[i] += 1;
                        if choice[i] < members[i].1.len() {
                            break;
                        }
                        choice[i] = 0;
                        i += 1;
                    }
                    if i == members.len() {
                        break;
                    }
                }
            }
        }
        witnesses.sort();
        ConflictVerdict::from_witnesses(witnesses, truncated)
    }
}
