//! Enumeration of conflicting role and permission pairs.
//!
//! Illegal entities are found first. For a pair of legal entities `{x, y}` to
//! conflict on `⟨A, n⟩`, `y` must supply the activities `x` cannot perform
//! alone: each missing activity `a` has to be performed by `y`, or, when `x`
//! partly supports `a`, at least partly supported by `y` too. Candidates are
//! drawn from per-activity inverted lists under that rule and then verified
//! exactly. In domain mode the same rule is applied within each domain, with
//! lists keyed by domain and activity. Dense instances fall back to a scan
//! over all pairs with the same verification.

use rayon::prelude::*;

use super::check::Mode;
use super::index::{Capability, CapabilityIndex, PairKind};
use crate::ids::{ActivityId, ActivitySet, ConstraintId, DomainId};
use crate::policy::Policy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Inverted lists unless the estimated candidate work exceeds a scan.
    #[default]
    Auto,
    Candidates,
    Scan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairQuery {
    pub kind: PairKind,
    pub mode: Mode,
    /// Skip pairs that contain an illegal entity.
    pub discard_illegal: bool,
    /// Materialize the pair list; otherwise only count.
    pub collect: bool,
    pub strategy: Strategy,
}

impl PairQuery {
    pub fn new(kind: PairKind, mode: Mode) -> Self {
        Self {
            kind,
            mode,
            discard_illegal: true,
            collect: true,
            strategy: Strategy::Auto,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairEnumeration {
    pub kind: PairKind,
    /// Entity indices (role or permission ids) that are illegal on their own.
    pub illegal: Vec<u32>,
    pub count: u64,
    /// Pairs `(x, y)` with `x < y`, sorted; `None` in count-only mode.
    pub pairs: Option<Vec<(u32, u32)>>,
}

/// Inverted lists of legal entities per slot. A slot is an activity, or a
/// (domain, activity) pair in domain mode.
struct Lists {
    width: usize,
    cover: Vec<Vec<u32>>,
    reach: Vec<Vec<u32>>,
}

impl Lists {
    fn slot(&self, domain: Option<DomainId>, a: ActivityId) -> usize {
        domain.map_or(0, |d| d.index() * self.width) + a.index()
    }
}

/// What `x` performs and partly supports, overall or within one domain.
struct View<'a> {
    domain: Option<DomainId>,
    cover: &'a ActivitySet,
    reach: &'a ActivitySet,
}

fn views(e: &Capability, domain_mode: bool) -> Vec<View<'_>> {
    if domain_mode {
        e.by_domain
            .iter()
            .map(|v| View {
                domain: Some(v.domain),
                cover: &v.cover,
                reach: &v.reach,
            })
            .collect()
    } else {
        vec![View {
            domain: None,
            cover: &e.cover,
            reach: &e.reach,
        }]
    }
}

#[derive(Default)]
struct Scratch {
    epoch: u32,
    hit_stamp: Vec<u32>,
    hits: Vec<u32>,
    cand_stamp: Vec<u32>,
    constraint_stamp: Vec<u32>,
    relevant: Vec<ConstraintId>,
    candidates: Vec<u32>,
}

impl Scratch {
    fn new(entities: usize, constraints: usize) -> Self {
        Self {
            epoch: 0,
            hit_stamp: vec![0; entities],
            hits: vec![0; entities],
            cand_stamp: vec![0; entities],
            constraint_stamp: vec![0; constraints],
            relevant: Vec::new(),
            candidates: Vec::new(),
        }
    }

    fn next(&mut self) -> u32 {
        self.epoch += 1;
        self.epoch
    }

    /// Constraints with an activity in `reach`, sorted, into `relevant`.
    fn collect_relevant(&mut self, policy: &Policy, reach: &ActivitySet) {
        let stamp = self.next();
        self.relevant.clear();
        for a in reach.iter() {
            for &c in policy.index().constraints_with(a) {
                if self.constraint_stamp[c.index()] != stamp {
                    self.constraint_stamp[c.index()] = stamp;
                    self.relevant.push(c);
                }
            }
        }
        self.relevant.sort_unstable();
    }
}

impl Policy {
    pub fn enumerate_conflicting_pairs(&self, query: &PairQuery) -> PairEnumeration {
        let index = match query.kind {
            PairKind::Roles => CapabilityIndex::for_roles(self, query.mode.effective),
            PairKind::Permissions => CapabilityIndex::for_permissions(self),
        };
        self.enumerate_with_index(&index, query)
    }

    pub fn enumerate_with_index(&self, index: &CapabilityIndex, query: &PairQuery) -> PairEnumeration {
        let n = index.len();
        let domain_mode = query.mode.domains;
        let act = self.activities();
        let constraints = act.constraints();

        let illegal: Vec<bool> = (0..n)
            .into_par_iter()
            .map(|i| index.is_illegal(self, i, domain_mode))
            .collect();
        let illegal_ids: Vec<u32> = (0..n).filter(|&i| illegal[i]).map(|i| i as u32).collect();

        let width = act.tree().len();
        let slots = if domain_mode { width * act.domains().len() } else { width };
        let mut lists = Lists {
            width,
            cover: vec![Vec::new(); slots],
            reach: vec![Vec::new(); slots],
        };
        let mut in_constraint = act.tree().empty_mask();
        for c in constraints {
            in_constraint.union_with(&c.mask);
        }
        for (i, _) in illegal.iter().enumerate().filter(|(_, &bad)| !bad) {
            for v in views(index.get(i), domain_mode) {
                for a in v.reach.iter().filter(|&a| in_constraint.contains(a)) {
                    let slot = lists.slot(v.domain, a);
                    lists.reach[slot].push(i as u32);
                    if v.cover.contains(a) {
                        lists.cover[slot].push(i as u32);
                    }
                }
            }
        }

        let strategy = match query.strategy {
            Strategy::Auto => {
                let domains: Vec<Option<DomainId>> = if domain_mode {
                    act.domains().domains().map(Some).collect()
                } else {
                    vec![None]
                };
                let mut est = 0f64;
                for c in constraints {
                    for &d in &domains {
                        let s: usize = c
                            .activities
                            .iter()
                            .map(|&a| lists.reach[lists.slot(d, a)].len())
                            .sum();
                        est += (s as f64) * (s as f64);
                    }
                }
                if est > 2.0 * (n as f64) * (n as f64) {
                    Strategy::Scan
                } else {
                    Strategy::Candidates
                }
            }
            s => s,
        };

        // illegal_after[x]: illegal entities with index >= x
        let mut illegal_after = vec![0u32; n + 1];
        for i in (0..n).rev() {
            illegal_after[i] = illegal_after[i + 1] + u32::from(illegal[i]);
        }

        let per_entity: Vec<(u64, Option<Vec<u32>>)> = (0..n)
            .into_par_iter()
            .map_init(
                || Scratch::new(n, constraints.len()),
                |scratch, x| {
                    if illegal[x] {
                        if query.discard_illegal {
                            return (0, query.collect.then(Vec::new));
                        }
                        let count = (n - x - 1) as u64;
                        return (count, query.collect.then(|| ((x + 1) as u32..n as u32).collect()));
                    }
                    let scan = strategy == Strategy::Scan;
                    let partners =
                        self.legal_partners(index, &lists, &illegal, scan, domain_mode, x, scratch);
                    if query.discard_illegal {
                        let count = partners.len() as u64;
                        return (count, query.collect.then_some(partners));
                    }
                    let count = partners.len() as u64 + u64::from(illegal_after[x + 1]);
                    let listing = query.collect.then(|| {
                        let mut all = partners;
                        all.extend(((x + 1)..n).filter(|&y| illegal[y]).map(|y| y as u32));
                        all.sort_unstable();
                        all
                    });
                    (count, listing)
                },
            )
            .collect();

        let count = per_entity.iter().map(|(c, _)| c).sum();
        let pairs = query.collect.then(|| {
            per_entity
                .into_iter()
                .enumerate()
                .flat_map(|(x, (_, ys))| ys.unwrap_or_default().into_iter().map(move |y| (x as u32, y)))
                .collect()
        });
        PairEnumeration {
            kind: index.kind(),
            illegal: illegal_ids,
            count,
            pairs,
        }
    }

    /// Legal `y > x` forming a conflicting pair with legal `x`, sorted.
    #[allow(clippy::too_many_arguments)]
    fn legal_partners(
        &self,
        index: &CapabilityIndex,
        lists: &Lists,
        illegal: &[bool],
        scan: bool,
        domain_mode: bool,
        x: usize,
        s: &mut Scratch,
    ) -> Vec<u32> {
        let act = self.activities();
        let ex = index.get(x);

        s.candidates.clear();
        if scan {
            s.candidates
                .extend(((x + 1)..index.len()).filter(|&y| !illegal[y]).map(|y| y as u32));
        } else {
            let cand = s.next();
            for v in views(ex, domain_mode) {
                s.collect_relevant(self, v.reach);
                for ci in 0..s.relevant.len() {
                    let c = act.constraint(s.relevant[ci]);
                    let have = v.cover.intersection_count(&c.mask);
                    // a legal x never performs n activities of A in one view
                    debug_assert!(have < c.threshold);
                    let need = (c.threshold - have) as u32;
                    let round = s.next();
                    for &a in &c.activities {
                        if v.cover.contains(a) {
                            continue;
                        }
                        let slot = lists.slot(v.domain, a);
                        let list = if v.reach.contains(a) {
                            &lists.reach[slot]
                        } else {
                            &lists.cover[slot]
                        };
                        let start = list.partition_point(|&y| y as usize <= x);
                        for &y in &list[start..] {
                            let yi = y as usize;
                            if s.hit_stamp[yi] != round {
                                s.hit_stamp[yi] = round;
                                s.hits[yi] = 0;
                            }
                            s.hits[yi] += 1;
                            if s.hits[yi] == need && s.cand_stamp[yi] != cand {
                                s.cand_stamp[yi] = cand;
                                s.candidates.push(y);
                            }
                        }
                    }
                }
            }
            s.candidates.sort_unstable();
        }

        s.collect_relevant(self, &ex.reach);
        let mut partners = Vec::new();
        for &y in &s.candidates {
            let ey = index.get(y as usize);
            let plausible = s.relevant.iter().any(|&c| {
                let c = act.constraint(c);
                ex.reach.union_count_within(&ey.reach, &c.mask) >= c.threshold
            });
            if !plausible {
                continue;
            }
            let mask = index.pair_cover(self, x, y as usize);
            let conflict = s.relevant.iter().any(|&c| {
                let c = act.constraint(c);
                mask.intersection_count(&c.mask) >= c.threshold
            });
            if conflict && (!domain_mode || index.pair_conflicts(self, x, y as usize, true)) {
                partners.push(y);
            }
        }
        partners
    }
}
