//! Brute-force reference checker.
//!
//! Works on the raw statements, not on the engine's indexes: closures are
//! recomputed by walking edges, and a verdict is found by trying every
//! activity subset, every grouping choice and every candidate domain set.
//! Exponential by design, so inputs are bounded.

use std::collections::{BTreeMap, BTreeSet};

use crate::decl::{ModelDocument, Statement};
use crate::engine::verdict::{ConflictVerdict, Witness};
use crate::error::{Error, Result};
use crate::policy::Policy;

pub const MAX_PERMISSIONS: usize = 16;
pub const MAX_CONSTRAINT_ACTIVITIES: usize = 8;
pub const MAX_DOMAINS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Permissions(Vec<String>),
    Roles(Vec<String>),
    Users(Vec<String>),
    Session(String),
}

/// A witness expressed with names; `constraint` is the 0-based declaration index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OracleWitness {
    pub constraint: usize,
    pub activities: Vec<String>,
    pub groupings: BTreeMap<String, String>,
    pub domains: Option<Vec<String>>,
}

impl OracleWitness {
    /// Translates an engine witness into names for comparison.
    pub fn from_engine(policy: &Policy, w: &Witness) -> Self {
        let act = policy.activities();
        Self {
            constraint: w.constraint.index(),
            activities: w
                .activity_subset
                .iter()
                .map(|&a| act.activity_name(a).to_string())
                .collect(),
            groupings: w
                .chosen_groupings
                .iter()
                .map(|(&a, &g)| (act.activity_name(a).to_string(), act.grouping_name(g).to_string()))
                .collect(),
            domains: w.domain_witness.as_ref().map(|ds| {
                ds.iter().map(|&d| act.domains().name(d).to_string()).collect()
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict {
    pub conflicting: bool,
    /// Every witness, sorted.
    pub witnesses: Vec<OracleWitness>,
}

impl OracleVerdict {
    /// Whether an engine verdict lists exactly the same witnesses.
    pub fn matches_exhaustive(&self, policy: &Policy, engine: &ConflictVerdict) -> bool {
        let mut theirs: Vec<OracleWitness> = engine
            .witnesses
            .iter()
            .map(|w| OracleWitness::from_engine(policy, w))
            .collect();
        theirs.sort();
        !engine.truncated && engine.conflicting == self.conflicting && theirs == self.witnesses
    }

    /// Whether every engine witness is one of ours.
    pub fn contains_all(&self, policy: &Policy, engine: &ConflictVerdict) -> bool {
        engine.conflicting == self.conflicting
            && engine
                .witnesses
                .iter()
                .all(|w| self.witnesses.contains(&OracleWitness::from_engine(policy, w)))
    }
}

struct RawGrouping {
    name: String,
    activity: String,
    perms: Vec<String>,
}

/// Statement tables of a valid document.
pub struct Oracle {
    perm_object: BTreeMap<String, String>,
    ua: Vec<(String, String)>,
    pa: Vec<(String, String)>,
    rh: Vec<(String, String)>,
    parent: BTreeMap<String, String>,
    groupings: Vec<RawGrouping>,
    domains: Vec<(String, BTreeSet<String>)>,
    constraints: Vec<(usize, Vec<String>)>,
    sessions: BTreeMap<String, (String, Vec<String>)>,
}

impl Oracle {
    pub fn new(doc: &ModelDocument) -> Self {
        let mut o = Oracle {
            perm_object: BTreeMap::new(),
            ua: Vec::new(),
            pa: Vec::new(),
            rh: Vec::new(),
            parent: BTreeMap::new(),
            groupings: Vec::new(),
            domains: Vec::new(),
            constraints: Vec::new(),
            sessions: BTreeMap::new(),
        };
        for (_, s) in doc.iter() {
            match s.clone() {
                Statement::Perm { id, object, .. } => {
                    o.perm_object.insert(id, object);
                }
                Statement::UserRole { user, role } => o.ua.push((user, role)),
                Statement::RolePerm { role, perm } => o.pa.push((role, perm)),
                Statement::Hierarchy { senior, junior } => o.rh.push((senior, junior)),
                Statement::Activity { id, parent: Some(p) } => {
                    o.parent.insert(id, p);
                }
                Statement::Grouping { id, activity, perms } => o.groupings.push(RawGrouping {
                    name: id,
                    activity,
                    perms,
                }),
                Statement::Domain { id, objects } => {
                    o.domains.push((id, objects.into_iter().collect()))
                }
                Statement::Sod { threshold, activities } => {
                    let mut acts = activities;
                    acts.sort();
                    o.constraints.push((threshold, acts));
                }
                Statement::Session { id, user, roles } => {
                    o.sessions.insert(id, (user, roles));
                }
                _ => {}
            }
        }
        o.domains.sort();
        o
    }

    /// Roles reachable from `role` by following hierarchy edges, itself included.
    /// `down` walks senior to junior.
    fn closure(&self, role: &str, down: bool) -> BTreeSet<String> {
        let mut seen = BTreeSet::from([role.to_string()]);
        let mut stack = vec![role.to_string()];
        while let Some(r) = stack.pop() {
            for (s, j) in &self.rh {
                let (from, to) = if down { (s, j) } else { (j, s) };
                if *from == r && seen.insert(to.clone()) {
                    stack.push(to.clone());
                }
            }
        }
        seen
    }

    fn role_perms(&self, role: &str, effective: bool) -> BTreeSet<String> {
        let roles = if effective {
            self.closure(role, true)
        } else {
            BTreeSet::from([role.to_string()])
        };
        self.pa
            .iter()
            .filter(|(r, _)| roles.contains(r))
            .map(|(_, p)| p.clone())
            .collect()
    }

    fn user_roles(&self, user: &str) -> Vec<String> {
        self.ua
            .iter()
            .filter(|(u, _)| u == user)
            .map(|(_, r)| r.clone())
            .collect()
    }

    /// The permission set a target stands for.
    pub fn permissions_of(&self, target: &Target, effective: bool) -> Result<BTreeSet<String>> {
        let from_roles = |roles: &[String]| -> BTreeSet<String> {
            roles.iter().flat_map(|r| self.role_perms(r, effective)).collect()
        };
        Ok(match target {
            Target::Permissions(ps) => ps.iter().cloned().collect(),
            Target::Roles(rs) => from_roles(rs),
            Target::Users(us) => {
                let roles: Vec<String> = us.iter().flat_map(|u| self.user_roles(u)).collect();
                from_roles(&roles)
            }
            Target::Session(s) => {
                let (user, active) = self
                    .sessions
                    .get(s)
                    .ok_or_else(|| Error::UnknownSession(s.clone()))?;
                let assigned = self.user_roles(user);
                for r in active {
                    // with inheritance a senior assignment also authorizes r
                    let ok = if effective {
                        self.closure(r, false).iter().any(|s| assigned.contains(s))
                    } else {
                        assigned.contains(r)
                    };
                    if !ok {
                        return Err(Error::InactiveRoleNotAssigned {
                            session: s.clone(),
                            role: r.clone(),
                        });
                    }
                }
                from_roles(active)
            }
        })
    }

    fn is_ancestor_or_self(&self, ancestor: &str, activity: &str) -> bool {
        let mut cur = Some(activity);
        while let Some(a) = cur {
            if a == ancestor {
                return true;
            }
            cur = self.parent.get(a).map(String::as_str);
        }
        false
    }

    fn perm_domains(&self, p: &str) -> BTreeSet<&str> {
        let obj = &self.perm_object[p];
        self.domains
            .iter()
            .filter(|(_, objs)| objs.contains(obj))
            .map(|(d, _)| d.as_str())
            .collect()
    }

    pub fn check(&self, target: &Target, effective: bool, domain_mode: bool) -> Result<OracleVerdict> {
        let perms = self.permissions_of(target, effective)?;
        self.check_permissions(&perms, domain_mode)
    }

    pub fn check_permissions(&self, perms: &BTreeSet<String>, domain_mode: bool) -> Result<OracleVerdict> {
        if perms.len() > MAX_PERMISSIONS {
            return Err(Error::InstanceTooLarge(format!(
                "{} permissions in the analyzed set, at most {MAX_PERMISSIONS}",
                perms.len()
            )));
        }
        if let Some((_, acts)) = self
            .constraints
            .iter()
            .find(|(_, acts)| acts.len() > MAX_CONSTRAINT_ACTIVITIES)
        {
            return Err(Error::InstanceTooLarge(format!(
                "constraint over {} activities, at most {MAX_CONSTRAINT_ACTIVITIES}",
                acts.len()
            )));
        }
        if self.domains.len() > MAX_DOMAINS {
            return Err(Error::InstanceTooLarge(format!(
                "{} domains, at most {MAX_DOMAINS}",
                self.domains.len()
            )));
        }

        let mut witnesses = Vec::new();
        for (ci, (threshold, acts)) in self.constraints.iter().enumerate() {
            // A' ranges over every subset of A with at least n members
            for mask in 1u32..(1 << acts.len()) {
                if (mask.count_ones() as usize) < *threshold {
                    continue;
                }
                let chosen: Vec<&String> = (0..acts.len())
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| &acts[i])
                    .collect();
                // groupings in the star of each activity that fit inside P
                let options: Vec<Vec<&RawGrouping>> = chosen
                    .iter()
                    .map(|a| {
                        self.groupings
                            .iter()
                            .filter(|g| self.is_ancestor_or_self(a, &g.activity))
                            .filter(|g| g.perms.iter().all(|p| perms.contains(p)))
                            .collect()
                    })
                    .collect();
                if options.iter().any(Vec::is_empty) {
                    continue;
                }
                let mut pick = vec![0usize; chosen.len()];
                loop {
                    let picked: Vec<&RawGrouping> =
                        options.iter().zip(&pick).map(|(o, &i)| o[i]).collect();
                    let domains = if domain_mode {
                        self.largest_domain_set(&picked)
                    } else {
                        Some(Vec::new())
                    };
                    if let Some(ds) = domains {
                        witnesses.push(OracleWitness {
                            constraint: ci,
                            activities: chosen.iter().map(|a| a.to_string()).collect(),
                            groupings: chosen
                                .iter()
                                .zip(&picked)
                                .map(|(a, g)| (a.to_string(), g.name.clone()))
                                .collect(),
                            domains: domain_mode.then_some(ds),
                        });
                    }
                    let mut i = 0;
                    while i < pick.len() {
                        pick[i] += 1;
                        if pick[i] < options[i].len() {
                            break;
                        }
                        pick[i] = 0;
                        i += 1;
                    }
                    if i == pick.len() {
                        break;
                    }
                }
            }
        }
        witnesses.sort();
        Ok(OracleVerdict {
            conflicting: !witnesses.is_empty(),
            witnesses,
        })
    }

    /// The largest non-empty domain set every permission of every picked
    /// grouping operates in, found by trying each candidate set.
    fn largest_domain_set(&self, picked: &[&RawGrouping]) -> Option<Vec<String>> {
        let names: Vec<&str> = self.domains.iter().map(|(d, _)| d.as_str()).collect();
        let per_perm: Vec<BTreeSet<&str>> = picked
            .iter()
            .flat_map(|g| g.perms.iter())
            .map(|p| self.perm_domains(p))
            .collect();
        let mut best: Option<Vec<String>> = None;
        for mask in 1u32..(1 << names.len()) {
            let set: Vec<&str> = (0..names.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| names[i])
                .collect();
            let valid = per_perm.iter().all(|ds| set.iter().all(|d| ds.contains(d)));
            if valid && best.as_ref().is_none_or(|b| b.len() < set.len()) {
                best = Some(set.iter().map(|d| d.to_string()).collect());
            }
        }
        best
    }
}
