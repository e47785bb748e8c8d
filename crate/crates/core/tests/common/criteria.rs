//! Checks shared by the acceptance run and the regular test targets. Each
//! returns the number of comparisons made, or a description of the first
//! violation.

use std::collections::BTreeSet;

use activity_sod::decl::Statement;
use activity_sod::engine::{CapabilityIndex, PairKind, PairQuery, Strategy};
use activity_sod::ids::PermId;
use activity_sod::testkit::{Oracle, OracleVerdict, Target};
use activity_sod::{ConflictVerdict, Mode, Policy, WitnessPolicy};

use super::*;

pub type Outcome = Result<usize, String>;

const MODES: [(bool, bool); 4] = [(false, false), (false, true), (true, false), (true, true)];
const EXHAUSTIVE: WitnessPolicy = WitnessPolicy::Exhaustive { limit: 1_000_000 };

fn perm_names(policy: &Policy, perms: &[PermId]) -> Vec<String> {
    perms.iter().map(|&p| policy.rbac().permission_name(p).to_string()).collect()
}

fn compare(
    policy: &Policy,
    what: &str,
    oracle: &OracleVerdict,
    first: &ConflictVerdict,
    exhaustive: &ConflictVerdict,
) -> Result<(), String> {
    if !oracle.matches_exhaustive(policy, exhaustive) {
        return Err(format!(
            "{what}: exhaustive witnesses differ (engine {} / oracle {})",
            exhaustive.witnesses.len(),
            oracle.witnesses.len()
        ));
    }
    if !oracle.contains_all(policy, first) {
        return Err(format!("{what}: default verdict disagrees with the oracle"));
    }
    Ok(())
}

/// Engine verdicts against brute force on random permission, role and user
/// sets and on every session, in all four configurations.
pub fn oracle_equivalence(seeds: std::ops::Range<u64>) -> Outcome {
    let mut checks = 0;
    for seed in seeds {
        let (inst, policy) = small_instance(seed);
        let oracle = Oracle::new(&inst.document);
        let rbac = policy.rbac();
        let mut r = Rng::new(seed);
        let (perms, roles, users) = (all_perms(&policy), all_roles(&policy), all_users(&policy));
        for (effective, domains) in MODES {
            let mode = Mode::new(effective, domains);
            let tag = |kind: &str| format!("seed {seed} {kind} effective={effective} domains={domains}");

            let ps = pick(&mut r, &perms, 6);
            let o = oracle
                .check(&Target::Permissions(perm_names(&policy, &ps)), effective, domains)
                .map_err(|e| e.to_string())?;
            compare(
                &policy,
                &tag("permissions"),
                &o,
                &policy.check_perm_set(&ps, domains),
                &policy.check_perm_set_with(&ps, domains, EXHAUSTIVE),
            )?;

            let rs = pick(&mut r, &roles, 3);
            let names = rs.iter().map(|&x| rbac.role_name(x).to_string()).collect();
            let o = oracle.check(&Target::Roles(names), effective, domains).map_err(|e| e.to_string())?;
            let union = rbac.union_permissions(rs.iter().copied(), effective);
            compare(
                &policy,
                &tag("roles"),
                &o,
                &policy.check_role_set(&rs, mode),
                &policy.check_perm_set_with(&union, domains, EXHAUSTIVE),
            )?;

            let us = pick(&mut r, &users, 2);
            let names = us.iter().map(|&x| rbac.user_name(x).to_string()).collect();
            let o = oracle.check(&Target::Users(names), effective, domains).map_err(|e| e.to_string())?;
            let union: Vec<PermId> = {
                let set: BTreeSet<PermId> = us.iter().flat_map(|&u| rbac.user_permissions(u, effective)).collect();
                set.into_iter().collect()
            };
            compare(
                &policy,
                &tag("users"),
                &o,
                &policy.check_user_set(&us, mode),
                &policy.check_perm_set_with(&union, domains, EXHAUSTIVE),
            )?;
            checks += 3;

            for s in rbac.sessions() {
                let name = rbac.session_name(s).to_string();
                let o = oracle.check(&Target::Session(name.clone()), effective, domains);
                let e = policy.check_session(s, mode);
                match (o, e) {
                    (Ok(o), Ok(first)) => {
                        let perms = rbac.session_permissions(s, effective).unwrap();
                        compare(
                            &policy,
                            &tag(&format!("session {name}")),
                            &o,
                            &first,
                            &policy.check_perm_set_with(&perms, domains, EXHAUSTIVE),
                        )?;
                    }
                    (Err(a), Err(b)) if a == b => {}
                    (o, e) => {
                        return Err(format!(
                            "{}: oracle {:?} vs engine {:?}",
                            tag(&format!("session {name}")),
                            o.map(|v| v.conflicting),
                            e.map(|v| v.conflicting)
                        ))
                    }
                }
                checks += 1;
            }
        }
    }
    Ok(checks)
}

/// Adding a permission never clears a conflicting set.
pub fn monotonicity(seeds: std::ops::Range<u64>) -> Outcome {
    let mut checks = 0;
    for seed in seeds {
        let (_, policy) = small_instance(seed);
        let perms = all_perms(&policy);
        let mut r = Rng::new(seed);
        for domains in [false, true] {
            for _ in 0..8 {
                let mut ps = pick(&mut r, &perms, 8);
                let before = policy.check_perm_set(&ps, domains).conflicting;
                ps.push(perms[r.below(perms.len())]);
                let after = policy.check_perm_set(&ps, domains).conflicting;
                if before && !after {
                    return Err(format!("seed {seed}: adding a permission cleared a conflict"));
                }
                checks += 1;
            }
        }
    }
    Ok(checks)
}

fn brute_pairs(policy: &Policy, kind: PairKind, mode: Mode, discard: bool) -> Vec<(u32, u32)> {
    let n = match kind {
        PairKind::Roles => policy.rbac().role_count(),
        PairKind::Permissions => policy.rbac().permission_count(),
    };
    let check = |ids: &[u32]| -> bool {
        match kind {
            PairKind::Roles => {
                let rs: Vec<_> = ids.iter().map(|&i| (i as usize).into()).collect();
                policy.check_role_set(&rs, mode).conflicting
            }
            PairKind::Permissions => {
                let ps: Vec<_> = ids.iter().map(|&i| (i as usize).into()).collect();
                policy.check_perm_set(&ps, mode.domains).conflicting
            }
        }
    };
    let illegal: Vec<bool> = (0..n as u32).map(|i| check(&[i])).collect();
    let mut out = Vec::new();
    for x in 0..n as u32 {
        for y in (x + 1)..n as u32 {
            if discard && (illegal[x as usize] || illegal[y as usize]) {
                continue;
            }
            if check(&[x, y]) {
                out.push((x, y));
            }
        }
    }
    out
}

/// Pair checks are symmetric and enumeration lists each conflicting
/// unordered pair exactly once, whatever the strategy.
pub fn pair_symmetry(seeds: std::ops::Range<u64>) -> Outcome {
    let mut checks = 0;
    for seed in seeds {
        let (_, policy) = small_instance(seed);
        let roles = all_roles(&policy);
        for (effective, domains) in MODES {
            let mode = Mode::new(effective, domains);
            for &x in &roles {
                for &y in &roles {
                    if policy.check_role_set(&[x, y], mode).conflicting
                        != policy.check_role_set(&[y, x], mode).conflicting
                    {
                        return Err(format!("seed {seed}: asymmetric pair"));
                    }
                }
            }
            for kind in [PairKind::Roles, PairKind::Permissions] {
                for discard in [true, false] {
                    let expected = brute_pairs(&policy, kind, mode, discard);
                    for strategy in [Strategy::Auto, Strategy::Candidates, Strategy::Scan] {
                        let got = policy.enumerate_conflicting_pairs(&PairQuery {
                            kind,
                            mode,
                            discard_illegal: discard,
                            collect: true,
                            strategy,
                        });
                        let pairs = got.pairs.unwrap();
                        if pairs != expected || got.count != expected.len() as u64 {
                            return Err(format!(
                                "seed {seed} {kind:?} {mode:?} discard={discard} {strategy:?}: {} pairs, expected {}",
                                pairs.len(),
                                expected.len()
                            ));
                        }
                        checks += 1;
                    }
                }
            }
        }
    }
    Ok(checks)
}

/// Any role set containing an illegal role conflicts.
pub fn illegal_superset(seeds: std::ops::Range<u64>) -> Outcome {
    let mut checks = 0;
    for seed in seeds {
        let (_, policy) = small_instance(seed);
        let roles = all_roles(&policy);
        let perms = all_perms(&policy);
        let mut r = Rng::new(seed);
        for (effective, domains) in MODES {
            let mode = Mode::new(effective, domains);
            for bad in policy.illegal_roles(mode) {
                let mut set = pick(&mut r, &roles, 3);
                set.push(bad);
                if !policy.check_role_set(&set, mode).conflicting {
                    return Err(format!("seed {seed}: superset of an illegal role is clear"));
                }
                checks += 1;
            }
            for bad in policy.illegal_permissions(domains) {
                let mut set = pick(&mut r, &perms, 4);
                set.push(bad);
                if !policy.check_perm_set(&set, domains).conflicting {
                    return Err(format!("seed {seed}: superset of an illegal permission is clear"));
                }
                checks += 1;
            }
        }
    }
    Ok(checks)
}

/// Performed activities are closed under taking parents.
pub fn ancestor_closure(seeds: std::ops::Range<u64>) -> Outcome {
    let mut checks = 0;
    for seed in seeds {
        let (_, policy) = small_instance(seed);
        let perms = all_perms(&policy);
        let tree = policy.activities().tree();
        let mut r = Rng::new(seed);
        for _ in 0..8 {
            let ps = pick(&mut r, &perms, 8);
            let performed = policy.activities().performed_activities(&ps);
            for &a in performed.keys() {
                if let Some(p) = tree.parent(a) {
                    if !performed.contains_key(&p) {
                        return Err(format!("seed {seed}: parent of a performed activity is missing"));
                    }
                    if !performed[&a].is_subset(&performed[&p]) {
                        return Err(format!("seed {seed}: parent lacks a child's grouping"));
                    }
                }
                checks += 1;
            }
        }
    }
    Ok(checks)
}

/// With one domain spanning every object, domain mode agrees with plain mode.
pub fn domain_collapse(seeds: std::ops::Range<u64>) -> Outcome {
    let mut checks = 0;
    for seed in seeds {
        let (inst, _) = small_instance(seed);
        let mut objects = Vec::new();
        let mut doc: activity_sod::ModelDocument = inst
            .document
            .iter()
            .filter_map(|(_, s)| match s {
                Statement::Domain { .. } => None,
                Statement::Perm { object, .. } => {
                    objects.push(object.clone());
                    Some(s.clone())
                }
                _ => Some(s.clone()),
            })
            .collect();
        if objects.is_empty() {
            continue;
        }
        doc.push(Statement::Domain { id: "everything".into(), objects });
        let policy = Policy::from_document(&doc).map_err(|e| e.to_string())?;
        let perms = all_perms(&policy);
        let roles = all_roles(&policy);
        let mut r = Rng::new(seed);
        for _ in 0..8 {
            let ps = pick(&mut r, &perms, 8);
            if policy.check_perm_set(&ps, true).conflicting != policy.check_perm_set(&ps, false).conflicting {
                return Err(format!("seed {seed}: single all-object domain changed a permission verdict"));
            }
            let rs = pick(&mut r, &roles, 3);
            if policy.check_role_set(&rs, Mode::new(true, true)).conflicting
                != policy.check_role_set(&rs, Mode::new(true, false)).conflicting
            {
                return Err(format!("seed {seed}: single all-object domain changed a role verdict"));
            }
            checks += 2;
        }
        let plain = policy.enumerate_conflicting_pairs(&PairQuery::new(PairKind::Roles, Mode::new(true, false)));
        let dom = policy.enumerate_conflicting_pairs(&PairQuery::new(PairKind::Roles, Mode::new(true, true)));
        if plain != dom {
            return Err(format!("seed {seed}: single all-object domain changed the pair enumeration"));
        }
        checks += 1;
    }
    Ok(checks)
}

/// A permission outside every domain never appears in a domain-mode witness.
pub fn empty_domain_exclusion(seeds: std::ops::Range<u64>) -> Outcome {
    let mut checks = 0;
    for seed in seeds {
        let (_, policy) = small_instance(seed);
        let act = policy.activities();
        let perms = all_perms(&policy);
        let homeless: BTreeSet<PermId> = perms.iter().copied().filter(|&p| act.perm_domains(p).is_empty()).collect();
        let mut r = Rng::new(seed);
        for _ in 0..8 {
            let ps = pick(&mut r, &perms, 10);
            for policy_kind in [WitnessPolicy::First, EXHAUSTIVE] {
                let v = policy.check_perm_set_with(&ps, true, policy_kind);
                for w in &v.witnesses {
                    for &g in w.chosen_groupings.values() {
                        if act.grouping(g).perms.iter().any(|p| homeless.contains(p)) {
                            return Err(format!("seed {seed}: domain-less permission in a domain witness"));
                        }
                    }
                    if w.domain_witness.as_ref().is_none_or(|d| d.is_empty()) {
                        return Err(format!("seed {seed}: domain witness without a domain"));
                    }
                }
                checks += 1;
            }
        }
    }
    Ok(checks)
}

/// Role and user checks equal permission checks on their unions.
pub fn reduction_identities(seeds: std::ops::Range<u64>) -> Outcome {
    let mut checks = 0;
    for seed in seeds {
        let (_, policy) = small_instance(seed);
        let rbac = policy.rbac();
        let (roles, users) = (all_roles(&policy), all_users(&policy));
        let mut r = Rng::new(seed);
        for (effective, domains) in MODES {
            let mode = Mode::new(effective, domains);
            for _ in 0..4 {
                let rs = pick(&mut r, &roles, 3);
                let union = rbac.union_permissions(rs.iter().copied(), effective);
                if policy.check_role_set(&rs, mode) != policy.check_perm_set(&union, domains) {
                    return Err(format!("seed {seed}: role check differs from its permission union"));
                }
                let us = pick(&mut r, &users, 3);
                let union: BTreeSet<PermId> = us.iter().flat_map(|&u| rbac.user_permissions(u, effective)).collect();
                let union: Vec<PermId> = union.into_iter().collect();
                if policy.check_user_set(&us, mode) != policy.check_perm_set(&union, domains) {
                    return Err(format!("seed {seed}: user check differs from its permission union"));
                }
                checks += 2;
            }
        }
    }
    Ok(checks)
}

/// Verdicts read from the capability index equal direct evaluation.
pub fn index_soundness(seeds: std::ops::Range<u64>) -> Outcome {
    let mut checks = 0;
    for seed in seeds {
        let (_, policy) = small_instance(seed);
        let roles = all_roles(&policy);
        for (effective, domains) in MODES {
            let mode = Mode::new(effective, domains);
            let index = CapabilityIndex::for_roles(&policy, effective);
            for &x in &roles {
                if index.is_illegal(&policy, x.index(), domains) != policy.check_role_set(&[x], mode).conflicting {
                    return Err(format!("seed {seed}: indexed illegality differs"));
                }
                for &y in &roles {
                    let direct = policy.check_role_set(&[x, y], mode).conflicting;
                    if index.pair_conflicts(&policy, x.index(), y.index(), domains) != direct {
                        return Err(format!("seed {seed}: indexed pair verdict differs"));
                    }
                    let covered = index.pair_covered(&policy, x.index(), y.index());
                    let union = policy.rbac().union_permissions([x, y], effective);
                    if policy.evaluate(&covered, domains, WitnessPolicy::First)
                        != policy.check_perm_set(&union, domains)
                    {
                        return Err(format!("seed {seed}: indexed pair witness differs"));
                    }
                    checks += 1;
                }
            }
        }
    }
    Ok(checks)
}
