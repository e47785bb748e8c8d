//! Seeded synthetic policies.
//!
//! The stream comes from xoshiro256++ seeded through SplitMix64
//! (`Xoshiro256PlusPlus::seed_from_u64`). Bounded draws use the
//! multiply-shift map `(x * n) >> 64` on a 64-bit output, and distinct
//! samples use Floyd's algorithm, so the output depends only on the
//! parameters and is identical on every platform.
//!
//! Entities are drawn in a fixed order: permissions and their domains,
//! activities, constraints, groupings, roles with their permissions and
//! hierarchy, users with their roles, then sessions.
//!
//! Planted conflicts reserve the first `3K` permissions and the first `2K`
//! roles. The first `K` permissions are illegal on their own. Roles `2j` and
//! `2j + 1` hold one dedicated permission each and conflict only together.

use std::fmt::Write as _;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::decl::{ModelDocument, Statement};
use crate::error::{Error, Result};
use crate::io::write_document;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorParams {
    pub seed: u64,
    pub users: usize,
    pub roles: usize,
    pub permissions: usize,
    pub activities: usize,
    pub groupings: usize,
    pub domains: usize,
    pub constraints: usize,
    pub sessions: usize,
    /// Roles per user, inclusive range.
    pub ua_per_user: (usize, usize),
    /// Direct permissions per unplanted role, inclusive range.
    pub pa_per_role: (usize, usize),
    /// Chance of each of two attempts to link a role to an earlier junior.
    pub rh_edge_probability: f64,
    /// Permissions per grouping, inclusive range.
    pub grouping_size: (usize, usize),
    /// `None` partitions all objects among the domains; `Some(k)` gives each
    /// domain `k` random objects and leaves the rest outside every domain.
    pub objects_per_domain: Option<usize>,
    /// Chance that a partitioned object also joins a second domain.
    pub cross_domain_probability: f64,
    /// Activities per constraint, inclusive range.
    pub activities_per_constraint: (usize, usize),
    pub max_threshold: usize,
    /// Number of planted illegal permissions and of planted role pairs.
    pub plant_conflicts: usize,
}

impl GeneratorParams {
    /// A small instance within the reference checker's bounds.
    pub fn small(seed: u64) -> Self {
        Self {
            seed,
            users: 20,
            roles: 10,
            permissions: 15,
            activities: 8,
            groupings: 10,
            domains: 2,
            constraints: 3,
            sessions: 4,
            ua_per_user: (1, 2),
            pa_per_role: (1, 4),
            rh_edge_probability: 0.3,
            grouping_size: (1, 3),
            objects_per_domain: None,
            cross_domain_probability: 0.2,
            activities_per_constraint: (2, 3),
            max_threshold: 3,
            plant_conflicts: 0,
        }
    }

    /// Entity counts of a large enterprise deployment, with pairwise
    /// constraints only and a hundred planted conflicts of each kind.
    pub fn enterprise(seed: u64) -> Self {
        Self {
            seed,
            users: 90_287,
            roles: 16_755,
            permissions: 12_314,
            activities: 298,
            groupings: 21_000,
            domains: 67,
            constraints: 437,
            sessions: 0,
            ua_per_user: (1, 3),
            pa_per_role: (4, 12),
            rh_edge_probability: 0.3,
            grouping_size: (1, 3),
            objects_per_domain: None,
            cross_domain_probability: 0.05,
            activities_per_constraint: (2, 2),
            max_threshold: 2,
            plant_conflicts: 100,
        }
    }
}

/// Names of the planted conflicts, known to be found by a full analysis
/// with default settings.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Planted {
    pub illegal_permissions: Vec<String>,
    pub role_pairs: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedInstance {
    pub document: ModelDocument,
    pub planted: Planted,
}

impl GeneratedInstance {
    /// Document text, preceded by comments naming the planted conflicts.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.planted.illegal_permissions {
            let _ = writeln!(out, "# planted illegal permission {p}");
        }
        for (a, b) in &self.planted.role_pairs {
            let _ = writeln!(out, "# planted conflicting role pair {a} {b}");
        }
        out.push_str(&write_document(&self.document));
        out
    }
}

struct Draw(Xoshiro256PlusPlus);

impl Draw {
    fn below(&mut self, n: usize) -> usize {
        ((self.0.next_u64() as u128 * n as u128) >> 64) as usize
    }

    fn range(&mut self, (lo, hi): (usize, usize)) -> usize {
        lo + self.below(hi - lo + 1)
    }

    fn chance(&mut self, p: f64) -> bool {
        ((self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64) < p
    }

    /// `k` distinct values from `0..n`, sorted (Floyd).
    fn distinct(&mut self, k: usize, n: usize) -> Vec<usize> {
        let mut chosen = std::collections::BTreeSet::new();
        for j in (n - k)..n {
            let t = self.below(j + 1);
            if !chosen.insert(t) {
                chosen.insert(j);
            }
        }
        chosen.into_iter().collect()
    }
}

fn name(prefix: &str, i: usize, count: usize) -> String {
    let width = count.saturating_sub(1).to_string().len();
    format!("{prefix}{i:0width$}")
}

fn bad(detail: impl Into<String>) -> Error {
    Error::InconsistentParams(detail.into())
}

fn check_range(what: &str, (lo, hi): (usize, usize), max: usize) -> Result<()> {
    if lo > hi {
        return Err(bad(format!("{what}: minimum {lo} exceeds maximum {hi}")));
    }
    if hi > max {
        return Err(bad(format!("{what}: maximum {hi} exceeds the {max} available")));
    }
    Ok(())
}

/// Builds a valid document for `params`, or explains why none exists.
pub fn generate_instance(params: &GeneratorParams) -> Result<GeneratedInstance> {
    let p = params;
    let k = p.plant_conflicts;
    let dedicated = 3 * k;
    if p.permissions < dedicated {
        return Err(bad(format!("{k} planted conflicts need {dedicated} permissions")));
    }
    let free_perms = p.permissions - dedicated;
    if p.roles < 2 * k {
        return Err(bad(format!("{k} planted conflicts need {} roles", 2 * k)));
    }
    if k > 0 && (p.constraints == 0 || p.domains == 0) {
        return Err(bad("planting conflicts needs at least one constraint and one domain"));
    }
    if p.roles > 2 * k {
        check_range("pa-per-role", p.pa_per_role, free_perms)?;
    }
    if p.users > 0 {
        check_range("ua-per-user", p.ua_per_user, p.roles)?;
    }
    if p.sessions > 0 && p.users == 0 {
        return Err(bad("sessions need at least one user"));
    }
    if !(0.0..=1.0).contains(&p.rh_edge_probability)
        || !(0.0..=1.0).contains(&p.cross_domain_probability)
    {
        return Err(bad("probabilities must lie in [0, 1]"));
    }
    if p.constraints > 0 {
        if p.activities_per_constraint.0 < 2 {
            return Err(bad("constraints need at least two activities"));
        }
        check_range("activities-per-constraint", p.activities_per_constraint, p.activities)?;
        if p.max_threshold < 2 {
            return Err(bad("max-threshold must be at least 2"));
        }
    }

    let mut rng = Draw(Xoshiro256PlusPlus::seed_from_u64(p.seed));
    let mut doc = ModelDocument::new();
    let perm_name = |i: usize| name("p", i, p.permissions);
    let obj_name = |i: usize| name("obj", i, p.permissions);
    let act_name = |i: usize| name("a", i, p.activities);
    let role_name = |i: usize| name("r", i, p.roles);
    let user_name = |i: usize| name("u", i, p.users);

    // permissions, one object each, and domain membership per object
    for i in 0..p.permissions {
        doc.push(Statement::Perm {
            id: perm_name(i),
            object: obj_name(i),
            operation: "exec".into(),
        });
    }
    let mut domain_objects: Vec<Vec<usize>> = vec![Vec::new(); p.domains];
    if p.domains > 0 {
        match p.objects_per_domain {
            None => {
                if free_perms < p.domains {
                    return Err(bad(format!(
                        "{} domains need as many unreserved permissions, found {free_perms}",
                        p.domains
                    )));
                }
                domain_objects[0].extend(0..dedicated);
                for (n, i) in (dedicated..p.permissions).enumerate() {
                    let d = if n < p.domains { n } else { rng.below(p.domains) };
                    domain_objects[d].push(i);
                    if p.domains > 1 && rng.chance(p.cross_domain_probability) {
                        let other = (d + 1 + rng.below(p.domains - 1)) % p.domains;
                        domain_objects[other].push(i);
                    }
                }
            }
            Some(per) => {
                if per == 0 || per > free_perms {
                    return Err(bad(format!("objects-per-domain {per} out of range")));
                }
                domain_objects[0].extend(0..dedicated);
                for objs in domain_objects.iter_mut() {
                    objs.extend(rng.distinct(per, free_perms).into_iter().map(|i| i + dedicated));
                }
            }
        }
    }

    // activity forest: the first few are roots
    let roots = if p.activities == 0 { 0 } else { (p.activities / 25).max(1) };
    let mut parent: Vec<Option<usize>> = vec![None; p.activities];
    for (i, slot) in parent.iter_mut().enumerate().skip(roots) {
        *slot = Some(rng.below(i));
    }
    for (i, par) in parent.iter().enumerate() {
        doc.push(Statement::Activity {
            id: act_name(i),
            parent: par.map(act_name),
        });
    }
    let is_ancestor = |anc: usize, mut a: usize| loop {
        if a == anc {
            return true;
        }
        match parent[a] {
            Some(up) => a = up,
            None => return false,
        }
    };

    // constraints: antichains of non-root activities
    let non_root: Vec<usize> = (roots..p.activities).collect();
    let mut constraints: Vec<(usize, Vec<usize>)> = Vec::with_capacity(p.constraints);
    for _ in 0..p.constraints {
        let want = rng.range(p.activities_per_constraint);
        let mut chosen = Vec::new();
        for _attempt in 0..16 {
            chosen.clear();
            let mut pool = non_root.clone();
            // partial Fisher-Yates until enough incomparable activities
            let mut i = 0;
            while i < pool.len() && chosen.len() < want {
                let j = i + rng.below(pool.len() - i);
                pool.swap(i, j);
                let a = pool[i];
                if chosen.iter().all(|&c| !is_ancestor(c, a) && !is_ancestor(a, c)) {
                    chosen.push(a);
                }
                i += 1;
            }
            if chosen.len() >= p.activities_per_constraint.0 {
                break;
            }
        }
        if chosen.len() < p.activities_per_constraint.0 {
            return Err(bad("the activity tree is too narrow for the requested constraints"));
        }
        chosen.sort_unstable();
        let threshold = rng.range((2, p.max_threshold.min(chosen.len())));
        constraints.push((threshold, chosen));
    }

    // groupings: planted ones first
    let ancestors = |a: usize| {
        let mut out = vec![a];
        let mut cur = a;
        while let Some(up) = parent[cur] {
            out.push(up);
            cur = up;
        }
        out
    };
    // activities a set of planted groupings performs must satisfy no constraint
    let satisfies_none = |acts: &[usize]| {
        let mut performed: Vec<usize> = acts.iter().flat_map(|&a| ancestors(a)).collect();
        performed.sort_unstable();
        performed.dedup();
        constraints.iter().all(|(n, cs)| {
            cs.iter().filter(|a| performed.binary_search(a).is_ok()).count() < *n
        })
    };
    let mut grouping_rows: Vec<(usize, Vec<usize>)> = Vec::with_capacity(p.groupings);
    let mut planted = Planted::default();
    for i in 0..k {
        let (n, acts) = &constraints[i % p.constraints];
        for &a in &acts[..*n] {
            grouping_rows.push((a, vec![i]));
        }
        planted.illegal_permissions.push(perm_name(i));
    }
    for j in 0..k {
        let (px, py) = (k + 2 * j, k + 2 * j + 1);
        let pick = (0..p.constraints)
            .map(|off| &constraints[(k + j + off) % p.constraints])
            .find(|(n, acts)| satisfies_none(&acts[..n - 1]))
            .ok_or_else(|| bad("no constraint admits a planted role pair"))?;
        let (n, acts) = pick;
        for &a in &acts[..n - 1] {
            grouping_rows.push((a, vec![px]));
        }
        grouping_rows.push((acts[n - 1], vec![py]));
        planted.role_pairs.push((role_name(2 * j), role_name(2 * j + 1)));
    }
    if grouping_rows.len() > p.groupings {
        return Err(bad(format!(
            "planted conflicts need {} groupings, only {} requested",
            grouping_rows.len(),
            p.groupings
        )));
    }
    if grouping_rows.len() < p.groupings {
        if p.activities == 0 {
            return Err(bad("groupings need at least one activity"));
        }
        if p.grouping_size.0 == 0 {
            return Err(bad("groupings need at least one permission"));
        }
        check_range("grouping-size", p.grouping_size, free_perms)?;
    }
    while grouping_rows.len() < p.groupings {
        let a = rng.below(p.activities);
        let size = rng.range(p.grouping_size);
        let perms = rng.distinct(size, free_perms).into_iter().map(|i| i + dedicated).collect();
        grouping_rows.push((a, perms));
    }

    // roles: planted ones hold one dedicated permission and have no juniors
    let mut pa_rows: Vec<(usize, usize)> = Vec::new();
    let mut rh_rows: Vec<(usize, usize)> = Vec::new();
    for j in 0..k {
        pa_rows.push((2 * j, k + 2 * j));
        pa_rows.push((2 * j + 1, k + 2 * j + 1));
    }
    for r in (2 * k)..p.roles {
        let count = rng.range(p.pa_per_role);
        for q in rng.distinct(count, free_perms) {
            pa_rows.push((r, q + dedicated));
        }
        let earlier = r - 2 * k;
        let mut juniors = Vec::new();
        for _ in 0..2 {
            if earlier > 0 && rng.chance(p.rh_edge_probability) {
                juniors.push(2 * k + rng.below(earlier));
            }
        }
        juniors.sort_unstable();
        juniors.dedup();
        rh_rows.extend(juniors.into_iter().map(|j| (r, j)));
    }

    // users and sessions
    let mut ua_rows: Vec<Vec<usize>> = Vec::with_capacity(p.users);
    for _ in 0..p.users {
        let count = rng.range(p.ua_per_user);
        ua_rows.push(rng.distinct(count, p.roles));
    }
    let mut session_rows: Vec<(usize, Vec<usize>)> = Vec::with_capacity(p.sessions);
    for _ in 0..p.sessions {
        let u = rng.below(p.users);
        let held = &ua_rows[u];
        let count = rng.below(held.len() + 1);
        let active = rng
            .distinct(count, held.len())
            .into_iter()
            .map(|i| held[i])
            .collect();
        session_rows.push((u, active));
    }

    // emit in the canonical kind order
    let mut out = ModelDocument::new();
    out.statements
        .extend(doc.statements.iter().filter(|s| matches!(s.statement, Statement::Perm { .. })).cloned());
    for u in 0..p.users {
        out.push(Statement::User { id: user_name(u) });
    }
    for r in 0..p.roles {
        out.push(Statement::Role { id: role_name(r) });
    }
    for (u, roles) in ua_rows.iter().enumerate() {
        for &r in roles {
            out.push(Statement::UserRole {
                user: user_name(u),
                role: role_name(r),
            });
        }
    }
    pa_rows.sort_unstable();
    for (r, q) in pa_rows {
        out.push(Statement::RolePerm {
            role: role_name(r),
            perm: perm_name(q),
        });
    }
    for (s, j) in rh_rows {
        out.push(Statement::Hierarchy {
            senior: role_name(s),
            junior: role_name(j),
        });
    }
    out.statements.extend(
        doc.statements
            .iter()
            .filter(|s| matches!(s.statement, Statement::Activity { .. }))
            .cloned(),
    );
    for (g, (a, perms)) in grouping_rows.iter().enumerate() {
        out.push(Statement::Grouping {
            id: name("g", g, p.groupings),
            activity: act_name(*a),
            perms: perms.iter().map(|&q| perm_name(q)).collect(),
        });
    }
    for (d, objs) in domain_objects.iter_mut().enumerate() {
        objs.sort_unstable();
        objs.dedup();
        out.push(Statement::Domain {
            id: name("d", d, p.domains),
            objects: objs.iter().map(|&o| obj_name(o)).collect(),
        });
    }
    for (n, acts) in &constraints {
        out.push(Statement::Sod {
            threshold: *n,
            activities: acts.iter().map(|&a| act_name(a)).collect(),
        });
    }
    for (s, (u, roles)) in session_rows.iter().enumerate() {
        out.push(Statement::Session {
            id: name("s", s, p.sessions),
            user: user_name(*u),
            roles: roles.iter().map(|&r| role_name(r)).collect(),
        });
    }
    Ok(GeneratedInstance {
        document: out,
        planted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::Policy;

    #[test]
    fn small_preset_is_valid_and_exact() {
        let inst = generate_instance(&GeneratorParams::small(42)).unwrap();
        let doc = &inst.document;
        assert_eq!(doc.count("user"), 20);
        assert_eq!(doc.count("role"), 10);
        assert_eq!(doc.count("perm"), 15);
        assert_eq!(doc.count("activity"), 8);
        assert_eq!(doc.count("grouping"), 10);
        assert_eq!(doc.count("domain"), 2);
        assert_eq!(doc.count("sod"), 3);
        assert_eq!(doc.count("session"), 4);
        Policy::from_document(doc).unwrap();
    }

    #[test]
    fn same_seed_same_bytes() {
        let a = generate_instance(&GeneratorParams::small(7)).unwrap().to_text();
        let b = generate_instance(&GeneratorParams::small(7)).unwrap().to_text();
        let c = generate_instance(&GeneratorParams::small(8)).unwrap().to_text();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn generated_text_parses_back() {
        let inst = generate_instance(&GeneratorParams::small(3)).unwrap();
        let parsed = crate::io::parse_model(&inst.to_text()).unwrap();
        assert_eq!(
            Policy::from_document(&parsed).unwrap(),
            Policy::from_document(&inst.document).unwrap()
        );
    }

    #[test]
    fn planting_without_room_is_rejected() {
        let mut params = GeneratorParams::small(1);
        params.plant_conflicts = 6;
        assert!(matches!(generate_instance(&params), Err(Error::InconsistentParams(_))));
        params.plant_conflicts = 1;
        params.groupings = 1;
        assert!(matches!(generate_instance(&params), Err(Error::InconsistentParams(_))));
    }

    #[test]
    fn grouping_size_must_fit() {
        let mut params = GeneratorParams::small(1);
        params.grouping_size = (3, 2);
        assert!(generate_instance(&params).is_err());
        params.grouping_size = (1, 99);
        assert!(generate_instance(&params).is_err());
    }

    #[test]
    fn floyd_sampling_is_distinct_and_in_range() {
        let mut rng = Draw(Xoshiro256PlusPlus::seed_from_u64(5));
        for n in 1..30 {
            for k in 0..=n {
                let s = rng.distinct(k, n);
                assert_eq!(s.len(), k);
                assert!(s.windows(2).all(|w| w[0] < w[1]));
                assert!(s.iter().all(|&x| x < n));
            }
        }
    }
}
