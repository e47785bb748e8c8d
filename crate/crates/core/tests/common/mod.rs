#![allow(dead_code)]

use std::collections::BTreeSet;

use activity_sod::ids::{PermId, RoleId, UserId};
use activity_sod::testkit::{generate_instance, GeneratedInstance, GeneratorParams};
use activity_sod::Policy;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

pub mod criteria;

/// Test-side random source, independent of the generator's stream.
pub struct Rng(Xoshiro256PlusPlus);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(Xoshiro256PlusPlus::seed_from_u64(seed ^ 0x5eed_cafe))
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.0.next_u64() % n as u64) as usize
    }

    pub fn between(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }

    pub fn coin(&mut self) -> bool {
        self.0.next_u64() & 1 == 1
    }

    /// Up to `k` distinct values from `0..n`, sorted.
    pub fn subset(&mut self, k: usize, n: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = (0..k).map(|_| self.below(n.max(1))).filter(|&i| i < n).collect();
        set.into_iter().collect()
    }
}

/// Small instance parameters that vary with the seed and stay within the
/// reference checker's bounds.
pub fn small_params(seed: u64) -> GeneratorParams {
    let mut r = Rng::new(seed);
    let mut p = GeneratorParams::small(seed);
    p.permissions = r.between(8, 15);
    p.roles = r.between(4, 10);
    p.users = r.between(2, 8);
    p.activities = r.between(5, 12);
    p.groupings = r.between(4, 12);
    p.domains = r.between(0, 4);
    p.constraints = r.between(1, 3);
    p.sessions = r.between(0, 4);
    p.activities_per_constraint = (2, r.between(2, 4));
    p.max_threshold = r.between(2, 4);
    p.pa_per_role = (0, r.between(1, 4));
    p.grouping_size = (1, r.between(1, 3));
    p.rh_edge_probability = [0.0, 0.3, 0.6][r.below(3)];
    p.cross_domain_probability = [0.0, 0.3][r.below(2)];
    p.objects_per_domain = if r.coin() { None } else { Some(r.between(1, 4)) };
    p.plant_conflicts = if p.domains > 0 && r.below(4) == 0 { 1 } else { 0 };
    p
}

/// A valid small instance; parameter draws the generator rejects are
/// redrawn from the next seed.
pub fn small_instance(seed: u64) -> (GeneratedInstance, Policy) {
    let mut s = seed;
    loop {
        if let Ok(inst) = generate_instance(&small_params(s)) {
            let policy = Policy::from_document(&inst.document).expect("generated documents are valid");
            return (inst, policy);
        }
        s = s.wrapping_add(1_000_003);
    }
}

pub fn all_roles(policy: &Policy) -> Vec<RoleId> {
    policy.rbac().roles().collect()
}

pub fn all_users(policy: &Policy) -> Vec<UserId> {
    policy.rbac().users().collect()
}

pub fn all_perms(policy: &Policy) -> Vec<PermId> {
    policy.rbac().permissions().collect()
}

pub fn pick<T: Copy>(r: &mut Rng, items: &[T], max: usize) -> Vec<T> {
    if items.is_empty() {
        return Vec::new();
    }
    let k = r.between(0, max);
    r.subset(k, items.len()).into_iter().map(|i| items[i]).collect()
}
