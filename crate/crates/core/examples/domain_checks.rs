//! Domain-aware checks: a conflict only counts when the groupings involved
//! operate on a shared SoD domain, and the witness names those domains.

use activity_sod::testkit::fixtures;
use activity_sod::{Mode, WitnessPolicy};

fn main() {
    let policy = fixtures::fig1_policy();
    let rbac = policy.rbac();
    let act = policy.activities();

    for p in ["p1", "p6", "p8"] {
        let id = rbac.permission_id(p).unwrap();
        let ds: Vec<&str> = act.perm_domains(id).iter().map(|&d| act.domains().name(d)).collect();
        println!("{p} operates in {ds:?}");
    }

    for set in [&["r2", "r5", "r8"][..], &["r5", "r6", "r8"], &["r5", "r7", "r8"]] {
        let ids: Vec<_> = set.iter().map(|r| rbac.role_id(r).unwrap()).collect();
        let plain = policy.check_role_set(&ids, Mode::new(true, false));
        let scoped = policy.check_role_set(&ids, Mode::new(true, true));
        println!("{set:?}: plain {}, domain mode {}", plain.conflicting, scoped.conflicting);
        for w in &scoped.witnesses {
            let ds: Vec<&str> = w.domain_witness.iter().flatten().map(|&d| act.domains().name(d)).collect();
            let gs: Vec<String> = w
                .chosen_groupings
                .iter()
                .map(|(&a, &g)| format!("{}:{}", act.activity_name(a), act.grouping_name(g)))
                .collect();
            println!("  within {ds:?} using {gs:?}");
        }
    }

    // every way the triple reaches the threshold, not just the first
    let ids: Vec<_> = ["r2", "r5", "r8"].iter().map(|r| rbac.role_id(r).unwrap()).collect();
    let perms = rbac.union_permissions(ids, true);
    let all = policy.check_perm_set_with(&perms, true, WitnessPolicy::Exhaustive { limit: 100 });
    println!("{{r2,r5,r8}} has {} domain-mode witnesses", all.witnesses.len());
}
