//! Walks through the bundled nine-role example: hierarchy closures, the
//! activity tree, groupings, and static checks on role sets.

use activity_sod::activity::TreeDirection;
use activity_sod::rbac::Direction;
use activity_sod::testkit::fixtures;
use activity_sod::Mode;

fn main() {
    let policy = fixtures::fig1_policy();
    let rbac = policy.rbac();
    let act = policy.activities();

    let r9 = rbac.role_id("r9").unwrap();
    let juniors: Vec<&str> = rbac
        .hierarchy_closure(r9, Direction::Juniors)
        .iter()
        .map(|&r| rbac.role_name(r))
        .collect();
    println!("r9 inherits from {juniors:?}");
    let perms: Vec<&str> = rbac.role_permissions(r9, true).iter().map(|&p| rbac.permission_name(p)).collect();
    println!("r9 holds {perms:?}");

    let tree = act.tree();
    let a9 = act.activity_id("a9").unwrap();
    let below: Vec<&str> = tree
        .closure(a9, TreeDirection::Descendants)
        .into_iter()
        .map(|a| tree.name(a))
        .collect();
    println!("a9 and its sub-activities: {below:?}");
    for name in ["a2", "a9"] {
        let a = act.activity_id(name).unwrap();
        let gs: Vec<&str> = act.groupings_star(a).into_iter().map(|g| act.grouping_name(g)).collect();
        println!("{name} can be performed through {gs:?}");
    }

    for set in [&["r2", "r5", "r8"][..], &["r5", "r9"], &["r1", "r3"]] {
        let ids: Vec<_> = set.iter().map(|r| rbac.role_id(r).unwrap()).collect();
        let verdict = policy.check_role_set(&ids, Mode::default());
        print!("{set:?}: ");
        match verdict.first() {
            Some(w) => {
                let acts: Vec<&str> = w.activity_subset.iter().map(|&a| act.activity_name(a)).collect();
                println!("conflicting on constraint {} via {acts:?}", w.constraint);
            }
            None => println!("clear"),
        }
    }
}
