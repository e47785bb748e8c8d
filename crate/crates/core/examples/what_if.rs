//! Evaluates administrative changes before making them.

use activity_sod::testkit::fixtures;
use activity_sod::{Mode, Mutation};

fn main() {
    let policy = fixtures::fig1_policy_with("user u1\nua u1 r2\nua u1 r8\nsession s1 u1 r2");
    let changes = [
        Mutation::AssignUserToRole { user: "u1".into(), role: "r5".into() },
        Mutation::AssignUserToRole { user: "u1".into(), role: "r2".into() },
        Mutation::ActivateRoleInSession { session: "s1".into(), role: "r8".into() },
    ];
    for change in &changes {
        let outcome = policy.whatif(change, Mode::default()).unwrap();
        println!(
            "{change:?}: before {}, after {}, {} new witnesses",
            outcome.before.conflicting,
            outcome.after.conflicting,
            outcome.introduced.len()
        );
    }
    let bad = Mutation::AssignUserToRole { user: "nobody".into(), role: "r5".into() };
    println!("{:?}", policy.whatif(&bad, Mode::default()).unwrap_err());
}
