//! Dynamic separation of duty: only the roles a session activates count.

use activity_sod::testkit::fixtures;
use activity_sod::{Mode, Policy};

fn main() {
    let policy = Policy::from_document(&fixtures::fig1_sessions_document()).unwrap();
    let rbac = policy.rbac();
    let u1 = rbac.user_id("u1").unwrap();
    println!(
        "u1 holding all assigned roles at once: {}",
        policy.check_user_set(&[u1], Mode::default()).conflicting
    );
    for s in rbac.sessions() {
        let session = rbac.session(s);
        let active: Vec<&str> = session.active_roles.iter().map(|&r| rbac.role_name(r)).collect();
        let verdict = policy.check_session(s, Mode::default()).unwrap();
        println!(
            "session {} activates {active:?}: {}",
            rbac.session_name(s),
            if verdict.conflicting { "conflicting" } else { "clear" }
        );
    }
}
