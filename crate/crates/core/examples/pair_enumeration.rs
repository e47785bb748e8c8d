//! Illegal entities and conflicting pairs, the two bulk scans behind a
//! full analysis.

use activity_sod::engine::{PairKind, PairQuery};
use activity_sod::io::load_policy;
use activity_sod::testkit::fixtures::FIG1_TEXT;
use activity_sod::Mode;

fn main() {
    let text = FIG1_TEXT.replace("sod 3 a2,a4,a10", "sod 2 a2,a4");
    let policy = load_policy(&text).unwrap();
    let rbac = policy.rbac();
    let mode = Mode::default();

    let illegal: Vec<&str> = policy.illegal_roles(mode).iter().map(|&r| rbac.role_name(r)).collect();
    println!("illegal roles: {illegal:?}");

    for discard in [true, false] {
        let query = PairQuery { discard_illegal: discard, ..PairQuery::new(PairKind::Roles, mode) };
        let found = policy.enumerate_conflicting_pairs(&query);
        let pairs: Vec<String> = found
            .pairs
            .unwrap()
            .iter()
            .map(|&(x, y)| format!("{}-{}", rbac.role_name((x as usize).into()), rbac.role_name((y as usize).into())))
            .collect();
        println!("discard illegal {discard}: {} pairs {pairs:?}", found.count);
    }

    let perms = policy.enumerate_conflicting_pairs(&PairQuery::new(PairKind::Permissions, mode));
    println!("conflicting permission pairs: {}", perms.count);
}
