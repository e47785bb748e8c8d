//! Cross-checks engine verdicts against the brute-force reference checker on
//! a few small generated policies.

use activity_sod::testkit::{generate_instance, GeneratorParams, Oracle, Target};
use activity_sod::{Mode, Policy, WitnessPolicy};

fn main() {
    let mut agreed = 0;
    for seed in 0..20 {
        let instance = generate_instance(&GeneratorParams::small(seed)).unwrap();
        let policy = Policy::from_document(&instance.document).unwrap();
        let oracle = Oracle::new(&instance.document);
        let rbac = policy.rbac();
        for r in rbac.roles() {
            for domains in [false, true] {
                let name = rbac.role_name(r).to_string();
                let expected = oracle.check(&Target::Roles(vec![name]), true, domains).unwrap();
                let perms = rbac.role_permissions(r, true);
                let got = policy.check_perm_set_with(perms, domains, WitnessPolicy::Exhaustive { limit: 10_000 });
                assert!(expected.matches_exhaustive(&policy, &got));
                assert_eq!(policy.check_role_set(&[r], Mode::new(true, domains)).conflicting, expected.conflicting);
                agreed += 1;
            }
        }
    }
    println!("{agreed} role verdicts agree with the reference checker");
}
