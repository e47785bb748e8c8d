use std::fmt::Write as _;

use crate::decl::{ModelDocument, Statement};
use crate::error::Diagnostics;
use crate::policy::Policy;

/// Writes statements in document order, one per line.
pub fn write_document(doc: &ModelDocument) -> String {
    let mut out = String::new();
    for (_, s) in doc.iter() {
        write_statement(&mut out, s);
        out.push('\n');
    }
    out
}

fn write_statement(out: &mut String, s: &Statement) {
    // writing into a String cannot fail
    let _ = match s {
        Statement::Perm { id, object, operation } => write!(out, "perm {id} {object} {operation}"),
        Statement::User { id } => write!(out, "user {id}"),
        Statement::Role { id } => write!(out, "role {id}"),
        Statement::UserRole { user, role } => write!(out, "ua {user} {role}"),
        Statement::RolePerm { role, perm } => write!(out, "pa {role} {perm}"),
        Statement::Hierarchy { senior, junior } => write!(out, "rh {senior} {junior}"),
        Statement::Activity { id, parent: None } => write!(out, "activity {id}"),
        Statement::Activity { id, parent: Some(p) } => write!(out, "activity {id} {p}"),
        Statement::Grouping { id, activity, perms } => {
            write!(out, "grouping {id} {activity} {}", perms.join(","))
        }
        Statement::Domain { id, objects } => write!(out, "domain {id} {}", objects.join(",")),
        Statement::Sod { threshold, activities } => {
            write!(out, "sod {threshold} {}", activities.join(","))
        }
        Statement::Session { id, user, roles } if roles.is_empty() => {
            write!(out, "session {id} {user}")
        }
        Statement::Session { id, user, roles } => {
            write!(out, "session {id} {user} {}", roles.join(","))
        }
    };
}

/// Canonical text of a validated policy. Serializing, parsing and
/// serializing again yields the same bytes.
pub fn serialize_model(policy: &Policy) -> String {
    write_document(&policy.to_document())
}

/// Parses and validates a document in one step.
pub fn load_policy(text: &str) -> Result<Policy, Diagnostics> {
    Policy::from_document(&super::parse_model(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_model;
    use crate::testkit::fixtures::FIG1_TEXT;

    #[test]
    fn empty_model_serializes_to_nothing() {
        assert_eq!(serialize_model(&load_policy("").unwrap()), "");
    }

    #[test]
    fn fig1_is_a_fixpoint_after_one_pass() {
        let first = serialize_model(&load_policy(FIG1_TEXT).unwrap());
        let second = serialize_model(&load_policy(&first).unwrap());
        assert_eq!(first, second);
        assert_eq!(
            load_policy(&first).unwrap(),
            load_policy(FIG1_TEXT).unwrap()
        );
    }

    #[test]
    fn unsorted_input_comes_out_sorted() {
        let text = "role zeta\nrole alpha\nperm p2 o op\nperm p1 o2 op\nrole mid\nactivity b\nactivity a b\n";
        let out = serialize_model(&load_policy(text).unwrap());
        assert_eq!(
            out,
            "perm p1 o2 op\nperm p2 o op\nrole alpha\nrole mid\nrole zeta\nactivity a b\nactivity b\n"
        );
    }

    #[test]
    fn write_document_keeps_order_and_reparses() {
        let text = "sod 2 a,b\nactivity b\nactivity a\nsession s u\nuser u\n";
        let doc = parse_model(text).unwrap();
        assert_eq!(write_document(&doc), text);
    }
}
