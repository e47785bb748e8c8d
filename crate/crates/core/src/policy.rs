use crate::activity::{ActivityModel, Warning};
use crate::decl::{ModelDocument, Statement};
use crate::engine::coverage::GroupingIndex;
use crate::error::Diagnostics;
use crate::rbac::RbacModel;

/// A fully validated policy: the RBAC model, the activity model on top of it,
/// and the lookup tables the analysis engine needs. Immutable once built and
/// safe to share between threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Policy {
    rbac: RbacModel,
    activities: ActivityModel,
    index: GroupingIndex,
    warnings: Vec<Warning>,
}

impl Policy {
    pub fn from_document(doc: &ModelDocument) -> Result<Policy, Diagnostics> {
        let rbac = RbacModel::build(doc)?;
        let (activities, warnings) = ActivityModel::build(doc, &rbac)?;
        let index = GroupingIndex::build(&rbac, &activities);
        Ok(Policy {
            rbac,
            activities,
            index,
            warnings,
        })
    }

    pub fn rbac(&self) -> &RbacModel {
        &self.rbac
    }

    pub fn activities(&self) -> &ActivityModel {
        &self.activities
    }

    pub(crate) fn index(&self) -> &GroupingIndex {
        &self.index
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    /// Canonical statement list: kinds in grammar order, each kind sorted by
    /// identifier, constraints kept in declaration order, no synthetic root.
    pub fn to_document(&self) -> ModelDocument {
        let rbac = &self.rbac;
        let act = &self.activities;
        let tree = act.tree();
        let mut doc = ModelDocument::new();

        for p in rbac.permissions() {
            let perm = rbac.permission(p);
            doc.push(Statement::Perm {
                id: rbac.permission_name(p).to_string(),
                object: rbac.object_name(perm.object).to_string(),
                operation: perm.operation.clone(),
            });
        }
        for u in rbac.users() {
            doc.push(Statement::User {
                id: rbac.user_name(u).to_string(),
            });
        }
        for r in rbac.roles() {
            doc.push(Statement::Role {
                id: rbac.role_name(r).to_string(),
            });
        }
        for u in rbac.users() {
            for &r in rbac.user_roles(u) {
                doc.push(Statement::UserRole {
                    user: rbac.user_name(u).to_string(),
                    role: rbac.role_name(r).to_string(),
                });
            }
        }
        for r in rbac.roles() {
            for &p in rbac.role_permissions(r, false) {
                doc.push(Statement::RolePerm {
                    role: rbac.role_name(r).to_string(),
                    perm: rbac.permission_name(p).to_string(),
                });
            }
        }
        for &(s, j) in rbac.hierarchy_edges() {
            doc.push(Statement::Hierarchy {
                senior: rbac.role_name(s).to_string(),
                junior: rbac.role_name(j).to_string(),
            });
        }
        for a in tree.activities() {
            if tree.is_synthetic(a) {
                continue;
            }
            let parent = tree
                .parent(a)
                .filter(|&p| !tree.is_synthetic(p))
                .map(|p| tree.name(p).to_string());
            doc.push(Statement::Activity {
                id: tree.name(a).to_string(),
                parent,
            });
        }
        for g in act.groupings() {
            let grouping = act.grouping(g);
            doc.push(Statement::Grouping {
                id: act.grouping_name(g).to_string(),
                activity: tree.name(grouping.activity).to_string(),
                perms: grouping
                    .perms
                    .iter()
                    .map(|&p| rbac.permission_name(p).to_string())
                    .collect(),
            });
        }
        let domains = act.domains();
        for d in domains.domains() {
            doc.push(Statement::Domain {
                id: domains.name(d).to_string(),
                objects: domains.domain(d).objects.clone(),
            });
        }
        for c in act.constraints() {
            doc.push(Statement::Sod {
                threshold: c.threshold,
                activities: c.activities.iter().map(|&a| tree.name(a).to_string()).collect(),
            });
        }
        for s in rbac.sessions() {
            let session = rbac.session(s);
            doc.push(Statement::Session {
                id: rbac.session_name(s).to_string(),
                user: rbac.user_name(session.user).to_string(),
                roles: session
                    .active_roles
                    .iter()
                    .map(|&r| rbac.role_name(r).to_string())
                    .collect(),
            });
        }
        doc
    }
}
