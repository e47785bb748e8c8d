//! Core RBAC entities: permissions, users, roles, the UA/PA/RH relations,
//! sessions, and the hierarchy-aware assignment functions built on them.
//!
//! Seniors inherit the permissions of their juniors, and users assigned to a
//! senior role are authorized for every junior. Closures are computed once at
//! build time; the model is immutable afterwards.

use std::collections::HashMap;

use petgraph::algo::{tarjan_scc, toposort};
use petgraph::graph::{DiGraph, NodeIndex};

use crate::decl::{ModelDocument, Statement};
use crate::error::{Diagnostics, EntityKind, Error, Result, Span};
use crate::ids::{Names, ObjectId, PermId, RoleId, SessionId, UserId};

/// Which way to walk the role hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Seniors,
    Juniors,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permission {
    pub object: ObjectId,
    pub operation: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Session {
    pub user: UserId,
    pub active_roles: Vec<RoleId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RbacModel {
    perm_names: Names,
    perms: Vec<Permission>,
    objects: Names,
    user_names: Names,
    role_names: Names,
    session_names: Names,
    sessions: Vec<Session>,

    user_roles: Vec<Vec<RoleId>>,
    role_users: Vec<Vec<UserId>>,
    role_perms: Vec<Vec<PermId>>,
    rh_edges: Vec<(RoleId, RoleId)>,

    juniors: Vec<Vec<RoleId>>,
    seniors: Vec<Vec<RoleId>>,
    auth_perms: Vec<Vec<PermId>>,
    auth_users: Vec<Vec<UserId>>,
}

fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort_unstable();
    v.dedup();
    v
}

impl RbacModel {
    /// Builds and validates the RBAC part of a document; activity statements
    /// are ignored here.
    pub fn build(doc: &ModelDocument) -> Result<RbacModel, Diagnostics> {
        let mut diags = Diagnostics::default();

        let mut perm_decl: Vec<(&str, &str, &str, Span)> = Vec::new();
        let mut user_decl: Vec<(&str, Span)> = Vec::new();
        let mut role_decl: Vec<(&str, Span)> = Vec::new();
        let mut session_decl: Vec<(&str, &str, &[String], Span)> = Vec::new();
        for (span, st) in doc.iter() {
            match st {
                Statement::Perm {
                    id,
                    object,
                    operation,
                } => perm_decl.push((id, object, operation, *span)),
                Statement::User { id } => user_decl.push((id, *span)),
                Statement::Role { id } => role_decl.push((id, *span)),
                Statement::Session { id, user, roles } => {
                    session_decl.push((id, user, roles, *span))
                }
                _ => {}
            }
        }

        check_unique(
            EntityKind::Permission,
            perm_decl.iter().map(|p| (p.0, p.3)),
            &mut diags,
        );
        check_unique(EntityKind::User, user_decl.iter().copied(), &mut diags);
        check_unique(EntityKind::Role, role_decl.iter().copied(), &mut diags);
        check_unique(
            EntityKind::Session,
            session_decl.iter().map(|s| (s.0, s.3)),
            &mut diags,
        );

        let mut bindings: HashMap<(&str, &str), &str> = HashMap::new();
        for &(id, object, operation, span) in &perm_decl {
            if let Some(first) = bindings.insert((object, operation), id) {
                if first != id {
                    diags.push(
                        span,
                        Error::DuplicateBinding {
                            first: first.to_string(),
                            second: id.to_string(),
                        },
                    );
                }
            }
        }

        let perm_names = Names::from_unsorted(perm_decl.iter().map(|p| p.0));
        let objects = Names::from_unsorted(perm_decl.iter().map(|p| p.1));
        let user_names = Names::from_unsorted(user_decl.iter().map(|u| u.0));
        let role_names = Names::from_unsorted(role_decl.iter().map(|r| r.0));
        let session_names = Names::from_unsorted(session_decl.iter().map(|s| s.0));

        let mut perms = vec![
            Permission {
                object: ObjectId(0),
                operation: String::new()
            };
            perm_names.len()
        ];
        for &(id, object, operation, _) in &perm_decl {
            let p = perm_names.get(id).unwrap();
            perms[p] = Permission {
                object: ObjectId::from(objects.get(object).unwrap()),
                operation: operation.to_string(),
            };
        }

        let resolve = |names: &Names, kind: EntityKind, id: &str, span: Span, diags: &mut Diagnostics| {
            let r = names.get(id);
            if r.is_none() {
                diags.push(
                    span,
                    Error::DanglingReference {
                        kind,
                        id: id.to_string(),
                    },
                );
            }
            r
        };

        let mut user_roles = vec![Vec::new(); user_names.len()];
        let mut role_users = vec![Vec::new(); role_names.len()];
        let mut role_perms = vec![Vec::new(); role_names.len()];
        let mut rh_edges = Vec::new();
        for (span, st) in doc.iter() {
            match st {
                Statement::UserRole { user, role } => {
                    let u = resolve(&user_names, EntityKind::User, user, *span, &mut diags);
                    let r = resolve(&role_names, EntityKind::Role, role, *span, &mut diags);
                    if let (Some(u), Some(r)) = (u, r) {
                        user_roles[u].push(RoleId::from(r));
                        role_users[r].push(UserId::from(u));
                    }
                }
                Statement::RolePerm { role, perm } => {
                    let r = resolve(&role_names, EntityKind::Role, role, *span, &mut diags);
                    let p = resolve(&perm_names, EntityKind::Permission, perm, *span, &mut diags);
                    if let (Some(r), Some(p)) = (r, p) {
                        role_perms[r].push(PermId::from(p));
                    }
                }
                Statement::Hierarchy { senior, junior } => {
                    let s = resolve(&role_names, EntityKind::Role, senior, *span, &mut diags);
                    let j = resolve(&role_names, EntityKind::Role, junior, *span, &mut diags);
                    if let (Some(s), Some(j)) = (s, j) {
                        rh_edges.push((RoleId::from(s), RoleId::from(j)));
                    }
                }
                _ => {}
            }
        }

        let mut sessions = vec![
            Session {
                user: UserId(0),
                active_roles: Vec::new()
            };
            session_names.len()
        ];
        for &(id, user, roles, span) in &session_decl {
            let u = resolve(&user_names, EntityKind::User, user, span, &mut diags);
            let mut active = Vec::new();
            for r in roles {
                if let Some(r) = resolve(&role_names, EntityKind::Role, r, span, &mut diags) {
                    active.push(RoleId::from(r));
                }
            }
            if let Some(u) = u {
                sessions[session_names.get(id).unwrap()] = Session {
                    user: UserId::from(u),
                    active_roles: sorted(active),
                };
            }
        }

        let user_roles: Vec<_> = user_roles.into_iter().map(sorted).collect();
        let role_users: Vec<_> = role_users.into_iter().map(sorted).collect();
        let role_perms: Vec<_> = role_perms.into_iter().map(sorted).collect();
        let rh_edges = sorted(rh_edges);

        if !diags.is_empty() {
            return Err(diags);
        }

        let order = match hierarchy_order(role_names.len(), &rh_edges) {
            Ok(order) => order,
            Err(cycles) => {
                for cycle in cycles {
                    let span = rh_span(doc, &role_names, &cycle);
                    let names = cycle
                        .iter()
                        .map(|r| role_names.name(r.index()).to_string())
                        .collect();
                    diags.push(span, Error::CycleInHierarchy(names));
                }
                return Err(diags);
            }
        };

        let n = role_names.len();
        let mut juniors_direct = vec![Vec::new(); n];
        let mut seniors_direct = vec![Vec::new(); n];
        for &(s, j) in &rh_edges {
            juniors_direct[s.index()].push(j);
            seniors_direct[j.index()].push(s);
        }

        // `order` lists seniors before juniors.
        let mut juniors: Vec<Vec<RoleId>> = vec![Vec::new(); n];
        for &r in order.iter().rev() {
            let mut acc = vec![r];
            for &j in &juniors_direct[r.index()] {
                acc.extend_from_slice(&juniors[j.index()]);
            }
            juniors[r.index()] = sorted(acc);
        }
        let mut seniors: Vec<Vec<RoleId>> = vec![Vec::new(); n];
        for &r in order.iter() {
            let mut acc = vec![r];
            for &s in &seniors_direct[r.index()] {
                acc.extend_from_slice(&seniors[s.index()]);
            }
            seniors[r.index()] = sorted(acc);
        }

        let auth_perms = juniors
            .iter()
            .map(|js| sorted(js.iter().flat_map(|j| role_perms[j.index()].iter().copied()).collect()))
            .collect();
        let auth_users = seniors
            .iter()
            .map(|ss| sorted(ss.iter().flat_map(|s| role_users[s.index()].iter().copied()).collect()))
            .collect();

        Ok(RbacModel {
            perm_names,
            perms,
            objects,
            user_names,
            role_names,
            session_names,
            sessions,
            user_roles,
            role_users,
            role_perms,
            rh_edges,
            juniors,
            seniors,
            auth_perms,
            auth_users,
        })
    }

    pub fn permission_count(&self) -> usize {
        self.perm_names.len()
    }

    pub fn user_count(&self) -> usize {
        self.user_names.len()
    }

    pub fn role_count(&self) -> usize {
        self.role_names.len()
    }

    pub fn session_count(&self) -> usize {
        self.session_names.len()
    }

    pub fn hierarchy_edges(&self) -> &[(RoleId, RoleId)] {
        &self.rh_edges
    }

    pub fn permission_id(&self, name: &str) -> Result<PermId> {
        self.perm_names
            .get(name)
            .map(PermId::from)
            .ok_or_else(|| Error::UnknownPermission(name.to_string()))
    }

    pub fn user_id(&self, name: &str) -> Result<UserId> {
        self.user_names
            .get(name)
            .map(UserId::from)
            .ok_or_else(|| Error::UnknownUser(name.to_string()))
    }

    pub fn role_id(&self, name: &str) -> Result<RoleId> {
        self.role_names
            .get(name)
            .map(RoleId::from)
            .ok_or_else(|| Error::UnknownRole(name.to_string()))
    }

    pub fn session_id(&self, name: &str) -> Result<SessionId> {
        self.session_names
            .get(name)
            .map(SessionId::from)
            .ok_or_else(|| Error::UnknownSession(name.to_string()))
    }

    pub fn permission_name(&self, p: PermId) -> &str {
        self.perm_names.name(p.index())
    }

    pub fn user_name(&self, u: UserId) -> &str {
        self.user_names.name(u.index())
    }

    pub fn role_name(&self, r: RoleId) -> &str {
        self.role_names.name(r.index())
    }

    pub fn session_name(&self, s: SessionId) -> &str {
        self.session_names.name(s.index())
    }

    pub fn object_name(&self, o: ObjectId) -> &str {
        self.objects.name(o.index())
    }

    pub fn object_id(&self, name: &str) -> Option<ObjectId> {
        self.objects.get(name).map(ObjectId::from)
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn permission(&self, p: PermId) -> &Permission {
        &self.perms[p.index()]
    }

    pub fn permissions(&self) -> impl Iterator<Item = PermId> {
        (0..self.perm_names.len()).map(PermId::from)
    }

    pub fn users(&self) -> impl Iterator<Item = UserId> {
        (0..self.user_names.len()).map(UserId::from)
    }

    pub fn roles(&self) -> impl Iterator<Item = RoleId> {
        (0..self.role_names.len()).map(RoleId::from)
    }

    pub fn sessions(&self) -> impl Iterator<Item = SessionId> {
        (0..self.session_names.len()).map(SessionId::from)
    }

    pub fn session(&self, s: SessionId) -> &Session {
        &self.sessions[s.index()]
    }

    /// Roles directly assigned to `u` (UA rows).
    pub fn user_roles(&self, u: UserId) -> &[RoleId] {
        &self.user_roles[u.index()]
    }

    /// Reflexive-transitive closure of the hierarchy from `r`, sorted.
    pub fn hierarchy_closure(&self, r: RoleId, direction: Direction) -> &[RoleId] {
        match direction {
            Direction::Juniors => &self.juniors[r.index()],
            Direction::Seniors => &self.seniors[r.index()],
        }
    }

    /// assperms (`effective == false`) or authperms (`effective == true`).
    pub fn role_permissions(&self, r: RoleId, effective: bool) -> &[PermId] {
        if effective {
            &self.auth_perms[r.index()]
        } else {
            &self.role_perms[r.index()]
        }
    }

    /// assusers (`effective == false`) or authusers (`effective == true`).
    pub fn role_users(&self, r: RoleId, effective: bool) -> &[UserId] {
        if effective {
            &self.auth_users[r.index()]
        } else {
            &self.role_users[r.index()]
        }
    }

    /// Permissions reachable by `u` through its role assignments, sorted.
    pub fn user_permissions(&self, u: UserId, effective: bool) -> Vec<PermId> {
        self.union_permissions(self.user_roles(u).iter().copied(), effective)
    }

    /// Permissions of a session's active roles. Every active role must be
    /// assigned to the session user: directly, or also through a senior role
    /// when `effective` is set.
    pub fn session_permissions(&self, s: SessionId, effective: bool) -> Result<Vec<PermId>> {
        let session = self.session(s);
        self.check_activation(s, session.user, &session.active_roles, effective)?;
        Ok(self.union_permissions(session.active_roles.iter().copied(), effective))
    }

    pub(crate) fn check_activation(
        &self,
        s: SessionId,
        user: UserId,
        roles: &[RoleId],
        effective: bool,
    ) -> Result<()> {
        for &r in roles {
            if !self.is_authorized(user, r, effective) {
                return Err(Error::InactiveRoleNotAssigned {
                    session: self.session_name(s).to_string(),
                    role: self.role_name(r).to_string(),
                });
            }
        }
        Ok(())
    }

    /// Whether `u` may hold `r`: assigned directly, or (effective) through a senior.
    pub fn is_authorized(&self, u: UserId, r: RoleId, effective: bool) -> bool {
        if effective {
            self.auth_users[r.index()].binary_search(&u).is_ok()
        } else {
            self.user_roles[u.index()].binary_search(&r).is_ok()
        }
    }

    /// Sorted union of role permissions over `roles`.
    pub fn union_permissions(
        &self,
        roles: impl IntoIterator<Item = RoleId>,
        effective: bool,
    ) -> Vec<PermId> {
        sorted(
            roles
                .into_iter()
                .flat_map(|r| self.role_permissions(r, effective).iter().copied())
                .collect(),
        )
    }
}

fn check_unique<'a>(
    kind: EntityKind,
    ids: impl Iterator<Item = (&'a str, Span)>,
    diags: &mut Diagnostics,
) {
    let mut seen = std::collections::HashSet::new();
    for (id, span) in ids {
        if !seen.insert(id) {
            diags.push(
                span,
                Error::DuplicateId {
                    kind,
                    id: id.to_string(),
                },
            );
        }
    }
}

/// Topological order of roles (seniors first), or the cycles when RH is not
/// acyclic. Each cycle is a sorted list of roles.
fn hierarchy_order(
    n: usize,
    edges: &[(RoleId, RoleId)],
) -> std::result::Result<Vec<RoleId>, Vec<Vec<RoleId>>> {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(n, edges.len());
    for _ in 0..n {
        g.add_node(());
    }
    for &(s, j) in edges {
        g.add_edge(NodeIndex::new(s.index()), NodeIndex::new(j.index()), ());
    }
    match toposort(&g, None) {
        Ok(order) => Ok(order.into_iter().map(|i| RoleId::from(i.index())).collect()),
        Err(_) => Err(cycles_of(&g)
            .into_iter()
            .map(|c| c.into_iter().map(RoleId::from).collect())
            .collect()),
    }
}

/// Node sets of the non-trivial strongly connected components, each sorted.
pub(crate) fn cycles_of<N, E>(g: &DiGraph<N, E>) -> Vec<Vec<usize>> {
    let mut cycles: Vec<Vec<usize>> = tarjan_scc(g)
        .into_iter()
        .filter(|scc| scc.len() > 1 || g.contains_edge(scc[0], scc[0]))
        .map(|scc| sorted(scc.into_iter().map(|i| i.index()).collect()))
        .collect();
    cycles.sort();
    cycles
}

fn rh_span(doc: &ModelDocument, names: &Names, cycle: &[RoleId]) -> Span {
    doc.iter()
        .find_map(|(span, st)| match st {
            Statement::Hierarchy { senior, .. }
                if names
                    .get(senior)
                    .is_some_and(|s| cycle.contains(&RoleId::from(s))) =>
            {
                Some(*span)
            }
            _ => None,
        })
        .unwrap_or(Span::UNKNOWN)
}
