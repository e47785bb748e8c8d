//! Business activities, their generalization tree, permission groupings,
//! SoD domains and the constraint list.
//!
//! An activity is performed by anyone holding every permission of at least
//! one grouping attached to it or to one of its descendants. Performing a
//! specialized activity therefore also performs all of its ancestors.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use petgraph::graph::{DiGraph, NodeIndex};

use crate::decl::{ModelDocument, Statement};
use crate::error::{Diagnostics, EntityKind, Error, Result, Span};
use crate::ids::{ActivityId, ActivitySet, ConstraintId, DomainId, GroupingId, Names, PermId};
use crate::rbac::{cycles_of, RbacModel};

/// Id given to the synthetic root inserted when the forest has several roots.
pub const SYNTHETIC_ROOT: &str = "__root__";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeDirection {
    Ancestors,
    Descendants,
}

/// One `activity` declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivityDecl {
    pub id: String,
    pub parent: Option<String>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivityTree {
    names: Names,
    parent: Vec<Option<ActivityId>>,
    children: Vec<Vec<ActivityId>>,
    root: Option<ActivityId>,
    synthetic_root: bool,
    ancestors: Vec<Vec<ActivityId>>,
    ancestor_masks: Vec<ActivitySet>,
}

impl ActivityTree {
    /// Validates a forest of activities and turns it into a single-rooted
    /// tree. A forest with several parentless activities gets a synthetic
    /// root (`__root__`) above them.
    pub fn from_forest(decls: &[ActivityDecl]) -> Result<ActivityTree, Diagnostics> {
        let mut diags = Diagnostics::default();
        let mut seen = HashSet::new();
        for d in decls {
            if d.id == SYNTHETIC_ROOT || d.parent.as_deref() == Some(SYNTHETIC_ROOT) {
                diags.push(d.span, Error::ReservedId(SYNTHETIC_ROOT.to_string()));
            }
            if !seen.insert(d.id.as_str()) {
                diags.push(
                    d.span,
                    Error::DuplicateId {
                        kind: EntityKind::Activity,
                        id: d.id.clone(),
                    },
                );
            }
        }
        for d in decls {
            if let Some(p) = &d.parent {
                if p != SYNTHETIC_ROOT && !seen.contains(p.as_str()) {
                    diags.push(
                        d.span,
                        Error::UnknownParent {
                            activity: d.id.clone(),
                            parent: p.clone(),
                        },
                    );
                }
            }
        }
        if !diags.is_empty() {
            return Err(diags);
        }

        let roots = decls.iter().filter(|d| d.parent.is_none()).count();
        let synthetic_root = roots != 1 && !decls.is_empty();
        let names = Names::from_unsorted(
            decls
                .iter()
                .map(|d| d.id.as_str())
                .chain(synthetic_root.then_some(SYNTHETIC_ROOT)),
        );
        let n = names.len();
        let mut parent: Vec<Option<ActivityId>> = vec![None; n];
        for d in decls {
            let a = names.get(&d.id).unwrap();
            parent[a] = d.parent.as_ref().map(|p| ActivityId::from(names.get(p).unwrap()));
        }

        let mut g: DiGraph<(), ()> = DiGraph::with_capacity(n, n);
        for _ in 0..n {
            g.add_node(());
        }
        for (c, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                g.add_edge(NodeIndex::new(c), NodeIndex::new(p.index()), ());
            }
        }
        let cycles = cycles_of(&g);
        if !cycles.is_empty() {
            for cycle in cycles {
                let first = names.name(cycle[0]);
                let span = decls
                    .iter()
                    .find(|d| d.id == first)
                    .map_or(Span::UNKNOWN, |d| d.span);
                diags.push(
                    span,
                    Error::CycleInActivities(
                        cycle.iter().map(|&i| names.name(i).to_string()).collect(),
                    ),
                );
            }
            return Err(diags);
        }

        let root = if synthetic_root {
            let r = ActivityId::from(names.get(SYNTHETIC_ROOT).unwrap());
            for (a, p) in parent.iter_mut().enumerate() {
                if p.is_none() && a != r.index() {
                    *p = Some(r);
                }
            }
            Some(r)
        } else {
            parent.iter().position(Option::is_none).map(ActivityId::from)
        };

        let mut children = vec![Vec::new(); n];
        for (c, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                children[p.index()].push(ActivityId::from(c));
            }
        }

        let mut ancestors = Vec::with_capacity(n);
        let mut ancestor_masks = Vec::with_capacity(n);
        for a in 0..n {
            let mut chain = vec![ActivityId::from(a)];
            let mut cur = parent[a];
            while let Some(p) = cur {
                chain.push(p);
                cur = parent[p.index()];
            }
            let mut mask = ActivitySet::with_capacity(n);
            for &x in &chain {
                mask.insert(x);
            }
            chain.sort_unstable();
            ancestors.push(chain);
            ancestor_masks.push(mask);
        }

        Ok(ActivityTree {
            names,
            parent,
            children,
            root,
            synthetic_root,
            ancestors,
            ancestor_masks,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn root(&self) -> Option<ActivityId> {
        self.root
    }

    pub fn has_synthetic_root(&self) -> bool {
        self.synthetic_root
    }

    pub fn is_synthetic(&self, a: ActivityId) -> bool {
        self.synthetic_root && Some(a) == self.root
    }

    pub fn activity_id(&self, name: &str) -> Result<ActivityId> {
        self.names
            .get(name)
            .map(ActivityId::from)
            .ok_or_else(|| Error::UnknownActivity(name.to_string()))
    }

    pub fn name(&self, a: ActivityId) -> &str {
        self.names.name(a.index())
    }

    pub fn parent(&self, a: ActivityId) -> Option<ActivityId> {
        self.parent[a.index()]
    }

    pub fn children(&self, a: ActivityId) -> &[ActivityId] {
        &self.children[a.index()]
    }

    pub fn activities(&self) -> impl Iterator<Item = ActivityId> {
        (0..self.names.len()).map(ActivityId::from)
    }

    /// Reflexive ancestors of `a`, sorted by id.
    pub fn ancestors(&self, a: ActivityId) -> &[ActivityId] {
        &self.ancestors[a.index()]
    }

    /// Reflexive ancestors of `a` as a bitset.
    pub fn ancestor_mask(&self, a: ActivityId) -> &ActivitySet {
        &self.ancestor_masks[a.index()]
    }

    /// Reflexive descendants of `a`, sorted by id.
    pub fn descendants(&self, a: ActivityId) -> Vec<ActivityId> {
        let mut out = Vec::new();
        let mut stack = vec![a];
        while let Some(x) = stack.pop() {
            out.push(x);
            stack.extend_from_slice(&self.children[x.index()]);
        }
        out.sort_unstable();
        out
    }

    pub fn closure(&self, a: ActivityId, direction: TreeDirection) -> Vec<ActivityId> {
        match direction {
            TreeDirection::Ancestors => self.ancestors(a).to_vec(),
            TreeDirection::Descendants => self.descendants(a),
        }
    }

    pub fn empty_mask(&self) -> ActivitySet {
        ActivitySet::with_capacity(self.len())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grouping {
    pub activity: ActivityId,
    /// Sorted, non-empty.
    pub perms: Vec<PermId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SodDomain {
    /// Sorted object names.
    pub objects: Vec<String>,
}

/// SoD domains and the permission-to-domain map they induce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainMap {
    names: Names,
    domains: Vec<SodDomain>,
    perm_domains: Vec<Vec<DomainId>>,
}

impl DomainMap {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn domain_id(&self, name: &str) -> Option<DomainId> {
        self.names.get(name).map(DomainId::from)
    }

    pub fn name(&self, d: DomainId) -> &str {
        self.names.name(d.index())
    }

    pub fn domain(&self, d: DomainId) -> &SodDomain {
        &self.domains[d.index()]
    }

    pub fn domains(&self) -> impl Iterator<Item = DomainId> {
        (0..self.names.len()).map(DomainId::from)
    }

    /// Domains whose object set contains the permission's object, sorted.
    pub fn perm_domains(&self, p: PermId) -> &[DomainId] {
        &self.perm_domains[p.index()]
    }
}

/// `⟨A, n⟩`: nobody may perform `threshold` or more of `activities`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SodConstraint {
    /// Sorted, distinct, at least two.
    pub activities: Vec<ActivityId>,
    pub threshold: usize,
    pub mask: ActivitySet,
}

/// Non-fatal findings reported by validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub span: Span,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivityModel {
    tree: ActivityTree,
    grouping_names: Names,
    groupings: Vec<Grouping>,
    by_activity: Vec<Vec<GroupingId>>,
    domains: DomainMap,
    constraints: Vec<SodConstraint>,
}

impl ActivityModel {
    /// Builds the activity side of a document against an already validated
    /// RBAC model. Returns the model plus validation warnings.
    pub fn build(
        doc: &ModelDocument,
        rbac: &RbacModel,
    ) -> Result<(ActivityModel, Vec<Warning>), Diagnostics> {
        let decls: Vec<ActivityDecl> = doc
            .iter()
            .filter_map(|(span, st)| match st {
                Statement::Activity { id, parent } => Some(ActivityDecl {
                    id: id.clone(),
                    parent: parent.clone(),
                    span: *span,
                }),
                _ => None,
            })
            .collect();
        let tree = ActivityTree::from_forest(&decls)?;
        let mut diags = Diagnostics::default();
        let mut warnings = Vec::new();

        let activity = |name: &str, span: Span, diags: &mut Diagnostics| -> Option<ActivityId> {
            match tree.activity_id(name) {
                Ok(a) if !tree.is_synthetic(a) => Some(a),
                Ok(_) => {
                    diags.push(span, Error::ReservedId(name.to_string()));
                    None
                }
                Err(_) => {
                    diags.push(
                        span,
                        Error::DanglingReference {
                            kind: EntityKind::Activity,
                            id: name.to_string(),
                        },
                    );
                    None
                }
            }
        };

        // groupings
        let mut grouping_decl: Vec<(&str, &str, &[String], Span)> = Vec::new();
        let mut domain_decl: Vec<(&str, &[String], Span)> = Vec::new();
        for (span, st) in doc.iter() {
            match st {
                Statement::Grouping {
                    id,
                    activity,
                    perms,
                } => grouping_decl.push((id, activity, perms, *span)),
                Statement::Domain { id, objects } => domain_decl.push((id, objects, *span)),
                _ => {}
            }
        }
        let mut seen = HashSet::new();
        for &(id, _, _, span) in &grouping_decl {
            if !seen.insert(id) {
                diags.push(
                    span,
                    Error::DuplicateId {
                        kind: EntityKind::Grouping,
                        id: id.to_string(),
                    },
                );
            }
        }
        let grouping_names = Names::from_unsorted(grouping_decl.iter().map(|g| g.0));
        let mut groupings = vec![
            Grouping {
                activity: ActivityId(0),
                perms: Vec::new()
            };
            grouping_names.len()
        ];
        for &(id, act, perms, span) in &grouping_decl {
            let a = activity(act, span, &mut diags);
            if perms.is_empty() {
                diags.push(span, Error::EmptyGrouping(id.to_string()));
            }
            let mut ps = Vec::with_capacity(perms.len());
            for p in perms {
                match rbac.permission_id(p) {
                    Ok(p) => ps.push(p),
                    Err(_) => diags.push(
                        span,
                        Error::DanglingReference {
                            kind: EntityKind::Permission,
                            id: p.clone(),
                        },
                    ),
                }
            }
            ps.sort_unstable();
            ps.dedup();
            if let Some(a) = a {
                groupings[grouping_names.get(id).unwrap()] = Grouping {
                    activity: a,
                    perms: ps,
                };
            }
        }

        // domains
        let mut seen = HashSet::new();
        for &(id, _, span) in &domain_decl {
            if !seen.insert(id) {
                diags.push(
                    span,
                    Error::DuplicateId {
                        kind: EntityKind::Domain,
                        id: id.to_string(),
                    },
                );
            }
        }
        let domain_names = Names::from_unsorted(domain_decl.iter().map(|d| d.0));
        let mut domains = vec![
            SodDomain {
                objects: Vec::new()
            };
            domain_names.len()
        ];
        for &(id, objects, span) in &domain_decl {
            let mut objs: Vec<String> = objects.to_vec();
            objs.sort_unstable();
            objs.dedup();
            for o in &objs {
                if rbac.object_id(o).is_none() {
                    warnings.push(Warning {
                        span,
                        message: format!(
                            "object `{o}` of domain `{id}` is not used by any permission"
                        ),
                    });
                }
            }
            domains[domain_names.get(id).unwrap()] = SodDomain { objects: objs };
        }
        if domain_decl.is_empty() {
            warnings.push(Warning {
                span: Span::UNKNOWN,
                message: "no SoD domains declared; domain-confined analysis reports no conflicts"
                    .to_string(),
            });
        }
        let mut object_domains: HashMap<&str, Vec<DomainId>> = HashMap::new();
        for (d, dom) in domains.iter().enumerate() {
            for o in &dom.objects {
                object_domains.entry(o).or_default().push(DomainId::from(d));
            }
        }
        let perm_domains = rbac
            .permissions()
            .map(|p| {
                let obj = rbac.object_name(rbac.permission(p).object);
                object_domains.get(obj).cloned().unwrap_or_default()
            })
            .collect();

        // constraints
        let mut constraints = Vec::new();
        for (span, st) in doc.iter() {
            let Statement::Sod {
                threshold,
                activities,
            } = st
            else {
                continue;
            };
            let mut acts = Vec::with_capacity(activities.len());
            let mut ok = true;
            for name in activities {
                match activity(name, *span, &mut diags) {
                    Some(a) => acts.push(a),
                    None => ok = false,
                }
            }
            let before = acts.len();
            acts.sort_unstable();
            acts.dedup();
            if acts.len() != before {
                diags.push(
                    *span,
                    Error::InvalidConstraint("activity listed more than once".to_string()),
                );
                ok = false;
            }
            if *threshold < 2 {
                diags.push(
                    *span,
                    Error::InvalidConstraint(format!("threshold {threshold} is below 2")),
                );
                ok = false;
            }
            if activities.len() < 2 {
                diags.push(
                    *span,
                    Error::InvalidConstraint("a constraint needs at least two activities".to_string()),
                );
                ok = false;
            } else if *threshold > activities.len() {
                diags.push(
                    *span,
                    Error::InvalidConstraint(format!(
                        "threshold {threshold} exceeds the {} listed activities",
                        activities.len()
                    )),
                );
                ok = false;
            }
            if ok {
                let mut mask = tree.empty_mask();
                for &a in &acts {
                    mask.insert(a);
                }
                constraints.push(SodConstraint {
                    activities: acts,
                    threshold: *threshold,
                    mask,
                });
            }
        }

        if !diags.is_empty() {
            return Err(diags);
        }

        let mut by_activity = vec![Vec::new(); tree.len()];
        for (g, grouping) in groupings.iter().enumerate() {
            by_activity[grouping.activity.index()].push(GroupingId::from(g));
        }

        Ok((
            ActivityModel {
                tree,
                grouping_names,
                groupings,
                by_activity,
                domains: DomainMap {
                    names: domain_names,
                    domains,
                    perm_domains,
                },
                constraints,
            },
            warnings,
        ))
    }

    pub fn tree(&self) -> &ActivityTree {
        &self.tree
    }

    pub fn domains(&self) -> &DomainMap {
        &self.domains
    }

    pub fn constraints(&self) -> &[SodConstraint] {
        &self.constraints
    }

    pub fn constraint(&self, c: ConstraintId) -> &SodConstraint {
        &self.constraints[c.index()]
    }

    pub fn constraint_ids(&self) -> impl Iterator<Item = ConstraintId> {
        (0..self.constraints.len()).map(ConstraintId::from)
    }

    pub fn grouping_count(&self) -> usize {
        self.groupings.len()
    }

    pub fn grouping(&self, g: GroupingId) -> &Grouping {
        &self.groupings[g.index()]
    }

    pub fn groupings(&self) -> impl Iterator<Item = GroupingId> {
        (0..self.groupings.len()).map(GroupingId::from)
    }

    pub fn grouping_id(&self, name: &str) -> Option<GroupingId> {
        self.grouping_names.get(name).map(GroupingId::from)
    }

    pub fn grouping_name(&self, g: GroupingId) -> &str {
        self.grouping_names.name(g.index())
    }

    pub fn activity_id(&self, name: &str) -> Result<ActivityId> {
        self.tree.activity_id(name)
    }

    pub fn activity_name(&self, a: ActivityId) -> &str {
        self.tree.name(a)
    }

    /// Groupings attached directly to `a`, sorted.
    pub fn groupings_of(&self, a: ActivityId) -> &[GroupingId] {
        &self.by_activity[a.index()]
    }

    /// Groupings attached to `a` or to any of its descendants, sorted.
    pub fn groupings_star(&self, a: ActivityId) -> Vec<GroupingId> {
        let mut out: Vec<GroupingId> = self
            .tree
            .descendants(a)
            .into_iter()
            .flat_map(|d| self.by_activity[d.index()].iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    pub fn perm_domains(&self, p: PermId) -> &[DomainId] {
        self.domains.perm_domains(p)
    }

    /// Activities performable with `perms`, each mapped to the groupings that
    /// witness it. `perms` must be sorted.
    pub fn performed_activities(
        &self,
        perms: &[PermId],
    ) -> BTreeMap<ActivityId, BTreeSet<GroupingId>> {
        let mut out: BTreeMap<ActivityId, BTreeSet<GroupingId>> = BTreeMap::new();
        for (g, grouping) in self.groupings.iter().enumerate() {
            if grouping
                .perms
                .iter()
                .all(|p| perms.binary_search(p).is_ok())
            {
                for &a in self.tree.ancestors(grouping.activity) {
                    out.entry(a).or_default().insert(GroupingId::from(g));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::fixtures;

    fn decl(id: &str, parent: Option<&str>) -> ActivityDecl {
        ActivityDecl {
            id: id.to_string(),
            parent: parent.map(str::to_string),
            span: Span::UNKNOWN,
        }
    }

    fn fig1() -> (RbacModel, ActivityModel) {
        let doc = fixtures::fig1_document();
        let rbac = RbacModel::build(&doc).unwrap();
        let (act, _) = ActivityModel::build(&doc, &rbac).unwrap();
        (rbac, act)
    }

    fn anames(m: &ActivityModel, ids: impl IntoIterator<Item = ActivityId>) -> Vec<String> {
        ids.into_iter().map(|a| m.activity_name(a).to_string()).collect()
    }

    fn gnames(m: &ActivityModel, ids: impl IntoIterator<Item = GroupingId>) -> Vec<String> {
        ids.into_iter().map(|g| m.grouping_name(g).to_string()).collect()
    }

    fn sorted_names(mut v: Vec<&str>) -> Vec<String> {
        v.sort_unstable();
        v.into_iter().map(String::from).collect()
    }

    #[test]
    fn fig1_gets_a_synthetic_root() {
        let (_, m) = fig1();
        let tree = m.tree();
        let root = tree.root().unwrap();
        assert!(tree.has_synthetic_root());
        assert_eq!(tree.name(root), SYNTHETIC_ROOT);
        assert_eq!(anames(&m, tree.children(root).to_vec()), ["a10", "a9"]);
    }

    #[test]
    fn single_activity_is_its_own_root() {
        let tree = ActivityTree::from_forest(&[decl("a0", None)]).unwrap();
        assert!(!tree.has_synthetic_root());
        assert_eq!(tree.name(tree.root().unwrap()), "a0");
    }

    #[test]
    fn parent_cycle_is_rejected() {
        let err = ActivityTree::from_forest(&[decl("a1", Some("a2")), decl("a2", Some("a1"))])
            .unwrap_err();
        assert_eq!(
            err.0[0].error,
            Error::CycleInActivities(vec!["a1".into(), "a2".into()])
        );
    }

    #[test]
    fn unknown_parent_and_reserved_id() {
        let err = ActivityTree::from_forest(&[decl("a1", Some("zz"))]).unwrap_err();
        assert!(matches!(err.0[0].error, Error::UnknownParent { .. }));
        let err = ActivityTree::from_forest(&[decl(SYNTHETIC_ROOT, None)]).unwrap_err();
        assert!(matches!(err.0[0].error, Error::ReservedId(_)));
    }

    #[test]
    fn fig1_activity_closures() {
        let (_, m) = fig1();
        let t = m.tree();
        let id = |n| t.activity_id(n).unwrap();
        assert_eq!(
            anames(&m, t.closure(id("a10"), TreeDirection::Descendants)),
            sorted_names(vec!["a10", "a5", "a6"])
        );
        assert_eq!(
            anames(&m, t.closure(id("a1"), TreeDirection::Ancestors)),
            sorted_names(vec!["a1", "a7", "a9", SYNTHETIC_ROOT])
        );
        assert_eq!(
            t.closure(id("a3"), TreeDirection::Descendants),
            vec![id("a3")]
        );
        assert!(matches!(t.activity_id("a99"), Err(Error::UnknownActivity(_))));
    }

    #[test]
    fn fig1_groupings() {
        let (_, m) = fig1();
        let id = |n| m.activity_id(n).unwrap();
        assert_eq!(gnames(&m, m.groupings_of(id("a2")).to_vec()), ["g2", "g3"]);
        assert!(m.groupings_of(id("a7")).is_empty());
        assert_eq!(gnames(&m, m.groupings_of(id("a10")).to_vec()), ["g7"]);
        assert_eq!(gnames(&m, m.groupings_star(id("a10"))), ["g6", "g7", "g8"]);
        assert_eq!(gnames(&m, m.groupings_star(id("a2"))), ["g2", "g3"]);
        assert_eq!(
            gnames(&m, m.groupings_star(id("a9"))),
            ["g1", "g2", "g3", "g4", "g5"]
        );
        let root = m.tree().root().unwrap();
        assert_eq!(m.groupings_star(root).len(), m.grouping_count());
    }

    #[test]
    fn fig1_perm_domains() {
        let (rbac, m) = fig1();
        let dn = |p: &str| -> Vec<String> {
            m.perm_domains(rbac.permission_id(p).unwrap())
                .iter()
                .map(|&d| m.domains().name(d).to_string())
                .collect()
        };
        assert_eq!(dn("p6"), ["d1", "d2"]);
        assert!(dn("p1").is_empty());
        assert_eq!(dn("p2"), ["d1"]);
    }

    #[test]
    fn fig1_performed_activities() {
        let (rbac, m) = fig1();
        let perms = |names: &[&str]| -> Vec<PermId> {
            let mut v: Vec<_> = names.iter().map(|n| rbac.permission_id(n).unwrap()).collect();
            v.sort();
            v
        };
        let show = |map: BTreeMap<ActivityId, BTreeSet<GroupingId>>| -> Vec<(String, Vec<String>)> {
            map.into_iter()
                .map(|(a, gs)| (m.activity_name(a).to_string(), gnames(&m, gs)))
                .collect()
        };
        let got = show(m.performed_activities(&perms(&["p8"])));
        let expect: Vec<(String, Vec<String>)> = vec![
            (SYNTHETIC_ROOT.into(), vec!["g6".into(), "g8".into()]),
            ("a10".into(), vec!["g6".into(), "g8".into()]),
            ("a5".into(), vec!["g6".into()]),
            ("a6".into(), vec!["g8".into()]),
        ];
        assert_eq!(got, expect);

        assert!(m.performed_activities(&[]).is_empty());

        let got = show(m.performed_activities(&perms(&["p2", "p4"])));
        let expect: Vec<(String, Vec<String>)> = vec![
            (SYNTHETIC_ROOT.into(), vec!["g2".into()]),
            ("a2".into(), vec!["g2".into()]),
            ("a7".into(), vec!["g2".into()]),
            ("a9".into(), vec!["g2".into()]),
        ];
        assert_eq!(got, expect);
    }

    fn fig1_with(extra: Statement) -> Result<(ActivityModel, Vec<Warning>), Diagnostics> {
        let mut doc = fixtures::fig1_document();
        doc.push(extra);
        let rbac = RbacModel::build(&doc).unwrap();
        ActivityModel::build(&doc, &rbac)
    }

    #[test]
    fn constraint_validation() {
        let bad = |threshold: usize, acts: &[&str]| {
            fig1_with(Statement::Sod {
                threshold,
                activities: acts.iter().map(|s| s.to_string()).collect(),
            })
            .unwrap_err()
            .0[0]
                .error
                .clone()
        };
        assert!(matches!(bad(1, &["a2", "a4"]), Error::InvalidConstraint(_)));
        assert!(matches!(bad(3, &["a2", "a4"]), Error::InvalidConstraint(_)));
        assert!(matches!(bad(2, &["a2"]), Error::InvalidConstraint(_)));
        assert!(matches!(bad(2, &["a2", "a2"]), Error::InvalidConstraint(_)));
        assert!(matches!(bad(2, &["a2", "zz"]), Error::DanglingReference { .. }));
        assert!(matches!(
            bad(2, &["a2", SYNTHETIC_ROOT]),
            Error::ReservedId(_)
        ));
    }

    #[test]
    fn grouping_validation() {
        let err = fig1_with(Statement::Grouping {
            id: "g9".into(),
            activity: "a1".into(),
            perms: vec!["p404".into()],
        })
        .unwrap_err();
        assert!(matches!(err.0[0].error, Error::DanglingReference { .. }));
        let err = fig1_with(Statement::Grouping {
            id: "g1".into(),
            activity: "a1".into(),
            perms: vec!["p1".into()],
        })
        .unwrap_err();
        assert!(matches!(err.0[0].error, Error::DuplicateId { .. }));
    }

    #[test]
    fn domain_warnings() {
        let (_, warnings) = fig1_with(Statement::Domain {
            id: "d3".into(),
            objects: vec!["nowhere".into()],
        })
        .unwrap();
        assert_eq!(warnings.len(), 1);

        let doc: ModelDocument = [Statement::Activity {
            id: "a".into(),
            parent: None,
        }]
        .into_iter()
        .collect();
        let rbac = RbacModel::build(&doc).unwrap();
        let (_, warnings) = ActivityModel::build(&doc, &rbac).unwrap();
        assert!(warnings[0].message.contains("no SoD domains"));
    }
}
