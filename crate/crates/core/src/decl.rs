//! Raw declarations: the statement list a policy is built from.

use crate::error::Span;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Perm { id: String, object: String, operation: String },
    User { id: String },
    Role { id: String },
    UserRole { user: String, role: String },
    RolePerm { role: String, perm: String },
    Hierarchy { senior: String, junior: String },
    Activity { id: String, parent: Option<String> },
    Grouping { id: String, activity: String, perms: Vec<String> },
    Domain { id: String, objects: Vec<String> },
    Sod { threshold: usize, activities: Vec<String> },
    Session { id: String, user: String, roles: Vec<String> },
}

impl Statement {
    /// Keyword in the textual format.
    pub fn keyword(&self) -> &'static str {
        match self {
            Statement::Perm { .. } => "perm",
            Statement::User { .. } => "user",
            Statement::Role { .. } => "role",
            Statement::UserRole { .. } => "ua",
            Statement::RolePerm { .. } => "pa",
            Statement::Hierarchy { .. } => "rh",
            Statement::Activity { .. } => "activity",
            Statement::Grouping { .. } => "grouping",
            Statement::Domain { .. } => "domain",
            Statement::Sod { .. } => "sod",
            Statement::Session { .. } => "session",
        }
    }

    /// Rank of the statement kind in canonical output.
    pub fn kind_rank(&self) -> usize {
        match self {
            Statement::Perm { .. } => 0,
            Statement::User { .. } => 1,
            Statement::Role { .. } => 2,
            Statement::UserRole { .. } => 3,
            Statement::RolePerm { .. } => 4,
            Statement::Hierarchy { .. } => 5,
            Statement::Activity { .. } => 6,
            Statement::Grouping { .. } => 7,
            Statement::Domain { .. } => 8,
            Statement::Sod { .. } => 9,
            Statement::Session { .. } => 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Located {
    pub span: Span,
    pub statement: Statement,
}

/// Ordered list of statements with their source positions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModelDocument {
    pub statements: Vec<Located>,
}

impl ModelDocument {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a statement with no source position.
    pub fn push(&mut self, statement: Statement) {
        self.statements.push(Located {
            span: Span::UNKNOWN,
            statement,
        });
    }

    pub fn len(&self) -> usize {
        self.statements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Span, &Statement)> {
        self.statements.iter().map(|l| (&l.span, &l.statement))
    }

    /// Number of statements of the given keyword.
    pub fn count(&self, keyword: &str) -> usize {
        self.statements
            .iter()
            .filter(|l| l.statement.keyword() == keyword)
            .count()
    }
}

impl FromIterator<Statement> for ModelDocument {
    fn from_iter<T: IntoIterator<Item = Statement>>(iter: T) -> Self {
        let mut doc = ModelDocument::new();
        for s in iter {
            doc.push(s);
        }
        doc
    }
}
