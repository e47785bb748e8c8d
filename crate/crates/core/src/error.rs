use std::fmt;

/// Position of a statement or token in a policy document. Lines and columns
/// are 1-based; `Span::UNKNOWN` marks declarations built programmatically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl Span {
    pub const UNKNOWN: Span = Span { line: 0, col: 0 };

    pub fn new(line: usize, col: usize) -> Self {
        Self { line, col }
    }

    pub fn is_known(&self) -> bool {
        self.line > 0
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_known() {
            write!(f, "{}:{}", self.line, self.col)
        } else {
            f.write_str("<unknown>")
        }
    }
}

/// Entity kinds, used in error messages and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityKind {
    Permission,
    User,
    Role,
    Activity,
    Grouping,
    Domain,
    Session,
    Object,
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntityKind::Permission => "permission",
            EntityKind::User => "user",
            EntityKind::Role => "role",
            EntityKind::Activity => "activity",
            EntityKind::Grouping => "grouping",
            EntityKind::Domain => "domain",
            EntityKind::Session => "session",
            EntityKind::Object => "object",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("syntax error: expected {expected}")]
    Syntax { expected: String },
    #[error("unknown statement keyword `{0}`")]
    UnknownStatementKeyword(String),
    #[error("duplicate declaration of {kind} `{id}`")]
    DuplicateDeclaration { kind: EntityKind, id: String },
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: EntityKind, id: String },
    #[error("permissions `{first}` and `{second}` bind the same object/operation pair")]
    DuplicateBinding { first: String, second: String },
    #[error("reference to undeclared {kind} `{id}`")]
    DanglingReference { kind: EntityKind, id: String },
    #[error("`{0}` is a reserved identifier")]
    ReservedId(String),
    #[error("cycle in role hierarchy: {}", .0.join(", "))]
    CycleInHierarchy(Vec<String>),
    #[error("cycle in activity tree: {}", .0.join(", "))]
    CycleInActivities(Vec<String>),
    #[error("activity `{activity}` names unknown parent `{parent}`")]
    UnknownParent { activity: String, parent: String },
    #[error("grouping `{0}` has no permissions")]
    EmptyGrouping(String),
    #[error("invalid constraint: {0}")]
    InvalidConstraint(String),
    #[error("unknown role `{0}`")]
    UnknownRole(String),
    #[error("unknown user `{0}`")]
    UnknownUser(String),
    #[error("unknown permission `{0}`")]
    UnknownPermission(String),
    #[error("unknown activity `{0}`")]
    UnknownActivity(String),
    #[error("unknown session `{0}`")]
    UnknownSession(String),
    #[error("session `{session}` activates role `{role}` which its user is not assigned to")]
    InactiveRoleNotAssigned { session: String, role: String },
    #[error("instance exceeds oracle bounds: {0}")]
    InstanceTooLarge(String),
    #[error("inconsistent generator parameters: {0}")]
    InconsistentParams(String),
}

/// An error tied to the document position that caused it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub span: Span,
    pub error: Error,
}

impl Diagnostic {
    pub fn new(span: Span, error: Error) -> Self {
        Self { span, error }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.error)
    }
}

/// Every problem found while loading a document. Loading is all-or-nothing,
/// so a non-empty list means no model was produced.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Diagnostics(pub Vec<Diagnostic>);

impl Diagnostics {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Diagnostic> {
        self.0.iter()
    }

    pub fn push(&mut self, span: Span, error: Error) {
        self.0.push(Diagnostic::new(span, error));
    }

    pub(crate) fn into_result<T>(self, value: impl FnOnce() -> T) -> Result<T, Diagnostics> {
        if self.0.is_empty() {
            Ok(value())
        } else {
            Err(self)
        }
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostics {}

impl From<Diagnostic> for Diagnostics {
    fn from(d: Diagnostic) -> Self {
        Diagnostics(vec![d])
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
