//! Line-oriented policy format.
//!
//! ```text
//! perm <id> <object> <operation>      user <id>            role <id>
//! ua <user> <role>                    pa <role> <perm>     rh <senior> <junior>
//! activity <id> [<parent>]            grouping <id> <activity> <perm>[,<perm>...]
//! domain <id> <object>[,<object>...]  sod <n> <activity>[,<activity>...]
//! session <id> <user> [<role>[,<role>...]]
//! ```
//!
//! One statement per line, whitespace-separated tokens, `#` comments to end
//! of line. Statements may appear in any order; references are resolved
//! when the model is built.

use std::collections::HashSet;

use crate::decl::{Located, ModelDocument, Statement};
use crate::error::{Diagnostics, EntityKind, Error, Span};

struct Token<'a> {
    text: &'a str,
    col: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let line = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, i));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, line.len()));
    }
    out.into_iter()
        .map(|(s, e)| Token {
            text: &line[s..e],
            col: line[..s].chars().count() + 1,
        })
        .collect()
}

pub fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
}

struct LineParser<'a> {
    line: usize,
    tokens: Vec<Token<'a>>,
    diags: &'a mut Diagnostics,
}

impl<'a> LineParser<'a> {
    fn span(&self, i: usize) -> Span {
        let col = match self.tokens.get(i) {
            Some(t) => t.col,
            None => self.tokens.last().map_or(1, |t| t.col + t.text.chars().count()),
        };
        Span::new(self.line, col)
    }

    fn fail(&mut self, i: usize, expected: impl Into<String>) {
        let span = self.span(i);
        self.diags.push(
            span,
            Error::Syntax {
                expected: expected.into(),
            },
        );
    }

    fn arity(&mut self, min: usize, max: usize, usage: &str) -> Option<()> {
        let args = self.tokens.len() - 1;
        if args < min {
            self.fail(self.tokens.len(), format!("`{usage}`"));
            None
        } else if args > max {
            self.fail(max + 1, format!("end of statement after `{usage}`"));
            None
        } else {
            Some(())
        }
    }

    fn ident(&mut self, i: usize, what: &str) -> Option<String> {
        let text = self.tokens[i].text;
        if is_identifier(text) {
            Some(text.to_string())
        } else {
            self.fail(i, format!("{what} identifier"));
            None
        }
    }

    fn list(&mut self, i: usize, what: &str) -> Option<Vec<String>> {
        let text = self.tokens[i].text;
        let items: Vec<&str> = text.split(',').collect();
        if items.iter().all(|s| is_identifier(s)) {
            Some(items.into_iter().map(String::from).collect())
        } else {
            self.fail(i, format!("comma-separated {what} identifiers"));
            None
        }
    }

    fn statement(&mut self) -> Option<Statement> {
        let keyword = self.tokens[0].text;
        let st = match keyword {
            "perm" => {
                self.arity(3, 3, "perm <id> <object> <operation>")?;
                Statement::Perm {
                    id: self.ident(1, "permission")?,
                    object: self.ident(2, "object")?,
                    operation: self.ident(3, "operation")?,
                }
            }
            "user" => {
                self.arity(1, 1, "user <id>")?;
                Statement::User {
                    id: self.ident(1, "user")?,
                }
            }
            "role" => {
                self.arity(1, 1, "role <id>")?;
                Statement::Role {
                    id: self.ident(1, "role")?,
                }
            }
            "ua" => {
                self.arity(2, 2, "ua <user> <role>")?;
                Statement::UserRole {
                    user: self.ident(1, "user")?,
                    role: self.ident(2, "role")?,
                }
            }
            "pa" => {
                self.arity(2, 2, "pa <role> <perm>")?;
                Statement::RolePerm {
                    role: self.ident(1, "role")?,
                    perm: self.ident(2, "permission")?,
                }
            }
            "rh" => {
                self.arity(2, 2, "rh <senior> <junior>")?;
                Statement::Hierarchy {
                    senior: self.ident(1, "role")?,
                    junior: self.ident(2, "role")?,
                }
            }
            "activity" => {
                self.arity(1, 2, "activity <id> [<parent>]")?;
                let id = self.ident(1, "activity")?;
                let parent = if self.tokens.len() > 2 {
                    Some(self.ident(2, "activity")?)
                } else {
                    None
                };
                Statement::Activity { id, parent }
            }
            "grouping" => {
                self.arity(3, 3, "grouping <id> <activity> <perm>[,<perm>...]")?;
                Statement::Grouping {
                    id: self.ident(1, "grouping")?,
                    activity: self.ident(2, "activity")?,
                    perms: self.list(3, "permission")?,
                }
            }
            "domain" => {
                self.arity(2, 2, "domain <id> <object>[,<object>...]")?;
                Statement::Domain {
                    id: self.ident(1, "domain")?,
                    objects: self.list(2, "object")?,
                }
            }
            "sod" => {
                self.arity(2, 2, "sod <n> <activity>[,<activity>...]")?;
                let threshold: usize = match self.tokens[1].text.parse() {
                    Ok(n) => n,
                    Err(_) => {
                        self.fail(1, "integer threshold");
                        return None;
                    }
                };
                if threshold < 2 {
                    let span = self.span(1);
                    self.diags.push(
                        span,
                        Error::InvalidConstraint(format!("threshold {threshold} is below 2")),
                    );
                    return None;
                }
                Statement::Sod {
                    threshold,
                    activities: self.list(2, "activity")?,
                }
            }
            "session" => {
                self.arity(2, 3, "session <id> <user> [<role>[,<role>...]]")?;
                let id = self.ident(1, "session")?;
                let user = self.ident(2, "user")?;
                let roles = if self.tokens.len() > 3 {
                    self.list(3, "role")?
                } else {
                    Vec::new()
                };
                Statement::Session { id, user, roles }
            }
            other => {
                let span = self.span(0);
                self.diags
                    .push(span, Error::UnknownStatementKeyword(other.to_string()));
                return None;
            }
        };
        Some(st)
    }
}

/// Declared id and kind, for statements that introduce an entity.
fn declared(st: &Statement) -> Option<(EntityKind, &str)> {
    match st {
        Statement::Perm { id, .. } => Some((EntityKind::Permission, id)),
        Statement::User { id } => Some((EntityKind::User, id)),
        Statement::Role { id } => Some((EntityKind::Role, id)),
        Statement::Activity { id, .. } => Some((EntityKind::Activity, id)),
        Statement::Grouping { id, .. } => Some((EntityKind::Grouping, id)),
        Statement::Domain { id, .. } => Some((EntityKind::Domain, id)),
        Statement::Session { id, .. } => Some((EntityKind::Session, id)),
        _ => None,
    }
}

/// Parses a policy document. Either every line parses or the full list of
/// diagnostics is returned.
pub fn parse_model(text: &str) -> Result<ModelDocument, Diagnostics> {
    let mut diags = Diagnostics::default();
    let mut doc = ModelDocument::new();
    for (i, line) in text.lines().enumerate() {
        let tokens = tokenize(line);
        if tokens.is_empty() {
            continue;
        }
        let line_no = i + 1;
        let span = Span::new(line_no, tokens[0].col);
        let mut p = LineParser {
            line: line_no,
            tokens,
            diags: &mut diags,
        };
        if let Some(statement) = p.statement() {
            doc.statements.push(Located { span, statement });
        }
    }

    let mut ids = HashSet::new();
    let mut rows = HashSet::new();
    for l in &doc.statements {
        let duplicate = match declared(&l.statement) {
            Some((kind, id)) => (!ids.insert((kind, id))).then(|| (kind, id.to_string())),
            None => match &l.statement {
                Statement::UserRole { user, role } => {
                    (!rows.insert(("ua", user, role))).then(|| (EntityKind::Role, format!("ua {user} {role}")))
                }
                Statement::RolePerm { role, perm } => (!rows.insert(("pa", role, perm)))
                    .then(|| (EntityKind::Permission, format!("pa {role} {perm}"))),
                Statement::Hierarchy { senior, junior } => (!rows.insert(("rh", senior, junior)))
                    .then(|| (EntityKind::Role, format!("rh {senior} {junior}"))),
                _ => None,
            },
        };
        if let Some((kind, id)) = duplicate {
            diags.push(l.span, Error::DuplicateDeclaration { kind, id });
        }
    }

    diags.into_result(|| doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_comment_only() {
        assert!(parse_model("").unwrap().is_empty());
        assert!(parse_model("# nothing\n\n   # here\n").unwrap().is_empty());
    }

    #[test]
    fn statements_and_positions() {
        let doc = parse_model("perm p1 o1 read # trailing\n\n  activity a1 root\nsession s u\n").unwrap();
        assert_eq!(doc.len(), 3);
        assert_eq!(doc.statements[1].span, Span::new(3, 3));
        assert_eq!(
            doc.statements[1].statement,
            Statement::Activity {
                id: "a1".into(),
                parent: Some("root".into())
            }
        );
        assert_eq!(
            doc.statements[2].statement,
            Statement::Session {
                id: "s".into(),
                user: "u".into(),
                roles: vec![]
            }
        );
    }

    #[test]
    fn low_threshold_is_rejected() {
        let err = parse_model("sod 1 a2,a4").unwrap_err();
        assert_eq!(err.0[0].span, Span::new(1, 5));
        assert!(matches!(&err.0[0].error, Error::InvalidConstraint(m) if m.contains("below 2")));
    }

    #[test]
    fn unknown_keyword() {
        let err = parse_model("role r1\nrule r2\n").unwrap_err();
        assert_eq!(err.0.len(), 1);
        assert_eq!(err.0[0].span, Span::new(2, 1));
        assert_eq!(
            err.0[0].error,
            Error::UnknownStatementKeyword("rule".into())
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_model("perm p1 o1\nua u1\nsod x a1,a2\ngrouping g a p1,,p2\nrole r$\n").unwrap_err();
        let spans: Vec<Span> = err.iter().map(|d| d.span).collect();
        assert_eq!(
            spans,
            [
                Span::new(1, 11),
                Span::new(2, 6),
                Span::new(3, 5),
                Span::new(4, 14),
                Span::new(5, 6)
            ]
        );
        assert!(err.iter().all(|d| matches!(d.error, Error::Syntax { .. })));
    }

    #[test]
    fn too_many_tokens() {
        let err = parse_model("user u1 u2").unwrap_err();
        assert_eq!(err.0[0].span, Span::new(1, 9));
    }

    #[test]
    fn duplicates() {
        let err = parse_model("role r1\nrole r1\nua u r\nua u r\nuser r1\n").unwrap_err();
        assert_eq!(err.0.len(), 2);
        assert_eq!(err.0[0].span.line, 2);
        assert_eq!(err.0[1].span.line, 4);
    }
}
