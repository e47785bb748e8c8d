//! Deterministic text and CSV renderings of an analysis report.

use std::fmt::Write as _;
use std::io;

use crate::engine::index::PairKind;
use crate::engine::report::{AnalysisReport, Finding, PairSelection, SetKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Csv,
}

/// A report payload together with how to render it.
#[derive(Debug, Clone, Copy)]
pub struct Report<'a> {
    pub analysis: &'a AnalysisReport,
    pub format: Format,
    /// Include per-finding listings in text output.
    pub listings: bool,
}

pub fn write_report(report: &Report<'_>, out: &mut dyn io::Write) -> io::Result<()> {
    let bytes = match report.format {
        Format::Text => render_text(report.analysis, report.listings),
        Format::Csv => render_csv(report.analysis),
    };
    out.write_all(bytes.as_bytes())
}

fn on_off(flag: bool) -> &'static str {
    if flag {
        "on"
    } else {
        "off"
    }
}

fn pair_label(kind: PairKind) -> &'static str {
    match kind {
        PairKind::Roles => "role",
        PairKind::Permissions => "permission",
    }
}

fn set_label(kind: SetKind) -> &'static str {
    match kind {
        SetKind::Permissions => "permissions",
        SetKind::Roles => "roles",
        SetKind::Users => "users",
    }
}

fn witness_text(f: &Finding) -> String {
    let mut s = format!("constraint {} activities {}", f.constraint, f.activities.join(","));
    if !f.domains.is_empty() {
        let _ = write!(s, " domains {}", f.domains.join(","));
    }
    s
}

pub fn render_text(report: &AnalysisReport, listings: bool) -> String {
    let mut out = String::new();
    let st = &report.settings;
    let m = &report.summary;
    let pairs = match st.pairs {
        PairSelection::None => "none",
        PairSelection::Roles => "roles",
        PairSelection::Permissions => "permissions",
        PairSelection::Both => "both",
    };
    let _ = writeln!(
        out,
        "settings: effective={} domains={} pairs={} discard-illegal={}",
        on_off(st.mode.effective),
        on_off(st.mode.domains),
        pairs,
        on_off(st.discard_illegal)
    );
    let _ = writeln!(
        out,
        "model: {} users, {} roles, {} permissions, {} activities, {} groupings, {} domains, {} constraints, {} sessions",
        m.users, m.roles, m.permissions, m.activities, m.groupings, m.domains, m.constraints, m.sessions
    );
    out.push_str("\nsummary\n");
    let _ = writeln!(out, "  illegal permissions: {}", report.illegal_permissions.len());
    let _ = writeln!(out, "  illegal roles: {}", report.illegal_roles.len());
    let _ = writeln!(out, "  illegal users: {}", report.illegal_users.len());
    for section in &report.pair_sections {
        let _ = writeln!(
            out,
            "  conflicting {} pairs: {}",
            pair_label(section.kind),
            section.count
        );
    }
    if !report.set_checks.is_empty() {
        let _ = writeln!(
            out,
            "  conflicting set checks: {} of {}",
            report.set_checks.iter().filter(|c| c.conflicting).count(),
            report.set_checks.len()
        );
    }
    if !listings {
        return out;
    }

    let singles = [
        ("illegal permissions", &report.illegal_permissions),
        ("illegal roles", &report.illegal_roles),
        ("illegal users", &report.illegal_users),
    ];
    for (title, findings) in singles {
        if findings.is_empty() {
            continue;
        }
        let _ = writeln!(out, "\n{title}");
        for f in findings {
            let _ = writeln!(out, "  {}  {}", f.entities[0], witness_text(f));
        }
    }
    for section in &report.pair_sections {
        if section.count == 0 {
            continue;
        }
        let _ = writeln!(out, "\nconflicting {} pairs", pair_label(section.kind));
        match &section.listed {
            Some(list) => {
                for f in list {
                    let _ = writeln!(out, "  {} {}  {}", f.entities[0], f.entities[1], witness_text(f));
                }
            }
            None => {
                let _ = writeln!(out, "  listing omitted for {} pairs; pass --list-pairs to include it", section.count);
            }
        }
    }
    if !report.set_checks.is_empty() {
        out.push_str("\nset checks\n");
        for check in &report.set_checks {
            let _ = write!(
                out,
                "  {} {}: ",
                set_label(check.query.kind),
                check.query.members.join(",")
            );
            match &check.finding {
                Some(f) => {
                    let _ = writeln!(out, "conflicting  {}", witness_text(f));
                }
                None => out.push_str("clear\n"),
            }
        }
    }
    out
}

/// One row per finding under the fixed header. Pair rows follow the
/// listing rule of the text report.
pub fn render_csv(report: &AnalysisReport) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(Vec::new());
    let header = ["kind", "entity_a", "entity_b", "constraint", "activities", "domains"];
    w.write_record(header).expect("writing to memory");

    let mut rows: Vec<&Finding> = Vec::new();
    rows.extend(&report.illegal_permissions);
    rows.extend(&report.illegal_roles);
    rows.extend(&report.illegal_users);
    for section in &report.pair_sections {
        rows.extend(section.listed.iter().flatten());
    }
    rows.extend(report.set_checks.iter().filter_map(|c| c.finding.as_ref()));

    for f in rows {
        let (a, b) = match f.entities.as_slice() {
            [a] => (a.clone(), String::new()),
            [a, b] => (a.clone(), b.clone()),
            many => (many.join(","), String::new()),
        };
        w.write_record([
            f.kind.label().to_string(),
            a,
            b,
            f.constraint.to_string(),
            f.activities.join(","),
            f.domains.join(","),
        ])
        .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("input is UTF-8")
}
