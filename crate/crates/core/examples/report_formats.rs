//! Runs the full analysis pipeline and renders it as text and as CSV.

use activity_sod::engine::{PairSelection, SetKind, SetQuery};
use activity_sod::io::{render_csv, render_text};
use activity_sod::testkit::fixtures;
use activity_sod::AnalysisSettings;

fn main() {
    let policy = fixtures::fig1_policy_with("sod 2 a5,a6");
    let settings = AnalysisSettings {
        pairs: PairSelection::Both,
        set_checks: vec![SetQuery {
            kind: SetKind::Roles,
            members: vec!["r2".into(), "r5".into(), "r8".into()],
        }],
        ..AnalysisSettings::default()
    };
    let report = policy.analyze(&settings).unwrap();
    print!("{}", render_text(&report, true));
    println!();
    print!("{}", render_csv(&report));
}
