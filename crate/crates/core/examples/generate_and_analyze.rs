//! Generates a seeded synthetic policy and analyzes it.
//!
//! `cargo run --release --example generate_and_analyze -- [seed] [enterprise]`
//! The `enterprise` flag switches to the full-size preset.

use std::time::Instant;

use activity_sod::engine::PairSelection;
use activity_sod::io::{load_policy, render_text};
use activity_sod::testkit::{generate_instance, GeneratorParams};
use activity_sod::AnalysisSettings;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let seed = args.first().and_then(|s| s.parse().ok()).unwrap_or(42);
    let params = if args.iter().any(|a| a == "enterprise") {
        GeneratorParams::enterprise(seed)
    } else {
        GeneratorParams {
            users: 2000,
            roles: 1000,
            permissions: 800,
            activities: 50,
            groupings: 1000,
            domains: 5,
            constraints: 30,
            plant_conflicts: 5,
            ..GeneratorParams::enterprise(seed)
        }
    };
    let start = Instant::now();
    let instance = generate_instance(&params).unwrap();
    let text = instance.to_text();
    println!("generated {} bytes in {:?}", text.len(), start.elapsed());

    let start = Instant::now();
    let policy = load_policy(&text).unwrap();
    println!("loaded in {:?}", start.elapsed());

    let start = Instant::now();
    let settings = AnalysisSettings { pairs: PairSelection::Both, ..AnalysisSettings::default() };
    let report = policy.analyze(&settings).unwrap();
    println!("analyzed in {:?}", start.elapsed());
    print!("{}", render_text(&report, false));

    let illegal: Vec<&str> = report.illegal_permissions.iter().map(|f| f.entities[0].as_str()).collect();
    let recovered = instance
        .planted
        .illegal_permissions
        .iter()
        .filter(|p| illegal.contains(&p.as_str()))
        .count();
    println!("planted illegal permissions recovered: {recovered}/{}", instance.planted.illegal_permissions.len());
}
