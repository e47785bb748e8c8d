//! Command-line front end. [`run`] takes the argument list and output
//! streams and returns the process exit code, so it can be driven from tests.
//!
//! Exit codes: 0 when nothing conflicts, 1 when something does, 2 on bad
//! input or arguments.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::engine::whatif::split_pair;
use crate::engine::{
    AnalysisSettings, ConflictVerdict, Mode, Mutation, PairSelection, SetKind, SetQuery, Witness,
};
use crate::io::{load_policy, write_report, Format, Report};
use crate::policy::Policy;
use crate::testkit::{generate_instance, GeneratorParams};

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "activity-sod", version, about = "Activity-based separation of duty analysis for RBAC policies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a policy document.
    Validate { model: PathBuf },
    /// Report illegal entities, conflicting pairs and requested set checks.
    Analyze(AnalyzeArgs),
    /// Check the roles active in one session.
    CheckSession {
        model: PathBuf,
        session: String,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Evaluate a role assignment or activation without applying it.
    Whatif(WhatifArgs),
    /// Write a seeded synthetic policy.
    Gen(GenArgs),
}

#[derive(Args, Debug)]
struct ModeArgs {
    /// Use inherited permissions (default).
    #[arg(long, overrides_with = "no_effective")]
    effective: bool,
    /// Use directly assigned permissions only.
    #[arg(long)]
    no_effective: bool,
    /// Require conflicting groupings to share an SoD domain.
    #[arg(long)]
    domains: bool,
}

impl ModeArgs {
    fn mode(&self) -> Mode {
        Mode::new(!self.no_effective, self.domains)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PairsArg {
    None,
    Roles,
    Permissions,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    model: PathBuf,
    #[command(flatten)]
    mode: ModeArgs,
    #[arg(long, value_enum, default_value = "roles")]
    pairs: PairsArg,
    /// Skip pairs containing an illegal entity (default).
    #[arg(long, overrides_with = "no_discard_illegal")]
    discard_illegal: bool,
    #[arg(long)]
    no_discard_illegal: bool,
    /// List pairs even above 100000.
    #[arg(long)]
    list_pairs: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    threads: Option<usize>,
    /// Extra set to check, as `roles:r1,r2`, `permissions:p1,p2` or `users:u1,u2`.
    #[arg(long = "check-set", value_name = "KIND:IDS")]
    check_sets: Vec<String>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "mutation")]
struct MutationArgs {
    /// Assign a role to a user, as `user:role`.
    #[arg(long, value_name = "USER:ROLE")]
    assign: Option<String>,
    /// Activate a role in a session, as `session:role`.
    #[arg(long, value_name = "SESSION:ROLE")]
    activate: Option<String>,
}

#[derive(Args, Debug)]
struct WhatifArgs {
    model: PathBuf,
    #[command(flatten)]
    mutation: MutationArgs,
    #[command(flatten)]
    mode: ModeArgs,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    users: usize,
    #[arg(long)]
    roles: usize,
    #[arg(long)]
    perms: usize,
    #[arg(long)]
    activities: usize,
    #[arg(long)]
    groupings: usize,
    #[arg(long)]
    domains: usize,
    #[arg(long)]
    constraints: usize,
    #[arg(long, default_value_t = 0)]
    plant_conflicts: usize,
    #[arg(long, default_value_t = 0)]
    sessions: usize,
    #[arg(long, value_name = "MIN-MAX", default_value = "1-3", value_parser = parse_range)]
    ua_per_user: (usize, usize),
    #[arg(long, value_name = "MIN-MAX", default_value = "1-8", value_parser = parse_range)]
    pa_per_role: (usize, usize),
    #[arg(long, default_value_t = 0.3)]
    rh_probability: f64,
    #[arg(long, value_name = "MIN-MAX", default_value = "1-3", value_parser = parse_range)]
    grouping_size: (usize, usize),
    /// Objects per domain; omit to partition all objects.
    #[arg(long)]
    objects_per_domain: Option<usize>,
    #[arg(long, default_value_t = 0.05)]
    cross_domain_probability: f64,
    #[arg(long, value_name = "MIN-MAX", default_value = "2-2", value_parser = parse_range)]
    activities_per_constraint: (usize, usize),
    #[arg(long, default_value_t = 2)]
    max_threshold: usize,
    /// Output path, `-` for standard output.
    #[arg(long)]
    out: PathBuf,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = match s.split_once('-') {
        Some((lo, hi)) => (lo, hi),
        None => (s, s),
    };
    let lo = lo.trim().parse().map_err(|_| format!("bad range `{s}`"))?;
    let hi = hi.trim().parse().map_err(|_| format!("bad range `{s}`"))?;
    Ok((lo, hi))
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_INPUT
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_CLEAN
            };
        }
    };
    let result = match cli.command {
        Command::Validate { model } => validate(&model, out, err),
        Command::Analyze(a) => analyze(a, out, err),
        Command::CheckSession { model, session, mode } => check_session(&model, &session, mode.mode(), out, err),
        Command::Whatif(w) => whatif(w, out, err),
        Command::Gen(g) => gen(g, out),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_INPUT
        }
    }
}

type Outcome = Result<i32, String>;

fn load(path: &Path, err: &mut dyn Write) -> Result<Policy, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    match load_policy(&text) {
        Ok(policy) => {
            for w in policy.warnings() {
                let _ = writeln!(err, "{}:{}: warning: {}", path.display(), w.span, w.message);
            }
            Ok(policy)
        }
        Err(diags) => {
            for d in diags.iter() {
                let _ = writeln!(err, "{}:{}: {}", path.display(), d.span, d.error);
            }
            Err(format!("{} is not a valid policy", path.display()))
        }
    }
}

fn validate(model: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let policy = load(model, err)?;
    let s = policy.summary();
    let _ = writeln!(
        out,
        "valid: {} users, {} roles, {} permissions, {} activities, {} groupings, {} domains, {} constraints, {} sessions",
        s.users, s.roles, s.permissions, s.activities, s.groupings, s.domains, s.constraints, s.sessions
    );
    Ok(EXIT_CLEAN)
}

fn parse_set_query(text: &str) -> Result<SetQuery, String> {
    let (kind, ids) = text
        .split_once(':')
        .ok_or_else(|| format!("--check-set expects KIND:IDS, found `{text}`"))?;
    let kind = match kind {
        "roles" => SetKind::Roles,
        "permissions" | "perms" => SetKind::Permissions,
        "users" => SetKind::Users,
        other => return Err(format!("unknown set kind `{other}`")),
    };
    let members = ids.split(',').filter(|s| !s.is_empty()).map(str::to_string).collect();
    Ok(SetQuery { kind, members })
}

fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, String> {
    match threads {
        None => Ok(f()),
        Some(0) => Err("--threads must be at least 1".into()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| e.to_string())?;
            Ok(pool.install(f))
        }
    }
}

fn analyze(a: AnalyzeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let policy = load(&a.model, err)?;
    let settings = AnalysisSettings {
        mode: a.mode.mode(),
        pairs: match a.pairs {
            PairsArg::None => PairSelection::None,
            PairsArg::Roles => PairSelection::Roles,
            PairsArg::Permissions => PairSelection::Permissions,
            PairsArg::Both => PairSelection::Both,
        },
        discard_illegal: !a.no_discard_illegal,
        list_pairs: a.list_pairs,
        set_checks: a
            .check_sets
            .iter()
            .map(|s| parse_set_query(s))
            .collect::<Result<_, _>>()?,
        ..AnalysisSettings::default()
    };
    let report = with_threads(a.threads, || policy.analyze(&settings))?.map_err(|e| e.to_string())?;
    let format = match a.format {
        FormatArg::Text => Format::Text,
        FormatArg::Csv => Format::Csv,
    };
    let rendered = Report {
        analysis: &report,
        format,
        listings: true,
    };
    emit(a.out.as_deref(), out, |w| write_report(&rendered, w))?;
    Ok(if report.has_findings() { EXIT_FINDINGS } else { EXIT_CLEAN })
}

fn emit(
    path: Option<&Path>,
    out: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<(), String> {
    match path {
        Some(p) if p != Path::new("-") => {
            let mut file = fs::File::create(p).map_err(|e| format!("{}: {e}", p.display()))?;
            f(&mut file).map_err(|e| format!("{}: {e}", p.display()))
        }
        _ => f(out).map_err(|e| e.to_string()),
    }
}

fn witness_line(policy: &Policy, w: &Witness) -> String {
    let act = policy.activities();
    let groupings: Vec<String> = w
        .chosen_groupings
        .iter()
        .map(|(&a, &g)| format!("{}={}", act.activity_name(a), act.grouping_name(g)))
        .collect();
    let mut line = format!("constraint {} groupings {}", w.constraint, groupings.join(","));
    if let Some(ds) = &w.domain_witness {
        let names: Vec<&str> = ds.iter().map(|&d| act.domains().name(d)).collect();
        line.push_str(&format!(" domains {}", names.join(",")));
    }
    line
}

fn write_verdict(policy: &Policy, label: &str, v: &ConflictVerdict, out: &mut dyn Write) {
    let _ = writeln!(out, "{label}: {}", if v.conflicting { "conflicting" } else { "clear" });
    for w in &v.witnesses {
        let _ = writeln!(out, "  {}", witness_line(policy, w));
    }
}

fn check_session(model: &Path, session: &str, mode: Mode, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let policy = load(model, err)?;
    let s = policy.rbac().session_id(session).map_err(|e| e.to_string())?;
    let verdict = policy.check_session(s, mode).map_err(|e| e.to_string())?;
    write_verdict(&policy, &format!("session {session}"), &verdict, out);
    Ok(if verdict.conflicting { EXIT_FINDINGS } else { EXIT_CLEAN })
}

fn whatif(w: WhatifArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let policy = load(&w.model, err)?;
    let mutation = match (&w.mutation.assign, &w.mutation.activate) {
        (Some(text), _) => {
            let (user, role) = split_pair(text).map_err(|e| e.to_string())?;
            Mutation::AssignUserToRole { user, role }
        }
        (None, Some(text)) => {
            let (session, role) = split_pair(text).map_err(|e| e.to_string())?;
            Mutation::ActivateRoleInSession { session, role }
        }
        (None, None) => unreachable!("clap requires one mutation"),
    };
    let outcome = policy.whatif(&mutation, w.mode.mode()).map_err(|e| e.to_string())?;
    write_verdict(&policy, "before", &outcome.before, out);
    write_verdict(&policy, "after", &outcome.after, out);
    let _ = writeln!(out, "introduced: {}", outcome.introduced.len());
    for wit in &outcome.introduced {
        let _ = writeln!(out, "  {}", witness_line(&policy, wit));
    }
    Ok(if outcome.is_empty() { EXIT_CLEAN } else { EXIT_FINDINGS })
}

fn gen(g: GenArgs, out: &mut dyn Write) -> Outcome {
    let params = GeneratorParams {
        seed: g.seed,
        users: g.users,
        roles: g.roles,
        permissions: g.perms,
        activities: g.activities,
        groupings: g.groupings,
        domains: g.domains,
        constraints: g.constraints,
        sessions: g.sessions,
        ua_per_user: g.ua_per_user,
        pa_per_role: g.pa_per_role,
        rh_edge_probability: g.rh_probability,
        grouping_size: g.grouping_size,
        objects_per_domain: g.objects_per_domain,
        cross_domain_probability: g.cross_domain_probability,
        activities_per_constraint: g.activities_per_constraint,
        max_threshold: g.max_threshold,
        plant_conflicts: g.plant_conflicts,
    };
    let instance = generate_instance(&params).map_err(|e| e.to_string())?;
    let text = instance.to_text();
    emit(Some(&g.out), out, |w| w.write_all(text.as_bytes()))?;
    Ok(EXIT_CLEAN)
}
