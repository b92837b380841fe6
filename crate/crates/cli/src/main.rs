mod error;
mod scenario;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ckrenorm::admissible::hull;
use ckrenorm::orlicz::{OrliczConfig, OrliczNorm};
use ckrenorm::suites::{self, RunOptions, SuiteReport};
use ckrenorm::talagrand::{SupportEntry, Talagrand};
use ckrenorm::topology::{ClosedSet, OrdinalSpace};
use ckrenorm::Ordinal;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use error::CliError;
use scenario::{load_config, Scenario, Task};

#[derive(Parser)]
#[command(name = "ckrenorm", version)]
#[command(about = "Exact ordinal topology, smooth Orlicz norms and a Talagrand operator on C([0, gamma])")]
struct Cli {
    /// Print machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    /// JSON file with default Orlicz config values
    #[arg(long, global = true, env = "CKRENORM_CONFIG")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cantor-Bendixson rank of a point
    Rank { point: Ordinal },
    /// Whether a point lies in the derived set of order ALPHA
    Derive {
        point: Ordinal,
        #[arg(long)]
        alpha: Ordinal,
        /// Space [0, SPACE]; defaults to [0, POINT]
        #[arg(long)]
        space: Option<Ordinal>,
    },
    /// Canonical clopen neighbourhood V_t
    Vt {
        point: Ordinal,
        #[arg(long)]
        space: Option<Ordinal>,
    },
    /// Admissible hull of a closed set such as "[0, 5] u {w^2}"
    Hull {
        set: String,
        /// Space [0, SPACE]; defaults to the largest point of the set
        #[arg(long)]
        space: Option<Ordinal>,
    },
    /// Orlicz norm of a scenario function
    Norm { scenario: PathBuf, function: String },
    /// Gradient of the Orlicz norm in the piece values
    Grad { scenario: PathBuf, function: String },
    /// Coordinates of the Talagrand operator of size at least EPS
    TalSupport {
        scenario: PathBuf,
        function: String,
        #[arg(long)]
        eps: f64,
    },
    /// A nonzero coordinate at a point where |f| peaks
    TalWitness { scenario: PathBuf, function: String },
    /// Reconstruct f from its large coordinates and report the error
    Reconstruct {
        scenario: PathBuf,
        function: String,
        #[arg(long)]
        eps: f64,
    },
    /// Run a seeded property suite ("all" runs every suite)
    Check {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cases per suite; defaults to each suite's own count
        #[arg(long)]
        cases: Option<u64>,
        /// Worker threads; 1 runs cases sequentially
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run every task of a scenario
    Run { scenario: PathBuf },
    /// List the property suites
    Suites,
}

/// Result of one command: text for people, JSON for machines.
struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, ok: true }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() && std::env::args().any(|a| a == "--json") => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or_default();
            let err = CliError::Input(first.trim_start_matches("error: ").to_string());
            emit(&serde_json::to_string_pretty(&err.to_json()).expect("JSON value"));
            return ExitCode::from(2);
        }
        Err(e) => e.exit(),
    };
    match execute(&cli) {
        Ok(out) => {
            if cli.json {
                emit(&serde_json::to_string_pretty(&out.json).expect("JSON value"));
            } else {
                emit(&out.text);
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            if cli.json {
                emit(&serde_json::to_string_pretty(&e.to_json()).expect("JSON value"));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}

/// Prints to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    let base = || load_config(cli.config.as_deref());
    match &cli.command {
        Command::Rank { point } => rank(point),
        Command::Derive { point, alpha, space } => {
            derive(&space_or(space, point), point, alpha)
        }
        Command::Vt { point, space } => vt(&space_or(space, point), point),
        Command::Hull { set, space } => {
            let h: ClosedSet = set.parse()?;
            let top = h.max_point().cloned().ok_or(ckrenorm::Error::EmptySet)?;
            hull_of(&space_or(space, &top), &h)
        }
        Command::Norm { scenario, function } => on_function(scenario, base()?, |s| {
            norm(s, function)
        }),
        Command::Grad { scenario, function } => on_function(scenario, base()?, |s| {
            grad(s, function)
        }),
        Command::TalSupport { scenario, function, eps } => on_function(scenario, base()?, |s| {
            tal_support(s, function, *eps)
        }),
        Command::TalWitness { scenario, function } => on_function(scenario, base()?, |s| {
            tal_witness(s, function)
        }),
        Command::Reconstruct { scenario, function, eps } => on_function(scenario, base()?, |s| {
            reconstruct(s, function, *eps)
        }),
        Command::Check { suite, seed, cases, threads } => check(suite, *seed, *cases, *threads, base()?),
        Command::Run { scenario } => run(scenario, base()?),
        Command::Suites => Ok(list_suites()),
    }
}

fn space_or(space: &Option<Ordinal>, fallback: &Ordinal) -> OrdinalSpace {
    OrdinalSpace::new(space.clone().unwrap_or_else(|| fallback.clone()))
}

fn on_function(
    path: &Path,
    base: OrliczConfig,
    op: impl FnOnce(&Scenario) -> Result<Output, CliError>,
) -> Result<Output, CliError> {
    op(&Scenario::load(path, base)?)
}

fn rank(point: &Ordinal) -> Result<Output, CliError> {
    let r = point.nu_rank();
    Ok(Output::ok(r.to_string(), json!({"point": point.to_string(), "rank": r.to_string()})))
}

fn derive(space: &OrdinalSpace, point: &Ordinal, alpha: &Ordinal) -> Result<Output, CliError> {
    let member = space.in_derived(point, alpha)?;
    Ok(Output::ok(
        member.to_string(),
        json!({
            "space": space.gamma().to_string(),
            "point": point.to_string(),
            "alpha": alpha.to_string(),
            "member": member,
        }),
    ))
}

fn vt(space: &OrdinalSpace, point: &Ordinal) -> Result<Output, CliError> {
    let v = space.canonical_vt(point)?;
    let (lo, hi) = v.bounds();
    Ok(Output::ok(
        v.to_string(),
        json!({
            "point": point.to_string(),
            "vt": v.to_string(),
            "first": lo.to_string(),
            "last": hi.to_string(),
        }),
    ))
}

fn hull_of(space: &OrdinalSpace, h: &ClosedSet) -> Result<Output, CliError> {
    let a = hull(space, h)?;
    Ok(Output::ok(
        a.to_string(),
        json!({"space": space.gamma().to_string(), "set": h.to_string(), "hull": a}),
    ))
}

fn norm(s: &Scenario, name: &str) -> Result<Output, CliError> {
    let f = s.function(name)?;
    let rho = OrliczNorm::new(s.config, &s.space)?.norm(f)?;
    Ok(Output::ok(
        format!("{rho}"),
        json!({"function": name, "norm": rho, "sup_norm": f.sup_norm(), "config": s.config}),
    ))
}

fn grad(s: &Scenario, name: &str) -> Result<Output, CliError> {
    let f = s.function(name)?;
    let norm = OrliczNorm::new(s.config, &s.space)?;
    let (part, vals) = f.param_view();
    let rho = norm.norm_on(&part, &vals)?;
    let g: Vec<f64> = norm.gradient_on(&part, &vals)?.into_iter().map(|d| d + 0.0).collect();
    let mut text = vec![format!("norm {rho}")];
    let mut pieces = Vec::new();
    for (((start, end), v), d) in part.intervals().iter().zip(&vals).zip(&g) {
        text.push(format!("[{start}, {end}]  value {v}  gradient {d}"));
        pieces.push(json!({"start": start.to_string(), "end": end.to_string(), "value": v, "gradient": d}));
    }
    Ok(Output::ok(
        text.join("\n"),
        json!({"function": name, "norm": rho, "pieces": pieces, "config": s.config}),
    ))
}

fn entry_json(e: &SupportEntry) -> Value {
    json!({
        "n": e.n,
        "s": e.index.s.to_string(),
        "triple": e.index.triple.to_string(),
        "set": e.index.set,
        "value": e.value,
    })
}

fn tal_support(s: &Scenario, name: &str, eps: f64) -> Result<Output, CliError> {
    let f = s.function(name)?;
    let entries = Talagrand::new(&s.space, s.config)?.support(f, eps, None)?;
    let mut text = vec![format!("{} coordinates >= {eps}", entries.len())];
    text.extend(entries.iter().map(|e| format!("n = {}  {}  {}", e.n, e.index, e.value)));
    Ok(Output::ok(
        text.join("\n"),
        json!({
            "function": name,
            "eps": eps,
            "entries": entries.iter().map(entry_json).collect::<Vec<_>>(),
        }),
    ))
}

fn tal_witness(s: &Scenario, name: &str) -> Result<Output, CliError> {
    let f = s.function(name)?;
    let w = Talagrand::new(&s.space, s.config)?.witness(f)?;
    let at = f.eval(&w.index.s)?;
    Ok(Output::ok(
        format!("n = {}  {}  coordinate {}  |f(s)| = {}", w.n, w.index, w.value, at.abs()),
        json!({"function": name, "witness": entry_json(&w), "f_s": at, "sup_norm": f.sup_norm()}),
    ))
}

fn reconstruct(s: &Scenario, name: &str, eps: f64) -> Result<Output, CliError> {
    let f = s.function(name)?;
    let r = Talagrand::new(&s.space, s.config)?.verify_reconstruction(f, eps)?;
    let ok = r.err < eps;
    let text = format!(
        "{}: |f - R_F f| = {} (eps {eps}, m0 {}, |F| = {})",
        if ok { "ok" } else { "FAILED" },
        r.err,
        r.m0,
        r.support.len()
    );
    Ok(Output {
        text,
        json: json!({
            "function": name,
            "eps": eps,
            "lambda": r.lambda,
            "triple": r.triple.map(|t| t.to_string()),
            "m0": r.m0,
            "support_size": r.support.len(),
            "err": r.err,
            "ok": ok,
        }),
        ok,
    })
}

fn run_task(s: &Scenario, task: &Task) -> Result<Output, CliError> {
    match task {
        Task::Rank { point } => rank(point),
        Task::Derive { point, alpha } => derive(&s.space, point, alpha),
        Task::Vt { point } => vt(&s.space, point),
        Task::Hull { set } => hull_of(&s.space, &set.parse()?),
        Task::Norm { function } => norm(s, function),
        Task::Grad { function } => grad(s, function),
        Task::TalSupport { function, eps } => tal_support(s, function, *eps),
        Task::TalWitness { function } => tal_witness(s, function),
        Task::Reconstruct { function, eps } => reconstruct(s, function, *eps),
    }
}

fn task_kind(task: &Task) -> &'static str {
    match task {
        Task::Rank { .. } => "rank",
        Task::Derive { .. } => "derive",
        Task::Vt { .. } => "vt",
        Task::Hull { .. } => "hull",
        Task::Norm { .. } => "norm",
        Task::Grad { .. } => "grad",
        Task::TalSupport { .. } => "tal-support",
        Task::TalWitness { .. } => "tal-witness",
        Task::Reconstruct { .. } => "reconstruct",
    }
}

fn run(path: &Path, base: OrliczConfig) -> Result<Output, CliError> {
    let s = Scenario::load(path, base)?;
    let mut text = Vec::new();
    let mut results = Vec::new();
    let mut ok = true;
    for (i, task) in s.tasks.iter().enumerate() {
        let kind = task_kind(task);
        match run_task(&s, task) {
            Ok(out) => {
                ok &= out.ok;
                text.push(format!("[{i}] {kind}: {}", out.text.replace('\n', "\n    ")));
                results.push(json!({"task": i, "kind": kind, "ok": out.ok, "result": out.json}));
            }
            // input errors abort the run; failed checks are reported per task
            Err(e) if e.exit_code() == 2 => return Err(CliError::Input(format!("task {i} ({kind}): {e}"))),
            Err(e) => {
                ok = false;
                text.push(format!("[{i}] {kind}: error: {e}"));
                results.push(json!({"task": i, "kind": kind, "ok": false, "error": e.to_string()}));
            }
        }
    }
    Ok(Output {
        text: text.join("\n"),
        json: json!({
            "space": s.space.gamma().to_string(),
            "config": s.config,
            "results": results,
            "ok": ok,
        }),
        ok,
    })
}

fn suite_text(r: &SuiteReport) -> String {
    let mut lines = vec![format!(
        "{} {}: {}/{} cases passed, {} checks{}{}",
        if r.ok { "PASS" } else { "FAIL" },
        r.suite,
        r.passed,
        r.cases,
        r.checks,
        if r.excluded > 0 { format!(", {} excluded", r.excluded) } else { String::new() },
        r.aggregate.as_ref().map(|a| format!(" ({a})")).unwrap_or_default(),
    )];
    for c in r.failures() {
        lines.push(format!("  case {}: {}", c.case, c.detail.as_deref().unwrap_or("failed")));
        if let Some(input) = &c.input {
            lines.push(format!("    input: {input}"));
        }
    }
    lines.join("\n")
}

fn check(
    suite: &str,
    seed: u64,
    cases: Option<u64>,
    threads: Option<usize>,
    config: OrliczConfig,
) -> Result<Output, CliError> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Input("--threads must be at least 1".into()));
        }
        // a second initialisation only happens in-process and is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let opts = RunOptions {
        seed,
        cases,
        config,
        parallel: threads != Some(1),
    };
    let reports = suites::run(suite, &opts).map_err(|e| match e {
        ckrenorm::Error::InvalidArgument(msg) => CliError::Input(msg),
        other => other.into(),
    })?;
    let ok = reports.iter().all(|r| r.ok);
    Ok(Output {
        text: reports.iter().map(suite_text).collect::<Vec<_>>().join("\n"),
        json: json!({"suite": suite, "seed": seed, "config": config, "ok": ok, "suites": reports}),
        ok,
    })
}

fn list_suites() -> Output {
    let text = suites::SUITES
        .iter()
        .map(|s| format!("{:<22} {:>4} cases  {}", s.name, s.default_cases, s.about))
        .collect::<Vec<_>>()
        .join("\n");
    let json = suites::SUITES
        .iter()
        .map(|s| json!({"name": s.name, "cases": s.default_cases, "about": s.about}))
        .collect();
    Output::ok(text, Value::Array(json))
}

