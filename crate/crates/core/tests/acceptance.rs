//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the verdicts print directly; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ckrenorm::suites::{self, RunOptions, SuiteReport};

const SEED: u64 = 0;

struct Criterion {
    id: u32,
    name: &'static str,
    suites: &'static [&'static str],
    limit: Option<Duration>,
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, name: "norm equivalence, a = 0.9", suites: &["orlicz-equivalence"], limit: Some(Duration::from_secs(10)) },
    Criterion { id: 2, name: "approximation factor, a = 0.99, 0.999", suites: &["orlicz-approximation"], limit: None },
    Criterion { id: 3, name: "norm gradient vs finite differences", suites: &["orlicz-gradient"], limit: Some(Duration::from_secs(20)) },
    Criterion { id: 4, name: "hull property and uniqueness", suites: &["hull", "hull-uniqueness"], limit: Some(Duration::from_secs(5)) },
    Criterion { id: 5, name: "neighbourhoods meet the top derived set only in B", suites: &["neighbourhood-trace"], limit: None },
    Criterion { id: 6, name: "witness at a peak point", suites: &["talagrand-witness"], limit: None },
    Criterion { id: 7, name: "coordinates vanish at infinity", suites: &["talagrand-c0"], limit: None },
    Criterion { id: 8, name: "reconstruction error below eps", suites: &["reconstruction"], limit: None },
    Criterion { id: 9, name: "beta(t) <= liminf alpha(t_n)", suites: &["liminf-bound"], limit: None },
    Criterion { id: 10, name: "composition derivative", suites: &["composition"], limit: None },
    Criterion { id: 11, name: "bump plateaus are exact", suites: &["bump-plateaus"], limit: None },
];

fn summary(r: &SuiteReport) -> String {
    let mut s = format!("{} {}/{} cases", r.suite, r.passed, r.cases);
    if let Some(agg) = &r.aggregate {
        s.push_str(&format!(" ({agg})"));
    }
    s
}

fn first_failure(r: &SuiteReport) -> Option<String> {
    if let Some(c) = r.failures().next() {
        return Some(format!(
            "{} case {}: {}",
            r.suite,
            c.case,
            c.detail.as_deref().unwrap_or("failed")
        ));
    }
    (!r.ok).then(|| format!("{}: {}", r.suite, r.aggregate.as_deref().unwrap_or("failed")))
}

fn main() -> ExitCode {
    let opts = RunOptions { seed: SEED, ..Default::default() };
    let mut all_ok = true;
    let mut line = |ok: bool, id: u32, name: &str, detail: String| {
        all_ok &= ok;
        println!("[{}] criterion {id:>2}: {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    };

    for c in CRITERIA {
        let start = Instant::now();
        let mut reports = Vec::new();
        let mut errors = Vec::new();
        for name in c.suites {
            match suites::run(name, &opts) {
                Ok(mut r) => reports.append(&mut r),
                Err(e) => errors.push(format!("{name}: {e}")),
            }
        }
        let elapsed = start.elapsed();
        let mut ok = errors.is_empty() && reports.iter().all(|r| r.ok);
        let mut detail: Vec<String> = reports.iter().map(summary).chain(errors).collect();
        if let Some(f) = reports.iter().find_map(first_failure) {
            detail.push(format!("first failure: {f}"));
        }
        match c.limit {
            Some(limit) if elapsed > limit => {
                ok = false;
                detail.push(format!("{:.2}s exceeds {}s", elapsed.as_secs_f64(), limit.as_secs()));
            }
            _ => detail.push(format!("{:.2}s", elapsed.as_secs_f64())),
        }
        line(ok, c.id, c.name, detail.join("; "));
    }

    let start = Instant::now();
    let first = suites::run("all", &opts);
    let elapsed = start.elapsed();
    let second = suites::run("all", &opts);
    match (first, second) {
        (Ok(a), Ok(b)) => {
            let passed = a.iter().all(|r| r.ok);
            let same = a == b;
            let fast = elapsed <= Duration::from_secs(60);
            let failing: Vec<&str> = a.iter().filter(|r| !r.ok).map(|r| r.suite.as_str()).collect();
            line(
                passed && same && fast,
                12,
                "full suite, timed and deterministic",
                format!(
                    "{} suites, {:.2}s (limit 60s), rerun identical: {same}{}",
                    a.len(),
                    elapsed.as_secs_f64(),
                    if failing.is_empty() { String::new() } else { format!(", failing: {}", failing.join(", ")) }
                ),
            );
        }
        (Err(e), _) | (_, Err(e)) => line(false, 12, "full suite, timed and deterministic", e.to_string()),
    }

    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
