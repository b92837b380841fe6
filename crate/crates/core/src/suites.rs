//! Named, seeded property suites.
//!
//! Each suite draws its cases from [`gen::case_rng`], checks one family of
//! invariants and reports per-case verdicts. A failing case carries the
//! generated input as JSON so it can be replayed.

use std::collections::HashSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::admissible::{brute_force_hulls, hull, is_admissible, AdmissibleSet};
use crate::error::{Error, Result};
use crate::gen::{self, Values};
use crate::ordinal::Ordinal;
use crate::orlicz::{OrliczConfig, OrliczNorm, SigmaSum};
use crate::scalars::{OrliczFunction, ScalarMap, SmoothStep, Template};
use crate::stepfn::{LevelMode, StepFunction};
use crate::talagrand::{Talagrand, TalagrandIndex, TripleEnum};
use crate::topology::{cofinal_sequence, count_rank_exactly, ClosedSet, OrdinalSpace, RankSlice};

/// Spaces in the suites satisfy `gamma < w^4`.
const MAX_HEIGHT: u64 = 3;
const MAX_PIECES: usize = 8;

/// Outcome of the checks of one case.
#[derive(Debug, Clone, Default)]
struct Checks {
    checks: u64,
    excluded: u64,
    failure: Option<String>,
}

impl Checks {
    fn single(ok: bool, detail: impl FnOnce() -> String) -> Self {
        let mut c = Checks::default();
        c.check(ok, detail);
        c
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(detail());
        }
    }
}

struct Case {
    input: Value,
    result: Result<Checks>,
}

type CaseFn = fn(&mut ChaCha8Rng, &OrliczConfig) -> Case;
type AggregateFn = fn(u64, u64) -> std::result::Result<String, String>;

pub struct Suite {
    pub name: &'static str,
    pub default_cases: u64,
    pub about: &'static str,
    run: CaseFn,
    /// Condition on the totals of all cases, beyond every case passing.
    aggregate: Option<AggregateFn>,
}

pub const SUITES: &[Suite] = &[
    Suite {
        name: "orlicz-equivalence",
        default_cases: 200,
        about: "sup|f| <= norm(f) <= sup|f|/a within 1e-9",
        run: orlicz_equivalence,
        aggregate: None,
    },
    Suite {
        name: "orlicz-approximation",
        default_cases: 200,
        about: "norm(f)/sup|f| <= 1/a + 1e-6 for a = 0.99 and 0.999",
        run: orlicz_approximation,
        aggregate: None,
    },
    Suite {
        name: "orlicz-gradient",
        default_cases: 50,
        about: "extrapolated central differences (step 1e-5) match the gradient to 1e-5",
        run: orlicz_gradient,
        aggregate: Some(gradient_exclusions),
    },
    Suite {
        name: "orlicz-axioms",
        default_cases: 200,
        about: "homogeneity, triangle inequality, monotone sum, bracket, alpha/beta identities",
        run: orlicz_axioms,
        aggregate: None,
    },
    Suite {
        name: "local-finiteness",
        default_cases: 100,
        about: "near f/norm(f) only the witness points carry nonzero Orlicz terms",
        run: local_finiteness,
        aggregate: None,
    },
    Suite {
        name: "hull",
        default_cases: 500,
        about: "hull(H) is admissible and A ⊆ H ⊆ V_A",
        run: hull_property,
        aggregate: None,
    },
    Suite {
        name: "hull-uniqueness",
        default_cases: 300,
        about: "exhaustive search finds exactly one admissible cover, equal to hull(H)",
        run: hull_uniqueness,
        aggregate: None,
    },
    Suite {
        name: "neighbourhood-trace",
        default_cases: 500,
        about: "V_B meets the top derived set exactly in B's top points",
        run: neighbourhood_trace,
        aggregate: None,
    },
    Suite {
        name: "liminf-bound",
        default_cases: 100,
        about: "beta(t) <= liminf alpha(t_n) along cofinal sequences",
        run: liminf_bound,
        aggregate: None,
    },
    Suite {
        name: "composition",
        default_cases: 50,
        about: "central differences of theta∘(f + s h) match (theta'∘f) h to 1e-6",
        run: composition,
        aggregate: None,
    },
    Suite {
        name: "bump-plateaus",
        default_cases: 100,
        about: "improved bump is exactly 1 below xi and exactly 0 from eta on",
        run: bump_plateaus,
        aggregate: None,
    },
    Suite {
        name: "talagrand-witness",
        default_cases: 200,
        about: "a nonzero coordinate sits at a point where |f| peaks",
        run: talagrand_witness,
        aggregate: None,
    },
    Suite {
        name: "talagrand-c0",
        default_cases: 100,
        about: "support(f, eps) is finite and 1000 random indices off it are below eps",
        run: talagrand_c0,
        aggregate: None,
    },
    Suite {
        name: "reconstruction",
        default_cases: 100,
        about: "|f - R_F f| < eps for F = support(f, lambda)",
        run: reconstruction,
        aggregate: None,
    },
    Suite {
        name: "talagrand-smoothness",
        default_cases: 50,
        about: "difference quotients of a coordinate converge at order >= 1.8",
        run: talagrand_smoothness,
        aggregate: Some(unresolved_orders),
    },
];

pub fn suite(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub seed: u64,
    /// Overrides every suite's default case count.
    pub cases: Option<u64>,
    pub config: OrliczConfig,
    pub parallel: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: 0,
            cases: None,
            config: OrliczConfig::default(),
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseReport {
    pub case: u64,
    pub passed: bool,
    pub checks: u64,
    #[serde(skip_serializing_if = "is_zero")]
    pub excluded: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// The generated input, kept for failing cases only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<Value>,
}

fn is_zero(x: &u64) -> bool {
    *x == 0
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: u64,
    pub config: OrliczConfig,
    pub passed: u64,
    pub failed: u64,
    pub checks: u64,
    pub excluded: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aggregate: Option<String>,
    pub ok: bool,
    pub results: Vec<CaseReport>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &CaseReport> {
        self.results.iter().filter(|c| !c.passed)
    }
}

/// Runs one suite, or every suite for `"all"`.
pub fn run(name: &str, opts: &RunOptions) -> Result<Vec<SuiteReport>> {
    if name == "all" {
        return SUITES.iter().map(|s| run_suite(s, opts)).collect();
    }
    let s = suite(name).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "unknown suite {name:?}; expected one of: all, {}",
            suite_names().join(", ")
        ))
    })?;
    Ok(vec![run_suite(s, opts)?])
}

pub fn run_suite(s: &Suite, opts: &RunOptions) -> Result<SuiteReport> {
    opts.config.validate()?;
    let n = opts.cases.unwrap_or(s.default_cases);
    let one = |i: u64| run_case(s, i, opts);
    let results: Vec<CaseReport> = if opts.parallel {
        (0..n).into_par_iter().map(one).collect()
    } else {
        (0..n).map(one).collect()
    };
    let passed = results.iter().filter(|c| c.passed).count() as u64;
    let checks = results.iter().map(|c| c.checks).sum();
    let excluded = results.iter().map(|c| c.excluded).sum();
    let mut ok = passed == n;
    let aggregate = s.aggregate.map(|agg| match agg(checks, excluded) {
        Ok(msg) => msg,
        Err(msg) => {
            ok = false;
            msg
        }
    });
    Ok(SuiteReport {
        suite: s.name.to_string(),
        seed: opts.seed,
        cases: n,
        config: opts.config,
        passed,
        failed: n - passed,
        checks,
        excluded,
        aggregate,
        ok,
        results,
    })
}

fn run_case(s: &Suite, i: u64, opts: &RunOptions) -> CaseReport {
    let mut rng = gen::case_rng(opts.seed, s.name, i);
    let case = (s.run)(&mut rng, &opts.config);
    let (checks, excluded, failure) = match case.result {
        Ok(c) => (c.checks, c.excluded, c.failure),
        Err(e) => (0, 0, Some(format!("error: {e}"))),
    };
    let passed = failure.is_none();
    CaseReport {
        case: i,
        passed,
        checks,
        excluded,
        input: if passed { None } else { Some(case.input) },
        detail: failure,
    }
}

/// `{"space": gamma, "pieces": [{"from": start, "value": v}, ...]}`
pub fn function_json(f: &StepFunction) -> Value {
    json!({
        "space": f.space().gamma().to_string(),
        "pieces": f
            .pieces()
            .iter()
            .map(|p| json!({"from": p.start.to_string(), "value": p.value}))
            .collect::<Vec<_>>(),
    })
}

fn points_json(points: &[Ordinal]) -> Value {
    json!(points.iter().map(Ordinal::to_string).collect::<Vec<_>>())
}

fn rel_err(approx: f64, exact: f64) -> f64 {
    if approx == exact {
        0.0
    } else {
        (approx - exact).abs() / exact.abs()
    }
}

fn random_function(rng: &mut ChaCha8Rng) -> (OrdinalSpace, StepFunction) {
    let k = gen::space(rng, MAX_HEIGHT);
    let f = gen::step_function(rng, &k, MAX_PIECES, Values::Uniform(2.0));
    (k, f)
}

fn orlicz_equivalence(rng: &mut ChaCha8Rng, cfg: &OrliczConfig) -> Case {
    let (k, f) = random_function(rng);
    let input = json!({"function": function_json(&f), "a": cfg.a});
    let result = (|| {
        let rho = OrliczNorm::new(*cfg, &k)?.norm(&f)?;
        let sup = f.sup_norm();
        Ok(Checks::single(
            sup - 1e-9 <= rho && rho <= sup / cfg.a + 1e-9,
            || format!("sup = {sup}, norm = {rho}, sup/a = {}", sup / cfg.a),
        ))
    })();
    Case { input, result }
}

fn orlicz_approximation(rng: &mut ChaCha8Rng, cfg: &OrliczConfig) -> Case {
    let (k, f) = random_function(rng);
    let input = json!({"function": function_json(&f)});
    let result = (|| {
        let mut c = Checks::default();
        let sup = f.sup_norm();
        for a in [0.99, 0.999] {
            let rho = OrliczNorm::new(OrliczConfig { a, ..*cfg }, &k)?.norm(&f)?;
            let ratio = rho / sup;
            c.check(rho >= sup - 1e-9 && ratio <= 1.0 / a + 1e-6, || {
                format!("a = {a}: norm/sup = {ratio}, 1/a = {}", 1.0 / a)
            });
        }
        Ok(c)
    })();
    Case { input, result }
}

pub const GRADIENT_STEP: f64 = 1e-5;
pub const GRADIENT_TOL: f64 = 1e-5;
/// Rounding floor of the extrapolated difference, in units of `rho / h`.
pub const FD_ROUNDING: f64 = 16.0 * f64::EPSILON;
/// Coordinates this close to `alpha_k` or `beta_k` are excluded.
pub const PLATEAU_BAND: f64 = 1e-4;

fn gradient_exclusions(checks: u64, excluded: u64) -> std::result::Result<String, String> {
    let total = checks + excluded;
    let msg = format!("{excluded} of {total} coordinates excluded near plateau edges");
    if excluded * 10 < total.max(1) {
        Ok(msg)
    } else {
        Err(format!("{msg} (limit 10%)"))
    }
}

fn unresolved_orders(checks: u64, excluded: u64) -> std::result::Result<String, String> {
    let total = checks + excluded;
    let msg = format!("{excluded} of {total} convergence orders below the rounding floor");
    if excluded * 10 < total.max(1) {
        Ok(msg)
    } else {
        Err(format!("{msg} (limit 10%)"))
    }
}

fn orlicz_gradient(rng: &mut ChaCha8Rng, cfg: &OrliczConfig) -> Case {
    let (k, f) = random_function(rng);
    let input = json!({"function": function_json(&f), "config": cfg});
    let result = (|| {
        let norm = OrliczNorm::new(*cfg, &k)?;
        let (part, vals) = f.param_view();
        let rho = norm.norm_on(&part, &vals)?;
        let grad = norm.gradient_on(&part, &vals)?;
        let mut c = Checks::default();
        for (j, (start, end)) in part.intervals().iter().enumerate() {
            let x = vals[j].abs() / rho;
            let near_edge = (0..=norm.height()).any(|r| {
                !count_rank_exactly(start, end, &Ordinal::from(r as u64)).is_zero()
                    && ((x - norm.alpha_k(r)).abs() < PLATEAU_BAND
                        || (x - norm.beta_k(r)).abs() < PLATEAU_BAND)
            });
            if near_edge {
                c.excluded += 1;
                continue;
            }
            let central = |h: f64| -> Result<f64> {
                let mut plus = vals.clone();
                let mut minus = vals.clone();
                plus[j] += h;
                minus[j] -= h;
                Ok((norm.norm_on(&part, &plus)? - norm.norm_on(&part, &minus)?) / (2.0 * h))
            };
            let h = GRADIENT_STEP;
            let fd = (4.0 * central(h / 2.0)? - central(h)?) / 3.0;
            let floor = FD_ROUNDING * rho / h;
            let err = rel_err(fd, grad[j]);
            c.check((fd - grad[j]).abs() <= GRADIENT_TOL * grad[j].abs() + floor, || {
                format!("piece {j}: difference {fd:e}, gradient {:e}, rel. err {err:e}", grad[j])
            });
        }
        Ok(c)
    })();
    Case { input, result }
}

fn orlicz_axioms(rng: &mut ChaCha8Rng, cfg: &OrliczConfig) -> Case {
    let (k, f) = random_function(rng);
    let g = gen::step_function(rng, &k, MAX_PIECES, Values::Uniform(2.0));
    let t = gen::point(rng, &k);
    let input = json!({"f": function_json(&f), "g": function_json(&g), "t": t.to_string()});
    let result = (|| {
        let norm = OrliczNorm::new(*cfg, &k)?;
        let tol = 10.0 * cfg.root_tol;
        let mut c = Checks::default();
        let nf = norm.norm(&f)?;
        let ng = norm.norm(&g)?;
        let n2 = norm.norm(&f.scale(2.0))?;
        c.check((n2 - 2.0 * nf).abs() <= tol, || format!("norm(2f) = {n2}, 2 norm(f) = {}", 2.0 * nf));
        let nsum = norm.norm(&f.add(&g)?)?;
        c.check(nsum <= nf + ng + tol, || format!("norm(f+g) = {nsum} > {nf} + {ng}"));
        c.check(nf > 0.0 && norm.norm(&StepFunction::zero(k.clone()))? == 0.0, || "zero only at 0".into());

        let sup = f.sup_norm();
        let at_top = norm.sigma_sum(&f, sup / cfg.a)?;
        c.check(at_top.at_most_one(), || format!("sum at sup/a is {at_top:?}"));
        let at_sup = norm.sigma_sum(&f, sup * (1.0 - 1e-12))?;
        c.check(!at_sup.at_most_one(), || format!("sum just below sup is {at_sup:?}"));

        let mut prev = f64::INFINITY;
        for i in 0..=40 {
            let rho = sup * 0.9 + (sup / cfg.a * 1.1 - sup * 0.9) * i as f64 / 40.0;
            let s = match norm.sigma_sum(&f, rho)? {
                SigmaSum::Finite(s) => s,
                SigmaSum::Infinite => f64::INFINITY,
            };
            c.check(s <= prev, || format!("sum increases at rho = {rho}: {prev} -> {s}"));
            prev = s;
        }

        let (alpha, beta) = (norm.alpha_of(&t)?, norm.beta_of(&t)?);
        let r = t.nu_rank().to_u64().unwrap() as usize;
        c.check(alpha == beta * norm.r_k(r), || format!("alpha {alpha} != beta {beta} * r"));
        c.check(0.0 < alpha && alpha < beta && beta <= 1.0, || format!("alpha {alpha}, beta {beta}"));
        Ok(c)
    })();
    Case { input, result }
}

fn local_finiteness(rng: &mut ChaCha8Rng, cfg: &OrliczConfig) -> Case {
    let (k, f) = random_function(rng);
    let perturbations: Vec<StepFunction> = (0..20)
        .map(|_| gen::step_function(rng, &k, MAX_PIECES, Values::Uniform(1.0)))
        .collect();
    let fractions: Vec<f64> = (0..20).map(|_| rng.gen_range(0.0..0.999)).collect();
    let input = json!({"function": function_json(&f), "config": cfg});
    let result = (|| {
        let norm = OrliczNorm::new(*cfg, &k)?;
        let w = norm.local_finiteness_witness(&f)?;
        let g = f.scale(1.0 / norm.norm(&f)?);
        let mut c = Checks::default();
        c.check(w.delta > 0.0, || format!("delta = {}", w.delta));
        for (p, frac) in perturbations.iter().zip(&fractions) {
            let p = p.scale(frac * w.delta / p.sup_norm());
            let h = g.add(&p)?;
            for piece in h.pieces() {
                for r in 0..=norm.height() {
                    let rank = Ordinal::from(r as u64);
                    if piece.value.abs() <= norm.alpha_k(r) {
                        continue;
                    }
                    let slice = RankSlice::in_interval(&piece.start, &piece.end, &rank);
                    let Some(points) = slice.points() else {
                        c.check(false, || {
                            format!("infinitely many active rank-{r} points in [{}, {}]", piece.start, piece.end)
                        });
                        continue;
                    };
                    for t in points.iter().filter(|t| t.nu_rank() == rank) {
                        c.check(w.points.binary_search(t).is_ok(), || {
                            format!("active point {t} is outside F = {}", points_json(&w.points))
                        });
                    }
                }
            }
        }
        Ok(c)
    })();
    Case { input, result }
}

fn hull_property(rng: &mut ChaCha8Rng, _: &OrliczConfig) -> Case {
    let k = gen::space(rng, MAX_HEIGHT);
    let h = gen::closed_set(rng, &k, 4);
    let input = json!({"space": k.gamma().to_string(), "set": h.to_string()});
    let result = (|| {
        let a = hull(&k, &h)?;
        let mut c = Checks::default();
        c.check(is_admissible(&k, a.points())?, || format!("{a} is not admissible"));
        c.check(a.points().iter().all(|t| h.contains(t)), || format!("{a} is not inside H"));
        c.check(h.is_covered_by(&a.neighborhood()), || format!("V_A does not cover H for A = {a}"));
        c.check(k.lemma1_check(a.points())?, || format!("V_A meets the top derived set outside A for {a}"));
        Ok(c)
    })();
    Case { input, result }
}

fn hull_uniqueness(rng: &mut ChaCha8Rng, _: &OrliczConfig) -> Case {
    let k = gen::space(rng, MAX_HEIGHT);
    let pts = gen::finite_points(rng, &k, 6);
    let input = json!({"space": k.gamma().to_string(), "points": points_json(&pts)});
    let result = (|| {
        let all = brute_force_hulls(&k, &pts)?;
        let a = hull(&k, &ClosedSet::from_points(&pts))?;
        let shown: Vec<String> = all.iter().map(AdmissibleSet::to_string).collect();
        Ok(Checks::single(all.len() == 1 && all[0] == a, || {
            format!("exhaustive search found [{}], hull gave {a}", shown.join(", "))
        }))
    })();
    Case { input, result }
}

fn neighbourhood_trace(rng: &mut ChaCha8Rng, _: &OrliczConfig) -> Case {
    let k = gen::space(rng, MAX_HEIGHT);
    let pts = gen::finite_points(rng, &k, 5);
    let input = json!({"space": k.gamma().to_string(), "points": points_json(&pts)});
    let result = k
        .lemma1_check(&pts)
        .map(|ok| Checks::single(ok, || "V_B meets the top derived set outside B".into()));
    Case { input, result }
}

fn liminf_bound(rng: &mut ChaCha8Rng, cfg: &OrliczConfig) -> Case {
    let (k, t) = loop {
        let k = gen::space(rng, MAX_HEIGHT);
        if let Some(t) = gen::limit_point(rng, &k) {
            break (k, t);
        }
    };
    let len = rng.gen_range(3..=8);
    let input = json!({"space": k.gamma().to_string(), "t": t.to_string(), "length": len});
    let result = (|| {
        let seq = cofinal_sequence(&t, len)?;
        let ok = OrliczNorm::new(*cfg, &k)?.lemma6_check(&t, &seq)?;
        Ok(Checks::single(ok, || format!("rank test fails along {}", points_json(&seq))))
    })();
    Case { input, result }
}

pub const COMPOSITION_STEP: f64 = 1e-5;
pub const COMPOSITION_TOL: f64 = 1e-6;

fn template(rng: &mut ChaCha8Rng) -> Template {
    match rng.gen_range(0..5) {
        0 => Template::Square,
        1 => Template::Exp(rng.gen_range(-1.0..1.0)),
        2 => Template::Tanh,
        3 => {
            let a = rng.gen_range(0.0..1.0);
            let b = a + rng.gen_range(0.5..1.5);
            Template::Step(SmoothStep::new(a, b).expect("a < b"))
        }
        _ => {
            let alpha = rng.gen_range(0.05..0.45);
            let beta = rng.gen_range(alpha + 0.5..=1.0);
            Template::Orlicz(OrliczFunction::new(alpha, beta, 0.5).expect("alpha < beta <= 1"))
        }
    }
}

/// A value where the central difference of `theta` resolves its
/// derivative in double precision: on a plateau, or at least 15% of the
/// transition width away from its edges.
fn resolvable_value(rng: &mut ChaCha8Rng, theta: &Template) -> f64 {
    let (lo, hi) = match theta {
        Template::Step(s) => (s.lower(), s.upper()),
        Template::Orlicz(p) => (p.alpha(), p.beta()),
        _ => return rng.gen_range(-2.0..2.0),
    };
    let band = 0.15 * (hi - lo);
    let r = match rng.gen_range(0..3) {
        0 if lo > band => rng.gen_range(0.0..lo - band),
        2 => rng.gen_range(hi + band..hi + 1.0),
        _ => rng.gen_range(lo + band..hi - band),
    };
    if rng.gen_bool(0.5) {
        r
    } else {
        -r
    }
}

fn composition(rng: &mut ChaCha8Rng, _: &OrliczConfig) -> Case {
    let k = gen::space(rng, MAX_HEIGHT);
    let theta = template(rng);
    let shape = gen::step_function(rng, &k, MAX_PIECES, Values::Uniform(1.0));
    let (part, _) = shape.param_view();
    let fv: Vec<f64> = (0..part.len()).map(|_| resolvable_value(rng, &theta)).collect();
    let hv: Vec<f64> = (0..part.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let input = json!({
        "space": k.gamma().to_string(),
        "starts": points_json(&part.intervals().iter().map(|(s, _)| s.clone()).collect::<Vec<_>>()),
        "f": fv, "h": hv, "theta": theta.to_string(),
    });
    let result = (|| {
        let f = part.rebuild(&fv)?;
        let h = part.rebuild(&hv)?;
        let s = COMPOSITION_STEP;
        let plus = f.add(&h.scale(s))?.compose_scalar(|x| theta.value(x));
        let minus = f.add(&h.scale(-s))?.compose_scalar(|x| theta.value(x));
        let fd = plus.zip_with(&minus, |a, b| (a - b) / (2.0 * s))?;
        let exact = f.compose_derivative(&theta, &h)?;
        let mut c = Checks::default();
        for (start, _) in part.intervals() {
            let (a, b) = (fd.eval(start)?, exact.eval(start)?);
            let err = rel_err(a, b);
            c.check(err <= COMPOSITION_TOL, || {
                format!("at {start}: difference {a:e}, formula {b:e}, rel. err {err:e}")
            });
        }
        Ok(c)
    })();
    Case { input, result }
}

fn bump_plateaus(rng: &mut ChaCha8Rng, cfg: &OrliczConfig) -> Case {
    let (k, f) = random_function(rng);
    let xi = rng.gen_range(0.05..1.0);
    let eta = xi + rng.gen_range(0.05..1.0);
    let low = rng.gen_range(0.1..1.0);
    let high = rng.gen_range(1.0..3.0);
    let input = json!({"function": function_json(&f), "xi": xi, "eta": eta, "low": low, "high": high});
    let result = (|| {
        let tal = Talagrand::new(&k, *cfg)?;
        let sup = f.sup_norm();
        let below = f.scale(xi * low / sup);
        let above = f.scale(eta * high / sup);
        let mut c = Checks::default();
        if below.sup_norm() <= xi {
            let b = tal.improved_bump(xi, eta, &below)?;
            c.check(b == 1.0, || format!("bump below xi is {b}"));
        }
        if above.sup_norm() >= eta {
            let b = tal.improved_bump(xi, eta, &above)?;
            c.check(b == 0.0, || format!("bump above eta is {b}"));
        }
        let b = tal.norm().bump(&StepFunction::zero(k.clone()))?;
        c.check(b == 1.0, || format!("bump(0) = {b}"));
        Ok(c)
    })();
    Case { input, result }
}

fn talagrand_witness(rng: &mut ChaCha8Rng, cfg: &OrliczConfig) -> Case {
    let (k, f) = random_function(rng);
    let input = json!({"function": function_json(&f)});
    let result = (|| {
        let tal = Talagrand::new(&k, *cfg)?;
        let w = tal.witness(&f)?;
        let again = tal.coordinate(&f, &w.index)?;
        let at = f.eval(&w.index.s)?.abs();
        let mut c = Checks::default();
        c.check(again != 0.0 && again == w.value, || {
            format!("coordinate {again} at {} (reported {})", w.index, w.value)
        });
        c.check(at == f.sup_norm(), || format!("|f(s)| = {at} < sup = {}", f.sup_norm()));
        Ok(c)
    })();
    Case { input, result }
}

pub const C0_EPS: [f64; 2] = [1e-2, 1e-4];
pub const C0_SAMPLES: usize = 1000;

fn random_index(
    rng: &mut ChaCha8Rng,
    k: &OrdinalSpace,
    f: &StepFunction,
    prefix: u128,
) -> Result<TalagrandIndex> {
    let n = rng.gen_range(0..2 * prefix + 16);
    let triple = TripleEnum::unrank(n)?;
    let level = f.level_set(LevelMode::AtLeast(triple.eta.to_f64()));
    let set = match rng.gen_range(0..10) {
        0..=3 if !level.is_empty() => hull(k, &level)?,
        4..=6 => hull(k, &gen::closed_set(rng, k, 3))?,
        _ => hull(k, &ClosedSet::from_points(&gen::finite_points(rng, k, 4)))?,
    };
    let s = if rng.gen_bool(0.8) {
        gen::choose(rng, set.points()).clone()
    } else {
        gen::point(rng, k)
    };
    Ok(TalagrandIndex { s, triple, set })
}

fn talagrand_c0(rng: &mut ChaCha8Rng, cfg: &OrliczConfig) -> Case {
    let (k, f) = random_function(rng);
    let input = json!({"function": function_json(&f)});
    let mut sub = gen::case_rng(rng.gen(), "talagrand-c0/indices", 0);
    let result = (|| {
        let tal = Talagrand::new(&k, *cfg)?;
        let mut c = Checks::default();
        for eps in C0_EPS {
            let support = tal.support(&f, eps, None)?;
            let prefix = TripleEnum::prefix_len(eps);
            let widest = support.iter().map(|e| e.index.set.len()).max().unwrap_or(0);
            c.check(support.len() as u128 <= prefix * widest as u128, || {
                format!("support of size {} exceeds the prefix bound", support.len())
            });
            for e in &support {
                let direct = tal.coordinate(&f, &e.index)?;
                let level = f.level_set(LevelMode::AtLeast(e.index.triple.eta.to_f64()));
                c.check(direct == e.value && e.value >= eps, || {
                    format!("support entry {} has value {} but coordinate {direct}", e.index, e.value)
                });
                c.check(hull(&k, &level)? == e.index.set, || {
                    format!("support entry {} is not at the level-set hull", e.index)
                });
            }
            let listed: HashSet<&TalagrandIndex> = support.iter().map(|e| &e.index).collect();
            let mut drawn = 0;
            while drawn < C0_SAMPLES {
                let idx = random_index(&mut sub, &k, &f, prefix)?;
                if listed.contains(&idx) {
                    continue;
                }
                drawn += 1;
                let v = tal.coordinate(&f, &idx)?;
                c.check(v.abs() < eps, || format!("eps = {eps}: off-support {idx} has coordinate {v}"));
                if v != 0.0 {
                    let level = f.level_set(LevelMode::AtLeast(idx.triple.eta.to_f64()));
                    c.check(!level.is_empty() && hull(&k, &level)? == idx.set, || {
                        format!("nonzero coordinate {v} at {idx} away from the level-set hull")
                    });
                }
            }
        }
        Ok(c)
    })();
    Case { input, result }
}

fn reconstruction(rng: &mut ChaCha8Rng, cfg: &OrliczConfig) -> Case {
    let k = gen::space(rng, MAX_HEIGHT);
    let f = gen::step_function(rng, &k, MAX_PIECES, Values::Grid { step: 0.5, r: 2.0 });
    let eps = rng.gen_range(0..=4) as f64 * 0.5 + 0.25;
    let input = json!({"function": function_json(&f), "eps": eps});
    let result = (|| {
        let r = Talagrand::new(&k, *cfg)?.verify_reconstruction(&f, eps)?;
        Ok(Checks::single(r.err < eps && r.err <= r.m0, || {
            format!("err = {}, m0 = {}, eps = {eps}", r.err, r.m0)
        }))
    })();
    Case { input, result }
}

pub const SMOOTHNESS_ORDER: f64 = 1.8;

fn talagrand_smoothness(rng: &mut ChaCha8Rng, cfg: &OrliczConfig) -> Case {
    let k = gen::space(rng, MAX_HEIGHT);
    let shape = gen::step_function(rng, &k, MAX_PIECES, Values::Grid { step: 0.5, r: 2.0 });
    let n = rng.gen_range(0..2000u128);
    let flat = rng.gen_bool(0.3);
    let (part, shape_vals) = shape.param_view();
    let top = shape.sup_norm();
    let mut draws = Vec::with_capacity(part.len());
    for v in &shape_vals {
        draws.push((v.abs() == top, rng.gen_range(0.3..0.7), rng.gen_range(0.0..0.5)));
    }
    let direction: Vec<f64> = (0..part.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let input = json!({"function": function_json(&shape), "n": n.to_string(), "flat": flat, "direction": direction});
    let result = (|| {
        let triple = TripleEnum::unrank(n)?;
        let (xi, eta, zeta) = triple.as_f64();
        // peak pieces sit inside (eta, zeta) or above zeta; the rest stay
        // below xi/2 so the bump factor is on its plateau
        let vals: Vec<f64> = draws
            .iter()
            .map(|&(peak, u, low)| match (peak, flat) {
                (true, false) => eta + u * (zeta - eta),
                (true, true) => zeta + 0.01 + u,
                (false, _) => low * xi,
            })
            .collect();
        let f = part.rebuild(&vals)?;
        let set = hull(&k, &f.level_set(LevelMode::AtLeast(eta)))?;
        let idx = TalagrandIndex {
            s: set.points()[0].clone(),
            triple,
            set,
        };
        let tal = Talagrand::new(&k, *cfg)?;
        let (_, fv) = f.param_view();
        let dir: Vec<f64> = if fv.len() == direction.len() {
            direction.clone()
        } else {
            direction[..fv.len().min(direction.len())].to_vec()
        };
        let report = tal.coordinate_smoothness_probe(&f, &idx, &dir)?;
        let mut c = Checks::default();
        c.check(report.locally_constant() == flat, || {
            format!("flat = {flat} but derivatives {:?}", report.derivatives)
        });
        match report.order {
            None if !flat => c.excluded += 1,
            None => {}
            Some(order) => c.check(order >= SMOOTHNESS_ORDER, || {
                format!("order {order} from derivatives {:?} noise {}", report.derivatives, report.noise)
            }),
        }
        Ok(c)
    })();
    Case { input, result }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let mut names = suite_names();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), SUITES.len());
        assert!(suite("hull").is_some());
        assert!(run("nope", &RunOptions::default()).is_err());
    }

    #[test]
    fn parallel_and_serial_agree() {
        let mut opts = RunOptions {
            seed: 3,
            cases: Some(20),
            ..Default::default()
        };
        let par = run("hull", &opts).unwrap();
        opts.parallel = false;
        let ser = run("hull", &opts).unwrap();
        assert_eq!(par, ser);
        assert!(par[0].ok);
    }
}
