//! The non-linear Talagrand operator `T : C(K) -> c_0(K × Q × A)`.
//!
//! ```text
//! (Tf)(s, xi, eta, zeta, A) = c(xi, eta, zeta)
//!                           * bump_{xi,eta}(f × χ_{K \ V_A})
//!                           * prod_{t in A} phi_{eta,zeta}(f(t))
//!                           * χ_A(s)
//! ```
//!
//! Triples are dyadic and enumerated level by level: level `L` uses the grid
//! `G_L = {j / 2^L : 1 <= j <= L * 2^L}` and holds the increasing triples
//! from `G_L` that do not lie entirely in `G_{L-1}`, ordered by `(zeta, eta,
//! xi)`. The `n`-th triple has weight `1 / ((n + 1)(n + 2))`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::admissible::{hull, AdmissibleSet};
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::orlicz::{OrliczConfig, OrliczNorm};
use crate::scalars::{sigma, ScalarMap, SmoothStep};
use crate::stepfn::{LevelMode, StepFunction};
use crate::topology::{Neighborhood, OrdinalSpace};

/// Largest level whose triple counts fit in `u128`.
pub const MAX_LEVEL: u32 = 38;

/// Positive dyadic rational `num / 2^exp` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dyadic {
    num: u64,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: u64, exp: u32) -> Result<Self> {
        if num == 0 {
            return Err(Error::InvalidArgument("dyadic must be positive".into()));
        }
        if exp > 62 {
            return Err(Error::InvalidArgument(format!("denominator 2^{exp} too large")));
        }
        let shift = num.trailing_zeros().min(exp);
        Ok(Dyadic {
            num: num >> shift,
            exp: exp - shift,
        })
    }

    /// Exact conversion; fails unless `x` is a positive dyadic.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::InvalidArgument(format!("{x} is not a positive dyadic")));
        }
        let mut exp = 0u32;
        let mut y = x;
        while y.fract() != 0.0 {
            y *= 2.0;
            exp += 1;
            if exp > MAX_LEVEL {
                return Err(Error::InvalidArgument(format!("{x} is not a short dyadic")));
            }
        }
        if y >= u64::MAX as f64 {
            return Err(Error::InvalidArgument(format!("{x} is too large")));
        }
        Dyadic::new(y as u64, exp)
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / (1u64 << self.exp) as f64
    }

    /// First level whose grid contains this value.
    pub fn level(&self) -> u32 {
        let ceil = self.num.div_ceil(1u64 << self.exp);
        (self.exp as u64).max(ceil).max(1).min(u32::MAX as u64) as u32
    }

    fn position(&self, level: u32) -> u64 {
        self.num << (level - self.exp)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let e = self.exp.max(other.exp);
        let a = (self.num as u128) << (e - self.exp);
        let b = (other.num as u128) << (e - other.exp);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, 1u64 << self.exp)
        }
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let bad = || Error::InvalidArgument(format!("bad dyadic literal {s:?}"));
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let q: u64 = q.trim().parse().map_err(|_| bad())?;
            if !q.is_power_of_two() {
                return Err(bad());
            }
            Dyadic::new(p, q.trailing_zeros())
        } else {
            let x: f64 = s
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad dyadic literal {s:?}")))?;
            Dyadic::from_f64(x)
        }
    }
}

/// `0 < xi < eta < zeta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub xi: Dyadic,
    pub eta: Dyadic,
    pub zeta: Dyadic,
}

impl Triple {
    pub fn new(xi: Dyadic, eta: Dyadic, zeta: Dyadic) -> Result<Self> {
        if !(xi < eta && eta < zeta) {
            return Err(Error::InvalidArgument(format!(
                "triple must increase: ({xi}, {eta}, {zeta})"
            )));
        }
        Ok(Triple { xi, eta, zeta })
    }

    pub fn level(&self) -> u32 {
        self.xi.level().max(self.eta.level()).max(self.zeta.level())
    }

    pub fn as_f64(&self) -> (f64, f64, f64) {
        (self.xi.to_f64(), self.eta.to_f64(), self.zeta.to_f64())
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.xi, self.eta, self.zeta)
    }
}

fn grid_size(level: u32) -> u64 {
    if level == 0 {
        0
    } else {
        (level as u64) << level
    }
}

fn choose2(n: u64) -> u128 {
    if n < 2 {
        return 0;
    }
    let (mut a, mut b) = (n as u128, n as u128 - 1);
    if a % 2 == 0 {
        a /= 2;
    } else {
        b /= 2;
    }
    a * b
}

fn choose3(n: u64) -> u128 {
    if n < 3 {
        return 0;
    }
    let mut f = [n as u128, n as u128 - 1, n as u128 - 2];
    let even = f.iter().position(|x| x % 2 == 0).unwrap();
    f[even] /= 2;
    let three = f.iter().position(|x| x % 3 == 0).unwrap();
    f[three] /= 3;
    f[0].checked_mul(f[1])
        .and_then(|x| x.checked_mul(f[2]))
        .expect("triple count fits u128 up to MAX_LEVEL")
}

/// Level-local view of grid positions `1..=L * 2^L`.
#[derive(Debug, Clone, Copy)]
struct Level {
    level: u32,
    size: u64,
    old: u64,
}

impl Level {
    fn new(level: u32) -> Self {
        Level {
            level,
            size: grid_size(level),
            old: grid_size(level - 1),
        }
    }

    fn is_old(&self, p: u64) -> bool {
        self.level >= 2 && p.is_multiple_of(2) && p / 2 <= self.old
    }

    /// Old positions in `1..=x`.
    fn old_upto(&self, x: u64) -> u64 {
        if self.level < 2 {
            0
        } else {
            (x / 2).min(self.old)
        }
    }

    fn offset(&self) -> u128 {
        choose3(self.old)
    }

    fn before_c(&self, c: u64) -> u128 {
        choose3(c - 1) - choose3(self.old_upto(c - 1))
    }

    fn before_b(&self, c: u64, b: u64) -> u128 {
        let all = choose2(b - 1);
        if self.is_old(c) {
            all - choose2(self.old_upto(b - 1))
        } else {
            all
        }
    }

    fn before_a(&self, c: u64, b: u64, a: u64) -> u128 {
        let all = (a - 1) as u128;
        if self.is_old(c) && self.is_old(b) {
            all - self.old_upto(a - 1) as u128
        } else {
            all
        }
    }

    fn dyadic(&self, p: u64) -> Dyadic {
        Dyadic::new(p, self.level).expect("grid positions are positive")
    }

    fn triple(&self, a: u64, b: u64, c: u64) -> Triple {
        Triple {
            xi: self.dyadic(a),
            eta: self.dyadic(b),
            zeta: self.dyadic(c),
        }
    }
}

/// Largest `x` in `[lo, hi]` with `f(x) <= r`, for nondecreasing `f` and `f(lo) <= r`.
fn last_at_most(lo: u64, hi: u64, r: u128, f: impl Fn(u64) -> u128) -> u64 {
    let (mut lo, mut hi) = (lo, hi);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if f(mid) <= r {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// Bijection between `n = 0, 1, 2, ...` and dyadic triples, up to [`MAX_LEVEL`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TripleEnum;

impl TripleEnum {
    pub fn weight(n: u128) -> f64 {
        let m = n as f64;
        1.0 / ((m + 1.0) * (m + 2.0))
    }

    /// Number of indices `n` with `weight(n) >= eps`.
    pub fn prefix_len(eps: f64) -> u128 {
        if !(eps > 0.0) {
            return u128::MAX;
        }
        let guess = (1.0 / eps).sqrt() as u128 + 2;
        let mut n = guess;
        while n > 0 && Self::weight(n - 1) < eps {
            n -= 1;
        }
        while Self::weight(n) >= eps {
            n += 1;
        }
        n
    }

    /// Total number of triples in levels `1..=level`.
    pub fn count_through(level: u32) -> u128 {
        choose3(grid_size(level))
    }

    pub fn rank(triple: &Triple) -> Result<u128> {
        let level = triple.level();
        if level > MAX_LEVEL {
            return Err(Error::SizeLimit {
                size: level as usize,
                limit: MAX_LEVEL as usize,
            });
        }
        let lv = Level::new(level);
        let (a, b, c) = (
            triple.xi.position(level),
            triple.eta.position(level),
            triple.zeta.position(level),
        );
        debug_assert!(!(lv.is_old(a) && lv.is_old(b) && lv.is_old(c)));
        Ok(lv.offset() + lv.before_c(c) + lv.before_b(c, b) + lv.before_a(c, b, a))
    }

    pub fn unrank(n: u128) -> Result<Triple> {
        let mut level = 1;
        while Self::count_through(level) <= n {
            level += 1;
            if level > MAX_LEVEL {
                return Err(Error::SizeLimit {
                    size: level as usize,
                    limit: MAX_LEVEL as usize,
                });
            }
        }
        let lv = Level::new(level);
        let mut r = n - lv.offset();
        let c = last_at_most(3, lv.size, r, |c| lv.before_c(c));
        r -= lv.before_c(c);
        let b = last_at_most(2, c - 1, r, |b| lv.before_b(c, b));
        r -= lv.before_b(c, b);
        let a = last_at_most(1, b - 1, r, |a| lv.before_a(c, b, a));
        debug_assert_eq!(lv.before_a(c, b, a), r);
        Ok(lv.triple(a, b, c))
    }

    pub fn iter() -> TripleIter {
        // level 1 has only two grid points
        TripleIter {
            n: 0,
            lv: Level::new(2),
            a: 1,
            b: 2,
            c: 3,
        }
    }

    /// The lowest-index triple with `lo < xi < eta < zeta < hi`.
    pub fn first_in_window(lo: f64, hi: f64) -> Result<(u128, Triple)> {
        if !(lo >= 0.0 && lo < hi) {
            return Err(Error::InvalidArgument(format!("empty window ({lo}, {hi})")));
        }
        for level in 1..=MAX_LEVEL {
            let scale = (1u64 << level) as f64;
            let first = (lo * scale).floor() as u64 + 1;
            let last_open = (hi * scale).ceil() as u64 - 1;
            let last = last_open.min(grid_size(level));
            if last >= first && last - first >= 2 {
                let lv = Level::new(level);
                let t = lv.triple(first, first + 1, first + 2);
                return Ok((Self::rank(&t)?, t));
            }
        }
        Err(Error::NoWitness(format!(
            "no dyadic triple of level <= {MAX_LEVEL} fits in ({lo}, {hi})"
        )))
    }
}

/// Triples in index order.
#[derive(Debug, Clone)]
pub struct TripleIter {
    n: u128,
    lv: Level,
    a: u64,
    b: u64,
    c: u64,
}

impl TripleIter {
    fn advance(&mut self) {
        loop {
            self.a += 1;
            if self.a == self.b {
                self.a = 1;
                self.b += 1;
                if self.b == self.c {
                    self.b = 2;
                    self.c += 1;
                    if self.c > self.lv.size {
                        self.lv = Level::new(self.lv.level + 1);
                        self.c = 3;
                    }
                }
            }
            let lv = &self.lv;
            if !(lv.is_old(self.a) && lv.is_old(self.b) && lv.is_old(self.c)) {
                return;
            }
        }
    }
}

impl Iterator for TripleIter {
    type Item = (u128, Triple);

    fn next(&mut self) -> Option<Self::Item> {
        if self.lv.level > MAX_LEVEL {
            return None;
        }
        let out = (self.n, self.lv.triple(self.a, self.b, self.c));
        self.n += 1;
        self.advance();
        Some(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TalagrandIndex {
    pub s: Ordinal,
    pub triple: Triple,
    pub set: AdmissibleSet,
}

impl fmt::Display for TalagrandIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(s = {}, {}, A = {})", self.s, self.triple, self.set)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportEntry {
    pub index: TalagrandIndex,
    pub n: u128,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reconstruction {
    pub eps: f64,
    /// `None` when `|f| < eps` everywhere.
    pub lambda: Option<f64>,
    pub triple: Option<Triple>,
    pub m0: f64,
    pub support: Vec<SupportEntry>,
    pub err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothnessReport {
    pub steps: [f64; 3],
    pub derivatives: [f64; 3],
    /// Rounding floor of the difference quotients.
    pub noise: f64,
    /// `log2(e1 / e2)` for the successive quotient differences `e1, e2`;
    /// `None` when `e2` is below `noise`.
    pub order: Option<f64>,
}

impl SmoothnessReport {
    pub fn locally_constant(&self) -> bool {
        self.derivatives.iter().all(|d| d.abs() <= self.noise)
    }
}

/// Per level-set data shared by all triples whose `eta` falls between the
/// same two distinct values of `|f|`.
struct LevelClass {
    set: AdmissibleSet,
    values: Vec<f64>,
    outside: StepFunction,
    outside_sup: f64,
}

/// The operator over one space, with the Orlicz bump as the base bump.
#[derive(Debug, Clone)]
pub struct Talagrand {
    norm: OrliczNorm,
}

impl Talagrand {
    pub fn new(space: &OrdinalSpace, config: OrliczConfig) -> Result<Self> {
        Ok(Talagrand {
            norm: OrliczNorm::new(config, space)?,
        })
    }

    pub fn from_norm(norm: OrliczNorm) -> Self {
        Talagrand { norm }
    }

    pub fn norm(&self) -> &OrliczNorm {
        &self.norm
    }

    pub fn space(&self) -> &OrdinalSpace {
        self.norm.space()
    }

    /// `bump(theta_{xi,eta} ∘ f)`: `1` when `|f| <= xi`, `0` once `|f|` reaches `eta`.
    pub fn improved_bump(&self, xi: f64, eta: f64, f: &StepFunction) -> Result<f64> {
        let theta = SmoothStep::new(xi, eta)?;
        if !(xi > 0.0) {
            return Err(Error::InvalidArgument(format!("xi must be positive, got {xi}")));
        }
        let top = theta.value(f.sup_norm());
        if top <= 0.5 * self.norm.config().a {
            return Ok(1.0);
        }
        if top >= 1.0 {
            return Ok(0.0);
        }
        let n = self.norm.norm(&f.compose_scalar(|v| theta.value(v)))?;
        Ok(1.0 - sigma(2.0 * n - 1.0))
    }

    fn check_index(&self, idx: &TalagrandIndex) -> Result<()> {
        self.space().check(&idx.s)?;
        for t in idx.set.points() {
            self.space().check(t)?;
        }
        Triple::new(idx.triple.xi, idx.triple.eta, idx.triple.zeta).map(|_| ())
    }

    pub fn coordinate(&self, f: &StepFunction, idx: &TalagrandIndex) -> Result<f64> {
        self.check_index(idx)?;
        if !idx.set.contains(&idx.s) {
            return Ok(0.0);
        }
        let (xi, eta, zeta) = idx.triple.as_f64();
        let phi = SmoothStep::new(eta, zeta)?;
        let mut prod = 1.0;
        for t in idx.set.points() {
            prod *= phi.value(f.eval(t)?);
            if prod == 0.0 {
                return Ok(0.0);
            }
        }
        let outside = f.multiply_indicator(&idx.set.neighborhood(), true);
        let bump = self.improved_bump(xi, eta, &outside)?;
        Ok(TripleEnum::weight(TripleEnum::rank(&idx.triple)?) * bump * prod)
    }

    fn level_class(&self, f: &StepFunction, eta: f64) -> Result<Option<LevelClass>> {
        let h = f.level_set(LevelMode::AtLeast(eta));
        if h.is_empty() {
            return Ok(None);
        }
        let set = hull(self.space(), &h)?;
        let values = set
            .points()
            .iter()
            .map(|t| f.eval(t).map(f64::abs))
            .collect::<Result<Vec<_>>>()?;
        let outside = f.multiply_indicator(&set.neighborhood(), true);
        let outside_sup = outside.sup_norm();
        Ok(Some(LevelClass {
            set,
            values,
            outside,
            outside_sup,
        }))
    }

    /// Every index with `|(Tf)(index)| >= eps`, in index order. With
    /// `below_rank = Some(d)` only sets `A` missing `K^(d)` are kept.
    pub fn support(
        &self,
        f: &StepFunction,
        eps: f64,
        below_rank: Option<&Ordinal>,
    ) -> Result<Vec<SupportEntry>> {
        if !(eps > 0.0) {
            return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
        }
        if f.space() != self.space() {
            return Err(Error::SpaceMismatch(
                self.space().gamma().to_string(),
                f.space().gamma().to_string(),
            ));
        }
        let sup = f.sup_norm();
        let mut out = Vec::new();
        if sup == 0.0 {
            return Ok(out);
        }
        let mut levels: Vec<f64> = f.pieces().iter().map(|p| p.value.abs()).collect();
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        let mut classes: HashMap<usize, Option<LevelClass>> = HashMap::new();
        let mut bumps: HashMap<(Dyadic, Dyadic, usize), f64> = HashMap::new();
        for (n, triple) in TripleEnum::iter() {
            let c = TripleEnum::weight(n);
            if c < eps {
                break;
            }
            let (xi, eta, zeta) = triple.as_f64();
            if eta >= sup {
                continue;
            }
            let key = levels.partition_point(|&v| v < eta);
            if let std::collections::hash_map::Entry::Vacant(e) = classes.entry(key) {
                e.insert(self.level_class(f, eta)?);
            }
            let Some(class) = classes[&key].as_ref() else {
                continue;
            };
            if let Some(d) = below_rank {
                if class.set.max_rank().is_some_and(|r| r >= *d) {
                    continue;
                }
            }
            let phi = SmoothStep::new(eta, zeta)?;
            let prod: f64 = class.values.iter().map(|&v| phi.value(v)).product();
            if prod == 0.0 || c * prod < eps {
                continue;
            }
            let bump = match bumps.get(&(triple.xi, triple.eta, key)) {
                Some(&b) => b,
                None => {
                    let b = if class.outside_sup <= xi {
                        1.0
                    } else {
                        self.improved_bump(xi, eta, &class.outside)?
                    };
                    bumps.insert((triple.xi, triple.eta, key), b);
                    b
                }
            };
            let value = c * bump * prod;
            if value >= eps {
                for s in class.set.points() {
                    out.push(SupportEntry {
                        index: TalagrandIndex {
                            s: s.clone(),
                            triple,
                            set: class.set.clone(),
                        },
                        n,
                        value,
                    });
                }
            }
        }
        Ok(out)
    }

    /// An index at a point where `|f|` peaks with a nonzero coordinate.
    pub fn witness(&self, f: &StepFunction) -> Result<SupportEntry> {
        let sup = f.sup_norm();
        if sup == 0.0 {
            return Err(Error::NoWitness("f = 0".into()));
        }
        let h = f.level_set(LevelMode::Max);
        let set = hull(self.space(), &h)?;
        let m0 = f.multiply_indicator(&set.neighborhood(), true).sup_norm();
        if !(m0 < sup) {
            return Err(Error::Internal(format!("off-hull sup {m0} reaches the max {sup}")));
        }
        let (n, triple) = TripleEnum::first_in_window(m0, sup)?;
        let s = set.points()[0].clone();
        let index = TalagrandIndex { s, triple, set };
        let value = self.coordinate(f, &index)?;
        if !(value > 0.0) {
            return Err(Error::Internal(format!("witness coordinate vanished at {index}")));
        }
        Ok(SupportEntry { index, n, value })
    }

    /// `R_F f = f × χ_{V(F)}` with `V(F)` the union of the `V_A` of the indices.
    pub fn r_f(&self, f: &StepFunction, indices: &[TalagrandIndex]) -> StepFunction {
        let mut v = Neighborhood::empty();
        let mut seen: Vec<&AdmissibleSet> = Vec::new();
        for idx in indices {
            if !seen.contains(&&idx.set) {
                seen.push(&idx.set);
                v.extend(&idx.set.neighborhood());
            }
        }
        f.multiply_indicator(&v, false)
    }

    pub fn verify_reconstruction(&self, f: &StepFunction, eps: f64) -> Result<Reconstruction> {
        if !(eps > 0.0) {
            return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
        }
        let h = f.level_set(LevelMode::AtLeast(eps));
        if h.is_empty() {
            return Ok(Reconstruction {
                eps,
                lambda: None,
                triple: None,
                m0: f.sup_norm(),
                support: Vec::new(),
                err: f.sup_norm(),
            });
        }
        let set = hull(self.space(), &h)?;
        let m0 = f.multiply_indicator(&set.neighborhood(), true).sup_norm();
        if !(m0 < eps) {
            return Err(Error::Internal(format!("off-hull sup {m0} is not below eps {eps}")));
        }
        let (n, triple) = TripleEnum::first_in_window(m0, eps)?;
        let lambda = TripleEnum::weight(n);
        let support = self.support(f, lambda, None)?;
        let indices: Vec<TalagrandIndex> = support.iter().map(|e| e.index.clone()).collect();
        let rest = f.zip_with(&self.r_f(f, &indices), |a, b| a - b)?;
        Ok(Reconstruction {
            eps,
            lambda: Some(lambda),
            triple: Some(triple),
            m0,
            support,
            err: rest.sup_norm(),
        })
    }

    /// Central differences of `s -> (T(f + s·direction))(idx)` at `h, h/2, h/4`
    /// and their Richardson convergence order.
    pub fn coordinate_smoothness_probe(
        &self,
        f: &StepFunction,
        idx: &TalagrandIndex,
        direction: &[f64],
    ) -> Result<SmoothnessReport> {
        let (partition, values) = f.param_view();
        if direction.len() != values.len() {
            return Err(Error::LengthMismatch {
                expected: values.len(),
                found: direction.len(),
            });
        }
        let at = |s: f64| -> Result<f64> {
            let v: Vec<f64> = values.iter().zip(direction).map(|(x, d)| x + s * d).collect();
            self.coordinate(&partition.rebuild(&v)?, idx)
        };
        let h = 1e-3;
        let steps = [h, h / 2.0, h / 4.0];
        let mut derivatives = [0.0; 3];
        let mut top = at(0.0)?.abs();
        for (d, &s) in derivatives.iter_mut().zip(&steps) {
            let (p, m) = (at(s)?, at(-s)?);
            top = top.max(p.abs()).max(m.abs());
            *d = (p - m) / (2.0 * s);
        }
        let noise = 64.0 * f64::EPSILON * top / steps[2];
        let e1 = (derivatives[0] - derivatives[1]).abs();
        let e2 = (derivatives[1] - derivatives[2]).abs();
        let order = if e2 <= noise {
            None
        } else {
            Some((e1 / e2).log2())
        };
        Ok(SmoothnessReport {
            steps,
            derivatives,
            noise,
            order,
        })
    }
}
