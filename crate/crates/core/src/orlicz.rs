//! Generalized Orlicz norm on step functions over `[0, gamma]`.
//!
//! Points are split into the discrete classes `D_k = {t : rank(t) = k}`.
//! A point of rank `k` carries the Orlicz function `phi_k`, which vanishes
//! on `[0, alpha_k]` and exceeds one from `beta_k` on, where
//!
//! ```text
//! r_k     = a^(2^-(k+1))
//! beta_0  = 1,  alpha_k = beta_k * r_k,  beta_{k+1} = alpha_k
//! ```
//!
//! so that `alpha_k = a^(1 - 2^-(k+1))` and the product of all `r_k` is `a`.
//! The norm of `f` is the least `rho` with `sum_t phi_{rank t}(|f(t)|/rho) <= 1`.
//! A piece holding infinitely many rank-`k` points contributes an infinite
//! sum as soon as its scaled value passes `alpha_k`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::scalars::{sigma, OrliczFunction};
use crate::stepfn::{Partition, StepFunction};
use crate::topology::{count_rank_exactly, ClopenInterval, OrdinalSpace, PointCount, RankSlice};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrliczConfig {
    /// Target product of the `r_k`; the norm lies within `[sup, sup/a]`.
    pub a: f64,
    pub margin: f64,
    pub root_tol: f64,
}

impl Default for OrliczConfig {
    fn default() -> Self {
        OrliczConfig {
            a: 0.9,
            margin: 0.5,
            root_tol: 1e-10,
        }
    }
}

impl OrliczConfig {
    pub fn with_a(a: f64) -> Self {
        OrliczConfig {
            a,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a < 1.0) {
            return Err(Error::InvalidArgument(format!("a must lie in (0, 1), got {}", self.a)));
        }
        if !(self.margin > 0.0 && self.margin.is_finite()) {
            return Err(Error::InvalidArgument(format!("margin must be positive, got {}", self.margin)));
        }
        if !(self.root_tol > 0.0 && self.root_tol.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "root_tol must be positive, got {}",
                self.root_tol
            )));
        }
        Ok(())
    }
}

/// Value of the Orlicz sum at a given scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaSum {
    Finite(f64),
    Infinite,
}

impl SigmaSum {
    pub fn at_most_one(&self) -> bool {
        matches!(self, SigmaSum::Finite(s) if *s <= 1.0)
    }
}

/// `delta` and the finite set `F` outside which every `h` with
/// `||h - f/||f||| < delta` has vanishing Orlicz terms.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalWitness {
    pub delta: f64,
    pub points: Vec<Ordinal>,
}

/// Per-piece rank counts: `counts[k]` is the number of rank-`k` points.
#[derive(Debug, Clone)]
struct PieceProfile {
    start: Ordinal,
    end: Ordinal,
    value: f64,
    counts: Vec<PointCount>,
}

/// Orlicz norm for one space and one configuration.
#[derive(Debug, Clone)]
pub struct OrliczNorm {
    config: OrliczConfig,
    space: OrdinalSpace,
    r: Vec<f64>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    phis: Vec<OrliczFunction>,
}

impl OrliczNorm {
    pub fn new(config: OrliczConfig, space: &OrdinalSpace) -> Result<Self> {
        config.validate()?;
        let height = space.finite_height().ok_or_else(|| {
            Error::UnsupportedSpace(format!(
                "gamma = {} has infinite Cantor-Bendixson height",
                space.gamma()
            ))
        })?;
        let mut r = Vec::with_capacity(height + 1);
        let mut alpha = Vec::with_capacity(height + 1);
        let mut beta = Vec::with_capacity(height + 1);
        let mut phis = Vec::with_capacity(height + 1);
        let mut rk = config.a.sqrt();
        let mut bk = 1.0;
        for k in 0..=height {
            let ak = bk * rk;
            if !(ak > 0.0 && ak < bk) {
                return Err(Error::UnsupportedSpace(format!(
                    "rank {k}: alpha_k and beta_k are not separated in double precision"
                )));
            }
            r.push(rk);
            alpha.push(ak);
            beta.push(bk);
            phis.push(OrliczFunction::new(ak, bk, config.margin)?);
            bk = ak;
            rk = rk.sqrt();
        }
        Ok(OrliczNorm {
            config,
            space: space.clone(),
            r,
            alpha,
            beta,
            phis,
        })
    }

    pub fn config(&self) -> &OrliczConfig {
        &self.config
    }

    pub fn space(&self) -> &OrdinalSpace {
        &self.space
    }

    pub fn height(&self) -> usize {
        self.alpha.len() - 1
    }

    pub fn r_k(&self, k: usize) -> f64 {
        self.r[k]
    }

    pub fn alpha_k(&self, k: usize) -> f64 {
        self.alpha[k]
    }

    pub fn beta_k(&self, k: usize) -> f64 {
        self.beta[k]
    }

    pub fn phi_k(&self, k: usize) -> &OrliczFunction {
        &self.phis[k]
    }

    fn rank_index(&self, t: &Ordinal) -> Result<usize> {
        self.space.check(t)?;
        Ok(t.nu_rank().to_u64().expect("finite height space") as usize)
    }

    pub fn alpha_of(&self, t: &Ordinal) -> Result<f64> {
        Ok(self.alpha[self.rank_index(t)?])
    }

    pub fn beta_of(&self, t: &Ordinal) -> Result<f64> {
        Ok(self.beta[self.rank_index(t)?])
    }

    fn check_space(&self, f: &StepFunction) -> Result<()> {
        if f.space() != &self.space {
            return Err(Error::SpaceMismatch(
                self.space.gamma().to_string(),
                f.space().gamma().to_string(),
            ));
        }
        Ok(())
    }

    fn profile(&self, f: &StepFunction) -> Result<Vec<PieceProfile>> {
        self.check_space(f)?;
        let (partition, values) = f.param_view();
        self.profile_of(&partition, &values)
    }

    fn profile_of(&self, partition: &Partition, values: &[f64]) -> Result<Vec<PieceProfile>> {
        if partition.space() != &self.space {
            return Err(Error::SpaceMismatch(
                self.space.gamma().to_string(),
                partition.space().gamma().to_string(),
            ));
        }
        if values.len() != partition.len() {
            return Err(Error::LengthMismatch {
                expected: partition.len(),
                found: values.len(),
            });
        }
        let mut out = Vec::with_capacity(values.len());
        for ((start, end), &value) in partition.intervals().iter().zip(values) {
            let counts: Vec<PointCount> = (0..=self.height())
                .map(|k| count_rank_exactly(start, end, &Ordinal::from(k as u64)))
                .collect();
            // Infinitely many rank-k points accumulate at a point of higher
            // rank inside the same interval, so the sum always meets a term
            // of at least 1 + margin before the infinite region.
            for (k, c) in counts.iter().enumerate() {
                if c.is_infinite() && counts[k + 1..].iter().all(PointCount::is_zero) {
                    return Err(Error::Internal(format!(
                        "[{start}, {end}] has infinitely many rank-{k} points but none above"
                    )));
                }
            }
            out.push(PieceProfile {
                start: start.clone(),
                end: end.clone(),
                value,
                counts,
            });
        }
        Ok(out)
    }

    fn sum_profile(&self, profile: &[PieceProfile], rho: f64) -> Result<SigmaSum> {
        let mut total = 0.0;
        for p in profile {
            let x = p.value.abs() / rho;
            for (k, n) in p.counts.iter().enumerate() {
                if n.is_zero() || x <= self.alpha[k] {
                    continue;
                }
                match n {
                    PointCount::Infinite => return Ok(SigmaSum::Infinite),
                    PointCount::Finite(_) => total += n.to_f64() * self.phis[k].eval(x)?,
                }
            }
        }
        Ok(SigmaSum::Finite(total))
    }

    /// `d/d rho` of the sum, for scales where it is finite.
    fn sum_slope(&self, profile: &[PieceProfile], rho: f64) -> f64 {
        let mut slope = 0.0;
        for p in profile {
            let v = p.value.abs();
            let x = v / rho;
            for (k, n) in p.counts.iter().enumerate() {
                if n.is_zero() || x <= self.alpha[k] {
                    continue;
                }
                slope -= n.to_f64() * self.phis[k].deriv(x) * v / (rho * rho);
            }
        }
        slope
    }

    pub fn sigma_sum(&self, f: &StepFunction, rho: f64) -> Result<SigmaSum> {
        if !(rho > 0.0) {
            return Err(Error::InvalidArgument(format!("rho must be positive, got {rho}")));
        }
        let profile = self.profile(f)?;
        self.sum_profile(&profile, rho)
    }

    pub fn norm(&self, f: &StepFunction) -> Result<f64> {
        let profile = self.profile(f)?;
        self.norm_of_profile(&profile)
    }

    /// Norm of the function with the given values on a fixed partition.
    pub fn norm_on(&self, partition: &Partition, values: &[f64]) -> Result<f64> {
        let profile = self.profile_of(partition, values)?;
        self.norm_of_profile(&profile)
    }

    fn norm_of_profile(&self, profile: &[PieceProfile]) -> Result<f64> {
        let sup = profile.iter().map(|p| p.value.abs()).fold(0.0, f64::max);
        if sup == 0.0 {
            return Ok(0.0);
        }
        // Bracket from the plateau at a and the value 1 + margin at 1.
        let mut lo = sup;
        let mut hi = sup / self.config.a;
        if !self.sum_profile(profile, hi)?.at_most_one() {
            return Err(Error::Internal(format!("sum exceeds 1 at sup/a = {hi}")));
        }
        if self.sum_profile(profile, lo)?.at_most_one() {
            return Err(Error::Internal(format!("sum is at most 1 at sup = {lo}")));
        }
        while hi - lo > self.config.root_tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.sum_profile(profile, mid)?.at_most_one() {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        // Newton polish inside the final bracket; the sum is smooth there.
        let mut rho = hi;
        for _ in 0..8 {
            let SigmaSum::Finite(s) = self.sum_profile(profile, rho)? else {
                break;
            };
            let slope = self.sum_slope(profile, rho);
            if !(slope < 0.0) {
                break;
            }
            let next = rho - (s - 1.0) / slope;
            if !(next > lo && next < hi) || next == rho {
                break;
            }
            match self.sum_profile(profile, next)? {
                SigmaSum::Infinite => break,
                SigmaSum::Finite(t) if t <= 1.0 => hi = next,
                SigmaSum::Finite(_) => lo = next,
            }
            rho = next;
        }
        Ok(rho)
    }

    /// Partial derivatives of the norm in the piece values of `f`, by the
    /// implicit function theorem applied to `sum = 1`.
    pub fn gradient(&self, f: &StepFunction) -> Result<Vec<f64>> {
        let (partition, values) = f.param_view();
        self.check_space(f)?;
        self.gradient_on(&partition, &values)
    }

    pub fn gradient_on(&self, partition: &Partition, values: &[f64]) -> Result<Vec<f64>> {
        let profile = self.profile_of(partition, values)?;
        let rho = self.norm_of_profile(&profile)?;
        if rho == 0.0 {
            return Err(Error::InvalidArgument("gradient of the norm at 0".into()));
        }
        let mut numer = Vec::with_capacity(profile.len());
        let mut denom = 0.0;
        for p in &profile {
            let v = p.value.abs();
            let x = v / rho;
            let mut slope = 0.0;
            for (k, n) in p.counts.iter().enumerate() {
                if n.is_zero() || x <= self.alpha[k] {
                    continue;
                }
                if n.is_infinite() {
                    return Err(Error::Internal(format!(
                        "infinitely many active rank-{k} terms at the norm point"
                    )));
                }
                slope += n.to_f64() * self.phis[k].deriv(x);
            }
            numer.push(slope * p.value.signum() / rho);
            denom += slope * v;
        }
        denom /= rho * rho;
        if !(denom > f64::MIN_POSITIVE) {
            return Err(Error::DegenerateGradient(format!("denominator {denom:e}")));
        }
        Ok(numer.into_iter().map(|n| n / denom).collect())
    }

    pub fn local_finiteness_witness(&self, f: &StepFunction) -> Result<LocalWitness> {
        let profile = self.profile(f)?;
        let rho = self.norm_of_profile(&profile)?;
        if rho == 0.0 {
            return Err(Error::InvalidArgument("local finiteness witness at 0".into()));
        }
        let mut gap = f64::INFINITY;
        for p in &profile {
            let g = p.value.abs() / rho;
            for (k, n) in p.counts.iter().enumerate() {
                if n.is_infinite() {
                    gap = gap.min(self.alpha[k] - g);
                }
            }
        }
        let delta = if gap.is_finite() { 0.5 * gap } else { 1.0 };
        if !(delta > 0.0) {
            return Err(Error::Internal(format!("non-positive delta {delta:e} at the norm point")));
        }
        let mut points = Vec::new();
        for p in &profile {
            let g = p.value.abs() / rho;
            for (k, n) in p.counts.iter().enumerate() {
                if n.is_zero() || n.is_infinite() || g <= self.alpha[k] - delta {
                    continue;
                }
                let rank = Ordinal::from(k as u64);
                let slice = RankSlice::in_interval(&p.start, &p.end, &rank);
                let all = slice.points().expect("finite rank count");
                points.extend(all.into_iter().filter(|t| t.nu_rank() == rank));
            }
        }
        points.sort();
        Ok(LocalWitness { delta, points })
    }

    /// `beta(t) <= liminf alpha(t_n)` for a sequence increasing to the limit
    /// `t`, decided by the rank comparison on the part of the sequence inside
    /// the canonical neighbourhood of `t`.
    pub fn lemma6_check(&self, t: &Ordinal, seq: &[Ordinal]) -> Result<bool> {
        self.space.check(t)?;
        if !t.is_limit() {
            return Err(Error::MalformedSequence(format!("{t} is not a limit point")));
        }
        if seq.is_empty() {
            return Err(Error::MalformedSequence("empty sequence".into()));
        }
        for w in seq.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::MalformedSequence(format!("{} is not below {}", w[0], w[1])));
            }
        }
        if seq.last().unwrap() >= t {
            return Err(Error::MalformedSequence(format!("sequence does not stay below {t}")));
        }
        let v: ClopenInterval = self.space.canonical_vt(t)?;
        let tail: Vec<&Ordinal> = seq.iter().filter(|s| v.contains(s)).collect();
        if tail.is_empty() {
            return Err(Error::MalformedSequence(format!("no element lies in V_t = {v}")));
        }
        let k = self.rank_index(t)?;
        let mut exact = true;
        let mut liminf = f64::INFINITY;
        for s in &tail {
            let j = self.rank_index(s)?;
            exact &= j < k;
            liminf = liminf.min(self.alpha[j]);
        }
        let numeric = self.beta[k] <= liminf;
        if exact && !numeric {
            return Err(Error::Internal("rank test and alpha/beta tables disagree".into()));
        }
        Ok(exact)
    }

    /// `sup ≤ norm ≤ sup/a`, each side with slack `10 * root_tol`.
    pub fn equivalence_check(&self, f: &StepFunction) -> Result<bool> {
        let n = self.norm(f)?;
        let sup = f.sup_norm();
        let slack = 10.0 * self.config.root_tol;
        Ok(sup - slack <= n && n <= sup / self.config.a + slack)
    }

    /// Smooth bump: `1` while the norm is at most 1/2, `0` from norm 1 on.
    pub fn bump(&self, g: &StepFunction) -> Result<f64> {
        let n = self.norm(g)?;
        Ok(1.0 - sigma(2.0 * n - 1.0))
    }
}
