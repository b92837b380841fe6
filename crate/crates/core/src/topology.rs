//! The compact scattered space `[0, gamma]` in the order topology.
//!
//! For a point `t` the Cantor-Bendixson rank is `t.nu_rank()`, so
//! `t` belongs to the derived set `K^(alpha)` exactly when
//! `nu_rank(t) >= alpha`. Points of rank at least `e` are the nonzero
//! left multiples `w^e * xi` (plus `0` when `e = 0`), which makes counting
//! them inside an interval a normal-form computation.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ordinal::{Class, Ordinal};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrdinalSpace {
    gamma: Ordinal,
}

/// Basic clopen set `(low_pred, high]`, or `[0, high]` when `low_pred` is
/// `None`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClopenInterval {
    low_pred: Option<Ordinal>,
    high: Ordinal,
}

/// A finite union of clopen intervals `V_B`, kept unmerged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighborhood {
    parts: Vec<ClopenInterval>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PointCount {
    Finite(BigUint),
    Infinite,
}

/// The points of rank at least `rank` in a closed interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankSlice {
    rank: Ordinal,
    first: Ordinal,
    count: PointCount,
}

/// Finite list of points, or a flag for infinitely many.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointList {
    Finite(Vec<Ordinal>),
    Infinite,
}

/// Finite union of closed intervals `[a_i, b_i]`, sorted, pairwise disjoint
/// and non-adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ClosedSet {
    intervals: Vec<(Ordinal, Ordinal)>,
}

impl OrdinalSpace {
    pub fn new(gamma: Ordinal) -> Self {
        OrdinalSpace { gamma }
    }

    pub fn gamma(&self) -> &Ordinal {
        &self.gamma
    }

    pub fn contains(&self, t: &Ordinal) -> bool {
        *t <= self.gamma
    }

    pub fn check(&self, t: &Ordinal) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(Error::OutOfSpace {
                point: t.to_string(),
                gamma: self.gamma.to_string(),
            })
        }
    }

    /// The largest `delta` with `K^(delta)` nonempty.
    pub fn cb_height(&self) -> Ordinal {
        self.gamma.leading_exponent()
    }

    /// Height as a natural number, when `gamma < w^w`.
    pub fn finite_height(&self) -> Option<usize> {
        self.cb_height().to_u64().and_then(|h| usize::try_from(h).ok())
    }

    pub fn in_derived(&self, t: &Ordinal, alpha: &Ordinal) -> Result<bool> {
        self.check(t)?;
        Ok(t.nu_rank() >= *alpha)
    }

    /// `V_t = (mu + w^e*(c-1), t]` for `t = mu + w^e*c`, and `{0}` for `t = 0`.
    pub fn canonical_vt(&self, t: &Ordinal) -> Result<ClopenInterval> {
        self.check(t)?;
        Ok(vt(t))
    }

    pub fn v_of_set(&self, points: &[Ordinal]) -> Result<Neighborhood> {
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        for t in points {
            self.check(t)?;
        }
        Ok(Neighborhood::of_points(points))
    }

    /// Verifies `V_B ∩ K^(a) = B ∩ K^(a)` and `V_B ∩ K^(a+1) = ∅` where `a`
    /// is the largest rank present in `B`.
    pub fn lemma1_check(&self, points: &[Ordinal]) -> Result<bool> {
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        for t in points {
            self.check(t)?;
        }
        let alpha = points.iter().map(Ordinal::nu_rank).max().unwrap();
        let next = alpha.successor();
        let mut seen: Vec<Ordinal> = Vec::new();
        for t in points {
            let (lo, hi) = vt(t).bounds();
            let slice = RankSlice::in_interval(&lo, &hi, &alpha);
            match slice.points() {
                Some(ps) => seen.extend(ps),
                None => return Ok(false),
            }
            if !RankSlice::in_interval(&lo, &hi, &next).is_empty() {
                return Ok(false);
            }
        }
        seen.sort();
        seen.dedup();
        let mut expected: Vec<Ordinal> = points
            .iter()
            .filter(|t| t.nu_rank() >= alpha)
            .cloned()
            .collect();
        expected.sort();
        expected.dedup();
        Ok(seen == expected)
    }
}

fn vt(t: &Ordinal) -> ClopenInterval {
    let Some(last) = t.terms().last() else {
        return ClopenInterval::new(None, Ordinal::zero());
    };
    let mut pred_terms = t.terms().to_vec();
    let tail = pred_terms.last_mut().unwrap();
    tail.coefficient -= 1u32;
    if tail.coefficient.is_zero() {
        pred_terms.pop();
    }
    let pred = Ordinal::from_terms(pred_terms).expect("prefix of a normal form");
    debug_assert!(pred < *t && last.coefficient >= BigUint::from(1u32));
    ClopenInterval::new(Some(pred), t.clone())
}

/// `n` points strictly increasing to the limit `t`, each of rank below
/// `nu_rank(t)`.
pub fn cofinal_sequence(t: &Ordinal, n: usize) -> Result<Vec<Ordinal>> {
    if !t.is_limit() {
        return Err(Error::NoCofinalSequence(t.to_string()));
    }
    Ok((1..=n as u64).map(|i| fundamental(t, i)).collect())
}

/// The `i`-th element of the standard fundamental sequence of a limit.
fn fundamental(t: &Ordinal, i: u64) -> Ordinal {
    let last = t.terms().last().expect("limit ordinal is nonzero");
    let mut base_terms = t.terms().to_vec();
    let tail = base_terms.last_mut().unwrap();
    tail.coefficient -= 1u32;
    if tail.coefficient.is_zero() {
        base_terms.pop();
    }
    let base = Ordinal::from_terms(base_terms).expect("prefix of a normal form");
    let step = match last.exponent.classify() {
        Class::Successor(d) => Ordinal::omega_pow_mul(d, i),
        Class::Limit => Ordinal::omega_pow(fundamental(&last.exponent, i)),
        Class::Zero => unreachable!("limit ordinals have no finite tail"),
    };
    &base + &step
}

impl ClopenInterval {
    pub fn new(low_pred: Option<Ordinal>, high: Ordinal) -> Self {
        debug_assert!(low_pred.as_ref().is_none_or(|p| *p < high));
        ClopenInterval { low_pred, high }
    }

    pub fn low_pred(&self) -> Option<&Ordinal> {
        self.low_pred.as_ref()
    }

    pub fn high(&self) -> &Ordinal {
        &self.high
    }

    /// Least element.
    pub fn first(&self) -> Ordinal {
        self.low_pred
            .as_ref()
            .map_or_else(Ordinal::zero, Ordinal::successor)
    }

    /// The interval as `[first, high]`.
    pub fn bounds(&self) -> (Ordinal, Ordinal) {
        (self.first(), self.high.clone())
    }

    pub fn contains(&self, s: &Ordinal) -> bool {
        self.low_pred.as_ref().is_none_or(|p| s > p) && *s <= self.high
    }
}

impl fmt::Display for ClopenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.low_pred {
            None if self.high.is_zero() => write!(f, "{{0}}"),
            None => write!(f, "[0, {}]", self.high),
            Some(p) => write!(f, "({}, {}]", p, self.high),
        }
    }
}

impl Neighborhood {
    /// `V_B` for a point set, without range checks.
    pub fn of_points(points: &[Ordinal]) -> Self {
        Neighborhood {
            parts: points.iter().map(vt).collect(),
        }
    }

    pub fn empty() -> Self {
        Neighborhood { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[ClopenInterval] {
        &self.parts
    }

    pub fn extend(&mut self, other: &Neighborhood) {
        self.parts.extend(other.parts.iter().cloned());
    }

    pub fn contains(&self, s: &Ordinal) -> bool {
        self.parts.iter().any(|p| p.contains(s))
    }
}

impl PointCount {
    pub fn is_infinite(&self) -> bool {
        matches!(self, PointCount::Infinite)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, PointCount::Finite(n) if n.is_zero())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            PointCount::Finite(n) => n.to_f64().unwrap_or(f64::INFINITY),
            PointCount::Infinite => f64::INFINITY,
        }
    }
}

impl RankSlice {
    /// Points `t` with `lo <= t <= hi` and `nu_rank(t) >= rank`.
    pub fn in_interval(lo: &Ordinal, hi: &Ordinal, rank: &Ordinal) -> Self {
        let first = lo.ceil_to_rank(rank);
        let last = hi.truncate_below(rank);
        let empty = (!rank.is_zero() && last.is_zero()) || first > last;
        let count = if empty {
            PointCount::Finite(BigUint::zero())
        } else if first.agrees_above(&last, rank) {
            PointCount::Finite(last.coefficient_at(rank) - first.coefficient_at(rank) + 1u32)
        } else {
            PointCount::Infinite
        };
        RankSlice {
            rank: rank.clone(),
            first,
            count,
        }
    }

    pub fn count(&self) -> &PointCount {
        &self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count.is_zero()
    }

    /// The points in increasing order, or `None` when there are infinitely
    /// many.
    pub fn points(&self) -> Option<Vec<Ordinal>> {
        let PointCount::Finite(n) = &self.count else {
            return None;
        };
        let n = n.to_usize().expect("point count fits in memory");
        let step = Ordinal::omega_pow(self.rank.clone());
        let mut out = Vec::with_capacity(n);
        let mut p = self.first.clone();
        for _ in 0..n {
            let next = &p + &step;
            out.push(p);
            p = next;
        }
        Some(out)
    }
}

/// Number of points of rank exactly `rank` in `[lo, hi]`.
pub fn count_rank_exactly(lo: &Ordinal, hi: &Ordinal, rank: &Ordinal) -> PointCount {
    match RankSlice::in_interval(lo, hi, rank).count {
        PointCount::Infinite => PointCount::Infinite,
        PointCount::Finite(at_least) => {
            match RankSlice::in_interval(lo, hi, &rank.successor()).count {
                PointCount::Finite(above) => PointCount::Finite(at_least - above),
                PointCount::Infinite => unreachable!("a finite slice has finite sub-slices"),
            }
        }
    }
}

/// Largest rank attained in `[lo, hi]`: the rank of the shortest normal-form
/// prefix of `hi` that is still `>= lo`.
pub fn interval_max_rank(lo: &Ordinal, hi: &Ordinal) -> Ordinal {
    let terms = hi.terms();
    for j in 1..=terms.len() {
        let prefix = Ordinal::from_terms(terms[..j].to_vec()).expect("prefix of a normal form");
        if prefix >= *lo {
            return terms[j - 1].exponent.clone();
        }
    }
    Ordinal::zero()
}

impl ClosedSet {
    pub fn empty() -> Self {
        ClosedSet::default()
    }

    pub fn point(t: Ordinal) -> Self {
        ClosedSet {
            intervals: vec![(t.clone(), t)],
        }
    }

    pub fn interval(a: Ordinal, b: Ordinal) -> Result<Self> {
        ClosedSet::new(vec![(a, b)])
    }

    pub fn from_points(points: &[Ordinal]) -> Self {
        ClosedSet::normalized(points.iter().map(|t| (t.clone(), t.clone())).collect())
    }

    pub fn new(intervals: Vec<(Ordinal, Ordinal)>) -> Result<Self> {
        for (a, b) in &intervals {
            if a > b {
                return Err(Error::InvalidArgument(format!("empty interval [{a}, {b}]")));
            }
        }
        Ok(ClosedSet::normalized(intervals))
    }

    fn normalized(mut intervals: Vec<(Ordinal, Ordinal)>) -> Self {
        intervals.sort();
        let mut out: Vec<(Ordinal, Ordinal)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            if let Some((_, end)) = out.last_mut() {
                if a <= end.successor() {
                    if b > *end {
                        *end = b;
                    }
                    continue;
                }
            }
            out.push((a, b));
        }
        ClosedSet { intervals: out }
    }

    pub fn intervals(&self) -> &[(Ordinal, Ordinal)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Structural invariant: sorted, disjoint, non-adjacent, nonempty pieces.
    pub fn is_normalized(&self) -> bool {
        self.intervals.iter().all(|(a, b)| a <= b)
            && self
                .intervals
                .windows(2)
                .all(|w| w[0].1.successor() < w[1].0)
    }

    pub fn max_point(&self) -> Option<&Ordinal> {
        self.intervals.last().map(|(_, b)| b)
    }

    pub fn contains(&self, t: &Ordinal) -> bool {
        self.intervals.iter().any(|(a, b)| a <= t && t <= b)
    }

    pub fn union(&self, other: &ClosedSet) -> ClosedSet {
        let mut all = self.intervals.clone();
        all.extend(other.intervals.iter().cloned());
        ClosedSet::normalized(all)
    }

    /// `H` minus the clopen interval `U`.
    pub fn subtract_clopen(&self, u: &ClopenInterval) -> ClosedSet {
        let after = u.high().successor();
        let mut out = Vec::new();
        for (a, b) in &self.intervals {
            if let Some(p) = u.low_pred() {
                if a <= p {
                    out.push((a.clone(), b.min(p).clone()));
                }
            }
            if *b >= after {
                out.push((a.max(&after).clone(), b.clone()));
            }
        }
        ClosedSet::normalized(out)
    }

    pub fn subtract_neighborhood(&self, v: &Neighborhood) -> ClosedSet {
        v.parts()
            .iter()
            .fold(self.clone(), |h, part| h.subtract_clopen(part))
    }

    pub fn is_covered_by(&self, v: &Neighborhood) -> bool {
        self.subtract_neighborhood(v).is_empty()
    }

    /// `max{nu_rank(t) : t in H}`, or `None` for the empty set.
    pub fn max_rank(&self) -> Option<Ordinal> {
        self.intervals
            .iter()
            .map(|(a, b)| interval_max_rank(a, b))
            .max()
    }

    pub fn points_of_rank_at_least(&self, rank: &Ordinal) -> PointList {
        let mut out = Vec::new();
        for (a, b) in &self.intervals {
            match RankSlice::in_interval(a, b, rank).points() {
                Some(ps) => out.extend(ps),
                None => return PointList::Infinite,
            }
        }
        PointList::Finite(out)
    }
}

impl fmt::Display for ClosedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("{}");
        }
        for (i, (a, b)) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str(" u ")?;
            }
            if a == b {
                write!(f, "{{{a}}}")?;
            } else {
                write!(f, "[{a}, {b}]")?;
            }
        }
        Ok(())
    }
}

/// Items separated by `u`, `∪` or `;`; each item is `[a, b]`, `{a, b, ...}`
/// or a bare ordinal literal.
impl FromStr for ClosedSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut intervals = Vec::new();
        let trimmed = s.trim();
        if trimmed.is_empty() || trimmed == "{}" {
            return Ok(ClosedSet::empty());
        }
        for item in trimmed.split(['u', '∪', ';']) {
            let item = item.trim();
            if let Some(inner) = item.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                let (a, b) = inner.split_once(',').ok_or_else(|| {
                    Error::InvalidArgument(format!("interval '{item}' needs two endpoints"))
                })?;
                intervals.push((a.trim().parse()?, b.trim().parse()?));
            } else if let Some(inner) = item.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
                for p in inner.split(',') {
                    let t: Ordinal = p.trim().parse()?;
                    intervals.push((t.clone(), t));
                }
            } else {
                let t: Ordinal = item.parse()?;
                intervals.push((t.clone(), t));
            }
        }
        ClosedSet::new(intervals)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn space(s: &str) -> OrdinalSpace {
        OrdinalSpace::new(o(s))
    }

    #[test]
    fn derived_membership_examples() {
        let k = space("w^2");
        assert!(k.in_derived(&o("w*3"), &o("1")).unwrap());
        assert!(!k.in_derived(&o("5"), &o("1")).unwrap());
        assert!(k.in_derived(&o("w^3"), &o("0")).is_err());
        assert_eq!(k.cb_height(), o("2"));
    }

    /// Oracle for `K = [0, w*3 + 5]`: points are `w*i + n`; a point survives
    /// one derivation when it is `w*i` (i >= 1) and the previous block
    /// holds an unbroken tail of survivors, checked on a truncated grid.
    #[test]
    fn derived_membership_matches_brute_force() {
        const N: u64 = 40;
        let k = space("w*3+5");
        let mut current: Vec<(u64, u64)> = (0..=3u64)
            .flat_map(|i| (0..if i == 3 { 6 } else { N }).map(move |n| (i, n)))
            .collect();
        for alpha in 0..=2u64 {
            for &(i, n) in &current {
                let t = &Ordinal::omega_pow_mul(o("1"), i) + &Ordinal::from(n);
                assert!(k.in_derived(&t, &Ordinal::from(alpha)).unwrap(), "{t} alpha={alpha}");
            }
            for i in 0..=3u64 {
                for n in 0..N {
                    if i == 3 && n > 5 {
                        continue;
                    }
                    if current.contains(&(i, n)) {
                        continue;
                    }
                    let t = &Ordinal::omega_pow_mul(o("1"), i) + &Ordinal::from(n);
                    assert!(!k.in_derived(&t, &Ordinal::from(alpha)).unwrap(), "{t} alpha={alpha}");
                }
            }
            let prev = current.clone();
            current.retain(|&(i, n)| {
                n == 0 && i >= 1 && (N / 2..N).all(|m| prev.contains(&(i - 1, m)))
            });
        }
    }

    #[test]
    fn vt_examples() {
        let k = space("w^2");
        let v = k.canonical_vt(&o("w*3")).unwrap();
        assert_eq!(v.to_string(), "(w*2, w*3]");
        let (lo, hi) = v.bounds();
        let ks = Ordinal::multiples_in(&o("1"), &lo, &hi).to_vec().unwrap();
        assert_eq!(ks, vec![BigUint::from(3u32)]);

        assert_eq!(k.canonical_vt(&o("0")).unwrap().to_string(), "{0}");
        let v = k.canonical_vt(&o("w^2")).unwrap();
        assert_eq!(v.to_string(), "(0, w^2]");
        let (lo, hi) = v.bounds();
        assert_eq!(Ordinal::multiples_in(&o("2"), &lo, &hi).count(), Some(BigUint::from(1u32)));
        assert_eq!(k.canonical_vt(&o("7")).unwrap().to_string(), "(6, 7]");
        assert_eq!(k.canonical_vt(&o("w+w")).unwrap().to_string(), "(w, w*2]");
    }

    #[test]
    fn v_of_set_examples() {
        let k = space("w^2");
        let v = k.v_of_set(&[o("0"), o("w")]).unwrap();
        for s in ["0", "1", "17", "w"] {
            assert!(v.contains(&o(s)));
        }
        assert!(!v.contains(&o("w+1")));
        let v = k.v_of_set(&[o("3")]).unwrap();
        assert!(v.contains(&o("3")) && !v.contains(&o("2")) && !v.contains(&o("4")));
        assert_eq!(k.v_of_set(&[]), Err(Error::EmptySet));
    }

    #[test]
    fn lemma1_examples() {
        let k = space("w^2");
        assert!(k.lemma1_check(&[o("w"), o("w^2")]).unwrap());
        assert!(k.lemma1_check(&[o("5")]).unwrap());
        assert!(k.lemma1_check(&[o("0"), o("w+2"), o("w*5")]).unwrap());
    }

    #[test]
    fn closed_set_algebra_examples() {
        let h = ClosedSet::interval(o("0"), o("w*2")).unwrap();
        let u = ClopenInterval::new(Some(o("0")), o("w"));
        let d = h.subtract_clopen(&u);
        assert_eq!(d, ClosedSet::new(vec![(o("0"), o("0")), (o("w+1"), o("w*2"))]).unwrap());
        assert_eq!(h.max_rank(), Some(o("1")));
        assert_eq!(
            h.points_of_rank_at_least(&o("1")),
            PointList::Finite(vec![o("w"), o("w*2")])
        );
        assert_eq!(h.points_of_rank_at_least(&o("0")), PointList::Infinite);
        assert!(!h.is_empty());
        assert!(ClosedSet::empty().is_empty());
        assert!(d.contains(&o("w+5")) && !d.contains(&o("w")));
    }

    #[test]
    fn closed_set_normalizes_adjacent() {
        let h = ClosedSet::new(vec![(o("w+1"), o("w*2")), (o("0"), o("w"))]).unwrap();
        assert_eq!(h.intervals().len(), 1);
        let h = ClosedSet::new(vec![(o("0"), o("3")), (o("5"), o("6")), (o("4"), o("4"))]).unwrap();
        assert_eq!(h.intervals(), &[(o("0"), o("6"))]);
        assert!(ClosedSet::new(vec![(o("3"), o("1"))]).is_err());
    }

    #[test]
    fn closed_set_literals() {
        let h: ClosedSet = "[0,5] u w^2".parse().unwrap();
        assert_eq!(h.to_string(), "[0, 5] u {w^2}");
        let g: ClosedSet = h.to_string().parse().unwrap();
        assert_eq!(g, h);
        assert!("[0 5]".parse::<ClosedSet>().is_err());
        let p: ClosedSet = "{0, w, w*2} u [3, 4]".parse().unwrap();
        let q: ClosedSet = "{0} u {w} u {w*2} u [3, 4]".parse().unwrap();
        assert_eq!(p, q);
        assert!("{0, }".parse::<ClosedSet>().is_err());
    }

    #[test]
    fn max_rank_by_interval() {
        assert_eq!(interval_max_rank(&o("w+1"), &o("w*2")), o("1"));
        assert_eq!(interval_max_rank(&o("w+1"), &o("w+7")), o("0"));
        assert_eq!(interval_max_rank(&o("w^2+1"), &o("w^3+w")), o("3"));
        assert_eq!(interval_max_rank(&o("w^3+1"), &o("w^3+w^2*2+4")), o("2"));
        assert_eq!(interval_max_rank(&o("0"), &o("0")), o("0"));
    }

    #[test]
    fn rank_counts() {
        let c = count_rank_exactly(&o("0"), &o("w*3"), &o("1"));
        assert_eq!(c, PointCount::Finite(BigUint::from(3u32)));
        assert!(count_rank_exactly(&o("0"), &o("w"), &o("0")).is_infinite());
        assert_eq!(
            count_rank_exactly(&o("w+1"), &o("w+9"), &o("0")),
            PointCount::Finite(BigUint::from(9u32))
        );
        assert_eq!(
            count_rank_exactly(&o("0"), &o("w^2+w*2"), &o("2")),
            PointCount::Finite(BigUint::from(1u32))
        );
        assert!(count_rank_exactly(&o("0"), &o("w^2+w*2"), &o("1")).is_infinite());
        assert_eq!(
            count_rank_exactly(&o("w^2+1"), &o("w^2+w*2"), &o("1")),
            PointCount::Finite(BigUint::from(2u32))
        );
    }

    #[test]
    fn cofinal_examples() {
        assert_eq!(cofinal_sequence(&o("w"), 3).unwrap(), vec![o("1"), o("2"), o("3")]);
        assert_eq!(cofinal_sequence(&o("w^2"), 3).unwrap(), vec![o("w"), o("w*2"), o("w*3")]);
        assert!(matches!(cofinal_sequence(&o("5"), 3), Err(Error::NoCofinalSequence(_))));
        assert!(cofinal_sequence(&o("0"), 3).is_err());
        let s = cofinal_sequence(&o("w^w"), 3).unwrap();
        assert_eq!(s, vec![o("w"), o("w^2"), o("w^3")]);
        let s = cofinal_sequence(&o("w^3 + w*2"), 2).unwrap();
        assert_eq!(s, vec![o("w^3+w+1"), o("w^3+w+2")]);
    }
}
