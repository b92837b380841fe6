//! Continuous piecewise-constant functions on `[0, gamma]`.
//!
//! A [`StepFunction`] is a finite partition of `[0, gamma]` into closed
//! intervals with one real value each. Every non-initial piece starts at a
//! successor ordinal, which is exactly continuity in the order topology:
//! a jump can only sit at an isolated point.

use std::fmt;

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::scalars::ScalarMap;
use crate::topology::{ClosedSet, Neighborhood, OrdinalSpace};

#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub start: Ordinal,
    pub end: Ordinal,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    space: OrdinalSpace,
    pieces: Vec<Piece>,
}

/// Interval skeleton of a step function; the coordinates in which finite
/// differences are taken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    space: OrdinalSpace,
    intervals: Vec<(Ordinal, Ordinal)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevelMode {
    /// `{t : |f(t)| >= eta}`
    AtLeast(f64),
    /// `{t : |f(t)| = ||f||_inf}`
    Max,
}

/// Consecutive intervals `[0, e_0], [e_0 + 1, e_1], ...` ending at `gamma`.
fn intervals_from_ends(space: &OrdinalSpace, mut ends: Vec<Ordinal>) -> Vec<(Ordinal, Ordinal)> {
    let gamma = space.gamma();
    ends.retain(|e| e < gamma);
    ends.push(gamma.clone());
    ends.sort();
    ends.dedup();
    let mut start = Ordinal::zero();
    let mut out = Vec::with_capacity(ends.len());
    for e in ends {
        let next = e.successor();
        out.push((start, e));
        start = next;
    }
    out
}

impl StepFunction {
    pub fn constant(space: OrdinalSpace, value: f64) -> Self {
        let gamma = space.gamma().clone();
        StepFunction {
            space,
            pieces: vec![Piece {
                start: Ordinal::zero(),
                end: gamma,
                value,
            }],
        }
    }

    pub fn zero(space: OrdinalSpace) -> Self {
        Self::constant(space, 0.0)
    }

    /// Builds a function from piece start points and values. Each piece runs
    /// up to the predecessor of the next start; non-initial starts must be
    /// successor ordinals.
    pub fn from_starts(space: OrdinalSpace, starts: Vec<(Ordinal, f64)>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidStepFunction(msg));
        match starts.first() {
            None => return bad("no pieces".into()),
            Some((s, _)) if !s.is_zero() => {
                return bad(format!("piece 0 starts at {s}, expected 0"));
            }
            _ => {}
        }
        for (i, (s, v)) in starts.iter().enumerate() {
            if !v.is_finite() {
                return bad(format!("piece {i} has non-finite value {v}"));
            }
            if !space.contains(s) {
                return bad(format!(
                    "piece {i} starts at {s}, beyond gamma = {}",
                    space.gamma()
                ));
            }
            if i > 0 {
                if *s <= starts[i - 1].0 {
                    return bad(format!("piece {i} starts at {s}, not after piece {}", i - 1));
                }
                if !s.is_successor() {
                    return bad(format!(
                        "piece {i} starts at limit point {s}; a jump there breaks continuity"
                    ));
                }
            }
        }
        let mut pieces = Vec::with_capacity(starts.len());
        for (i, (s, v)) in starts.iter().enumerate() {
            let end = match starts.get(i + 1) {
                Some((next, _)) => next.predecessor().expect("checked successor"),
                None => space.gamma().clone(),
            };
            pieces.push(Piece {
                start: s.clone(),
                end,
                value: *v,
            });
        }
        Ok(StepFunction { space, pieces }.canonical())
    }

    /// Builds from explicit pieces, validating every invariant.
    pub fn from_pieces(space: OrdinalSpace, pieces: Vec<Piece>) -> Result<Self> {
        let f = StepFunction { space, pieces };
        f.validate()?;
        Ok(f.canonical())
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidStepFunction(msg));
        let Some(first) = self.pieces.first() else {
            return bad("no pieces".into());
        };
        if !first.start.is_zero() {
            return bad(format!("piece 0 starts at {}, expected 0", first.start));
        }
        if self.pieces.last().unwrap().end != *self.space.gamma() {
            return bad(format!("last piece does not end at gamma = {}", self.space.gamma()));
        }
        for (i, p) in self.pieces.iter().enumerate() {
            if p.start > p.end {
                return bad(format!("piece {i} is empty: [{}, {}]", p.start, p.end));
            }
            if !p.value.is_finite() {
                return bad(format!("piece {i} has non-finite value {}", p.value));
            }
            if i > 0 {
                let expected = self.pieces[i - 1].end.successor();
                if p.start != expected {
                    return bad(format!("piece {i} starts at {}, expected {expected}", p.start));
                }
                if !p.start.is_successor() {
                    return bad(format!("piece {i} starts at limit point {}", p.start));
                }
            }
        }
        Ok(())
    }

    /// True when the partition, continuity and canonical-form invariants hold.
    pub fn is_valid(&self) -> bool {
        self.validate().is_ok() && self.pieces.windows(2).all(|w| w[0].value != w[1].value)
    }

    fn canonical(self) -> Self {
        let mut pieces: Vec<Piece> = Vec::with_capacity(self.pieces.len());
        for p in self.pieces {
            match pieces.last_mut() {
                Some(last) if last.value == p.value => last.end = p.end,
                _ => pieces.push(p),
            }
        }
        StepFunction {
            space: self.space,
            pieces,
        }
    }

    fn from_intervals(space: OrdinalSpace, intervals: Vec<(Ordinal, Ordinal)>, values: Vec<f64>) -> Self {
        let pieces = intervals
            .into_iter()
            .zip(values)
            .map(|((start, end), value)| Piece { start, end, value })
            .collect();
        StepFunction { space, pieces }.canonical()
    }

    pub fn space(&self) -> &OrdinalSpace {
        &self.space
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(|p| p.value == 0.0)
    }

    fn value_at(&self, t: &Ordinal) -> f64 {
        let i = self.pieces.partition_point(|p| p.end < *t);
        self.pieces[i].value
    }

    pub fn eval(&self, t: &Ordinal) -> Result<f64> {
        self.space.check(t)?;
        Ok(self.value_at(t))
    }

    pub fn sup_norm(&self) -> f64 {
        self.pieces.iter().map(|p| p.value.abs()).fold(0.0, f64::max)
    }

    fn check_space(&self, other: &StepFunction) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch(
                self.space.gamma().to_string(),
                other.space.gamma().to_string(),
            ));
        }
        Ok(())
    }

    /// Pointwise `op(f, g)` on the common refinement.
    pub fn zip_with(&self, other: &StepFunction, op: impl Fn(f64, f64) -> f64) -> Result<StepFunction> {
        self.check_space(other)?;
        let ends = self
            .pieces
            .iter()
            .chain(&other.pieces)
            .map(|p| p.end.clone())
            .collect();
        let intervals = intervals_from_ends(&self.space, ends);
        let values = intervals
            .iter()
            .map(|(s, _)| op(self.value_at(s), other.value_at(s)))
            .collect();
        Ok(Self::from_intervals(self.space.clone(), intervals, values))
    }

    pub fn add(&self, other: &StepFunction) -> Result<StepFunction> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn mul(&self, other: &StepFunction) -> Result<StepFunction> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: f64) -> StepFunction {
        self.compose_scalar(|v| c * v)
    }

    /// `theta ∘ f`.
    pub fn compose_scalar(&self, theta: impl Fn(f64) -> f64) -> StepFunction {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                value: theta(p.value),
                ..p.clone()
            })
            .collect();
        StepFunction {
            space: self.space.clone(),
            pieces,
        }
        .canonical()
    }

    /// Derivative of `f -> theta ∘ f` applied to `h`: `(theta' ∘ f) × h`.
    pub fn compose_derivative<M: ScalarMap + ?Sized>(&self, theta: &M, h: &StepFunction) -> Result<StepFunction> {
        self.compose_scalar(|v| theta.derivative(v)).mul(h)
    }

    pub fn level_set(&self, mode: LevelMode) -> ClosedSet {
        let keep: Box<dyn Fn(f64) -> bool> = match mode {
            LevelMode::AtLeast(eta) => Box::new(move |v: f64| v.abs() >= eta),
            LevelMode::Max => {
                let m = self.sup_norm();
                Box::new(move |v: f64| v.abs() == m && m > 0.0)
            }
        };
        let intervals = self
            .pieces
            .iter()
            .filter(|p| keep(p.value))
            .map(|p| (p.start.clone(), p.end.clone()))
            .collect();
        ClosedSet::new(intervals).expect("pieces are nonempty intervals")
    }

    /// `f × χ_U`, or `f × χ_{K \ U}` when `complement` is set.
    pub fn multiply_indicator(&self, u: &Neighborhood, complement: bool) -> StepFunction {
        let mut ends: Vec<Ordinal> = self.pieces.iter().map(|p| p.end.clone()).collect();
        for part in u.parts() {
            if let Some(p) = part.low_pred() {
                ends.push(p.clone());
            }
            ends.push(part.high().clone());
        }
        let intervals = intervals_from_ends(&self.space, ends);
        let values = intervals
            .iter()
            .map(|(s, _)| {
                if u.contains(s) != complement {
                    self.value_at(s)
                } else {
                    0.0
                }
            })
            .collect();
        let out = Self::from_intervals(self.space.clone(), intervals, values);
        assert!(out.validate().is_ok(), "indicator product broke continuity");
        out
    }

    pub fn param_view(&self) -> (Partition, Vec<f64>) {
        let partition = Partition {
            space: self.space.clone(),
            intervals: self
                .pieces
                .iter()
                .map(|p| (p.start.clone(), p.end.clone()))
                .collect(),
        };
        (partition, self.pieces.iter().map(|p| p.value).collect())
    }
}

impl fmt::Display for StepFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "[{}, {}] -> {}", p.start, p.end, p.value)?;
        }
        Ok(())
    }
}

impl Partition {
    pub fn space(&self) -> &OrdinalSpace {
        &self.space
    }

    pub fn intervals(&self) -> &[(Ordinal, Ordinal)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn rebuild(&self, values: &[f64]) -> Result<StepFunction> {
        if values.len() != self.intervals.len() {
            return Err(Error::LengthMismatch {
                expected: self.intervals.len(),
                found: values.len(),
            });
        }
        let pieces = self
            .intervals
            .iter()
            .zip(values)
            .map(|((start, end), &value)| Piece {
                start: start.clone(),
                end: end.clone(),
                value,
            })
            .collect();
        StepFunction::from_pieces(self.space.clone(), pieces)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::SmoothStep;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn sample() -> StepFunction {
        let k = OrdinalSpace::new(o("w^2"));
        StepFunction::from_starts(k, vec![(o("0"), 2.0), (o("w+1"), -1.0)]).unwrap()
    }

    #[test]
    fn eval_and_norm() {
        let f = sample();
        assert_eq!(f.eval(&o("w")).unwrap(), 2.0);
        assert_eq!(f.eval(&o("w+1")).unwrap(), -1.0);
        assert_eq!(f.eval(&o("w^2")).unwrap(), -1.0);
        assert!(f.eval(&o("w^2+1")).is_err());
        assert_eq!(f.sup_norm(), 2.0);
        assert!(f.is_valid());
    }

    #[test]
    fn add_and_scale() {
        let f = sample();
        let z = f.add(&f.scale(-1.0)).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.pieces().len(), 1);
        let other = StepFunction::zero(OrdinalSpace::new(o("w")));
        assert!(matches!(f.add(&other), Err(Error::SpaceMismatch(..))));
    }

    #[test]
    fn limit_start_is_rejected() {
        let k = OrdinalSpace::new(o("w^2"));
        let err = StepFunction::from_starts(k.clone(), vec![(o("0"), 1.0), (o("w"), 2.0)]).unwrap_err();
        assert!(err.to_string().contains("piece 1 starts at limit point w"), "{err}");
        assert!(StepFunction::from_starts(k.clone(), vec![(o("1"), 1.0)]).is_err());
        assert!(StepFunction::from_starts(k, vec![(o("0"), 1.0), (o("w^3+1"), 2.0)]).is_err());
    }

    #[test]
    fn level_sets() {
        let f = sample();
        assert_eq!(f.level_set(LevelMode::AtLeast(1.5)).to_string(), "[0, w]");
        assert_eq!(f.level_set(LevelMode::Max).to_string(), "[0, w]");
        assert_eq!(f.level_set(LevelMode::AtLeast(1.0)).to_string(), "[0, w^2]");
        assert!(f.level_set(LevelMode::AtLeast(2.5)).is_empty());
    }

    #[test]
    fn indicator_products() {
        let k = OrdinalSpace::new(o("w^2"));
        let one = StepFunction::constant(k.clone(), 1.0);
        let u = k.v_of_set(&[o("w^2")]).unwrap();
        let g = one.multiply_indicator(&u, true);
        assert_eq!(g.to_string(), "[0, 0] -> 1, [1, w^2] -> 0");
        let u = k.v_of_set(&[o("0"), o("w^2")]).unwrap();
        assert!(one.multiply_indicator(&u, true).is_zero());
        let g = one.multiply_indicator(&u, false);
        assert_eq!(g, one);
    }

    #[test]
    fn compose() {
        let f = sample();
        let g = f.compose_scalar(|x| x * x);
        let vals: Vec<f64> = g.pieces().iter().map(|p| p.value).collect();
        assert_eq!(vals, vec![4.0, 1.0]);
        assert_eq!(f.compose_scalar(|x| x), f);
    }

    #[test]
    fn compose_derivative_matches_central_difference() {
        let f = sample();
        let theta = SmoothStep::new(0.5, 2.5).unwrap();
        let h = StepFunction::from_starts(f.space().clone(), vec![(o("0"), 0.3), (o("w+1"), -0.7)]).unwrap();
        let d = f.compose_derivative(&theta, &h).unwrap();
        let s = 1e-5;
        let plus = f.add(&h.scale(s)).unwrap().compose_scalar(|x| theta.value(x));
        let minus = f.add(&h.scale(-s)).unwrap().compose_scalar(|x| theta.value(x));
        for t in ["0", "w", "w+1", "w^2"] {
            let t = o(t);
            let fd = (plus.eval(&t).unwrap() - minus.eval(&t).unwrap()) / (2.0 * s);
            let exact = d.eval(&t).unwrap();
            assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1e-300), "{fd} vs {exact}");
        }
    }

    #[test]
    fn param_round_trip() {
        let f = sample();
        let (part, vals) = f.param_view();
        assert_eq!(part.rebuild(&vals).unwrap(), f);
        let g = part.rebuild(&[0.5, 0.25]).unwrap();
        assert!(g.is_valid());
        assert!(matches!(part.rebuild(&[1.0]), Err(Error::LengthMismatch { .. })));
    }
}
