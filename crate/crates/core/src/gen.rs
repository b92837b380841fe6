//! Seeded generators for spaces, points, closed sets and step functions.
//!
//! Every case draws from its own `ChaCha8Rng`, seeded from the run seed,
//! the suite name and the case index, so a single case replays on its own
//! and cases can run in any order.

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ordinal::{Ordinal, Term};
use crate::stepfn::StepFunction;
use crate::topology::{ClosedSet, OrdinalSpace};

/// Largest coefficient drawn for free (non-tight) terms.
pub const MAX_COEF: u64 = 4;

/// Stable 64-bit seed for `(seed, suite, case)`.
pub fn case_seed(seed: u64, suite: &str, case: u64) -> u64 {
    // FNV-1a over the suite name, then splitmix64 finalisation.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in suite.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    let mut z = h ^ seed.rotate_left(17) ^ case.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn case_rng(seed: u64, suite: &str, case: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(case_seed(seed, suite, case))
}

fn from_coefs(coefs: &[(u64, u64)]) -> Ordinal {
    let terms = coefs
        .iter()
        .filter(|(_, c)| *c > 0)
        .map(|&(e, c)| Term {
            exponent: Ordinal::from(e),
            coefficient: BigUint::from(c),
        })
        .collect();
    Ordinal::from_terms(terms).expect("exponents strictly decrease")
}

/// `[0, gamma]` with `gamma < w^(max_height + 1)` and leading exponent
/// drawn uniformly from `0..=max_height`.
pub fn space<R: Rng>(rng: &mut R, max_height: u64) -> OrdinalSpace {
    let h = rng.gen_range(0..=max_height);
    let mut coefs = vec![(h, rng.gen_range(1..=MAX_COEF))];
    for e in (0..h).rev() {
        if rng.gen_bool(0.5) {
            coefs.push((e, rng.gen_range(1..=MAX_COEF)));
        }
    }
    if h == 0 {
        coefs[0].1 = rng.gen_range(2..=12);
    }
    OrdinalSpace::new(from_coefs(&coefs))
}

/// A point of `[0, gamma]`, built top-down so it never exceeds `gamma`.
pub fn point<R: Rng>(rng: &mut R, space: &OrdinalSpace) -> Ordinal {
    let gamma = space.gamma();
    match rng.gen_range(0..10) {
        0 => return Ordinal::zero(),
        1 => return gamma.clone(),
        _ => {}
    }
    let h = space.finite_height().expect("generators use finite-height spaces") as u64;
    let mut coefs = Vec::new();
    let mut tight = true;
    for e in (0..=h).rev() {
        let e_ord = Ordinal::from(e);
        let cap = if tight {
            gamma.coefficient_at(&e_ord).try_into().unwrap_or(u64::MAX)
        } else {
            MAX_COEF
        };
        let c = if rng.gen_bool(0.4) { 0 } else { rng.gen_range(0..=cap) };
        if c < cap {
            tight = false;
        }
        coefs.push((e, c));
    }
    from_coefs(&coefs)
}

/// A successor point of `(0, gamma]`, if one exists.
pub fn successor_point<R: Rng>(rng: &mut R, space: &OrdinalSpace) -> Option<Ordinal> {
    if space.gamma().is_zero() {
        return None;
    }
    for _ in 0..32 {
        let p = point(rng, space);
        if p < *space.gamma() {
            return Some(p.successor());
        }
    }
    Some(Ordinal::one())
}

/// A nonzero limit point of `[0, gamma]`, if one exists.
pub fn limit_point<R: Rng>(rng: &mut R, space: &OrdinalSpace) -> Option<Ordinal> {
    if space.finite_height() == Some(0) {
        return None;
    }
    for _ in 0..64 {
        let p = point(rng, space).truncate_below(&Ordinal::one());
        if !p.is_zero() {
            return Some(p);
        }
    }
    Some(Ordinal::omega())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Values {
    /// Uniform in `[-r, r]`.
    Uniform(f64),
    /// Multiples of `step` in `[-r, r]`.
    Grid { step: f64, r: f64 },
}

impl Values {
    pub fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            Values::Uniform(r) => rng.gen_range(-r..=r),
            Values::Grid { step, r } => {
                let k = (r / step).round() as i64;
                rng.gen_range(-k..=k) as f64 * step
            }
        }
    }
}

/// A step function with at most `max_pieces` pieces and at least one
/// nonzero value.
pub fn step_function<R: Rng>(
    rng: &mut R,
    space: &OrdinalSpace,
    max_pieces: usize,
    values: Values,
) -> StepFunction {
    let pieces = rng.gen_range(1..=max_pieces.max(1));
    let mut starts = vec![Ordinal::zero()];
    for _ in 1..pieces {
        if let Some(s) = successor_point(rng, space) {
            starts.push(s);
        }
    }
    starts.sort();
    starts.dedup();
    let mut vals: Vec<f64> = starts.iter().map(|_| values.draw(rng)).collect();
    if vals.iter().all(|v| *v == 0.0) {
        let i = rng.gen_range(0..vals.len());
        vals[i] = match values {
            Values::Uniform(r) => r,
            Values::Grid { step, .. } => step,
        };
    }
    StepFunction::from_starts(space.clone(), starts.into_iter().zip(vals).collect())
        .expect("successor starts give a continuous step function")
}

/// A nonempty closed set: a few intervals and isolated points.
pub fn closed_set<R: Rng>(rng: &mut R, space: &OrdinalSpace, max_parts: usize) -> ClosedSet {
    let parts = rng.gen_range(1..=max_parts.max(1));
    let mut intervals = Vec::with_capacity(parts);
    for _ in 0..parts {
        let a = point(rng, space);
        if rng.gen_bool(0.3) {
            intervals.push((a.clone(), a));
        } else {
            let b = point(rng, space);
            intervals.push(if a <= b { (a, b) } else { (b, a) });
        }
    }
    ClosedSet::new(intervals).expect("ordered endpoints")
}

/// Between 1 and `max` distinct points.
pub fn finite_points<R: Rng>(rng: &mut R, space: &OrdinalSpace, max: usize) -> Vec<Ordinal> {
    let n = rng.gen_range(1..=max.max(1));
    let mut pts: Vec<Ordinal> = (0..n).map(|_| point(rng, space)).collect();
    pts.sort();
    pts.dedup();
    pts
}

pub fn choose<'a, R: Rng, T>(rng: &mut R, items: &'a [T]) -> &'a T {
    items.choose(rng).expect("nonempty choice")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_stable_and_distinct() {
        assert_eq!(case_seed(7, "hull", 3), case_seed(7, "hull", 3));
        assert_ne!(case_seed(7, "hull", 3), case_seed(7, "hull", 4));
        assert_ne!(case_seed(7, "hull", 3), case_seed(7, "neighbourhood-trace", 3));
        assert_ne!(case_seed(7, "hull", 3), case_seed(8, "hull", 3));
    }

    #[test]
    fn generated_objects_are_valid() {
        for case in 0..300 {
            let mut rng = case_rng(1, "gen", case);
            let k = space(&mut rng, 3);
            assert!(k.finite_height().unwrap() <= 3);
            let p = point(&mut rng, &k);
            assert!(k.contains(&p));
            if let Some(s) = successor_point(&mut rng, &k) {
                assert!(s.is_successor() && k.contains(&s));
            }
            if let Some(t) = limit_point(&mut rng, &k) {
                assert!(t.is_limit() && k.contains(&t));
            }
            let f = step_function(&mut rng, &k, 8, Values::Uniform(2.0));
            assert!(f.is_valid() && f.pieces().len() <= 8 && !f.is_zero());
            let h = closed_set(&mut rng, &k, 4);
            assert!(!h.is_empty() && h.is_normalized());
            assert!(k.contains(h.max_point().unwrap()));
        }
    }

    #[test]
    fn same_seed_same_objects() {
        let draw = || {
            let mut rng = case_rng(42, "det", 5);
            let k = space(&mut rng, 3);
            step_function(&mut rng, &k, 8, Values::Grid { step: 0.5, r: 2.0 }).to_string()
        };
        assert_eq!(draw(), draw());
    }
}
