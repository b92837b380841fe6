//! Admissible sets and the hull of a closed set.
//!
//! A finite `A` is admissible when `s ∉ V_t` for distinct `s, t ∈ A`. Every
//! nonempty closed `H` has exactly one admissible `A` with `A ⊆ H ⊆ V_A`;
//! [`hull`] builds it by peeling off the top-rank points and recursing on
//! what their neighbourhoods leave uncovered.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::topology::{ClosedSet, Neighborhood, OrdinalSpace, PointList};

pub const BRUTE_FORCE_LIMIT: usize = 12;

/// Sorted, duplicate-free admissible point set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Ordinal>", into = "Vec<Ordinal>")]
pub struct AdmissibleSet {
    points: Vec<Ordinal>,
}

impl AdmissibleSet {
    pub fn new(mut points: Vec<Ordinal>) -> Result<Self> {
        points.sort();
        points.dedup();
        if !pairwise_admissible(&points) {
            return Err(Error::InvalidArgument(format!(
                "{} is not admissible",
                fmt_points(&points)
            )));
        }
        Ok(AdmissibleSet { points })
    }

    pub fn points(&self) -> &[Ordinal] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, t: &Ordinal) -> bool {
        self.points.binary_search(t).is_ok()
    }

    pub fn neighborhood(&self) -> Neighborhood {
        Neighborhood::of_points(&self.points)
    }

    pub fn max_rank(&self) -> Option<Ordinal> {
        self.points.iter().map(Ordinal::nu_rank).max()
    }
}

impl TryFrom<Vec<Ordinal>> for AdmissibleSet {
    type Error = Error;

    fn try_from(points: Vec<Ordinal>) -> Result<Self> {
        AdmissibleSet::new(points)
    }
}

impl From<AdmissibleSet> for Vec<Ordinal> {
    fn from(a: AdmissibleSet) -> Self {
        a.points
    }
}

impl fmt::Display for AdmissibleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_points(&self.points))
    }
}

fn fmt_points(points: &[Ordinal]) -> String {
    let inner: Vec<String> = points.iter().map(Ordinal::to_string).collect();
    format!("{{{}}}", inner.join(", "))
}

fn pairwise_admissible(points: &[Ordinal]) -> bool {
    let parts = Neighborhood::of_points(points);
    for (i, s) in points.iter().enumerate() {
        for (j, v) in parts.parts().iter().enumerate() {
            if i != j && points[i] != points[j] && v.contains(s) {
                return false;
            }
        }
    }
    true
}

pub fn is_admissible(space: &OrdinalSpace, points: &[Ordinal]) -> Result<bool> {
    for t in points {
        space.check(t)?;
    }
    Ok(pairwise_admissible(points))
}

/// The unique admissible `A` with `A ⊆ H ⊆ V_A`.
pub fn hull(space: &OrdinalSpace, h: &ClosedSet) -> Result<AdmissibleSet> {
    let Some(top) = h.max_point() else {
        return Err(Error::EmptySet);
    };
    space.check(top)?;
    let mut points = Vec::new();
    let mut rest = h.clone();
    let mut last_rank: Option<Ordinal> = None;
    while let Some(rank) = rest.max_rank() {
        if let Some(prev) = &last_rank {
            if rank >= *prev {
                return Err(Error::Internal(format!(
                    "hull ranks did not decrease: {rank} after {prev}"
                )));
            }
        }
        let stage = match rest.points_of_rank_at_least(&rank) {
            PointList::Finite(ps) => ps,
            PointList::Infinite => {
                return Err(Error::Internal(format!(
                    "infinitely many points of top rank {rank} in {rest}"
                )))
            }
        };
        rest = rest.subtract_neighborhood(&Neighborhood::of_points(&stage));
        points.extend(stage);
        last_rank = Some(rank);
    }
    let a = AdmissibleSet::new(points)?;
    debug_assert!(h.is_covered_by(&a.neighborhood()));
    Ok(a)
}

/// Every admissible `A ⊆ H` with `H ⊆ V_A`, by exhaustive search.
pub fn brute_force_hulls(space: &OrdinalSpace, h: &[Ordinal]) -> Result<Vec<AdmissibleSet>> {
    let mut pts = h.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeLimit {
            size: pts.len(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    for t in &pts {
        space.check(t)?;
    }
    let mut out = Vec::new();
    for mask in 1u32..(1 << pts.len()) {
        let subset: Vec<Ordinal> = pts
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, t)| t.clone())
            .collect();
        if !pairwise_admissible(&subset) {
            continue;
        }
        let v = Neighborhood::of_points(&subset);
        if pts.iter().all(|t| v.contains(t)) {
            out.push(AdmissibleSet { points: subset });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn os(xs: &[&str]) -> Vec<Ordinal> {
        xs.iter().map(|s| o(s)).collect()
    }

    #[test]
    fn admissibility_examples() {
        let k = OrdinalSpace::new(o("w^2"));
        assert!(is_admissible(&k, &os(&["w", "w*2"])).unwrap());
        assert!(!is_admissible(&k, &os(&["5", "w"])).unwrap());
        assert!(is_admissible(&k, &os(&["7"])).unwrap());
        assert!(is_admissible(&k, &os(&["w^3"])).is_err());
        assert!(AdmissibleSet::new(os(&["3", "w"])).is_err());
    }

    #[test]
    fn hull_examples() {
        let k = OrdinalSpace::new(o("w^2"));
        let h: ClosedSet = "[0, 5] u {w^2}".parse().unwrap();
        assert_eq!(hull(&k, &h).unwrap().points(), os(&["0", "w^2"]).as_slice());
        let h = ClosedSet::interval(o("0"), o("w*2")).unwrap();
        let a = hull(&k, &h).unwrap();
        assert_eq!(a.points(), os(&["0", "w", "w*2"]).as_slice());
        assert_eq!(a.to_string(), "{0, w, w*2}");
        let a = hull(&k, &ClosedSet::point(o("w+3"))).unwrap();
        assert_eq!(a.points(), os(&["w+3"]).as_slice());
        assert!(matches!(hull(&k, &ClosedSet::empty()), Err(Error::EmptySet)));
    }

    #[test]
    fn brute_force_examples() {
        let k = OrdinalSpace::new(o("w^2"));
        let r = brute_force_hulls(&k, &os(&["0", "w^2"])).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].points(), os(&["0", "w^2"]).as_slice());
        let r = brute_force_hulls(&k, &os(&["3"])).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].points(), os(&["3"]).as_slice());
        let many: Vec<Ordinal> = (0..13u64).map(Ordinal::from).collect();
        assert!(matches!(brute_force_hulls(&k, &many), Err(Error::SizeLimit { .. })));
        let h = os(&["2", "w", "w+1", "w*3", "w^2"]);
        let r = brute_force_hulls(&k, &h).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0], hull(&k, &ClosedSet::from_points(&h)).unwrap());
    }

    #[test]
    fn serde_roundtrip() {
        let a = AdmissibleSet::new(os(&["w^2", "0"])).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"["0","w^2"]"#);
        let b: AdmissibleSet = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        assert!(serde_json::from_str::<AdmissibleSet>(r#"["1","w"]"#).is_err());
    }
}
