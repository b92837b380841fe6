use ckrenorm::admissible::{hull, is_admissible};
use ckrenorm::gen::{self, Values};
use ckrenorm::orlicz::{OrliczConfig, OrliczNorm, SigmaSum};
use ckrenorm::stepfn::LevelMode;
use ckrenorm::talagrand::{Dyadic, Talagrand, TalagrandIndex, TripleEnum};
use ckrenorm::topology::{ClosedSet, OrdinalSpace};
use ckrenorm::Ordinal;
use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    gen::case_rng(seed, "invariants", 0)
}

fn space_and_point(seed: u64) -> (OrdinalSpace, Ordinal, ChaCha8Rng) {
    let mut r = rng(seed);
    let k = gen::space(&mut r, 3);
    let t = gen::point(&mut r, &k);
    (k, t, r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ordinal_text_roundtrip(seed in any::<u64>()) {
        let (_, t, _) = space_and_point(seed);
        let back: Ordinal = t.to_string().parse().unwrap();
        prop_assert_eq!(&back, &t);
        let json = serde_json::to_string(&t).unwrap();
        prop_assert_eq!(serde_json::from_str::<Ordinal>(&json).unwrap(), t);
    }

    #[test]
    fn finite_ordinals_match_integers(a in 0u64..1_000_000, b in 0u64..1_000_000) {
        let (x, y) = (Ordinal::from(a), Ordinal::from(b));
        prop_assert_eq!(&x + &y, Ordinal::from(a + b));
        prop_assert_eq!(x.cmp(&y), a.cmp(&b));
        prop_assert_eq!(x.to_u64(), Some(a));
    }

    #[test]
    fn addition_is_associative_and_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = gen::space(&mut r, 3);
        let (a, b, c) = (gen::point(&mut r, &k), gen::point(&mut r, &k), gen::point(&mut r, &k));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert!(&a + &b >= a);
        prop_assert!(&a + &b >= b);
        prop_assert!(a.successor() > a);
        prop_assert_eq!(a.successor().predecessor(), Some(a.clone()));
        prop_assert_eq!(a.successor().nu_rank(), Ordinal::zero());
    }

    #[test]
    fn rank_is_last_exponent(seed in any::<u64>()) {
        let (k, t, _) = space_and_point(seed);
        let rank = t.nu_rank();
        match t.terms().last() {
            None => prop_assert!(rank.is_zero()),
            Some(term) => prop_assert_eq!(&rank, &term.exponent),
        }
        prop_assert!(k.in_derived(&t, &rank).unwrap());
        prop_assert!(!k.in_derived(&t, &rank.successor()).unwrap());
    }

    #[test]
    fn vt_isolates_its_point_in_its_rank(seed in any::<u64>()) {
        let (k, t, _) = space_and_point(seed);
        let v = k.canonical_vt(&t).unwrap();
        prop_assert!(v.contains(&t));
        let (lo, hi) = v.bounds();
        let set = ClosedSet::interval(lo, hi).unwrap();
        prop_assert_eq!(set.max_rank(), Some(t.nu_rank()));
        prop_assert!(set.max_point() == Some(&t));
        prop_assert!(k.lemma1_check(std::slice::from_ref(&t)).unwrap());
    }

    #[test]
    fn step_algebra_is_pointwise(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = gen::space(&mut r, 3);
        let f = gen::step_function(&mut r, &k, 8, Values::Uniform(2.0));
        let g = gen::step_function(&mut r, &k, 8, Values::Uniform(2.0));
        let sum = f.add(&g).unwrap();
        let prod = f.mul(&g).unwrap();
        let (part, vals) = f.param_view();
        prop_assert_eq!(part.rebuild(&vals).unwrap(), f.clone());
        for _ in 0..10 {
            let t = gen::point(&mut r, &k);
            let (a, b) = (f.eval(&t).unwrap(), g.eval(&t).unwrap());
            prop_assert_eq!(sum.eval(&t).unwrap(), a + b);
            prop_assert_eq!(prod.eval(&t).unwrap(), a * b);
            prop_assert_eq!(f.scale(-3.0).eval(&t).unwrap(), -3.0 * a);
            prop_assert!(a.abs() <= f.sup_norm());
            prop_assert_eq!(f.level_set(LevelMode::AtLeast(0.5)).contains(&t), a.abs() >= 0.5);
            prop_assert_eq!(f.level_set(LevelMode::Max).contains(&t), a.abs() == f.sup_norm());
        }
        prop_assert!(f.pieces().iter().any(|p| p.value.abs() == f.sup_norm()));
    }

    #[test]
    fn indicator_products_are_pointwise(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = gen::space(&mut r, 3);
        let f = gen::step_function(&mut r, &k, 8, Values::Uniform(2.0));
        let pts = gen::finite_points(&mut r, &k, 4);
        let v = k.v_of_set(&pts).unwrap();
        let inside = f.multiply_indicator(&v, false);
        let outside = f.multiply_indicator(&v, true);
        for _ in 0..10 {
            let t = gen::point(&mut r, &k);
            let a = f.eval(&t).unwrap();
            let (i, o) = (inside.eval(&t).unwrap(), outside.eval(&t).unwrap());
            if v.contains(&t) {
                prop_assert_eq!((i, o), (a, 0.0));
            } else {
                prop_assert_eq!((i, o), (0.0, a));
            }
        }
    }

    #[test]
    fn hull_is_idempotent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = gen::space(&mut r, 3);
        let h = gen::closed_set(&mut r, &k, 4);
        let a = hull(&k, &h).unwrap();
        prop_assert!(is_admissible(&k, a.points()).unwrap());
        prop_assert_eq!(hull(&k, &ClosedSet::from_points(a.points())).unwrap(), a.clone());
        let wider = h.union(&ClosedSet::from_points(a.points()));
        prop_assert_eq!(hull(&k, &wider).unwrap(), a);
    }

    #[test]
    fn orlicz_norm_is_a_norm(seed in any::<u64>(), c in -4.0f64..4.0) {
        prop_assume!(c.abs() > 1e-3);
        let mut r = rng(seed);
        let k = gen::space(&mut r, 3);
        let f = gen::step_function(&mut r, &k, 8, Values::Uniform(2.0));
        let norm = OrliczNorm::new(OrliczConfig::default(), &k).unwrap();
        let rho = norm.norm(&f).unwrap();
        let scaled = norm.norm(&f.scale(c)).unwrap();
        prop_assert!((scaled - c.abs() * rho).abs() <= 1e-9 * scaled.max(1.0));
        prop_assert!(norm.equivalence_check(&f).unwrap());
        prop_assert!(norm.sigma_sum(&f, rho * (1.0 + 1e-9)).unwrap().at_most_one());
        match norm.sigma_sum(&f, rho * (1.0 - 1e-6)).unwrap() {
            SigmaSum::Finite(s) => prop_assert!(s > 1.0),
            SigmaSum::Infinite => {}
        }
    }

    #[test]
    fn orlicz_norm_is_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = gen::space(&mut r, 3);
        let f = gen::step_function(&mut r, &k, 8, Values::Uniform(2.0));
        let g = gen::step_function(&mut r, &k, 8, Values::Uniform(1.0));
        let bigger = f.zip_with(&g, |a, b| a.signum() * (a.abs() + b.abs())).unwrap();
        let norm = OrliczNorm::new(OrliczConfig::default(), &k).unwrap();
        prop_assert!(norm.norm(&f).unwrap() <= norm.norm(&bigger).unwrap() + 1e-9);
    }

    #[test]
    fn gradient_is_scale_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = gen::space(&mut r, 3);
        let f = gen::step_function(&mut r, &k, 8, Values::Uniform(2.0));
        let norm = OrliczNorm::new(OrliczConfig::default(), &k).unwrap();
        let g1 = norm.gradient(&f).unwrap();
        let g2 = norm.gradient(&f.scale(2.0)).unwrap();
        prop_assert_eq!(g1.len(), g2.len());
        for (a, b) in g1.iter().zip(&g2) {
            prop_assert!((a - b).abs() <= 1e-7 * a.abs().max(1e-3), "{} vs {}", a, b);
        }
    }

    #[test]
    fn triple_ranks_roundtrip(n in 0u128..1_000_000_000_000) {
        let t = TripleEnum::unrank(n).unwrap();
        prop_assert_eq!(TripleEnum::rank(&t).unwrap(), n);
        prop_assert!(t.xi < t.eta && t.eta < t.zeta);
        prop_assert!(TripleEnum::weight(n + 1) < TripleEnum::weight(n));
        prop_assert!(TripleEnum::count_through(t.level() - 1) <= n && n < TripleEnum::count_through(t.level()));
    }

    #[test]
    fn dyadic_text_roundtrip(num in 1u64..1_000_000, exp in 0u32..30) {
        let d = Dyadic::new(num, exp).unwrap();
        let back: Dyadic = d.to_string().parse().unwrap();
        prop_assert_eq!(back, d);
        prop_assert_eq!(Dyadic::from_f64(d.to_f64()).unwrap(), d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coordinates_vanish_off_their_set(seed in any::<u64>(), n in 0u128..500) {
        let mut r = rng(seed);
        let k = gen::space(&mut r, 3);
        let f = gen::step_function(&mut r, &k, 8, Values::Uniform(2.0));
        let tal = Talagrand::new(&k, OrliczConfig::default()).unwrap();
        let triple = TripleEnum::unrank(n).unwrap();
        let level = f.level_set(LevelMode::AtLeast(triple.eta.to_f64()));
        prop_assume!(!level.is_empty());
        let set = hull(&k, &level).unwrap();
        let s = gen::point(&mut r, &k);
        let idx = TalagrandIndex { s: s.clone(), triple, set: set.clone() };
        let v = tal.coordinate(&f, &idx).unwrap();
        if !set.contains(&s) {
            prop_assert_eq!(v, 0.0);
        }
        prop_assert!((0.0..=TripleEnum::weight(n)).contains(&v));
    }

    #[test]
    fn support_values_are_coordinates(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = gen::space(&mut r, 3);
        let f = gen::step_function(&mut r, &k, 6, Values::Uniform(2.0));
        let tal = Talagrand::new(&k, OrliczConfig::default()).unwrap();
        let support = tal.support(&f, 1e-2, None).unwrap();
        for e in &support {
            prop_assert_eq!(tal.coordinate(&f, &e.index).unwrap(), e.value);
            prop_assert_eq!(TripleEnum::rank(&e.index.triple).unwrap(), e.n);
        }
        let d = Ordinal::one();
        let low = tal.support(&f, 1e-2, Some(&d)).unwrap();
        prop_assert!(low.iter().all(|e| e.index.set.max_rank().unwrap() < d));
        prop_assert!(low.iter().all(|e| support.contains(e)));
    }
}
