use std::collections::BTreeSet;

use hvlab::projective::enumerate_points;
use hvlab::{Elem, Field, Flat, HomogeneousPoly, ProjPoint};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f4() -> Field {
    Field::quadratic(2).unwrap()
}

fn random(f: &Field, nvars: usize, d: u32, seed: u64) -> HomogeneousPoly {
    HomogeneousPoly::random(f, nvars, d, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn zeros(f: &Field, p: &HomogeneousPoly) -> BTreeSet<ProjPoint> {
    p.zero_set(f).unwrap().into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zero_sets_scale_and_multiply(d in 1u32..=2, e in 1u32..=2, seed in any::<u64>(), k in 1u32..4) {
        let f = f4();
        let a = random(&f, 4, d, seed);
        let b = random(&f, 4, e, seed ^ 0x9e37);
        prop_assume!(!a.is_zero() && !b.is_zero());
        prop_assert_eq!(zeros(&f, &a.scale(&f, Elem(k))), zeros(&f, &a));
        let prod = a.mul(&f, &b).unwrap();
        let union: BTreeSet<ProjPoint> = zeros(&f, &a).union(&zeros(&f, &b)).cloned().collect();
        prop_assert_eq!(zeros(&f, &prod), union);
    }

    #[test]
    fn evaluation_is_a_ring_map(d in 1u32..=3, seed in any::<u64>(), r in 0u32..85) {
        let f = f4();
        let a = random(&f, 4, d, seed);
        let b = random(&f, 4, d, seed.wrapping_add(1));
        let p = enumerate_points(&f, 3).nth(r as usize).unwrap();
        let (x, y) = (a.evaluate(&f, &p).unwrap(), b.evaluate(&f, &p).unwrap());
        prop_assert_eq!(a.add(&f, &b).unwrap().evaluate(&f, &p).unwrap(), f.add(x, y));
        prop_assert_eq!(a.mul(&f, &b).unwrap().evaluate(&f, &p).unwrap(), f.mul(x, y));
        prop_assert_eq!(a.pow(&f, 2).evaluate(&f, &p).unwrap(), f.mul(x, x));
    }

    #[test]
    fn restriction_parametrizes_flats(d in 1u32..=3, seed in any::<u64>(), rows in prop::collection::vec(prop::collection::vec(0u32..4, 4), 1..=3)) {
        let f = f4();
        let a = random(&f, 4, d, seed);
        let rows: Vec<Vec<Elem>> = rows.into_iter().map(|r| r.into_iter().map(Elem).collect()).collect();
        let Some(x) = Flat::from_vectors(&f, &rows) else { return Ok(()) };
        let r = a.restrict_to_flat(&f, &x).unwrap();
        let on_flat = x.points(&f).iter().filter(|p| a.evaluate(&f, p).unwrap().is_zero()).count();
        let n = if r.is_zero() { x.point_count(&f) as usize } else { r.zero_set(&f).unwrap().len() };
        prop_assert_eq!(n, on_flat);
        prop_assert_eq!(a.contains_flat(&f, &x), on_flat as u64 == x.point_count(&f) && d < 4);
    }

    #[test]
    fn linear_division_roundtrip(d in 1u32..=2, seed in any::<u64>(), lin in prop::collection::vec(0u32..4, 4)) {
        let f = f4();
        prop_assume!(lin.iter().any(|&c| c != 0));
        let l: Vec<Elem> = lin.into_iter().map(Elem).collect();
        let g = random(&f, 4, d, seed);
        prop_assume!(!g.is_zero());
        let prod = HomogeneousPoly::linear(&f, &l).mul(&f, &g).unwrap();
        prop_assert_eq!(prod.divide_by_linear(&f, &l).unwrap(), Some(g));
    }

    #[test]
    fn json_roundtrip(d in 0u32..=3, seed in any::<u64>()) {
        let f = Field::quadratic(3).unwrap();
        let a = random(&f, 5, d, seed);
        let (g, b) = HomogeneousPoly::from_json(&a.to_json(&f)).unwrap();
        prop_assert_eq!(g.spec(), f.spec());
        prop_assert_eq!(b, a);
    }
}
