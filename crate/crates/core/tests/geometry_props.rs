use std::collections::HashSet;

use hvlab::field::prime_power;
use hvlab::linalg;
use hvlab::projective::{enumerate_flats, gaussian_binomial, lines_through, proj_count};
use hvlab::{Elem, Field, Flat, ProjPoint, ProjSpace};
use proptest::prelude::*;

fn field(s: u32) -> Field {
    let (p, k) = prime_power(s).unwrap();
    Field::new(p, k).unwrap()
}

fn vec_in(size: u32, len: usize) -> impl Strategy<Value = Vec<Elem>> {
    prop::collection::vec((0..size).prop_map(Elem), len)
}

fn nonzero_vec(size: u32, len: usize) -> impl Strategy<Value = Vec<Elem>> {
    vec_in(size, len).prop_filter("nonzero", |v| v.iter().any(|c| !c.is_zero()))
}

fn setup() -> impl Strategy<Value = (u32, usize)> {
    (prop::sample::select(vec![2u32, 3, 4, 9]), 1usize..=4)
}

fn rows(s: u32, m: usize, max: usize) -> impl Strategy<Value = Vec<Vec<Elem>>> {
    prop::collection::vec(nonzero_vec(s, m + 1), 1..=max)
}

/// Rank of a set of vectors by brute force: log_s of the size of their span.
fn span_dim(f: &Field, vs: &[Vec<Elem>]) -> usize {
    let n = vs[0].len();
    let mut span: HashSet<Vec<Elem>> = HashSet::from([vec![Elem::ZERO; n]]);
    for v in vs {
        let mut next = HashSet::new();
        for w in &span {
            for c in f.elements() {
                next.insert(w.iter().zip(v).map(|(&a, &b)| f.add(a, f.mul(c, b))).collect::<Vec<_>>());
            }
        }
        span = next;
    }
    let mut d = 0;
    let mut size = 1usize;
    while size < span.len() {
        size *= f.size() as usize;
        d += 1;
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_unrank_bijection((s, m) in setup(), seed in any::<u32>()) {
        let sp = ProjSpace::new(m, s);
        let r = seed % sp.len();
        let c = sp.unrank(r);
        prop_assert_eq!(sp.rank(&c), r);
        prop_assert_eq!(c.iter().find(|x| !x.is_zero()), Some(&Elem::ONE));
    }

    #[test]
    fn normalization_is_scaling_invariant(
        (s, v, k) in setup().prop_flat_map(|(s, m)| (Just(s), nonzero_vec(s, m + 1), 1..s))
    ) {
        let f = field(s);
        let scaled: Vec<Elem> = v.iter().map(|&x| f.mul(x, Elem(k))).collect();
        let a = ProjPoint::new(&f, v).unwrap();
        let b = ProjPoint::new(&f, scaled).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.coords()[a.lead()], Elem::ONE);
    }

    #[test]
    fn flats_are_canonical_under_row_operations(
        (s, rs, mix) in setup().prop_flat_map(|(s, m)| (Just(s), rows(s, m, 3), vec_in(s, 9)))
    ) {
        let f = field(s);
        let Some(x) = Flat::from_vectors(&f, &rs) else { return Ok(()) };
        // add random combinations of the rows and permute
        let mut other: Vec<Vec<Elem>> = rs.iter().rev().cloned().collect();
        for (i, row) in other.iter_mut().enumerate() {
            let c = mix[i % mix.len()];
            let src = &rs[(i + 1) % rs.len()];
            for (a, &b) in row.iter_mut().zip(src) {
                *a = f.add(*a, f.mul(c, b));
            }
        }
        other.extend(rs.iter().cloned());
        let y = Flat::from_vectors(&f, &other).unwrap();
        prop_assert_eq!(&x, &y);
        prop_assert_eq!(x.dim() + 1, span_dim(&f, &rs));
        prop_assert_eq!(x.point_count(&f), proj_count(s as u64, x.dim() as u32 + 1));
        for r in &rs {
            prop_assert!(x.contains_vector(&f, r));
        }
    }

    #[test]
    fn intersect_and_join_dimensions(
        (s, a, b) in setup().prop_flat_map(|(s, m)| (Just(s), rows(s, m, 3), rows(s, m, 3)))
    ) {
        let f = field(s);
        let x = Flat::from_vectors(&f, &a).unwrap();
        let y = Flat::from_vectors(&f, &b).unwrap();
        let j = x.join(&f, &y);
        let meet_dim = x.dim() as isize + y.dim() as isize - j.dim() as isize;
        match x.intersect(&f, &y) {
            Some(i) => {
                prop_assert_eq!(i.dim() as isize, meet_dim);
                prop_assert!(x.contains_flat(&f, &i) && y.contains_flat(&f, &i));
            }
            None => prop_assert_eq!(meet_dim, -1),
        }
        prop_assert!(j.contains_flat(&f, &x) && j.contains_flat(&f, &y));
        let mut all = a.clone();
        all.extend(b.iter().cloned());
        prop_assert_eq!(j.dim() + 1, linalg::rank(&f, &all));
    }

    #[test]
    fn hyperplane_normal_roundtrip(
        (s, n) in setup().prop_flat_map(|(s, m)| (Just(s), nonzero_vec(s, m + 1)))
    ) {
        let f = field(s);
        let h = Flat::hyperplane(&f, &n).unwrap();
        prop_assert_eq!(h.dim() + 1, h.ambient_dim());
        let back = h.normal(&f).unwrap();
        prop_assert_eq!(ProjPoint::new(&f, back).unwrap(), ProjPoint::new(&f, n).unwrap());
    }
}

#[test]
fn point_enumeration_matches_rank_order() {
    let f = Field::new(2, 2).unwrap();
    let sp = ProjSpace::new(3, 4);
    let mut seen = HashSet::new();
    sp.for_each(|r, c| {
        assert_eq!(sp.rank(c), r);
        assert!(seen.insert(c.to_vec()));
    });
    assert_eq!(seen.len() as u64, proj_count(4, 4));
    assert_eq!(hvlab::projective::enumerate_points(&f, 3).count(), 85);
}

#[test]
fn flat_counts_match_gaussian_binomials() {
    for (p, k) in [(2u32, 1u32), (3, 1), (2, 2)] {
        let f = Field::new(p, k).unwrap();
        let s = f.size() as u64;
        for m in 1..=3usize {
            for dim in 0..=m {
                let flats: HashSet<Flat> = enumerate_flats(&f, m, dim).collect();
                // oracle: ordered bases of (dim+1)-subspaces over the order of GL(dim+1)
                let n = (m + 1) as u32;
                let k = (dim + 1) as u32;
                let ordered: u128 = (0..k).map(|i| (s as u128).pow(n) - (s as u128).pow(i)).product();
                let gl: u128 = (0..k).map(|i| (s as u128).pow(k) - (s as u128).pow(i)).product();
                assert_eq!(flats.len() as u128, ordered / gl, "s={s} m={m} dim={dim}");
                assert_eq!(flats.len() as u64, gaussian_binomial(n, k, s));
            }
        }
    }
}

#[test]
fn lines_through_a_point_partition_the_space() {
    let f = Field::new(3, 1).unwrap();
    let p = ProjPoint::new(&f, vec![Elem(0), Elem(1), Elem(2), Elem(1)]).unwrap();
    let lines: Vec<Flat> = lines_through(&f, &p).collect();
    assert_eq!(lines.len() as u64, proj_count(3, 3));
    let mut covered = HashSet::new();
    for l in &lines {
        assert!(l.contains_point(&f, &p));
        for x in l.points(&f) {
            if x != p {
                assert!(covered.insert(x));
            }
        }
    }
    assert_eq!(covered.len() as u64 + 1, proj_count(3, 4));
}
