use hvlab::hermitian::{variety_count, HyperplaneTag, LineTag};
use hvlab::linalg;
use hvlab::{Elem, Field, Flat, HermitianForm, HomogeneousPoly, ProjPoint, Variety};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn standard(q: u32) -> &'static Variety {
    static V2: OnceLock<Variety> = OnceLock::new();
    static V3: OnceLock<Variety> = OnceLock::new();
    match q {
        2 => V2.get_or_init(|| Variety::standard(2).unwrap()),
        3 => V3.get_or_init(|| Variety::standard(3).unwrap()),
        _ => unreachable!(),
    }
}

/// A random Hermitian matrix: subfield diagonal, conjugate-symmetric off it.
fn hermitian_matrix(f: &Field, n: usize, raw: &[u32]) -> Vec<Vec<Elem>> {
    let s = f.size();
    let sub: Vec<Elem> = f.elements().filter(|&x| f.in_subfield(x).unwrap()).collect();
    let mut a = vec![vec![Elem::ZERO; n]; n];
    let mut it = raw.iter().copied().cycle();
    for i in 0..n {
        a[i][i] = sub[it.next().unwrap() as usize % sub.len()];
        for j in i + 1..n {
            let x = Elem(it.next().unwrap() % s);
            a[i][j] = x;
            a[j][i] = f.conjugate(x).unwrap();
        }
    }
    a
}

fn vector(f: &Field, n: usize, raw: &[u32]) -> Vec<Elem> {
    (0..n).map(|i| Elem(raw[i % raw.len()] % f.size())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn point_count_depends_only_on_rank(
        q in prop::sample::select(vec![2u32, 3]),
        m in 2usize..=3,
        raw in prop::collection::vec(any::<u32>(), 16),
    ) {
        let f = Field::quadratic(q).unwrap();
        let a = hermitian_matrix(&f, m + 1, &raw);
        prop_assume!(a.iter().flatten().any(|x| !x.is_zero()));
        let form = HermitianForm::new(&f, a.clone()).unwrap();
        let v = Variety::new(&f, form.clone()).unwrap();
        let r = linalg::rank(&f, &a);
        prop_assert_eq!(form.rank(&f), r);
        // oracle: evaluate x^T A x^(q) directly
        let naive = hvlab::projective::enumerate_points(&f, m)
            .filter(|p| {
                let x = p.coords();
                let ax: Vec<Elem> = linalg::mat_vec(&f, &a, &x.iter().map(|&c| f.pow(c, q as u64)).collect::<Vec<_>>());
                linalg::dot(&f, x, &ax).is_zero()
            })
            .count();
        prop_assert_eq!(v.len(), naive);
        prop_assert_eq!(naive as u64, variety_count(q as u64, m as u32, r as u32));
    }

    #[test]
    fn normal_form_diagonalizes(
        q in prop::sample::select(vec![2u32, 3, 4, 5]),
        m in 1usize..=4,
        raw in prop::collection::vec(any::<u32>(), 16),
    ) {
        let f = Field::quadratic(q).unwrap();
        let a = hermitian_matrix(&f, m + 1, &raw);
        prop_assume!(a.iter().flatten().any(|x| !x.is_zero()));
        let form = HermitianForm::new(&f, a.clone()).unwrap();
        let (mm, r) = form.normal_form(&f).unwrap();
        prop_assert_eq!(r, linalg::rank(&f, &a));
        let lhs = linalg::mat_mul(&f, &linalg::transpose(&linalg::conj_matrix(&f, &mm)), &linalg::mat_mul(&f, &a, &mm));
        for (i, row) in lhs.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let want = if i == j && i < r { Elem::ONE } else { Elem::ZERO };
                prop_assert_eq!(x, want);
            }
        }
    }

    #[test]
    fn tangent_hyperplanes_determine_their_point(q in prop::sample::select(vec![2u32, 3]), i in any::<prop::sample::Index>()) {
        let v = standard(q);
        let p = v.point(i.index(v.len()));
        let t = v.tangent_hyperplane(&p).unwrap();
        prop_assert!(t.contains_point(v.field(), &p));
        prop_assert_eq!(v.tangency_point(&v.tangent_normal(p.coords())).unwrap(), Some(p.clone()));
        let c = v.classify_hyperplane_section(&t).unwrap();
        prop_assert_eq!(c.tag, HyperplaneTag::TangentAt(p));
    }

    #[test]
    fn line_sections_trichotomy(q in prop::sample::select(vec![2u32, 3]), raw in prop::collection::vec(any::<u32>(), 10)) {
        let v = standard(q);
        let f = v.field();
        let (a, b) = (vector(f, 5, &raw[..5]), vector(f, 5, &raw[5..]));
        let Some(l) = Flat::from_vectors(f, &[a, b]) else { return Ok(()) };
        prop_assume!(l.dim() == 1);
        let c = v.classify_line(&l).unwrap();
        let q = q as u64;
        let expected = match c.tag {
            LineTag::Tangent => 1,
            LineTag::Secant => q + 1,
            LineTag::Generator => q * q + 1,
        };
        prop_assert_eq!(c.meeting_count, expected);
        let naive = l.points(f).iter().filter(|p| v.contains(p)).count() as u64;
        prop_assert_eq!(naive, expected);
    }

    #[test]
    fn generators_through_a_point(q in prop::sample::select(vec![2u32, 3]), i in any::<prop::sample::Index>()) {
        let v = standard(q);
        let f = v.field();
        let p = v.point(i.index(v.len()));
        let gens = v.generators_through(&p).unwrap();
        prop_assert_eq!(gens.len() as u32, q * q * q + 1);
        let t = v.tangent_hyperplane(&p).unwrap();
        for g in &gens {
            prop_assert!(g.contains_point(f, &p) && t.contains_flat(f, g));
            prop_assert_eq!(v.classify_line(g).unwrap().tag, LineTag::Generator);
        }
    }

    #[test]
    fn intersection_count_matches_pointwise_evaluation(
        q in prop::sample::select(vec![2u32, 3]),
        d in 1u32..=3,
        seed in any::<u64>(),
    ) {
        let v = standard(q);
        let f = v.field();
        let poly = HomogeneousPoly::random(f, 5, d, &mut ChaCha8Rng::seed_from_u64(seed));
        let naive = v.points().iter().filter(|p| poly.evaluate(f, p).unwrap().is_zero()).count() as u64;
        prop_assert_eq!(v.count_intersection(&poly).unwrap(), naive);
    }
}

#[test]
fn congruent_copies_share_counts() {
    let q = 3;
    let f = Field::quadratic(q).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let v = Variety::standard(q).unwrap();
    for _ in 0..3 {
        // A = G^(q)T G for a random invertible G is congruent to the identity
        let g: Vec<Vec<Elem>> = loop {
            let g: Vec<Vec<Elem>> = (0..5)
                .map(|_| (0..5).map(|_| Elem(rand::Rng::gen_range(&mut rng, 0..f.size()))).collect())
                .collect();
            if linalg::rank(&f, &g) == 5 {
                break g;
            }
        };
        let a = linalg::mat_mul(&f, &linalg::transpose(&linalg::conj_matrix(&f, &g)), &g);
        let w = Variety::new(&f, HermitianForm::new(&f, a).unwrap()).unwrap();
        assert_eq!(w.len(), v.len());
        assert_eq!(w.generators().unwrap().len(), 6832);
        // x in W iff G^(q) x in V
        let gq = linalg::conj_matrix(&f, &g);
        for p in w.points().iter().take(200) {
            let image = ProjPoint::new(&f, linalg::mat_vec(&f, &gq, p.coords())).unwrap();
            assert!(v.contains(&image));
        }
    }
}
