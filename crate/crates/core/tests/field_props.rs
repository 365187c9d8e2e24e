use hvlab::{Elem, Field};
use proptest::prelude::*;

/// Schoolbook product of the digit polynomials, reduced by the modulus.
fn naive_mul(f: &Field, a: Elem, b: Elem) -> Elem {
    let p = f.p();
    let (da, db) = (f.digits(a), f.digits(b));
    let mut prod = vec![0u32; da.len() + db.len()];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let m = f.modulus();
    let k = m.len() - 1;
    for top in (k..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        for (i, &mi) in m.iter().enumerate() {
            let idx = top - k + i;
            prod[idx] = (prod[idx] + p * p - (c * mi) % p) % p;
        }
    }
    Elem(prod[..k].iter().rev().fold(0, |acc, &d| acc * p + d))
}

fn naive_add(f: &Field, a: Elem, b: Elem) -> Elem {
    let p = f.p();
    let s: Vec<u32> = f.digits(a).iter().zip(f.digits(b)).map(|(x, y)| (x + y) % p).collect();
    Elem(s.iter().rev().fold(0, |acc, &d| acc * p + d))
}

fn fields() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![(2u32, 2u32), (3, 2), (2, 4), (5, 2), (7, 2), (2, 6), (3, 4)])
        .prop_map(|(p, k)| Field::new(p, k).unwrap())
}

fn field_and(n: usize) -> impl Strategy<Value = (Field, Vec<Elem>)> {
    fields().prop_flat_map(move |f| {
        let size = f.size();
        (Just(f), prop::collection::vec((0..size).prop_map(Elem), n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn arithmetic_matches_polynomial_basis((f, xs) in field_and(2)) {
        let (a, b) = (xs[0], xs[1]);
        prop_assert_eq!(f.mul(a, b), naive_mul(&f, a, b));
        prop_assert_eq!(f.add(a, b), naive_add(&f, a, b));
    }

    #[test]
    fn ring_axioms((f, xs) in field_and(3)) {
        let (a, b, c) = (xs[0], xs[1], xs[2]);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
            prop_assert_eq!(f.mul(f.div(b, a).unwrap(), a), b);
        } else {
            prop_assert!(f.inv(a).is_err());
        }
    }

    #[test]
    fn frobenius_and_norm((f, xs) in field_and(2)) {
        let (a, b) = (xs[0], xs[1]);
        prop_assert_eq!(f.conjugate(f.add(a, b)).unwrap(), f.add(f.conjugate(a).unwrap(), f.conjugate(b).unwrap()));
        prop_assert_eq!(f.conjugate(f.mul(a, b)).unwrap(), f.mul(f.conjugate(a).unwrap(), f.conjugate(b).unwrap()));
        prop_assert_eq!(f.conjugate(f.conjugate(a).unwrap()).unwrap(), a);
        let n = f.norm(a).unwrap();
        prop_assert!(f.in_subfield(n).unwrap());
        prop_assert_eq!(f.norm(f.mul(a, b)).unwrap(), f.mul(n, f.norm(b).unwrap()));
        let q = f.q().unwrap() as u64;
        prop_assert_eq!(n, f.pow(a, q + 1));
    }

    #[test]
    fn pow_is_repeated_multiplication((f, xs) in field_and(1), e in 0u64..40) {
        let a = xs[0];
        let mut acc = Elem::ONE;
        for _ in 0..e {
            acc = f.mul(acc, a);
        }
        prop_assert_eq!(f.pow(a, e), acc);
    }
}

#[test]
fn norm_fibres_have_q_plus_one_points() {
    for q in [2u32, 3, 4, 5, 7] {
        let f = Field::quadratic(q).unwrap();
        for a in f.elements().filter(|&x| f.in_subfield(x).unwrap() && !x.is_zero()) {
            assert_eq!(f.norm_preimages(a).unwrap().len(), q as usize + 1);
        }
    }
}

#[test]
fn subfield_embeds() {
    let small = Field::new(3, 2).unwrap();
    let big = Field::new(3, 6).unwrap();
    let emb = small.embedding_into(&big).unwrap();
    for a in small.elements() {
        for b in small.elements() {
            assert_eq!(emb[small.mul(a, b).0 as usize], big.mul(emb[a.0 as usize], emb[b.0 as usize]));
            assert_eq!(emb[small.add(a, b).0 as usize], big.add(emb[a.0 as usize], emb[b.0 as usize]));
        }
    }
}
