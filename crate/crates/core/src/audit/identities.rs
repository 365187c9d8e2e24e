//! Counting identities of the Hermitian threefold, checked by enumeration.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::field::{Elem, Field};
use crate::hermitian::{nondegenerate_count, HermitianForm, HyperplaneTag, PlaneTag, Variety};
use crate::linalg;
use crate::projective::{book_in_hyperplane, book_of_planes, enumerate_flats, lines_through, Flat, ProjPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Exhaustive,
    Sub,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityResult {
    pub name: String,
    pub expected: Value,
    pub observed: Value,
    pub pass: bool,
    /// A counterexample when the identity fails.
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub q: u32,
    pub tier: Tier,
    pub identities: Vec<IdentityResult>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.identities.iter().all(|i| i.pass)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityResult> {
        self.identities.iter().find(|i| i.name == name)
    }
}

struct Suite {
    out: Vec<IdentityResult>,
}

impl Suite {
    fn push(&mut self, name: &str, expected: Value, observed: Value, witness: Option<Value>) {
        let pass = expected == observed && witness.is_none();
        self.out.push(IdentityResult { name: name.into(), expected, observed, pass, witness });
    }
}

/// Histogram of `f` over a flat iterator, processed in parallel batches.
/// Stops at the first error, returned with its flat.
fn histogram(
    flats: impl Iterator<Item = Flat>,
    f: impl Fn(&Flat) -> Result<u64> + Sync,
) -> (BTreeMap<u64, u64>, Option<Value>) {
    let mut hist = BTreeMap::new();
    let mut it = flats.peekable();
    while it.peek().is_some() {
        let batch: Vec<Flat> = it.by_ref().take(1 << 14).collect();
        let vals: Vec<Result<u64>> = batch.par_iter().map(&f).collect();
        for (x, v) in batch.iter().zip(vals) {
            match v {
                Ok(c) => *hist.entry(c).or_insert(0) += 1,
                Err(e) => return (hist, Some(json!({"flat": x, "error": e.to_string()}))),
            }
        }
    }
    (hist, None)
}

fn keys(h: &BTreeMap<u64, u64>) -> Value {
    json!(h.keys().collect::<Vec<_>>())
}

fn sorted(v: &[u64]) -> Value {
    let s: BTreeSet<u64> = v.iter().copied().collect();
    json!(s)
}

/// Runs the identity suite on the standard threefold over `F_{q^2}`.
/// Exhaustive for `q <= 3`; larger `q` runs the checks that avoid
/// all-lines and all-planes scans.
pub fn verify_identity_suite(q: u32) -> Result<IdentityReport> {
    let v = Variety::standard(q)?;
    let tier = if q <= 3 { Tier::Exhaustive } else { Tier::Sub };
    let mut s = Suite { out: Vec::new() };
    let f = v.field().clone();
    let qq = q as u64;
    let (q2, q3, q5) = (qq * qq, qq.pow(3), qq.pow(5));
    let non_tangent = q5 + q3 + q2 + 1;
    let tangent = q5 + q2 + 1;

    s.push("variety_count", json!(nondegenerate_count(qq, 4)), json!(v.len()), None);

    // generators: q^3 + 1 through each point, (q^5 + 1)(q^3 + 1) in total
    let sample: Vec<usize> = if tier == Tier::Exhaustive {
        (0..v.len()).collect()
    } else {
        spread(v.len(), 64)
    };
    let through: Vec<u64> = sample
        .par_iter()
        .map(|&i| {
            let mut n = 0u64;
            v.for_each_generator_through(v.coords(i), |_| n += 1);
            n
        })
        .collect();
    s.push("generators_through_each_point", json!([q3 + 1]), sorted(&through), None);
    let fs = f.size() as u64;
    if (v.len() as u64) * (fs * fs + fs + 1) <= 1 << 26 {
        let gens = v.generators()?;
        s.push("generator_total", json!((q5 + 1) * (q3 + 1)), json!(gens.len()), None);
        let bad = gens.iter().find(|g| v.count_on_flat(g) != q2 + 1);
        s.push("generators_lie_on_variety", json!(true), json!(bad.is_none()), bad.map(|g| json!(g)));
    }

    // hyperplane sections and the tangent map
    if tier == Tier::Exhaustive {
        let hyps: Vec<Flat> = enumerate_flats(&f, 4, 3).collect();
        let classes: Vec<_> = hyps.par_iter().map(|h| v.classify_hyperplane_section(h)).collect();
        let mut counts = BTreeSet::new();
        let mut points = BTreeSet::new();
        let mut tangents = 0u64;
        let mut witness = None;
        for (h, c) in hyps.iter().zip(classes) {
            match c {
                Ok(c) => {
                    counts.insert(c.count);
                    if let HyperplaneTag::TangentAt(p) = c.tag {
                        tangents += 1;
                        points.insert(p);
                    }
                }
                Err(e) => {
                    witness.get_or_insert(json!({"flat": h, "error": e.to_string()}));
                }
            }
        }
        s.push("hyperplane_section_counts", json!([tangent, non_tangent]), json!(counts), witness);
        s.push("tangent_hyperplanes", json!(v.len()), json!(tangents), None);
        s.push("tangent_map_injective", json!(v.len()), json!(points.len()), None);
    } else {
        let mut counts = BTreeSet::new();
        let mut witness = None;
        let mut sample: Vec<Flat> = spread(v.len(), 4).iter().map(|&i| v.tangent_hyperplane(&v.point(i))).collect::<Result<_>>()?;
        sample.extend((0..5).map(|i| Flat::coordinate_hyperplane(&f, 4, i)));
        for h in &sample {
            match v.classify_hyperplane_section(h) {
                Ok(c) => {
                    counts.insert(c.count);
                }
                Err(e) => {
                    witness.get_or_insert(json!({"flat": h, "error": e.to_string()}));
                }
            }
        }
        s.push("hyperplane_section_counts", json!([tangent, non_tangent]), json!(counts), witness);
    }

    // line and plane trichotomies
    let line_expected = json!([1, qq + 1, q2 + 1]);
    let plane_expected = json!([q2 + 1, q3 + 1, q3 + q2 + 1]);
    if tier == Tier::Exhaustive {
        let (h, w) = histogram(enumerate_flats(&f, 4, 1), |l| Ok(v.classify_line(l)?.meeting_count));
        s.push("line_meet_counts", line_expected, keys(&h), w);
        let (h, w) = histogram(enumerate_flats(&f, 4, 2), |p| Ok(v.classify_plane_section(p)?.count));
        s.push("plane_section_counts", plane_expected, keys(&h), w);
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let lines: Vec<Flat> = (0..256).map(|_| random_flat(&f, &mut rng, 2)).collect();
        let (h, w) = histogram(lines.into_iter(), |l| Ok(v.classify_line(l)?.meeting_count));
        let ok = h.keys().all(|k| [1, qq + 1, q2 + 1].contains(k));
        s.push("line_meet_counts_subset", json!(true), json!(ok), w);
        // planes through generators, tangent planes and generic planes
        let mut planes: Vec<Flat> = (0..32).map(|_| random_flat(&f, &mut rng, 3)).collect();
        let p0 = v.point(0);
        let g = v.generators_through(&p0)?.remove(0);
        planes.extend(book_of_planes(&f, &g)?.into_iter().take(32));
        let (h, w) = histogram(planes.into_iter(), |p| Ok(v.classify_plane_section(p)?.count));
        let ok = h.keys().all(|k| [q2 + 1, q3 + 1, q3 + q2 + 1].contains(k));
        s.push("plane_section_counts_subset", json!(true), json!(ok), w);
    }

    // books of planes
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let book_lines: Vec<Flat> = (0..if tier == Tier::Exhaustive { 64 } else { 4 }).map(|_| random_flat(&f, &mut rng, 2)).collect();
    let mut sizes = BTreeSet::new();
    let mut in_hyp = BTreeSet::new();
    for l in &book_lines {
        sizes.insert(book_of_planes(&f, l)?.len() as u64);
        let third = random_point_off(&f, &mut rng, l);
        let plane = l.join(&f, &Flat::point(&third));
        let fourth = random_point_off(&f, &mut rng, &plane);
        let sigma = plane.join(&f, &Flat::point(&fourth));
        in_hyp.insert(book_in_hyperplane(&f, l, &sigma)?.len() as u64);
    }
    s.push("book_size", json!([q2 * q2 + q2 + 1]), json!(sizes), None);
    s.push("book_in_hyperplane_size", json!([q2 + 1]), json!(in_hyp), None);

    // sections of a non-tangent hyperplane by the other hyperplanes
    if tier == Tier::Exhaustive {
        let (min, w) = min_section_in_non_tangent(&v, if q <= 2 { 1 } else { 7 })?;
        s.push("non_tangent_hyperplane_pair_minimum", json!(q3 + 1), json!(min), w);
    }

    // books of tangent lines
    let points = if q <= 2 { (0..v.len()).collect() } else { spread(v.len(), if q == 3 { 8 } else { 1 }) };
    let per_point_lines = if q <= 3 { usize::MAX } else { 1 };
    let (tangent_planes, witness) = tangent_line_books(&v, &points, per_point_lines)?;
    s.push("tangent_line_planes_in_tangent_hyperplane", json!([q2 + 1]), json!(tangent_planes), witness);

    // normal form of a congruent copy of the identity form
    let (count, rank, diag_ok) = congruent_copy(&f, q)?;
    s.push("normal_form_congruent_copy", json!([v.len(), 5, true]), json!([count, rank, diag_ok]), None);

    Ok(IdentityReport { q, tier, identities: s.out })
}

/// `n` indices spread evenly over `0..len`.
fn spread(len: usize, n: usize) -> Vec<usize> {
    let n = n.min(len);
    (0..n).map(|i| i * len / n).collect()
}

/// A uniformly random flat spanned by `k` random vectors, retried until
/// they are independent.
fn random_flat(f: &Field, rng: &mut ChaCha8Rng, k: usize) -> Flat {
    loop {
        let rows: Vec<Vec<Elem>> = (0..k).map(|_| (0..5).map(|_| Elem(rng.gen_range(0..f.size()))).collect()).collect();
        if let Some(x) = Flat::from_vectors(f, &rows) {
            if x.dim() + 1 == k {
                return x;
            }
        }
    }
}

fn random_point_off(f: &Field, rng: &mut ChaCha8Rng, x: &Flat) -> ProjPoint {
    loop {
        let c: Vec<Elem> = (0..5).map(|_| Elem(rng.gen_range(0..f.size()))).collect();
        if c.iter().any(|e| !e.is_zero()) && !x.contains_vector(f, &c) {
            return ProjPoint::new(f, c).unwrap();
        }
    }
}

/// Minimum of `|Σ ∩ Σ1 ∩ V|` over non-tangent `Σ1` (every `stride`-th one)
/// and all hyperplanes `Σ`. For `Σ ≠ Σ1` the intersection runs over the
/// planes of `Σ1`, which are images of the planes of P^3.
fn min_section_in_non_tangent(v: &Variety, stride: usize) -> Result<(u64, Option<Value>)> {
    let f = v.field();
    let sub_planes: Vec<Flat> = enumerate_flats(f, 3, 2).collect();
    let hyps: Vec<Flat> = enumerate_flats(f, 4, 3).collect();
    let non_tangent: Vec<&Flat> = hyps
        .iter()
        .filter(|h| v.tangency_point(&h.normal(f).unwrap()).unwrap().is_none())
        .step_by(stride)
        .collect();
    let mins: Vec<(u64, Option<Value>)> = non_tangent
        .par_iter()
        .map(|h| {
            let mut best = v.count_on_flat(h);
            let mut bad = None;
            for sp in &sub_planes {
                let rows: Vec<Vec<Elem>> = sp
                    .basis()
                    .iter()
                    .map(|c| {
                        let mut out = vec![Elem::ZERO; 5];
                        h.combine(f, c, &mut out);
                        out
                    })
                    .collect();
                let plane = Flat::from_vectors(f, &rows).unwrap();
                let n = v.count_on_flat(&plane);
                if n < best {
                    best = n;
                    if n < (v.q() as u64).pow(3) + 1 {
                        bad.get_or_insert(json!({"hyperplane": h, "plane": plane, "count": n}));
                    }
                }
            }
            (best, bad)
        })
        .collect();
    let min = mins.iter().map(|m| m.0).min().unwrap_or(0);
    let witness = mins.into_iter().find_map(|m| m.1);
    Ok((min, witness))
}

/// For each listed point P and each tangent line through P: the number of
/// planes of its book inside `T_P` (collected), and a witness if a plane of
/// the book outside `T_P` meets V in a generator.
fn tangent_line_books(v: &Variety, points: &[usize], per_point: usize) -> Result<(BTreeSet<u64>, Option<Value>)> {
    let f = v.field();
    let parts: Vec<Result<(BTreeSet<u64>, Option<Value>)>> = points
        .par_iter()
        .map(|&i| {
            let p = v.point(i);
            let tp = v.tangent_hyperplane(&p)?;
            let mut sizes = BTreeSet::new();
            let mut bad = None;
            let tangent_lines =
                lines_through(f, &p).filter(|l| tp.contains_flat(f, l) && v.count_on_flat(l) == 1).take(per_point);
            for l in tangent_lines {
                let mut inside = 0u64;
                for plane in book_of_planes(f, &l)? {
                    if tp.contains_flat(f, &plane) {
                        inside += 1;
                    } else if v.classify_plane_section(&plane)?.tag != PlaneTag::NonDegenerateCurve {
                        bad.get_or_insert(json!({"point": p, "line": l, "plane": plane}));
                    }
                }
                sizes.insert(inside);
            }
            Ok((sizes, bad))
        })
        .collect();
    let mut sizes = BTreeSet::new();
    let mut bad = None;
    for part in parts {
        let (s, b) = part?;
        sizes.extend(s);
        if bad.is_none() {
            bad = b;
        }
    }
    Ok((sizes, bad))
}

/// `G^T I G^(q)` for a fixed invertible G: its variety count, form rank, and
/// whether its normal form matrix diagonalizes it.
fn congruent_copy(f: &Field, q: u32) -> Result<(usize, usize, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(q as u64);
    let g = loop {
        let g: Vec<Vec<Elem>> = (0..5).map(|_| (0..5).map(|_| Elem(rng.gen_range(0..f.size()))).collect()).collect();
        if linalg::rank(f, &g) == 5 {
            break g;
        }
    };
    let a = linalg::mat_mul(f, &linalg::transpose(&g), &linalg::conj_matrix(f, &g));
    let form = HermitianForm::new(f, a.clone())?;
    let (m, r) = form.normal_form(f)?;
    let d = linalg::mat_mul(f, &linalg::mat_mul(f, &linalg::transpose(&linalg::conj_matrix(f, &m)), &a), &m);
    let diag_ok = d == linalg::identity(5);
    let count = Variety::new(f, form)?.len();
    Ok((count, r, diag_ok))
}
