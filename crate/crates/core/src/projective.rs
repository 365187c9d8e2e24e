//! Points and flats of P^m over a finite field.
//!
//! Points are normalized so the first nonzero coordinate is 1. They are
//! ordered lexicographically by coordinate index, which makes the point with
//! leading 1 in the last position rank 0. Flats are stored as reduced
//! row-echelon bases, so equal flats have equal representations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg::{self, Matrix};

/// `(s^{n} - 1) / (s - 1)`, the number of points of P^{n-1}(F_s).
pub fn proj_count(s: u64, n: u32) -> u64 {
    (0..n).map(|i| s.pow(i)).sum()
}

/// Gaussian binomial `[n choose k]_s`: the number of k-dimensional subspaces of F_s^n.
pub fn gaussian_binomial(n: u32, k: u32, s: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (s as u128).pow(n - i) - 1;
        den *= (s as u128).pow(i + 1) - 1;
    }
    (num / den) as u64
}

/// Rank/unrank bijection between normalized points of P^m(F_s) and `0..len`.
#[derive(Clone, Debug)]
pub struct ProjSpace {
    m: usize,
    s: u32,
    /// `offsets[i]`: number of points whose leading 1 sits after position i.
    offsets: Vec<u32>,
    powers: Vec<u32>,
    len: u32,
}

impl ProjSpace {
    pub fn new(m: usize, s: u32) -> ProjSpace {
        let total = proj_count(s as u64, m as u32 + 1);
        assert!(total < u32::MAX as u64, "projective space too large to index");
        let powers: Vec<u32> = (0..=m).map(|e| (s as u64).pow(e as u32) as u32).collect();
        let offsets = (0..=m).map(|i| proj_count(s as u64, (m - i) as u32) as u32).collect();
        ProjSpace { m, s, offsets, powers, len: total as u32 }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Rank of a normalized coordinate vector.
    #[inline]
    pub fn rank(&self, coords: &[Elem]) -> u32 {
        let lead = coords.iter().position(|c| !c.is_zero()).expect("nonzero point");
        let mut v = 0u32;
        for c in &coords[lead + 1..] {
            v = v * self.s + c.0;
        }
        self.offsets[lead] + v
    }

    pub fn unrank(&self, r: u32) -> Vec<Elem> {
        let mut out = vec![Elem::ZERO; self.m + 1];
        self.unrank_into(r, &mut out);
        out
    }

    pub fn unrank_into(&self, r: u32, out: &mut [Elem]) {
        let lead = (0..=self.m).find(|&i| r >= self.offsets[i] && r - self.offsets[i] < self.powers[self.m - i]).unwrap();
        let mut v = r - self.offsets[lead];
        for c in out.iter_mut() {
            *c = Elem::ZERO;
        }
        out[lead] = Elem::ONE;
        for j in (lead + 1..=self.m).rev() {
            out[j] = Elem(v % self.s);
            v /= self.s;
        }
    }

    /// Visits ranks `start..end` in order with their coordinates.
    pub fn for_each_in(&self, start: u32, end: u32, mut f: impl FnMut(u32, &[Elem])) {
        if start >= end {
            return;
        }
        let mut coords = self.unrank(start);
        let mut lead = coords.iter().position(|c| !c.is_zero()).unwrap();
        for r in start..end {
            f(r, &coords);
            // odometer on the trailing digits
            let mut j = self.m;
            loop {
                if j == lead {
                    if lead == 0 {
                        break;
                    }
                    for c in coords.iter_mut() {
                        *c = Elem::ZERO;
                    }
                    lead -= 1;
                    coords[lead] = Elem::ONE;
                    break;
                }
                if coords[j].0 + 1 < self.s {
                    coords[j].0 += 1;
                    break;
                }
                coords[j] = Elem::ZERO;
                j -= 1;
            }
        }
    }

    pub fn for_each(&self, f: impl FnMut(u32, &[Elem])) {
        self.for_each_in(0, self.len, f)
    }

    pub fn points(&self) -> impl Iterator<Item = ProjPoint> + '_ {
        (0..self.len).map(|r| ProjPoint { coords: self.unrank(r) })
    }
}

/// A normalized point of P^m.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjPoint {
    coords: Vec<Elem>,
}

impl ProjPoint {
    /// Normalizes an arbitrary nonzero vector.
    pub fn new(field: &Field, mut coords: Vec<Elem>) -> Result<ProjPoint> {
        let lead = coords.iter().position(|c| !c.is_zero()).ok_or(Error::ZeroVector)?;
        if coords[lead] != Elem::ONE {
            let inv = field.inv(coords[lead])?;
            for c in coords.iter_mut() {
                *c = field.mul(*c, inv);
            }
        }
        Ok(ProjPoint { coords })
    }

    /// Wraps a vector that is already normalized.
    pub fn from_normalized(coords: Vec<Elem>) -> ProjPoint {
        debug_assert_eq!(coords.iter().find(|c| !c.is_zero()), Some(&Elem::ONE));
        ProjPoint { coords }
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn lead(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).unwrap()
    }
}

/// A projective linear subspace in canonical RREF form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flat {
    rows: Matrix,
    pivots: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct FlatJson {
    dim: usize,
    basis: Matrix,
}

impl Serialize for Flat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FlatJson { dim: self.dim(), basis: self.rows.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Flat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = FlatJson::deserialize(d)?;
        if j.basis.len() != j.dim + 1 {
            return Err(serde::de::Error::custom("basis row count must be dim + 1"));
        }
        let ncols = j.basis[0].len();
        if j.basis.iter().any(|r| r.len() != ncols) {
            return Err(serde::de::Error::custom("ragged basis"));
        }
        let pivots = j
            .basis
            .iter()
            .map(|r| r.iter().position(|c| !c.is_zero()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| serde::de::Error::custom("zero basis row"))?;
        Ok(Flat { rows: j.basis, pivots })
    }
}

impl Flat {
    /// Subspace spanned by arbitrary vectors, `None` if they are all zero.
    pub fn from_vectors(field: &Field, rows: &[Vec<Elem>]) -> Option<Flat> {
        let (rows, pivots) = linalg::rref(field, rows);
        (!rows.is_empty()).then_some(Flat { rows, pivots })
    }

    /// Smallest flat containing all the points.
    pub fn span(field: &Field, points: &[ProjPoint]) -> Result<Flat> {
        let first = points.first().ok_or(Error::EmptyInput)?;
        if points.iter().any(|p| p.coords.len() != first.coords.len()) {
            return Err(Error::DimensionMismatch("points from different ambient spaces".into()));
        }
        let rows: Matrix = points.iter().map(|p| p.coords.clone()).collect();
        Ok(Flat::from_vectors(field, &rows).expect("points are nonzero"))
    }

    pub fn point(p: &ProjPoint) -> Flat {
        Flat { rows: vec![p.coords.clone()], pivots: vec![p.lead()] }
    }

    /// Hyperplane `{x : normal . x = 0}`.
    pub fn hyperplane(field: &Field, normal: &[Elem]) -> Result<Flat> {
        if normal.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroVector);
        }
        let basis = linalg::null_space(field, &[normal.to_vec()], normal.len());
        Flat::from_vectors(field, &basis).ok_or_else(|| Error::DimensionMismatch("P^0 has no hyperplanes".into()))
    }

    /// Coordinate hyperplane `x_i = 0` in P^m.
    pub fn coordinate_hyperplane(field: &Field, m: usize, i: usize) -> Flat {
        let mut n = vec![Elem::ZERO; m + 1];
        n[i] = Elem::ONE;
        Flat::hyperplane(field, &n).unwrap()
    }

    /// The whole space P^m.
    pub fn whole(m: usize) -> Flat {
        Flat { rows: linalg::identity(m + 1), pivots: (0..=m).collect() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.rows[0].len() - 1
    }

    pub fn basis(&self) -> &Matrix {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Number of rational points.
    pub fn point_count(&self, field: &Field) -> u64 {
        proj_count(field.size() as u64, self.rows.len() as u32)
    }

    pub fn contains_point(&self, field: &Field, p: &ProjPoint) -> bool {
        self.contains_vector(field, &p.coords)
    }

    pub fn contains_vector(&self, field: &Field, v: &[Elem]) -> bool {
        if v.len() != self.rows[0].len() {
            return false;
        }
        let mut r = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = r[pc];
            if c.is_zero() {
                continue;
            }
            for (x, &y) in r.iter_mut().zip(row) {
                *x = field.sub(*x, field.mul(c, y));
            }
        }
        r.iter().all(|c| c.is_zero())
    }

    pub fn contains_flat(&self, field: &Field, other: &Flat) -> bool {
        other.rows.iter().all(|r| self.contains_vector(field, r))
    }

    /// Basis of the linear forms vanishing on this flat.
    pub fn annihilator(&self, field: &Field) -> Matrix {
        linalg::null_space(field, &self.rows, self.rows[0].len())
    }

    /// Normal vector of a hyperplane, normalized.
    pub fn normal(&self, field: &Field) -> Result<Vec<Elem>> {
        let ann = self.annihilator(field);
        if ann.len() != 1 {
            return Err(Error::DimensionMismatch(format!("flat of dimension {} is not a hyperplane", self.dim())));
        }
        Ok(ProjPoint::new(field, ann[0].clone())?.coords)
    }

    pub fn intersect(&self, field: &Field, other: &Flat) -> Option<Flat> {
        let n = self.rows[0].len();
        let mut ann = self.annihilator(field);
        ann.extend(other.annihilator(field));
        if ann.is_empty() {
            return Some(self.clone());
        }
        let basis = linalg::null_space(field, &ann, n);
        Flat::from_vectors(field, &basis)
    }

    pub fn join(&self, field: &Field, other: &Flat) -> Flat {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Flat::from_vectors(field, &rows).unwrap()
    }

    /// Point of the flat with coefficient vector `c` in the RREF basis.
    /// A normalized `c` yields a normalized point.
    pub fn combine(&self, field: &Field, c: &[Elem], out: &mut [Elem]) {
        for x in out.iter_mut() {
            *x = Elem::ZERO;
        }
        for (&ci, row) in c.iter().zip(&self.rows) {
            if ci.is_zero() {
                continue;
            }
            for (x, &y) in out.iter_mut().zip(row) {
                *x = field.add(*x, field.mul(ci, y));
            }
        }
    }

    /// Visits every rational point once, in the order of its RREF coefficients.
    pub fn for_each_point(&self, field: &Field, mut f: impl FnMut(&[Elem])) {
        let coeff_space = ProjSpace::new(self.dim(), field.size());
        let mut buf = vec![Elem::ZERO; self.rows[0].len()];
        coeff_space.for_each(|_, c| {
            self.combine(field, c, &mut buf);
            f(&buf);
        });
    }

    pub fn points(&self, field: &Field) -> Vec<ProjPoint> {
        let mut out = Vec::with_capacity(self.point_count(field) as usize);
        self.for_each_point(field, |c| out.push(ProjPoint { coords: c.to_vec() }));
        out
    }

    /// Ranks (in the ambient space) of every point of the flat.
    pub fn point_ranks(&self, field: &Field, space: &ProjSpace) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.point_count(field) as usize);
        self.for_each_point(field, |c| out.push(space.rank(c)));
        out
    }

    /// All flats of dimension `dim + 1` containing this one.
    ///
    /// They correspond to the points of the quotient space, realized on the
    /// coordinate subspace spanned by the non-pivot columns.
    pub fn flats_one_up(&self, field: &Field) -> Vec<Flat> {
        let n = self.rows[0].len();
        let free: Vec<usize> = (0..n).filter(|c| !self.pivots.contains(c)).collect();
        if free.is_empty() {
            return Vec::new();
        }
        let quotient = ProjSpace::new(free.len() - 1, field.size());
        let mut out = Vec::with_capacity(quotient.len() as usize);
        quotient.for_each(|_, c| {
            let mut v = vec![Elem::ZERO; n];
            for (&col, &x) in free.iter().zip(c) {
                v[col] = x;
            }
            let mut rows = self.rows.clone();
            rows.push(v);
            out.push(Flat::from_vectors(field, &rows).unwrap());
        });
        out
    }
}

/// Iterates all points of P^m in lexicographic order.
pub fn enumerate_points(field: &Field, m: usize) -> impl Iterator<Item = ProjPoint> {
    let space = ProjSpace::new(m, field.size());
    (0..space.len()).map(move |r| ProjPoint { coords: space.unrank(r) })
}

/// Lazily enumerates every flat of projective dimension `dim` in P^m.
///
/// Order: pivot sets lexicographically, then the free RREF entries as a
/// base-s counter with the earliest entry most significant.
pub fn enumerate_flats(field: &Field, m: usize, dim: usize) -> impl Iterator<Item = Flat> + '_ {
    let n = m + 1;
    let rows = dim + 1;
    let s = field.size() as u64;
    let pivot_sets = combinations(n, rows.min(n));
    pivot_sets.into_iter().filter(move |_| rows <= n).flat_map(move |piv| {
        let free: Vec<(usize, usize)> = (0..rows)
            .flat_map(|i| {
                let piv = piv.clone();
                (piv[i] + 1..n).filter(move |c| !piv.contains(c)).map(move |c| (i, c))
            })
            .collect();
        let total = s.pow(free.len() as u32);
        let piv2 = piv.clone();
        (0..total).map(move |mut idx| {
            let mut basis = vec![vec![Elem::ZERO; n]; rows];
            for (i, &p) in piv2.iter().enumerate() {
                basis[i][p] = Elem::ONE;
            }
            for &(i, c) in free.iter().rev() {
                basis[i][c] = Elem((idx % s) as u32);
                idx /= s;
            }
            Flat { rows: basis, pivots: piv2.clone() }
        })
    })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Every plane of P^4 containing the line.
pub fn book_of_planes(field: &Field, line: &Flat) -> Result<Vec<Flat>> {
    if line.dim() != 1 || line.ambient_dim() != 4 {
        return Err(Error::DimensionMismatch("book of planes needs a line of P^4".into()));
    }
    Ok(line.flats_one_up(field))
}

/// Planes through the line that lie in the hyperplane.
pub fn book_in_hyperplane(field: &Field, line: &Flat, hyperplane: &Flat) -> Result<Vec<Flat>> {
    if hyperplane.dim() + 1 != hyperplane.ambient_dim() {
        return Err(Error::DimensionMismatch("second argument must be a hyperplane".into()));
    }
    if !hyperplane.contains_flat(field, line) {
        return Err(Error::ContainmentViolated("line".into(), "hyperplane".into()));
    }
    Ok(book_of_planes(field, line)?
        .into_iter()
        .filter(|p| hyperplane.contains_flat(field, p))
        .collect())
}

/// Every hyperplane of P^4 containing the plane.
pub fn hyperplanes_through_plane(field: &Field, plane: &Flat) -> Result<Vec<Flat>> {
    if plane.dim() != 2 || plane.ambient_dim() != 4 {
        return Err(Error::DimensionMismatch("expected a plane of P^4".into()));
    }
    Ok(plane.flats_one_up(field))
}

pub fn incidence(field: &Field, p: &ProjPoint, x: &Flat) -> bool {
    x.contains_point(field, p)
}

/// Every line through `p`, one per point of the coordinate hyperplane
/// `x_lead = 0`, which does not contain `p`.
pub fn lines_through<'a>(field: &'a Field, p: &'a ProjPoint) -> impl Iterator<Item = Flat> + 'a {
    let m = p.ambient_dim();
    let lead = p.lead();
    let sub = ProjSpace::new(m - 1, field.size());
    (0..sub.len()).map(move |r| {
        let c = sub.unrank(r);
        let mut q = Vec::with_capacity(m + 1);
        q.extend_from_slice(&c[..lead]);
        q.push(Elem::ZERO);
        q.extend_from_slice(&c[lead..]);
        Flat::from_vectors(field, &[p.coords.clone(), q]).unwrap()
    })
}
