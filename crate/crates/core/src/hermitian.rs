//! Hermitian forms over F_{q^2}, their varieties, and the classification of
//! linear sections of the non-degenerate threefold in P^4.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::eval::{CompiledPoly, PointSetEvaluator};
use crate::field::{Elem, Field, FieldSpec};
use crate::linalg::{self, Matrix};
use crate::poly::HomogeneousPoly;
use crate::projective::{proj_count, Flat, ProjPoint, ProjSpace};

/// A nonzero matrix `A` with `A^T = A^(q)`, defining `x^T A x^(q)` on P^m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianForm {
    m: usize,
    matrix: Matrix,
}

#[derive(Serialize, Deserialize)]
struct FormJson {
    field: FieldSpec,
    m: usize,
    matrix: Matrix,
}

/// Number of rational points of a non-degenerate Hermitian variety in P^n.
pub fn nondegenerate_count(q: u64, n: u32) -> u64 {
    let sign: i128 = if n % 2 == 0 { 1 } else { -1 };
    let q = q as i128;
    (((q.pow(n + 1) + sign) * (q.pow(n) - sign)) / (q * q - 1)) as u64
}

/// Number of rational points of a rank-`r` Hermitian variety in P^n: a cone
/// with an (n-r)-dimensional vertex over a non-degenerate variety in P^{r-1}.
pub fn variety_count(q: u64, n: u32, r: u32) -> u64 {
    assert!(r >= 1 && r <= n + 1);
    let s = q * q;
    let vertex = proj_count(s, n + 1 - r);
    let base = if r == 1 { 0 } else { nondegenerate_count(q, r - 1) };
    vertex + s.pow(n + 1 - r) * base
}

impl HermitianForm {
    pub fn new(field: &Field, matrix: Matrix) -> Result<HermitianForm> {
        field.q()?;
        let n = matrix.len();
        if n == 0 || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("Hermitian matrix must be square and nonempty".into()));
        }
        if matrix.iter().flatten().any(|x| x.0 >= field.size()) {
            return Err(Error::FieldMismatch);
        }
        if matrix.iter().flatten().all(|x| x.is_zero()) {
            return Err(Error::NotHermitian);
        }
        for i in 0..n {
            for j in 0..n {
                if matrix[j][i] != field.conj_fast(matrix[i][j]) {
                    return Err(Error::NotHermitian);
                }
            }
        }
        Ok(HermitianForm { m: n - 1, matrix })
    }

    pub fn identity(field: &Field, m: usize) -> HermitianForm {
        HermitianForm::new(field, linalg::identity(m + 1)).unwrap()
    }

    /// Diagonal form; entries must lie in F_q.
    pub fn diagonal(field: &Field, diag: &[Elem]) -> Result<HermitianForm> {
        let n = diag.len();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { diag[i] } else { Elem::ZERO }).collect())
            .collect();
        HermitianForm::new(field, matrix)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `b(u, v) = u^T A v^(q)`.
    pub fn sesq(&self, field: &Field, u: &[Elem], v: &[Elem]) -> Elem {
        let vq: Vec<Elem> = v.iter().map(|&x| field.conj_fast(x)).collect();
        linalg::dot(field, u, &linalg::mat_vec(field, &self.matrix, &vq))
    }

    /// `h(x) = x^T A x^(q)`, always in F_q.
    pub fn value(&self, field: &Field, x: &[Elem]) -> Elem {
        self.sesq(field, x, x)
    }

    /// The polynomial `sum A_ij x_i x_j^q`, of degree q + 1.
    pub fn poly(&self, field: &Field) -> Result<HomogeneousPoly> {
        let q = field.q()? as u8;
        let n = self.m + 1;
        let mut terms = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let mut e = vec![0u8; n];
                e[i] += 1;
                e[j] += q;
                terms.push((e, self.matrix[i][j]));
            }
        }
        HomogeneousPoly::from_terms(field, n, q as u32 + 1, terms)
    }

    pub fn rank(&self, field: &Field) -> usize {
        linalg::rank(field, &self.matrix)
    }

    pub fn is_nondegenerate(&self, field: &Field) -> bool {
        self.rank(field) == self.m + 1
    }

    /// Restriction to a flat in the coordinates of its RREF basis: `R A R^(q)T`.
    pub fn restrict(&self, field: &Field, x: &Flat) -> Result<HermitianForm> {
        if x.ambient_dim() != self.m {
            return Err(Error::DimensionMismatch("flat and form live in different spaces".into()));
        }
        let rows = x.basis();
        let matrix: Matrix = rows
            .iter()
            .map(|u| rows.iter().map(|v| self.sesq(field, u, v)).collect())
            .collect();
        if matrix.iter().flatten().all(|x| x.is_zero()) {
            // the zero form: every point of the flat lies on the variety
            return Ok(HermitianForm { m: x.dim(), matrix });
        }
        HermitianForm::new(field, matrix)
    }

    /// Congruence reduction. Returns `(M, r)` with `M^(q)T A M` equal to the
    /// diagonal matrix with `r` ones followed by zeros. In coordinates,
    /// substituting `x = M^(q) y` turns `h` into `y_0^{q+1} + ... + y_{r-1}^{q+1}`.
    pub fn normal_form(&self, field: &Field) -> Result<(Matrix, usize)> {
        let n = self.m + 1;
        let mut rest: Vec<Vec<Elem>> = linalg::identity(n);
        let mut done: Vec<Vec<Elem>> = Vec::new();
        loop {
            let pick = rest.iter().position(|v| !self.value(field, v).is_zero());
            let w = match pick {
                Some(i) => rest.remove(i),
                None => {
                    let mut pair = None;
                    'search: for i in 0..rest.len() {
                        for j in 0..rest.len() {
                            if i != j && !self.sesq(field, &rest[i], &rest[j]).is_zero() {
                                pair = Some((i, j));
                                break 'search;
                            }
                        }
                    }
                    let Some((i, j)) = pair else { break };
                    let (u, v) = (rest[i].clone(), rest[j].clone());
                    let lam = field
                        .elements()
                        .find(|&l| {
                            let w: Vec<Elem> = u.iter().zip(&v).map(|(&a, &b)| field.add(a, field.mul(l, b))).collect();
                            !self.value(field, &w).is_zero()
                        })
                        .ok_or(Error::NotHermitian)?;
                    rest.remove(i);
                    u.iter().zip(&v).map(|(&a, &b)| field.add(a, field.mul(lam, b))).collect()
                }
            };
            let hw = self.value(field, &w);
            let target = field.inv(hw)?;
            let c = *field.norm_preimages(target)?.first().ok_or(Error::NotHermitian)?;
            let w: Vec<Elem> = w.iter().map(|&x| field.mul(c, x)).collect();
            for v in rest.iter_mut() {
                let mu = self.sesq(field, v, &w);
                for (x, &y) in v.iter_mut().zip(&w) {
                    *x = field.sub(*x, field.mul(mu, y));
                }
            }
            done.push(w);
        }
        let r = done.len();
        done.extend(rest);
        // columns of N are the new basis vectors; M = N^(q)
        let n_mat = linalg::transpose(&done);
        Ok((linalg::conj_matrix(field, &n_mat), r))
    }

    pub fn to_json(&self, field: &Field) -> Value {
        serde_json::to_value(FormJson { field: field.spec(), m: self.m, matrix: self.matrix.clone() }).unwrap()
    }

    pub fn from_json(v: &Value) -> Result<(Field, HermitianForm)> {
        let fj: FormJson = serde_json::from_value(v.clone()).map_err(|e| Error::Malformed(e.to_string()))?;
        let field = Field::from_spec(&fj.field)?;
        let form = HermitianForm::new(&field, fj.matrix)?;
        if form.m != fj.m {
            return Err(Error::Malformed(format!("m = {} but matrix is {}x{}", fj.m, form.m + 1, form.m + 1)));
        }
        Ok((field, form))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LineTag {
    Tangent,
    Secant,
    Generator,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineClass {
    pub tag: LineTag,
    pub meeting_count: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PlaneTag {
    NonDegenerateCurve,
    ConcurrentLines,
    SingleLine,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaneSectionClass {
    pub tag: PlaneTag,
    pub count: u64,
    pub center: Option<ProjPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum HyperplaneTag {
    NonTangent,
    TangentAt(ProjPoint),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperplaneSectionClass {
    pub tag: HyperplaneTag,
    pub count: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuadricTag {
    TypeI,
    TypeII,
    TypeIII,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadricType {
    pub tag: QuadricTag,
    /// Normals of the two hyperplanes when the quadric splits.
    pub components: Option<[Vec<Elem>; 2]>,
}

/// A Hermitian form together with its tabulated rational points.
pub struct Variety {
    field: Field,
    form: HermitianForm,
    q: u32,
    space: ProjSpace,
    /// point-major coordinates of the variety points, in rank order
    coords: Vec<Elem>,
    ranks: Vec<u32>,
    /// rank in P^m -> index into `ranks`, or `u32::MAX`
    member: Vec<u32>,
    rank: usize,
    evaluator: OnceLock<PointSetEvaluator>,
}

const NOT_ON: u32 = u32::MAX;

impl Variety {
    pub fn new(field: &Field, form: HermitianForm) -> Result<Variety> {
        let q = field.q()?;
        let m = form.m;
        let space = ProjSpace::new(m, field.size());
        let poly = form.poly(field)?;
        let cp = CompiledPoly::new(field, &poly);
        let n = space.len();
        let chunk = 1u32 << 15;
        let starts: Vec<u32> = (0..n).step_by(chunk as usize).collect();
        let parts: Vec<(Vec<u32>, Vec<Elem>)> = starts
            .par_iter()
            .map(|&s| {
                let mut ranks = Vec::new();
                let mut coords = Vec::new();
                space.for_each_in(s, (s + chunk).min(n), |r, c| {
                    if cp.eval(c).is_zero() {
                        ranks.push(r);
                        coords.extend_from_slice(c);
                    }
                });
                (ranks, coords)
            })
            .collect();
        let mut ranks = Vec::new();
        let mut coords = Vec::new();
        for (r, c) in parts {
            ranks.extend(r);
            coords.extend(c);
        }
        let mut member = vec![NOT_ON; n as usize];
        for (i, &r) in ranks.iter().enumerate() {
            member[r as usize] = i as u32;
        }
        let rank = form.rank(field);
        Ok(Variety { field: field.clone(), form, q, space, coords, ranks, member, rank, evaluator: OnceLock::new() })
    }

    /// The non-degenerate threefold `x_0^{q+1} + ... + x_4^{q+1} = 0` in P^4.
    pub fn standard(q: u32) -> Result<Variety> {
        let field = Field::quadratic(q)?;
        let form = HermitianForm::identity(&field, 4);
        Variety::new(&field, form)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn form(&self) -> &HermitianForm {
        &self.form
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn m(&self) -> usize {
        self.form.m
    }

    pub fn space(&self) -> &ProjSpace {
        &self.space
    }

    pub fn form_rank(&self) -> usize {
        self.rank
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.rank == self.form.m + 1
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Coordinates of the i-th variety point.
    pub fn coords(&self, i: usize) -> &[Elem] {
        let n = self.form.m + 1;
        &self.coords[i * n..(i + 1) * n]
    }

    /// All variety coordinates, point-major.
    pub fn all_coords(&self) -> &[Elem] {
        &self.coords
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn point(&self, i: usize) -> ProjPoint {
        ProjPoint::from_normalized(self.coords(i).to_vec())
    }

    pub fn points(&self) -> Vec<ProjPoint> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    /// Variety index of the point with the given ambient rank.
    #[inline]
    pub fn index_of_rank(&self, r: u32) -> Option<usize> {
        let i = self.member[r as usize];
        (i != NOT_ON).then_some(i as usize)
    }

    #[inline]
    pub fn contains_rank(&self, r: u32) -> bool {
        self.member[r as usize] != NOT_ON
    }

    /// Membership of a normalized coordinate vector.
    #[inline]
    pub fn contains_normalized(&self, c: &[Elem]) -> bool {
        self.contains_rank(self.space.rank(c))
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        p.coords().len() == self.form.m + 1 && self.contains_normalized(p.coords())
    }

    pub fn index_of(&self, p: &ProjPoint) -> Option<usize> {
        self.index_of_rank(self.space.rank(p.coords()))
    }

    /// Evaluator over the variety points, built on first use.
    pub fn evaluator(&self) -> &PointSetEvaluator {
        self.evaluator
            .get_or_init(|| PointSetEvaluator::new(&self.field, self.form.m + 1, &self.coords))
    }

    fn check_poly(&self, f: &HomogeneousPoly) -> Result<()> {
        if f.nvars() != self.form.m + 1 {
            return Err(Error::ArityMismatch { expected: self.form.m + 1, got: f.nvars() });
        }
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(())
    }

    /// `|V(F) ∩ V|`, one pass over the variety points.
    pub fn count_intersection(&self, f: &HomogeneousPoly) -> Result<u64> {
        self.check_poly(f)?;
        Ok(self.evaluator().count_zeros(f))
    }

    /// For each variety point (in index order), whether F vanishes there.
    pub fn zero_mask(&self, f: &HomogeneousPoly) -> Result<Vec<bool>> {
        self.check_poly(f)?;
        Ok(self.evaluator().zero_mask(f))
    }

    /// `|X ∩ V|` for a flat X.
    pub fn count_on_flat(&self, x: &Flat) -> u64 {
        let mut n = 0;
        x.for_each_point(&self.field, |c| {
            if self.contains_normalized(c) {
                n += 1;
            }
        });
        n
    }

    fn check_flat(&self, x: &Flat, dim: usize) -> Result<()> {
        if x.ambient_dim() != self.form.m || x.dim() != dim {
            return Err(Error::DimensionMismatch(format!(
                "expected a {dim}-flat of P^{}, got a {}-flat of P^{}",
                self.form.m,
                x.dim(),
                x.ambient_dim()
            )));
        }
        Ok(())
    }

    fn require_nondegenerate(&self) -> Result<()> {
        if self.is_nondegenerate() {
            Ok(())
        } else {
            Err(Error::DegenerateForm)
        }
    }

    /// Normal vector `A P^(q)` of the tangent hyperplane at `p`.
    pub fn tangent_normal(&self, p: &[Elem]) -> Vec<Elem> {
        let pq: Vec<Elem> = p.iter().map(|&x| self.field.conj_fast(x)).collect();
        linalg::mat_vec(&self.field, &self.form.matrix, &pq)
    }

    /// `T_P = {x : x^T A P^(q) = 0}`.
    pub fn tangent_hyperplane(&self, p: &ProjPoint) -> Result<Flat> {
        self.require_nondegenerate()?;
        if !self.contains(p) {
            return Err(Error::PointNotOnVariety);
        }
        Flat::hyperplane(&self.field, &self.tangent_normal(p.coords()))
    }

    /// Whether the hyperplane with the given normal is tangent, and where.
    pub fn tangency_point(&self, normal: &[Elem]) -> Result<Option<ProjPoint>> {
        self.require_nondegenerate()?;
        // A P^(q) = n  =>  P = (A^{-1} n)^(q)
        let inv = linalg::inverse(&self.field, &self.form.matrix)?;
        let pq = linalg::mat_vec(&self.field, &inv, normal);
        let p = ProjPoint::new(&self.field, pq.iter().map(|&x| self.field.conj_fast(x)).collect())?;
        Ok(self.contains(&p).then_some(p))
    }

    pub fn classify_line(&self, line: &Flat) -> Result<LineClass> {
        self.check_flat(line, 1)?;
        let q = self.q as u64;
        let n = self.count_on_flat(line);
        let tag = match n {
            1 => LineTag::Tangent,
            _ if n == q + 1 => LineTag::Secant,
            _ if n == q * q + 1 => LineTag::Generator,
            _ => return Err(Error::TrichotomyViolated(format!("line meets the variety in {n} points"))),
        };
        Ok(LineClass { tag, meeting_count: n })
    }

    /// Points of the plane collinear with `center` on lines inside the variety.
    fn verify_concurrent(&self, plane: &Flat, center: &[Elem], count: u64) -> bool {
        let f = &self.field;
        let mut lines = std::collections::HashSet::new();
        let mut ok = true;
        plane.for_each_point(f, |c| {
            if !self.contains_normalized(c) || c == center {
                return;
            }
            let l = Flat::from_vectors(f, &[center.to_vec(), c.to_vec()]).unwrap();
            if lines.insert(l.clone()) && self.count_on_flat(&l) != l.point_count(f) {
                ok = false;
            }
        });
        ok && lines.len() as u64 == self.q as u64 + 1 && count == 1 + lines.len() as u64 * (f.size() as u64)
    }

    pub fn classify_plane_section(&self, plane: &Flat) -> Result<PlaneSectionClass> {
        self.check_flat(plane, 2)?;
        let q = self.q as u64;
        let n = self.count_on_flat(plane);
        if n == q * q * q + 1 {
            return Ok(PlaneSectionClass { tag: PlaneTag::NonDegenerateCurve, count: n, center: None });
        }
        if n == q * q + 1 {
            return Ok(PlaneSectionClass { tag: PlaneTag::SingleLine, count: n, center: None });
        }
        if n == q * q * q + q * q + 1 {
            let r = self.form.restrict(&self.field, plane)?;
            let rad = linalg::null_space(&self.field, &linalg::transpose(&r.matrix), 3);
            if rad.len() == 1 {
                let mut c = vec![Elem::ZERO; self.form.m + 1];
                let coeff = ProjPoint::new(&self.field, rad[0].clone())?;
                plane.combine(&self.field, coeff.coords(), &mut c);
                if self.verify_concurrent(plane, &c, n) {
                    return Ok(PlaneSectionClass {
                        tag: PlaneTag::ConcurrentLines,
                        count: n,
                        center: Some(ProjPoint::from_normalized(c)),
                    });
                }
            }
            return Err(Error::TrichotomyViolated("plane section with q^3+q^2+1 points is not a pencil".into()));
        }
        Err(Error::TrichotomyViolated(format!("plane meets the variety in {n} points")))
    }

    pub fn classify_hyperplane_section(&self, sigma: &Flat) -> Result<HyperplaneSectionClass> {
        self.require_nondegenerate()?;
        self.check_flat(sigma, self.form.m - 1)?;
        let f = &self.field;
        let n = self.count_on_flat(sigma);
        let normal = sigma.normal(f)?;
        match self.tangency_point(&normal)? {
            None => {
                let expected = nondegenerate_count(self.q as u64, self.form.m as u32 - 1);
                if n != expected {
                    return Err(Error::TrichotomyViolated(format!("non-tangent section has {n} points")));
                }
                Ok(HyperplaneSectionClass { tag: HyperplaneTag::NonTangent, count: n })
            }
            Some(p) => {
                let expected = variety_count(self.q as u64, self.form.m as u32 - 1, self.form.m as u32 - 1);
                // cone check: every section point X has b(X, P) = 0, so PX is a generator
                let mut cone = true;
                sigma.for_each_point(f, |c| {
                    if self.contains_normalized(c) && !self.form.sesq(f, c, p.coords()).is_zero() {
                        cone = false;
                    }
                });
                if n != expected || !cone || !sigma.contains_point(f, &p) {
                    return Err(Error::TrichotomyViolated(format!("tangent section at a point has {n} points")));
                }
                Ok(HyperplaneSectionClass { tag: HyperplaneTag::TangentAt(p), count: n })
            }
        }
    }

    /// The plane `T_P ∩ {x_lead = 0}`, which misses P.
    pub fn base_plane(&self, p: &[Elem]) -> Flat {
        let lead = p.iter().position(|c| !c.is_zero()).unwrap();
        let mut e = vec![Elem::ZERO; p.len()];
        e[lead] = Elem::ONE;
        let basis = linalg::null_space(&self.field, &[self.tangent_normal(p), e], p.len());
        Flat::from_vectors(&self.field, &basis).unwrap()
    }

    /// Calls `f(Q)` for the point Q of the base plane of P on each generator
    /// through P. The generators through P are exactly the lines PQ.
    pub fn for_each_generator_through(&self, p: &[Elem], mut f: impl FnMut(&[Elem])) {
        let base = self.base_plane(p);
        base.for_each_point(&self.field, |c| {
            if self.contains_normalized(c) {
                f(c);
            }
        });
    }

    pub fn generators_through(&self, p: &ProjPoint) -> Result<Vec<Flat>> {
        self.require_nondegenerate()?;
        if !self.contains(p) {
            return Err(Error::PointNotOnVariety);
        }
        let mut out = Vec::new();
        self.for_each_generator_through(p.coords(), |qc| {
            out.push(Flat::from_vectors(&self.field, &[p.coords().to_vec(), qc.to_vec()]).unwrap());
        });
        Ok(out)
    }

    /// Whether P is the first RREF row of the line PQ, for Q with `Q_lead(P) = 0`.
    #[inline]
    pub fn is_canonical_first(p: &[Elem], q: &[Elem]) -> bool {
        let lp = p.iter().position(|c| !c.is_zero()).unwrap();
        let lq = q.iter().position(|c| !c.is_zero()).unwrap();
        lp < lq && p[lq].is_zero()
    }

    /// Every generator, each once, in the order of its first RREF row.
    pub fn generators(&self) -> Result<Vec<Flat>> {
        self.require_nondegenerate()?;
        if self.form.m != 4 && self.form.m != 3 {
            return Err(Error::DimensionMismatch("generators are enumerated in P^3 and P^4".into()));
        }
        let parts: Vec<Vec<Flat>> = (0..self.len())
            .into_par_iter()
            .map(|i| {
                let p = self.coords(i);
                let mut out = Vec::new();
                self.for_each_generator_through(p, |qc| {
                    if Variety::is_canonical_first(p, qc) {
                        out.push(Flat::from_vectors(&self.field, &[p.to_vec(), qc.to_vec()]).unwrap());
                    }
                });
                out
            })
            .collect();
        Ok(parts.concat())
    }

    /// Splits a quadric into hyperplanes and classifies it against the variety.
    pub fn classify_quadric(&self, quad: &HomogeneousPoly) -> Result<QuadricType> {
        self.require_nondegenerate()?;
        if quad.degree() != 2 || quad.is_zero() || quad.nvars() != self.form.m + 1 {
            return Err(Error::NotAQuadric);
        }
        let other = QuadricType { tag: QuadricTag::Other, components: None };
        let Some((l1, l2)) = split_quadric(&self.field, quad)? else {
            return Ok(other);
        };
        let f = &self.field;
        let s1 = Flat::hyperplane(f, &l1)?;
        let s2 = Flat::hyperplane(f, &l2)?;
        if s1 == s2 {
            return Ok(other);
        }
        let t1 = self.tangency_point(&l1)?.is_some();
        let t2 = self.tangency_point(&l2)?.is_some();
        let plane = s1.intersect(f, &s2).expect("distinct hyperplanes meet");
        let section = self.classify_plane_section(&plane)?.tag;
        let tag = match (t1, t2, section) {
            (false, false, PlaneTag::NonDegenerateCurve) => QuadricTag::TypeI,
            (false, false, PlaneTag::ConcurrentLines) => QuadricTag::TypeII,
            (true, false, PlaneTag::NonDegenerateCurve) | (false, true, PlaneTag::NonDegenerateCurve) => {
                QuadricTag::TypeIII
            }
            _ => QuadricTag::Other,
        };
        Ok(QuadricType { tag, components: Some([l1, l2]) })
    }
}

/// Factors a quadric into two linear forms over the field, if possible.
///
/// A product of two linear forms is singular along the intersection of their
/// hyperplanes, so a rational singular point S exists; one factor is then a
/// hyperplane through S.
pub fn split_quadric(field: &Field, quad: &HomogeneousPoly) -> Result<Option<(Vec<Elem>, Vec<Elem>)>> {
    if quad.degree() != 2 || quad.is_zero() {
        return Err(Error::NotAQuadric);
    }
    let n = quad.nvars();
    let partials: Matrix = (0..n)
        .map(|i| {
            let d = quad.partial(field, i);
            (0..n)
                .map(|j| {
                    let mut e = vec![0u8; n];
                    e[j] = 1;
                    d.coeff(&e)
                })
                .collect()
        })
        .collect();
    let w = linalg::null_space(field, &partials, n);
    let Some(wflat) = Flat::from_vectors(field, &w) else {
        return Ok(None);
    };
    let cp = CompiledPoly::new(field, quad);
    let mut sing = None;
    wflat.for_each_point(field, |c| {
        if sing.is_none() && cp.eval(c).is_zero() {
            sing = Some(c.to_vec());
        }
    });
    let Some(s) = sing else { return Ok(None) };
    let ann = linalg::null_space(field, &[s], n);
    let space = ProjSpace::new(ann.len() - 1, field.size());
    let mut found = None;
    for r in 0..space.len() {
        let c = space.unrank(r);
        let mut lin = vec![Elem::ZERO; n];
        for (ci, row) in c.iter().zip(&ann) {
            for (x, &y) in lin.iter_mut().zip(row) {
                *x = field.add(*x, field.mul(*ci, y));
            }
        }
        if let Some(other) = quad.divide_by_linear(field, &lin)? {
            let mut l2: Vec<Elem> = (0..n)
                .map(|j| {
                    let mut e = vec![0u8; n];
                    e[j] = 1;
                    other.coeff(&e)
                })
                .collect();
            let l1 = ProjPoint::new(field, lin)?.coords().to_vec();
            l2 = ProjPoint::new(field, l2)?.coords().to_vec();
            found = Some((l1, l2));
            break;
        }
    }
    Ok(found)
}
