//! Fast evaluation of polynomials at many points.
//!
//! [`CompiledPoly`] evaluates one polynomial at arbitrary points through the
//! log tables. [`PointSetEvaluator`] fixes a point set, tabulates the log of
//! every monomial of a given degree at every point (term-major), and then
//! evaluates any polynomial of that degree with one table lookup and one
//! packed addition per (term, point).

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::field::{Elem, Field};
use crate::poly::{monomials, Exps, HomogeneousPoly};

const MAX_VARS: usize = 16;
const CHUNK: usize = 1 << 14;

/// A polynomial pre-digested for repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledPoly<'a> {
    field: &'a Field,
    nvars: usize,
    order: u64,
    /// (log of coefficient, nonzero exponents as (variable, exponent))
    terms: Vec<(u32, Vec<(usize, u32)>)>,
}

impl<'a> CompiledPoly<'a> {
    pub fn new(field: &'a Field, poly: &HomogeneousPoly) -> CompiledPoly<'a> {
        assert!(poly.nvars() <= MAX_VARS);
        let terms = poly
            .terms()
            .map(|(e, c)| {
                let vars = e.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, &x)| (i, x as u32)).collect();
                (field.log(c).unwrap(), vars)
            })
            .collect();
        CompiledPoly { field, nvars: poly.nvars(), order: field.order() as u64, terms }
    }

    #[inline]
    pub fn eval(&self, x: &[Elem]) -> Elem {
        debug_assert_eq!(x.len(), self.nvars);
        let mut logs = [0u32; MAX_VARS];
        for (l, &v) in logs.iter_mut().zip(x) {
            *l = self.field.log_raw(v);
        }
        let mut acc = Elem::ZERO;
        'terms: for (lc, vars) in &self.terms {
            let mut l = *lc as u64;
            for &(i, e) in vars {
                let li = logs[i];
                if li == u32::MAX {
                    continue 'terms;
                }
                l += li as u64 * e as u64;
            }
            acc = self.field.add(acc, self.field.exp_raw((l % self.order) as u32));
        }
        acc
    }
}

/// Packs field elements so that field addition becomes machine addition.
///
/// Characteristic 2 uses the index itself with XOR. Odd characteristic puts
/// each base-p digit in its own 16-bit lane of a `u64` and reduces lazily.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaneCodec {
    Xor,
    Lanes { p: u32, k: u32 },
}

impl LaneCodec {
    pub fn for_field(field: &Field) -> Option<LaneCodec> {
        if field.p() == 2 {
            Some(LaneCodec::Xor)
        } else if field.k() <= 4 {
            Some(LaneCodec::Lanes { p: field.p(), k: field.k() })
        } else {
            None
        }
    }

    pub fn encode(self, field: &Field, x: Elem) -> u64 {
        match self {
            LaneCodec::Xor => x.0 as u64,
            LaneCodec::Lanes { .. } => {
                field.digits(x).iter().enumerate().map(|(i, &d)| (d as u64) << (16 * i)).sum()
            }
        }
    }

    #[inline]
    pub fn is_zero(self, v: u64) -> bool {
        match self {
            LaneCodec::Xor => v == 0,
            LaneCodec::Lanes { p, k } => (0..k).all(|i| ((v >> (16 * i)) & 0xffff) as u32 % p == 0),
        }
    }

    pub fn decode(self, v: u64) -> Elem {
        match self {
            LaneCodec::Xor => Elem(v as u32),
            LaneCodec::Lanes { p, k } => {
                let mut idx = 0u32;
                for i in (0..k).rev() {
                    idx = idx * p + ((v >> (16 * i)) & 0xffff) as u32 % p;
                }
                Elem(idx)
            }
        }
    }

    /// Largest number of packed additions before a lane can overflow.
    pub fn max_terms(self) -> usize {
        match self {
            LaneCodec::Xor => usize::MAX,
            LaneCodec::Lanes { p, .. } => (0xffff / (p - 1)) as usize,
        }
    }
}

struct MonoTable {
    index: HashMap<Exps, usize>,
    /// `logs[t * npts + i]`: log of monomial t at point i, or the zero sentinel.
    logs: Vec<u16>,
}

/// Evaluates polynomials over a fixed list of points.
pub struct PointSetEvaluator {
    field: Field,
    nvars: usize,
    npts: usize,
    /// point-major logs of the coordinates, `u32::MAX` for zero
    coord_logs: Vec<u32>,
    codec: Option<LaneCodec>,
    /// `enc[j]` = encoded `g^j` for `j < 2 * order`, encoded zero beyond
    enc: Vec<u64>,
    tables: Mutex<HashMap<u32, Arc<MonoTable>>>,
}

impl PointSetEvaluator {
    /// `points` is a flat point-major array of `nvars`-long coordinate vectors.
    pub fn new(field: &Field, nvars: usize, points: &[Elem]) -> PointSetEvaluator {
        let npts = points.len() / nvars;
        let coord_logs = points.iter().map(|&x| field.log_raw(x)).collect();
        let order = field.order();
        let codec = if 3 * order as u64 <= u16::MAX as u64 { LaneCodec::for_field(field) } else { None };
        let enc = match codec {
            Some(c) => (0..3 * order)
                .map(|j| if j < 2 * order { c.encode(field, field.exp_raw(j)) } else { 0 })
                .collect(),
            None => Vec::new(),
        };
        PointSetEvaluator { field: field.clone(), nvars, npts, coord_logs, codec, enc, tables: Mutex::new(HashMap::new()) }
    }

    pub fn len(&self) -> usize {
        self.npts
    }

    pub fn is_empty(&self) -> bool {
        self.npts == 0
    }

    pub fn point(&self, i: usize) -> Vec<Elem> {
        self.coord_logs[i * self.nvars..(i + 1) * self.nvars]
            .iter()
            .map(|&l| if l == u32::MAX { Elem::ZERO } else { self.field.exp_raw(l) })
            .collect()
    }

    fn table(&self, degree: u32) -> Arc<MonoTable> {
        if let Some(t) = self.tables.lock().unwrap().get(&degree) {
            return t.clone();
        }
        let mons = monomials(self.nvars, degree);
        let order = self.field.order() as u64;
        let sentinel = 2 * self.field.order() as u16;
        let mut logs = vec![0u16; mons.len() * self.npts];
        logs.par_chunks_mut(self.npts.max(1)).zip(mons.par_iter()).for_each(|(row, e)| {
            for (i, slot) in row.iter_mut().enumerate() {
                let pl = &self.coord_logs[i * self.nvars..(i + 1) * self.nvars];
                let mut l = 0u64;
                let mut zero = false;
                for (&ei, &li) in e.iter().zip(pl) {
                    if ei == 0 {
                        continue;
                    }
                    if li == u32::MAX {
                        zero = true;
                        break;
                    }
                    l += ei as u64 * li as u64;
                }
                *slot = if zero { sentinel } else { (l % order) as u16 };
            }
        });
        let index = mons.into_iter().enumerate().map(|(i, e)| (e, i)).collect();
        let t = Arc::new(MonoTable { index, logs });
        self.tables.lock().unwrap().insert(degree, t.clone());
        t
    }

    /// Runs `f(start, values)` on consecutive chunks of packed values.
    fn packed<R: Send>(
        &self,
        poly: &HomogeneousPoly,
        f: impl Fn(usize, &[u64], LaneCodec) -> R + Sync,
    ) -> Option<Vec<R>> {
        let codec = self.codec?;
        if poly.num_terms() > codec.max_terms() {
            return None;
        }
        let table = self.table(poly.degree());
        let terms: Vec<(usize, u32)> = poly
            .terms()
            .map(|(e, c)| (table.index[e], self.field.log(c).unwrap()))
            .collect();
        let npts = self.npts;
        let starts: Vec<usize> = (0..npts).step_by(CHUNK).collect();
        Some(
            starts
                .par_iter()
                .map(|&s| {
                    let e = (s + CHUNK).min(npts);
                    let mut acc = vec![0u64; e - s];
                    for &(t, lc) in &terms {
                        let row = &table.logs[t * npts + s..t * npts + e];
                        let enc = &self.enc[lc as usize..];
                        match codec {
                            LaneCodec::Xor => {
                                for (a, &l) in acc.iter_mut().zip(row) {
                                    *a ^= enc[l as usize];
                                }
                            }
                            LaneCodec::Lanes { .. } => {
                                for (a, &l) in acc.iter_mut().zip(row) {
                                    *a += enc[l as usize];
                                }
                            }
                        }
                    }
                    f(s, &acc, codec)
                })
                .collect(),
        )
    }

    fn check(&self, poly: &HomogeneousPoly) {
        assert_eq!(poly.nvars(), self.nvars, "polynomial arity does not match the point set");
    }

    /// Value of the polynomial at every point.
    pub fn values(&self, poly: &HomogeneousPoly) -> Vec<Elem> {
        self.check(poly);
        if let Some(parts) = self.packed(poly, |_, acc, c| acc.iter().map(|&v| c.decode(v)).collect::<Vec<_>>()) {
            return parts.concat();
        }
        let cp = CompiledPoly::new(&self.field, poly);
        (0..self.npts).into_par_iter().map(|i| cp.eval(&self.point(i))).collect()
    }

    /// Whether the polynomial vanishes at each point.
    pub fn zero_mask(&self, poly: &HomogeneousPoly) -> Vec<bool> {
        self.check(poly);
        if let Some(parts) = self.packed(poly, |_, acc, c| acc.iter().map(|&v| c.is_zero(v)).collect::<Vec<_>>()) {
            return parts.concat();
        }
        let cp = CompiledPoly::new(&self.field, poly);
        (0..self.npts).into_par_iter().map(|i| cp.eval(&self.point(i)).is_zero()).collect()
    }

    /// Number of points where the polynomial vanishes.
    pub fn count_zeros(&self, poly: &HomogeneousPoly) -> u64 {
        self.check(poly);
        if let Some(parts) = self.packed(poly, |_, acc, c| acc.iter().filter(|&&v| c.is_zero(v)).count() as u64) {
            return parts.into_iter().sum();
        }
        let cp = CompiledPoly::new(&self.field, poly);
        (0..self.npts).into_par_iter().filter(|&i| cp.eval(&self.point(i)).is_zero()).count() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::ProjSpace;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_points(field: &Field, m: usize) -> Vec<Elem> {
        let mut out = Vec::new();
        ProjSpace::new(m, field.size()).for_each(|_, c| out.extend_from_slice(c));
        out
    }

    #[test]
    fn packed_evaluation_matches_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, k, m, d) in [(2, 2, 4, 3), (3, 2, 3, 3), (2, 3, 2, 4), (7, 2, 2, 3), (5, 2, 2, 2), (3, 4, 2, 3)] {
            let f = Field::new(p, k).unwrap();
            let pts = all_points(&f, m);
            let ev = PointSetEvaluator::new(&f, m + 1, &pts);
            for _ in 0..3 {
                let poly = HomogeneousPoly::random(&f, m + 1, d, &mut rng);
                let vals = ev.values(&poly);
                let mask = ev.zero_mask(&poly);
                let cp = CompiledPoly::new(&f, &poly);
                for (i, x) in pts.chunks(m + 1).enumerate() {
                    let direct = poly.eval_vec(&f, x).unwrap();
                    assert_eq!(vals[i], direct);
                    assert_eq!(cp.eval(x), direct);
                    assert_eq!(mask[i], direct.is_zero());
                }
                assert_eq!(ev.count_zeros(&poly), mask.iter().filter(|&&z| z).count() as u64);
            }
        }
    }

    #[test]
    fn lane_codec_round_trip() {
        let f = Field::new(7, 2).unwrap();
        let c = LaneCodec::for_field(&f).unwrap();
        for x in f.elements() {
            assert_eq!(c.decode(c.encode(&f, x)), x);
            let y = f.mul(x, Elem(10));
            assert_eq!(c.decode(c.encode(&f, x) + c.encode(&f, y)), f.add(x, y));
        }
    }
}
