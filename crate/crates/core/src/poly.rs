//! Sparse homogeneous polynomials over a finite field.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldSpec};
use crate::linalg::Matrix;
use crate::projective::{Flat, ProjPoint, ProjSpace};

pub type Exps = Vec<u8>;

/// A homogeneous polynomial: exponent vectors summing to `degree` mapped to
/// nonzero coefficients. The zero polynomial keeps its degree tag.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogeneousPoly {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Exps, Elem>,
}

/// All exponent vectors of the given degree, in graded-lex descending order.
pub fn monomials(nvars: usize, degree: u32) -> Vec<Exps> {
    fn rec(i: usize, left: u32, cur: &mut Exps, out: &mut Vec<Exps>) {
        if i + 1 == cur.len() {
            cur[i] = left as u8;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as u8;
            rec(i + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        return out;
    }
    rec(0, degree, &mut vec![0; nvars], &mut out);
    out
}

impl HomogeneousPoly {
    pub fn zero(nvars: usize, degree: u32) -> HomogeneousPoly {
        HomogeneousPoly { nvars, degree, terms: BTreeMap::new() }
    }

    /// Builds from terms, summing duplicates and dropping zeros.
    pub fn from_terms(
        field: &Field,
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Exps, Elem)>,
    ) -> Result<HomogeneousPoly> {
        let mut p = HomogeneousPoly::zero(nvars, degree);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::ArityMismatch { expected: nvars, got: e.len() });
            }
            let got: u32 = e.iter().map(|&x| x as u32).sum();
            if got != degree {
                return Err(Error::NotHomogeneous { expected: degree, got });
            }
            if c.0 >= field.size() {
                return Err(Error::FieldMismatch);
            }
            p.add_term(field, e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, field: &Field, e: Exps, c: Elem) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = field.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// The linear form `sum coeffs[i] * x_i`.
    pub fn linear(field: &Field, coeffs: &[Elem]) -> HomogeneousPoly {
        let n = coeffs.len();
        let terms = coeffs.iter().enumerate().map(|(i, &c)| {
            let mut e = vec![0u8; n];
            e[i] = 1;
            (e, c)
        });
        HomogeneousPoly::from_terms(field, n, 1, terms).expect("well-formed linear form")
    }

    /// `x_i^degree`-style monomial with a coefficient.
    pub fn monomial(field: &Field, exps: Exps, c: Elem) -> Result<HomogeneousPoly> {
        let n = exps.len();
        let d = exps.iter().map(|&x| x as u32).sum();
        HomogeneousPoly::from_terms(field, n, d, [(exps, c)])
    }

    /// Constant polynomial (degree 0).
    pub fn constant(field: &Field, nvars: usize, c: Elem) -> HomogeneousPoly {
        HomogeneousPoly::from_terms(field, nvars, 0, [(vec![0; nvars], c)]).unwrap()
    }

    /// Uniform iid coefficients over every monomial, rejecting the zero polynomial.
    pub fn random<R: Rng + ?Sized>(field: &Field, nvars: usize, degree: u32, rng: &mut R) -> HomogeneousPoly {
        let mons = monomials(nvars, degree);
        loop {
            let terms: Vec<(Exps, Elem)> =
                mons.iter().map(|e| (e.clone(), Elem(rng.gen_range(0..field.size())))).collect();
            let p = HomogeneousPoly::from_terms(field, nvars, degree, terms).unwrap();
            if !p.is_zero() {
                return p;
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded-lex descending order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exps, Elem)> {
        self.terms.iter().rev().map(|(e, &c)| (e, c))
    }

    pub fn coeff(&self, exps: &[u8]) -> Elem {
        self.terms.get(exps).copied().unwrap_or(Elem::ZERO)
    }

    fn check_same_shape(&self, other: &HomogeneousPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: other.nvars });
        }
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::NotHomogeneous { expected: self.degree, got: other.degree });
        }
        Ok(())
    }

    pub fn add(&self, field: &Field, other: &HomogeneousPoly) -> Result<HomogeneousPoly> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        if out.is_zero() {
            out.degree = other.degree;
        }
        for (e, &c) in &other.terms {
            out.add_term(field, e.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, field: &Field, other: &HomogeneousPoly) -> Result<HomogeneousPoly> {
        self.add(field, &other.scale(field, field.neg(Elem::ONE)))
    }

    pub fn scale(&self, field: &Field, c: Elem) -> HomogeneousPoly {
        let mut out = HomogeneousPoly::zero(self.nvars, self.degree);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(e, &v)| (e.clone(), field.mul(v, c))).collect();
        out
    }

    pub fn mul(&self, field: &Field, other: &HomogeneousPoly) -> Result<HomogeneousPoly> {
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: other.nvars });
        }
        let mut out = HomogeneousPoly::zero(self.nvars, self.degree + other.degree);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Exps = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(field, e, field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, field: &Field, n: u32) -> HomogeneousPoly {
        let mut out = HomogeneousPoly::constant(field, self.nvars, Elem::ONE);
        for _ in 0..n {
            out = out.mul(field, self).unwrap();
        }
        out
    }

    /// Product of polynomials in the same variables.
    pub fn product(field: &Field, factors: &[HomogeneousPoly]) -> Result<HomogeneousPoly> {
        let first = factors.first().ok_or(Error::EmptyInput)?;
        factors[1..].iter().try_fold(first.clone(), |acc, f| acc.mul(field, f))
    }

    /// Value at a coordinate vector.
    pub fn eval_vec(&self, field: &Field, x: &[Elem]) -> Result<Elem> {
        if x.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: x.len() });
        }
        let logs: Vec<Option<u32>> = x.iter().map(|&v| field.log(v)).collect();
        let order = field.order() as u64;
        let mut acc = Elem::ZERO;
        'terms: for (e, &c) in &self.terms {
            let mut l = field.log(c).unwrap() as u64;
            for (&ei, li) in e.iter().zip(&logs) {
                if ei == 0 {
                    continue;
                }
                match li {
                    Some(li) => l += ei as u64 * *li as u64,
                    None => continue 'terms,
                }
            }
            acc = field.add(acc, field.exp_raw((l % order) as u32));
        }
        Ok(acc)
    }

    /// Value at the normalized representative of `p`.
    pub fn evaluate(&self, field: &Field, p: &ProjPoint) -> Result<Elem> {
        self.eval_vec(field, p.coords())
    }

    /// All rational points of P^{nvars-1} where the polynomial vanishes.
    pub fn zero_set(&self, field: &Field) -> Result<Vec<ProjPoint>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.nvars == 0 {
            return Err(Error::ArityMismatch { expected: 1, got: 0 });
        }
        let compiled = crate::eval::CompiledPoly::new(field, self);
        let space = ProjSpace::new(self.nvars - 1, field.size());
        let mut out = Vec::new();
        space.for_each(|_, c| {
            if compiled.eval(c).is_zero() {
                out.push(ProjPoint::from_normalized(c.to_vec()));
            }
        });
        Ok(out)
    }

    /// `F(L y)` where `x_i = sum_j lin[i][j] y_j`; the result has `lin[0].len()` variables.
    pub fn substitute_linear(&self, field: &Field, lin: &[Vec<Elem>]) -> Result<HomogeneousPoly> {
        if lin.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: lin.len() });
        }
        let k = lin.first().map_or(0, |r| r.len());
        let forms: Vec<HomogeneousPoly> = lin.iter().map(|row| HomogeneousPoly::linear(field, row)).collect();
        let mut powers: Vec<Vec<HomogeneousPoly>> = forms
            .iter()
            .map(|f| vec![HomogeneousPoly::constant(field, k, Elem::ONE), f.clone()])
            .collect();
        let mut out = HomogeneousPoly::zero(k, self.degree);
        for (e, &c) in &self.terms {
            let mut t = HomogeneousPoly::constant(field, k, c);
            for (i, &ei) in e.iter().enumerate() {
                while powers[i].len() <= ei as usize {
                    let next = powers[i].last().unwrap().mul(field, &forms[i])?;
                    powers[i].push(next);
                }
                if ei > 0 {
                    t = t.mul(field, &powers[i][ei as usize])?;
                }
            }
            for (te, tc) in t.terms {
                out.add_term(field, te, tc);
            }
        }
        Ok(out)
    }

    /// Restriction to a flat, in the coordinates of its RREF basis.
    pub fn restrict_to_flat(&self, field: &Field, x: &Flat) -> Result<HomogeneousPoly> {
        if x.ambient_dim() + 1 != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "flat lives in P^{}, polynomial in {} variables",
                x.ambient_dim(),
                self.nvars
            )));
        }
        let basis = x.basis();
        let lin: Matrix = (0..self.nvars).map(|i| basis.iter().map(|r| r[i]).collect()).collect();
        self.substitute_linear(field, &lin)
    }

    pub fn contains_flat(&self, field: &Field, x: &Flat) -> bool {
        self.restrict_to_flat(field, x).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Formal partial derivative with respect to `x_i`.
    pub fn partial(&self, field: &Field, i: usize) -> HomogeneousPoly {
        let mut out = HomogeneousPoly::zero(self.nvars, self.degree.saturating_sub(1));
        for (e, &c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            out.add_term(field, ne, field.mul(field.from_int(e[i] as u64), c));
        }
        out
    }

    /// Exact quotient by a linear form, `None` if it does not divide.
    pub fn divide_by_linear(&self, field: &Field, lin: &[Elem]) -> Result<Option<HomogeneousPoly>> {
        if lin.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: lin.len() });
        }
        let j = lin.iter().position(|c| !c.is_zero()).ok_or(Error::ZeroVector)?;
        let inv = field.inv(lin[j])?;
        let l = HomogeneousPoly::linear(field, lin);
        let mut rem = self.clone();
        let mut quot = HomogeneousPoly::zero(self.nvars, self.degree.saturating_sub(1));
        if self.degree == 0 {
            return Ok(self.is_zero().then_some(quot));
        }
        loop {
            let lead = rem
                .terms
                .iter()
                .filter(|(e, _)| e[j] > 0)
                .max_by_key(|(e, _)| e[j])
                .map(|(e, &c)| (e.clone(), c));
            let Some((e, c)) = lead else { break };
            let mut qe = e;
            qe[j] -= 1;
            let qc = field.mul(c, inv);
            let qt = HomogeneousPoly::from_terms(field, self.nvars, self.degree - 1, [(qe.clone(), qc)])?;
            rem = rem.sub(field, &qt.mul(field, &l)?)?;
            quot.add_term(field, qe, qc);
        }
        Ok(rem.is_zero().then_some(quot))
    }

    /// Applies a map to every coefficient (e.g. a field embedding).
    pub fn map_coeffs(&self, target: &Field, f: impl Fn(Elem) -> Elem) -> HomogeneousPoly {
        let terms = self.terms.iter().map(|(e, &c)| (e.clone(), f(c)));
        HomogeneousPoly::from_terms(target, self.nvars, self.degree, terms).unwrap()
    }

    pub fn to_json(&self, field: &Field) -> Value {
        serde_json::to_value(PolyJson {
            field: field.spec(),
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms().map(|(e, c)| TermJson { exps: e.clone(), coeff: c }).collect(),
        })
        .unwrap()
    }

    /// Parses the JSON document, validating coefficients against the named field.
    pub fn from_json(v: &Value) -> Result<(Field, HomogeneousPoly)> {
        let pj: PolyJson = serde_json::from_value(v.clone()).map_err(|e| Error::Malformed(e.to_string()))?;
        let field = Field::from_spec(&pj.field)?;
        let poly = HomogeneousPoly::from_terms(
            &field,
            pj.nvars,
            pj.degree,
            pj.terms.into_iter().map(|t| (t.exps, t.coeff)),
        )?;
        Ok((field, poly))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exps: Exps,
    coeff: Elem,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    field: FieldSpec,
    nvars: usize,
    degree: u32,
    terms: Vec<TermJson>,
}

impl fmt::Display for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { format!("x{i}") } else { format!("x{i}^{x}") })
                .collect();
            match (c == Elem::ONE, vars.is_empty()) {
                (true, false) => write!(f, "{}", vars.join("*"))?,
                (_, true) => write!(f, "[{}]", c.0)?,
                (false, false) => write!(f, "[{}]*{}", c.0, vars.join("*"))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::enumerate_flats;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fermat(field: &Field, nvars: usize, e: u8) -> HomogeneousPoly {
        let terms = (0..nvars).map(|i| {
            let mut x = vec![0; nvars];
            x[i] = e;
            (x, Elem::ONE)
        });
        HomogeneousPoly::from_terms(field, nvars, e as u32, terms).unwrap()
    }

    #[test]
    fn monomial_order_and_count() {
        let m = monomials(5, 3);
        assert_eq!(m.len(), 35);
        assert_eq!(m[0], vec![3, 0, 0, 0, 0]);
        assert_eq!(m[34], vec![0, 0, 0, 0, 3]);
        assert!(m.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn evaluation_basics() {
        let f = Field::new(2, 2).unwrap();
        let x0 = HomogeneousPoly::linear(&f, &[Elem(1), Elem(0), Elem(0), Elem(0), Elem(0)]);
        let p = ProjPoint::new(&f, vec![Elem(0), Elem(1), Elem(0), Elem(0), Elem(0)]).unwrap();
        assert_eq!(x0.evaluate(&f, &p).unwrap(), Elem::ZERO);
        assert_eq!(HomogeneousPoly::zero(5, 3).evaluate(&f, &p).unwrap(), Elem::ZERO);
        let bad = ProjPoint::new(&f, vec![Elem(1), Elem(0)]).unwrap();
        assert!(matches!(x0.evaluate(&f, &bad), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn zero_sets_over_f4() {
        let f = Field::new(2, 2).unwrap();
        let x0 = HomogeneousPoly::linear(&f, &[Elem(1), Elem(0), Elem(0), Elem(0), Elem(0)]);
        assert_eq!(x0.zero_set(&f).unwrap().len(), 85);
        assert_eq!(fermat(&f, 5, 3).zero_set(&f).unwrap().len(), 165);
        let x1 = HomogeneousPoly::linear(&f, &[Elem(0), Elem(1), Elem(0), Elem(0), Elem(0)]);
        assert_eq!(x0.mul(&f, &x1).unwrap().zero_set(&f).unwrap().len(), 149);
        assert_eq!(HomogeneousPoly::zero(5, 2).zero_set(&f), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn restriction_to_flats() {
        let f = Field::new(2, 2).unwrap();
        let x0 = HomogeneousPoly::linear(&f, &[Elem(1), Elem(0), Elem(0), Elem(0), Elem(0)]);
        let h = Flat::coordinate_hyperplane(&f, 4, 0);
        assert!(x0.restrict_to_flat(&f, &h).unwrap().is_zero());
        assert!(x0.contains_flat(&f, &h));
        let herm = fermat(&f, 5, 3);
        for plane in enumerate_flats(&f, 4, 2).step_by(61) {
            let r = herm.restrict_to_flat(&f, &plane).unwrap();
            assert!(r.degree() <= 3);
            assert!(!herm.contains_flat(&f, &plane));
            let direct = plane.points(&f).iter().filter(|p| herm.evaluate(&f, p).unwrap().is_zero()).count();
            assert_eq!(r.zero_set(&f).unwrap().len(), direct);
            assert!([9, 13, 5].contains(&direct));
        }
    }

    #[test]
    fn division_by_linear_forms() {
        let f = Field::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = HomogeneousPoly::random(&f, 4, 1, &mut rng);
            let b = HomogeneousPoly::random(&f, 4, 2, &mut rng);
            let prod = a.mul(&f, &b).unwrap();
            let lin: Vec<Elem> = (0..4).map(|i| {
                let mut e = vec![0; 4];
                e[i] = 1;
                a.coeff(&e)
            }).collect();
            assert_eq!(prod.divide_by_linear(&f, &lin).unwrap(), Some(b.clone()));
        }
        let x0x1 = HomogeneousPoly::from_terms(&f, 3, 2, [(vec![1, 1, 0], Elem::ONE)]).unwrap();
        assert_eq!(x0x1.divide_by_linear(&f, &[Elem(0), Elem(0), Elem(1)]).unwrap(), None);
    }

    #[test]
    fn partial_derivatives() {
        let f = Field::new(3, 2).unwrap();
        let p = HomogeneousPoly::from_terms(&f, 2, 3, [(vec![3, 0], Elem(1)), (vec![2, 1], Elem(1))]).unwrap();
        // d/dx0: 3x0^2 + 2x0x1 = 2x0x1 in characteristic 3
        let d = p.partial(&f, 0);
        assert_eq!(d.num_terms(), 1);
        assert_eq!(d.coeff(&[1, 1]), Elem(2));
    }

    #[test]
    fn json_round_trip() {
        let f = Field::new(7, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = HomogeneousPoly::random(&f, 5, 3, &mut rng);
        let v = p.to_json(&f);
        assert_eq!(v["terms"][0]["exps"], serde_json::json!([3, 0, 0, 0, 0]));
        let (g, back) = HomogeneousPoly::from_json(&v).unwrap();
        assert_eq!(g, f);
        assert_eq!(back, p);
        let mut broken = v.clone();
        broken["terms"][0]["exps"] = serde_json::json!([2, 0, 0, 0, 0]);
        assert!(HomogeneousPoly::from_json(&broken).is_err());
    }
}
