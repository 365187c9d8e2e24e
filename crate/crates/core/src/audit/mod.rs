//! Intersection counts, structural predicates and the bound catalog for
//! hypersurfaces against a Hermitian variety.

pub mod bounds;
pub mod identities;
pub mod sampling;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::{CompiledPoly, PointSetEvaluator};
use crate::field::Elem;
use crate::hermitian::{QuadricTag, Variety};
use crate::poly::HomogeneousPoly;
use crate::projective::{book_of_planes, enumerate_flats, hyperplanes_through_plane, lines_through, Flat, ProjPoint};

pub use bounds::{p_delta, BoundFormula};

/// Base-plane points the witness search may visit outside exhaustive mode.
pub const WITNESS_BUDGET: u64 = 1 << 20;

/// Largest `q` for which plane, hyperplane and full zero-set scans run.
pub const EXHAUSTIVE_MAX_Q: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

/// Flats realizing the predicates that hold.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Witnesses {
    pub hyperplane: Option<Flat>,
    pub plane: Option<Flat>,
    pub generator: Option<Flat>,
    /// A plane holding `max_generators_in_one_plane >= 2` contained generators.
    pub generator_plane: Option<Flat>,
    pub tangent_line: Option<Flat>,
}

/// `None` means undecided within the budget.
#[derive(Clone, Debug, Default, Serialize)]
pub struct StructuralPredicates {
    pub contains_hyperplane: Option<bool>,
    pub contains_plane: Option<bool>,
    pub contains_generator: Option<bool>,
    pub max_generators_in_one_plane: Option<u32>,
    pub contains_tangent_line: Option<bool>,
    pub witnesses: Witnesses,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub name: BoundFormula,
    pub value: i128,
    /// The compared count: `|V(F)|` for Serre, the intersection otherwise.
    pub count: u64,
    pub satisfied: bool,
    pub strict: bool,
    /// Whether the bound is a theorem under the listed hypothesis.
    pub proven: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureCheck {
    pub value: i128,
    pub satisfied: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub q: u32,
    pub d: u32,
    pub m: usize,
    pub mode: Mode,
    pub intersection_count: u64,
    pub zero_set_count: Option<u64>,
    pub predicates: StructuralPredicates,
    pub applicable_bounds: Vec<BoundCheck>,
    pub conjecture_bound: Option<ConjectureCheck>,
    /// Proven bounds that fail.
    pub violations: Vec<BoundFormula>,
    /// Failed conjectural bounds.
    pub findings: Vec<BoundFormula>,
    pub flags: Vec<String>,
}

struct Tables {
    /// all points of P^m in rank order
    all: PointSetEvaluator,
    /// point ranks of each line in `x_0 = 0`, `s + 1` per line
    sigma0_lines: Vec<u32>,
    /// point ranks of each generator, `s + 1` per generator
    generators: Vec<u32>,
}

/// Audits hypersurfaces against one variety, caching the exhaustive tables.
pub struct Auditor<'a> {
    v: &'a Variety,
    budget: u64,
    tables: OnceLock<Tables>,
}

impl<'a> Auditor<'a> {
    pub fn new(v: &'a Variety) -> Auditor<'a> {
        Auditor { v, budget: WITNESS_BUDGET, tables: OnceLock::new() }
    }

    pub fn with_budget(v: &'a Variety, budget: u64) -> Auditor<'a> {
        Auditor { v, budget, tables: OnceLock::new() }
    }

    pub fn variety(&self) -> &Variety {
        self.v
    }

    pub fn mode(&self) -> Mode {
        if self.v.q() <= EXHAUSTIVE_MAX_Q {
            Mode::Exhaustive
        } else {
            Mode::Sampled
        }
    }

    fn tables(&self) -> &Tables {
        self.tables.get_or_init(|| {
            let v = self.v;
            let f = v.field();
            let space = v.space();
            let mut pts = Vec::with_capacity(space.len() as usize * (v.m() + 1));
            space.for_each(|_, c| pts.extend_from_slice(c));
            let all = PointSetEvaluator::new(f, v.m() + 1, &pts);
            let mut sigma0_lines = Vec::new();
            let mut generators = Vec::new();
            if v.m() == 4 && v.is_nondegenerate() {
                for l in enumerate_flats(f, 3, 1) {
                    let rows: Vec<Vec<Elem>> =
                        l.basis().iter().map(|r| std::iter::once(Elem::ZERO).chain(r.iter().copied()).collect()).collect();
                    let line = Flat::from_vectors(f, &rows).unwrap();
                    sigma0_lines.extend(line.point_ranks(f, space));
                }
                for g in v.generators().expect("non-degenerate form in P^4") {
                    generators.extend(g.point_ranks(f, space));
                }
            }
            Tables { all, sigma0_lines, generators }
        })
    }

    fn check(&self, f: &HomogeneousPoly) -> Result<()> {
        let v = self.v;
        if f.nvars() != v.m() + 1 {
            return Err(Error::ArityMismatch { expected: v.m() + 1, got: f.nvars() });
        }
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if f.degree() == 0 || f.degree() > v.q() {
            return Err(Error::Precondition(format!("degree {} not in 1..=q = {}", f.degree(), v.q())));
        }
        Ok(())
    }

    /// Zero set of `f` over all of P^m, by rank. Exhaustive mode only.
    pub fn zero_bitmap(&self, f: &HomogeneousPoly) -> Result<Vec<bool>> {
        if self.mode() != Mode::Exhaustive {
            return Err(Error::SizeBudgetExceeded("full zero-set scans need q <= 3".into()));
        }
        Ok(self.tables().all.zero_mask(f))
    }

    /// Containment is read off rational points, which is exact for `d < q^2`.
    pub fn structural_predicates(&self, f: &HomogeneousPoly) -> Result<StructuralPredicates> {
        let v = self.v;
        if f.nvars() != v.m() + 1 {
            return Err(Error::ArityMismatch { expected: v.m() + 1, got: f.nvars() });
        }
        if f.degree() == 0 || f.degree() >= v.field().size() {
            return Err(Error::Precondition(format!("degree {} not below the field size", f.degree())));
        }
        let vmask = self.v.zero_mask(f)?;
        Ok(self.predicates_with(f, &vmask))
    }

    fn predicates_with(&self, f: &HomogeneousPoly, vmask: &[bool]) -> StructuralPredicates {
        let v = self.v;
        let mut out = StructuralPredicates::default();
        if v.m() != 4 || !v.is_nondegenerate() {
            return out;
        }
        let exhaustive = self.mode() == Mode::Exhaustive;
        let s = v.field().size() as u64;
        let hits = vmask.iter().filter(|&&b| b).count() as u64;
        if exhaustive || hits * (s * s + s + 1) <= self.budget {
            self.line_predicates(f, vmask, &mut out);
        }
        if exhaustive {
            self.plane_predicates(f, &mut out);
        }
        out
    }

    /// Generators and tangent lines, through the points of `V(F) ∩ V`.
    fn line_predicates(&self, f: &HomogeneousPoly, vmask: &[bool], out: &mut StructuralPredicates) {
        let v = self.v;
        let fld = v.field();
        let cp = CompiledPoly::new(fld, f);
        let n = v.m() + 1;
        let mut gens: Vec<(usize, Vec<Elem>)> = Vec::new();
        let mut tangent: Option<(usize, Vec<Elem>)> = None;
        let mut x = vec![Elem::ZERO; n];
        for i in (0..v.len()).filter(|&i| vmask[i]) {
            let p = v.coords(i);
            let base = v.base_plane(p);
            base.for_each_point(fld, |qc| {
                if v.contains_normalized(qc) {
                    if !Variety::is_canonical_first(p, qc) {
                        return;
                    }
                    // generator PQ; its points are Q and P + tQ, all on V
                    let on = |c: &[Elem]| vmask[v.index_of_rank(v.space().rank(c)).unwrap()];
                    if !on(qc) {
                        return;
                    }
                    let all = fld.elements().skip(1).all(|t| {
                        for k in 0..n {
                            x[k] = fld.add(p[k], fld.mul(t, qc[k]));
                        }
                        on(&x)
                    });
                    if all {
                        gens.push((i, qc.to_vec()));
                    }
                } else if tangent.is_none() && cp.eval(qc).is_zero() {
                    // tangent line PQ: F vanishes at Q and at every P + tQ
                    let all = fld.elements().skip(1).all(|t| {
                        for k in 0..n {
                            x[k] = fld.add(p[k], fld.mul(t, qc[k]));
                        }
                        cp.eval(&x).is_zero()
                    });
                    if all {
                        tangent = Some((i, qc.to_vec()));
                    }
                }
            });
        }
        let line = |(i, qc): &(usize, Vec<Elem>)| Flat::from_vectors(fld, &[v.coords(*i).to_vec(), qc.clone()]).unwrap();
        out.contains_tangent_line = Some(tangent.is_some());
        out.witnesses.tangent_line = tangent.as_ref().map(line);
        out.contains_generator = Some(!gens.is_empty());
        out.witnesses.generator = gens.first().map(line);

        // contained generators lying in a common plane all pass through one point
        let lines: Vec<Flat> = gens.iter().map(line).collect();
        let mut through: HashMap<u32, Vec<usize>> = HashMap::new();
        for (g, l) in lines.iter().enumerate() {
            for r in l.point_ranks(fld, v.space()) {
                through.entry(r).or_default().push(g);
            }
        }
        let mut planes: BTreeMap<Flat, BTreeSet<usize>> = BTreeMap::new();
        for gs in through.values().filter(|gs| gs.len() > 1) {
            for (a, &ga) in gs.iter().enumerate() {
                for &gb in &gs[a + 1..] {
                    let plane = lines[ga].join(fld, &lines[gb]);
                    let e = planes.entry(plane).or_default();
                    e.insert(ga);
                    e.insert(gb);
                }
            }
        }
        let best = planes.iter().max_by_key(|(p, gs)| (gs.len(), std::cmp::Reverse(*p)));
        match best {
            Some((plane, gs)) => {
                out.max_generators_in_one_plane = Some(gs.len() as u32);
                out.witnesses.generator_plane = Some(plane.clone());
            }
            None => out.max_generators_in_one_plane = Some(lines.len().min(1) as u32),
        }
    }

    /// Planes via the lines of `x_0 = 0`, hyperplanes via the planes found.
    fn plane_predicates(&self, f: &HomogeneousPoly, out: &mut StructuralPredicates) {
        let v = self.v;
        let fld = v.field();
        let space = v.space();
        let t = self.tables();
        let z = t.all.zero_mask(f);
        let inside = |x: &Flat| {
            let mut ok = true;
            x.for_each_point(fld, |c| ok = ok && z[space.rank(c) as usize]);
            ok
        };
        let per = fld.size() as usize + 1;
        let mut seen = HashSet::new();
        let mut planes = BTreeSet::new();
        for ranks in t.sigma0_lines.chunks(per) {
            if !ranks.iter().all(|&r| z[r as usize]) {
                continue;
            }
            let pts: Vec<ProjPoint> = [ranks[0], ranks[1]].iter().map(|&r| ProjPoint::from_normalized(space.unrank(r))).collect();
            let line = Flat::span(fld, &pts).unwrap();
            for plane in book_of_planes(fld, &line).unwrap() {
                if seen.insert(plane.clone()) && inside(&plane) {
                    planes.insert(plane);
                }
            }
        }
        let mut hyperplane = None;
        let mut checked = HashSet::new();
        'outer: for plane in &planes {
            for h in hyperplanes_through_plane(fld, plane).unwrap() {
                if checked.insert(h.clone()) && inside(&h) {
                    hyperplane = Some(h);
                    break 'outer;
                }
            }
        }
        out.contains_plane = Some(!planes.is_empty());
        out.witnesses.plane = planes.into_iter().next();
        out.contains_hyperplane = Some(hyperplane.is_some());
        out.witnesses.hyperplane = hyperplane;
    }

    /// Counts, predicates and every bound whose hypothesis holds.
    pub fn audit(&self, f: &HomogeneousPoly) -> Result<AuditReport> {
        self.check(f)?;
        let v = self.v;
        let (q, d, m) = (v.q(), f.degree(), v.m());
        if !(m == 4 && v.is_nondegenerate()) && !(m == 3 && v.form_rank() >= 3) {
            return Err(Error::Precondition("audits need V3 in P^4 or a surface of rank >= 3 in P^3".into()));
        }
        let mode = self.mode();
        let vmask = v.zero_mask(f)?;
        let count = vmask.iter().filter(|&&b| b).count() as u64;
        let zero_set_count =
            if mode == Mode::Exhaustive { Some(self.tables().all.count_zeros(f)) } else { None };
        let pr = self.predicates_with(f, &vmask);

        let (qq, dd) = (q as u64, d as u64);
        let mut bounds = Vec::new();
        let mut add = |name: BoundFormula, against: u64, proven: bool| {
            let value = name.evaluate(qq, dd, m as u32);
            let c = against as i128;
            bounds.push(BoundCheck { name, value, count: against, satisfied: c <= value, strict: c < value, proven });
        };
        if let Some(z) = zero_set_count {
            add(BoundFormula::Serre, z, true);
        }
        add(BoundFormula::LachaudRolland, count, true);
        let mut conjecture = None;
        if m == 3 {
            if v.is_nondegenerate() {
                add(BoundFormula::Sorensen, count, true);
            } else {
                add(BoundFormula::DegenerateSurface, count, true);
            }
        } else {
            let conj = BoundFormula::EdoukouConjecture.evaluate(qq, dd, 4);
            conjecture = Some(ConjectureCheck { value: conj, satisfied: count as i128 <= conj });
            add(BoundFormula::EdoukouConjecture, count, d <= 2 || (d == 3 && q >= 7));
            if d == 2 {
                add(BoundFormula::EdoukouQuadric, count, true);
            }
            if d == 3 && (q >= 7 || pr.contains_hyperplane == Some(true)) {
                add(BoundFormula::MainCubic, count, true);
            }
            if pr.contains_generator == Some(false) {
                add(BoundFormula::NoGenerator, count, true);
            }
            if pr.contains_plane == Some(true) && pr.contains_hyperplane == Some(false) {
                add(BoundFormula::ContainsPlaneNoHyperplane, count, true);
            }
            if pr.contains_plane == Some(false) {
                match pr.max_generators_in_one_plane {
                    Some(g) if g >= d => add(BoundFormula::DGeneratorsInPlane, count, true),
                    Some(g) if g <= 1 => add(BoundFormula::AtMostOneGenerator, count, true),
                    _ => {}
                }
                if pr.contains_tangent_line == Some(true) {
                    add(BoundFormula::TangentLineCase, count, true);
                }
            }
        }
        let violations = bounds.iter().filter(|b| b.proven && !b.satisfied).map(|b| b.name).collect();
        let findings = bounds.iter().filter(|b| !b.proven && !b.satisfied).map(|b| b.name).collect();
        let mut flags = Vec::new();
        let ceiling = 2 * qq.pow(5) + qq * qq + 1;
        if m == 4 && d == 2 && count > ceiling && v.classify_quadric(f)?.tag == QuadricTag::Other {
            flags.push(format!("quadric outside Types I-III meets the variety in {count} > {ceiling} points"));
        }
        Ok(AuditReport {
            q,
            d,
            m,
            mode,
            intersection_count: count,
            zero_set_count,
            predicates: pr,
            applicable_bounds: bounds,
            conjecture_bound: conjecture,
            violations,
            findings,
            flags,
        })
    }

    /// `(lhs, rhs)` of the incidence count between `V(F) ∩ V` and the
    /// generators: lhs sums generators through each point, rhs sums points on
    /// each generator.
    pub fn incidence_double_count(&self, f: &HomogeneousPoly) -> Result<(u64, u64)> {
        let v = self.v;
        if v.m() != 4 || !v.is_nondegenerate() {
            return Err(Error::Precondition("the double count needs V3 in P^4".into()));
        }
        let vmask = v.zero_mask(f)?;
        let on = |r: u32| v.index_of_rank(r).is_some_and(|i| vmask[i]);
        let hits: Vec<usize> = (0..v.len()).filter(|&i| vmask[i]).collect();
        let mut lhs = 0u64;
        for &i in &hits {
            v.for_each_generator_through(v.coords(i), |_| lhs += 1);
        }
        let per = v.field().size() as usize + 1;
        let rhs = if self.mode() == Mode::Exhaustive {
            let t = self.tables();
            t.generators.chunks(per).map(|g| g.iter().filter(|&&r| on(r)).count() as u64).sum()
        } else {
            // each generator meeting V(F), counted from its lowest-rank zero
            let fld = v.field();
            let mut rhs = 0u64;
            for &i in &hits {
                let p = v.coords(i);
                let pr = v.ranks()[i];
                v.for_each_generator_through(p, |qc| {
                    let line = Flat::from_vectors(fld, &[p.to_vec(), qc.to_vec()]).unwrap();
                    let zs: Vec<u32> = line.point_ranks(fld, v.space()).into_iter().filter(|&r| on(r)).collect();
                    if zs.iter().min() == Some(&pr) {
                        rhs += zs.len() as u64;
                    }
                });
            }
            rhs
        };
        Ok((lhs, rhs))
    }
}

/// Lines through `p` contained in the surface `V(G)` of P^3.
pub fn lines_through_point_on_surface(
    field: &crate::field::Field,
    g: &HomogeneousPoly,
    p: &ProjPoint,
) -> Result<Vec<Flat>> {
    if g.nvars() != 4 {
        return Err(Error::ArityMismatch { expected: 4, got: g.nvars() });
    }
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.ambient_dim() != 3 {
        return Err(Error::DimensionMismatch("point must lie in P^3".into()));
    }
    if !g.evaluate(field, p)?.is_zero() {
        return Err(Error::PointNotOnSurface);
    }
    Ok(lines_through(field, p).filter(|l| g.contains_flat(field, l)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cone_poly, edoukou_extremal};
    use crate::field::Field;
    use crate::plane_cubic::{classify_plane_cubic, CubicTag};
    use crate::projective::Flat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn predicates_of_known_threefolds() {
        let v = Variety::standard(2).unwrap();
        let a = Auditor::new(&v);
        let (f, _) = edoukou_extremal(&v, 2).unwrap();
        let p = a.structural_predicates(&f).unwrap();
        assert_eq!(p.contains_hyperplane, Some(true));
        assert_eq!(p.contains_plane, Some(true));
        assert!(f.contains_flat(v.field(), p.witnesses.hyperplane.as_ref().unwrap()));
        let h = v.form().poly(v.field()).unwrap();
        let p = a.structural_predicates(&h).unwrap();
        assert_eq!(p.contains_generator, Some(true));
        assert_eq!(p.contains_plane, Some(false));
        assert_eq!(p.contains_hyperplane, Some(false));
        assert_eq!(p.contains_tangent_line, Some(false));
        assert_eq!(p.max_generators_in_one_plane, Some(3));
        let plane = p.witnesses.generator_plane.unwrap();
        assert_eq!(v.classify_plane_section(&plane).unwrap().tag, crate::hermitian::PlaneTag::ConcurrentLines);
    }

    #[test]
    fn double_counts() {
        let v = Variety::standard(2).unwrap();
        let a = Auditor::new(&v);
        let h = v.form().poly(v.field()).unwrap();
        assert_eq!(a.incidence_double_count(&h).unwrap(), (1485, 1485));
        let x0 = HomogeneousPoly::linear(v.field(), &[Elem::ONE, Elem::ZERO, Elem::ZERO, Elem::ZERO, Elem::ZERO]);
        assert_eq!(a.incidence_double_count(&x0).unwrap(), (405, 405));
        // the restricted rhs agrees with the table rhs
        let cheap = Auditor { v: &v, budget: 0, tables: OnceLock::new() };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let f = HomogeneousPoly::random(v.field(), 5, 2, &mut rng);
            let (l, r) = a.incidence_double_count(&f).unwrap();
            assert_eq!(l, r);
            let vmask = v.zero_mask(&f).unwrap();
            let mut rhs = 0;
            for i in (0..v.len()).filter(|&i| vmask[i]) {
                let p = v.coords(i);
                let pr = v.ranks()[i];
                v.for_each_generator_through(p, |qc| {
                    let line = Flat::from_vectors(v.field(), &[p.to_vec(), qc.to_vec()]).unwrap();
                    let zs: Vec<u32> = line
                        .point_ranks(v.field(), v.space())
                        .into_iter()
                        .filter(|&r| v.index_of_rank(r).is_some_and(|j| vmask[j]))
                        .collect();
                    if zs.iter().min() == Some(&pr) {
                        rhs += zs.len() as u64;
                    }
                });
            }
            assert_eq!(rhs, r);
            assert_eq!(cheap.incidence_double_count(&f).unwrap().0, l);
        }
    }

    #[test]
    fn audit_of_extremal_cubic() {
        let v = Variety::standard(3).unwrap();
        let a = Auditor::new(&v);
        let (f, _) = edoukou_extremal(&v, 3).unwrap();
        let r = a.audit(&f).unwrap();
        assert_eq!(r.intersection_count, 784);
        let c = r.conjecture_bound.unwrap();
        assert_eq!((c.value, c.satisfied), (784, true));
        assert!(r.applicable_bounds.iter().any(|b| b.name == BoundFormula::MainCubic && b.satisfied && !b.strict));
        assert!(r.violations.is_empty());
    }

    #[test]
    fn no_generator_bound_is_listed() {
        let v = Variety::standard(3).unwrap();
        let a = Auditor::new(&v);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = loop {
            let f = HomogeneousPoly::random(v.field(), 5, 3, &mut rng);
            if a.structural_predicates(&f).unwrap().contains_generator == Some(false) {
                break f;
            }
        };
        let r = a.audit(&f).unwrap();
        let b = r.applicable_bounds.iter().find(|b| b.name == BoundFormula::NoGenerator).unwrap();
        assert_eq!(b.value, 732);
        assert!(b.satisfied);
    }

    #[test]
    fn lines_on_surfaces() {
        let f = Field::quadratic(2).unwrap();
        let plane = HomogeneousPoly::linear(&f, &[Elem::ONE, Elem::ONE, Elem::ZERO, Elem::ZERO]);
        let p = ProjPoint::new(&f, vec![Elem::ONE, Elem::ONE, Elem::ZERO, Elem::ZERO]).unwrap();
        // the lines through P inside a plane form a pencil of q^2 + 1
        assert_eq!(lines_through_point_on_surface(&f, &plane, &p).unwrap().len(), 5);
        let off = ProjPoint::new(&f, vec![Elem::ONE, Elem::ZERO, Elem::ZERO, Elem::ZERO]).unwrap();
        assert!(matches!(lines_through_point_on_surface(&f, &plane, &off), Err(Error::PointNotOnSurface)));

        // cone with vertex P over the Fermat cubic in x0 = 0
        let c = HomogeneousPoly::from_terms(
            &f,
            3,
            3,
            [(vec![3, 0, 0], Elem::ONE), (vec![0, 3, 0], Elem::ONE), (vec![0, 0, 3], Elem::ONE)],
        )
        .unwrap();
        assert_eq!(classify_plane_cubic(&f, &c).unwrap().tag, CubicTag::AbsolutelyIrreducible);
        let n = c.zero_set(&f).unwrap().len();
        let base = Flat::coordinate_hyperplane(&f, 3, 0);
        let g = cone_poly(&f, &off, &c, &base).unwrap();
        assert_eq!(lines_through_point_on_surface(&f, &g, &off).unwrap().len(), n);
    }
}
