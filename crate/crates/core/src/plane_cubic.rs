//! Linear factors of plane curves and the absolute-irreducibility test for
//! plane cubics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::CompiledPoly;
use crate::field::{Elem, Field, FieldSpec};
use crate::poly::HomogeneousPoly;

/// Most dual-plane lines a factor scan may visit.
pub const DUAL_PLANE_BUDGET: u64 = 1 << 21;

/// Linear factors found over an extension, as normalized coefficient triples.
#[derive(Clone, Debug)]
pub struct LinearFactors {
    pub field: Field,
    pub forms: Vec<[Elem; 3]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CubicTag {
    AbsolutelyIrreducible,
    IrreducibleNotAbsolutely,
    Reducible,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaneCubicClass {
    pub tag: CubicTag,
    /// Linear factors found; over the base field for `Reducible`, over the
    /// cubic extension for `IrreducibleNotAbsolutely`.
    pub witnesses: Vec<[Elem; 3]>,
    pub witness_field: Option<FieldSpec>,
}

/// Extension of degree `e` of `field`, with the embedding of `field` into it.
pub fn extension(field: &Field, e: u32) -> Result<(Field, Vec<Elem>)> {
    if e == 1 {
        return Ok((field.clone(), field.elements().collect()));
    }
    let big = Field::new(field.p(), field.k() * e)?;
    let emb = field.embedding_into(&big)?;
    Ok((big, emb))
}

/// All lines over the degree-`ext` extension that are components of the plane
/// curve `c`, each normalized so its first nonzero coefficient is 1.
pub fn linear_factors_over(field: &Field, c: &HomogeneousPoly, ext: u32) -> Result<LinearFactors> {
    if c.nvars() != 3 {
        return Err(Error::ArityMismatch { expected: 3, got: c.nvars() });
    }
    if c.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !(1..=3).contains(&ext) {
        return Err(Error::Precondition(format!("extension degree {ext} not in 1..=3")));
    }
    let big_size = (field.size() as u64).checked_pow(ext).unwrap_or(u64::MAX);
    let lines = big_size * big_size + big_size + 1;
    if lines > DUAL_PLANE_BUDGET {
        return Err(Error::SizeBudgetExceeded(format!("{lines} lines in the dual plane")));
    }
    let (big, emb) = extension(field, ext)?;
    let cb = c.map_coeffs(&big, |x| emb[x.0 as usize]);
    let cp = CompiledPoly::new(&big, &cb);
    let d = c.degree() as usize;
    let params: Vec<Elem> = big.elements().take(d + 1).collect();
    let mut forms = Vec::new();
    let contained = |p0: [Elem; 3], p1: [Elem; 3]| -> bool {
        // p0 and p0*t + p1 for t in d distinct values give d + 1 distinct points
        if !cp.eval(&p0).is_zero() {
            return false;
        }
        params[..d].iter().all(|&t| {
            let x: Vec<Elem> = (0..3).map(|i| big.add(big.mul(p0[i], t), p1[i])).collect();
            cp.eval(&x).is_zero()
        })
    };
    let z = Elem::ZERO;
    let one = Elem::ONE;
    // x2 = 0
    if contained([one, z, z], [z, one, z]) {
        forms.push([z, z, one]);
    }
    // x1 + c x2 = 0 through (1, 0, 0) and (0, -c, 1)
    for cc in big.elements() {
        if contained([one, z, z], [z, big.neg(cc), one]) {
            forms.push([z, one, cc]);
        }
    }
    // x0 + b x1 + c x2 = 0 through (-b, 1, 0) and (-c, 0, 1)
    for b in big.elements() {
        let pb = [big.neg(b), one, z];
        if !cp.eval(&pb).is_zero() {
            continue;
        }
        for cc in big.elements() {
            if contained(pb, [big.neg(cc), z, one]) {
                forms.push([one, b, cc]);
            }
        }
    }
    Ok(LinearFactors { field: big, forms })
}

/// Classifies a plane cubic by its linear factors over the base field and
/// over the cubic extension.
pub fn classify_plane_cubic(field: &Field, c: &HomogeneousPoly) -> Result<PlaneCubicClass> {
    if c.nvars() != 3 {
        return Err(Error::ArityMismatch { expected: 3, got: c.nvars() });
    }
    if c.degree() != 3 {
        return Err(Error::NotHomogeneous { expected: 3, got: c.degree() });
    }
    let base = linear_factors_over(field, c, 1)?;
    if !base.forms.is_empty() {
        return Ok(PlaneCubicClass {
            tag: CubicTag::Reducible,
            witnesses: base.forms,
            witness_field: Some(field.spec()),
        });
    }
    let cubic = linear_factors_over(field, c, 3)?;
    if cubic.forms.is_empty() {
        return Ok(PlaneCubicClass { tag: CubicTag::AbsolutelyIrreducible, witnesses: vec![], witness_field: None });
    }
    let big = &cubic.field;
    let frob = |l: &[Elem; 3]| -> [Elem; 3] { l.map(|x| big.pow(x, field.size() as u64)) };
    let orbit_closed = cubic.forms.len() == 3 && cubic.forms.iter().all(|l| cubic.forms.contains(&frob(l)));
    if !orbit_closed {
        return Err(Error::TrichotomyViolated(format!(
            "cubic without rational components has {} non-conjugate components over the cubic extension",
            cubic.forms.len()
        )));
    }
    Ok(PlaneCubicClass {
        tag: CubicTag::IrreducibleNotAbsolutely,
        witnesses: cubic.forms,
        witness_field: Some(big.spec()),
    })
}

/// The cubic `L * L^s * L^{s^2}` for `L = x0 + b x1 + c x2` over the cubic
/// extension, written over the base field. The three lines are distinct when
/// `b, c` are not both in the base field, and concurrent when `c = 0`.
pub fn conjugate_line_cubic(field: &Field, big: &Field, emb: &[Elem], b: Elem, c: Elem) -> Result<HomogeneousPoly> {
    let s = field.size() as u64;
    let conj = |x: Elem, i: u32| big.pow(x, s.pow(i));
    let factors: Vec<HomogeneousPoly> = (0..3)
        .map(|i| HomogeneousPoly::linear(big, &[Elem::ONE, conj(b, i), conj(c, i)]))
        .collect();
    let prod = HomogeneousPoly::product(big, &factors)?;
    let mut back = vec![u32::MAX; big.size() as usize];
    for (i, &e) in emb.iter().enumerate() {
        back[e.0 as usize] = i as u32;
    }
    let mut terms = Vec::new();
    for (e, v) in prod.terms() {
        let small = back[v.0 as usize];
        if small == u32::MAX {
            return Err(Error::Precondition("product of conjugate lines left the base field".into()));
        }
        terms.push((e.clone(), Elem(small)));
    }
    HomogeneousPoly::from_terms(field, 3, 3, terms)
}
