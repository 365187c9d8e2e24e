//! Deterministic builders for the extremal configurations.
//!
//! Every builder scans in canonical enumeration order, takes the first
//! witness, and recounts the result by enumeration before returning.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::hermitian::{HermitianForm, PlaneTag, Variety};
use crate::linalg;
use crate::poly::HomogeneousPoly;
use crate::projective::{enumerate_flats, proj_count, Flat, ProjPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CertKind {
    EdoukouExtremal,
    SorensenExtremal,
    DegenerateConeExtremal,
    QuadricTypeI,
    QuadricTypeII,
    QuadricTypeIII,
    SerreExtremal,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtremalCertificate {
    pub kind: CertKind,
    pub q: u32,
    pub d: u32,
    pub m: usize,
    pub claimed_count: u64,
    /// The flats used: the factor hyperplanes (or planes) followed by their
    /// common flat, or the base lines for cones.
    pub components: Vec<Flat>,
}

impl ExtremalCertificate {
    /// Certificate and polynomial as one JSON document.
    pub fn document(&self, field: &Field, poly: &HomogeneousPoly) -> Value {
        json!({ "certificate": self, "polynomial": poly.to_json(field) })
    }
}

/// Closed-form values the certificates claim.
pub mod claims {
    pub fn edoukou(q: u64, d: u64) -> u64 {
        d * (q.pow(5) + q * q) + q.pow(3) + 1
    }

    pub fn sorensen(q: u64, d: u64) -> u64 {
        d * (q.pow(3) + q * q - q) + q + 1
    }

    pub fn degenerate(q: u64, d: u64) -> u64 {
        d * (q + 1) * q * q + 1
    }

    pub fn quadric_type_i(q: u64) -> u64 {
        2 * (q.pow(5) + q * q) + q.pow(3) + 1
    }

    pub fn quadric_type_ii(q: u64) -> u64 {
        2 * q.pow(5) + q.pow(3) + q * q + 1
    }

    pub fn quadric_type_iii(q: u64) -> u64 {
        2 * q.pow(5) + 2 * q * q + 1
    }

    /// `d s^{m-1} + (s^{m-1} - 1)/(s - 1)` over a field of size s.
    pub fn serre(s: u64, d: u64, m: u32) -> u64 {
        d * s.pow(m - 1) + super::proj_count(s, m - 1)
    }
}

fn check_degree(q: u32, d: u32) -> Result<()> {
    if d < 2 || d > q {
        return Err(Error::Precondition(format!("need 2 <= d <= q, got d = {d}, q = {q}")));
    }
    Ok(())
}

fn certify(claimed: u64, counted: u64) -> Result<()> {
    if claimed != counted {
        return Err(Error::CertificateMismatch { claimed, counted });
    }
    Ok(())
}

fn require(v: &Variety, m: usize) -> Result<()> {
    if v.m() != m {
        return Err(Error::DimensionMismatch(format!("expected a variety in P^{m}, got P^{}", v.m())));
    }
    if !v.is_nondegenerate() {
        return Err(Error::DegenerateForm);
    }
    Ok(())
}

fn product_of_flats(field: &Field, flats: &[Flat]) -> Result<HomogeneousPoly> {
    let forms: Vec<HomogeneousPoly> = flats
        .iter()
        .map(|h| h.normal(field).map(|n| HomogeneousPoly::linear(field, &n)))
        .collect::<Result<_>>()?;
    HomogeneousPoly::product(field, &forms)
}

/// `d` non-tangent hyperplanes through a plane whose section is a
/// non-degenerate Hermitian curve.
pub fn edoukou_extremal(v: &Variety, d: u32) -> Result<(HomogeneousPoly, ExtremalCertificate)> {
    require(v, 4)?;
    let q = v.q();
    check_degree(q, d)?;
    let f = v.field();
    let mut best = 0;
    for plane in enumerate_flats(f, 4, 2) {
        if v.classify_plane_section(&plane)?.tag != PlaneTag::NonDegenerateCurve {
            continue;
        }
        let mut chosen = Vec::new();
        for h in plane.flats_one_up(f) {
            if v.tangency_point(&h.normal(f)?)?.is_none() {
                chosen.push(h);
                if chosen.len() == d as usize {
                    break;
                }
            }
        }
        if chosen.len() < d as usize {
            best = best.max(chosen.len());
            continue;
        }
        let poly = product_of_flats(f, &chosen)?;
        let claimed = claims::edoukou(q as u64, d as u64);
        certify(claimed, v.count_intersection(&poly)?)?;
        chosen.push(plane);
        let cert = ExtremalCertificate { kind: CertKind::EdoukouExtremal, q, d, m: 4, claimed_count: claimed, components: chosen };
        return Ok((poly, cert));
    }
    Err(Error::InsufficientNonTangent { needed: d as usize, found: best })
}

/// `d` tangent planes of the surface through a common secant line.
pub fn sorensen_extremal(v: &Variety, d: u32) -> Result<(HomogeneousPoly, ExtremalCertificate)> {
    require(v, 3)?;
    let q = v.q();
    check_degree(q, d)?;
    let f = v.field();
    let line = enumerate_flats(f, 3, 1)
        .find(|l| v.count_on_flat(l) == q as u64 + 1)
        .ok_or_else(|| Error::ConstructionNotFound("secant line".into()))?;
    let mut chosen = Vec::new();
    for plane in line.flats_one_up(f) {
        if v.tangency_point(&plane.normal(f)?)?.is_some() {
            chosen.push(plane);
            if chosen.len() == d as usize {
                break;
            }
        }
    }
    if chosen.len() < d as usize {
        return Err(Error::InsufficientPlanes { needed: d as usize, found: chosen.len() });
    }
    let poly = product_of_flats(f, &chosen)?;
    let claimed = claims::sorensen(q as u64, d as u64);
    certify(claimed, v.count_intersection(&poly)?)?;
    chosen.push(line);
    Ok((poly, ExtremalCertificate { kind: CertKind::SorensenExtremal, q, d, m: 3, claimed_count: claimed, components: chosen }))
}

/// The rank-3 form `diag(1, 1, 1, 0)` on P^3: a cone with vertex `(0:0:0:1)`
/// over the Hermitian curve in the plane `x3 = 0`.
pub fn rank3_surface(field: &Field) -> Result<HermitianForm> {
    HermitianForm::diagonal(field, &[Elem::ONE, Elem::ONE, Elem::ONE, Elem::ZERO])
}

/// Points of the cone with vertex `p` over the curve `c = 0` in the hyperplane
/// `base`, where `c` is written in the coordinates of `base`'s RREF basis.
pub fn cone(field: &Field, p: &ProjPoint, c: &HomogeneousPoly, base: &Flat) -> Result<BTreeSet<ProjPoint>> {
    if base.contains_point(field, p) {
        return Err(Error::VertexOnBase);
    }
    if c.nvars() != base.dim() + 1 {
        return Err(Error::ArityMismatch { expected: base.dim() + 1, got: c.nvars() });
    }
    let mut out = BTreeSet::new();
    out.insert(p.clone());
    let mut b = vec![Elem::ZERO; p.coords().len()];
    for coeff in c.zero_set(field)? {
        base.combine(field, coeff.coords(), &mut b);
        for t in field.elements() {
            let x: Vec<Elem> = b.iter().zip(p.coords()).map(|(&u, &w)| field.add(u, field.mul(t, w))).collect();
            out.insert(ProjPoint::new(field, x)?);
        }
    }
    Ok(out)
}

/// Polynomial of the cone: `c` composed with the projection from `p` onto `base`.
pub fn cone_poly(field: &Field, p: &ProjPoint, c: &HomogeneousPoly, base: &Flat) -> Result<HomogeneousPoly> {
    if base.contains_point(field, p) {
        return Err(Error::VertexOnBase);
    }
    if base.dim() + 1 != base.ambient_dim() {
        return Err(Error::DimensionMismatch("cone base must be a hyperplane".into()));
    }
    let mut rows = base.basis().clone();
    rows.push(p.coords().to_vec());
    // x = y B, so y = x B^{-1}; the first dim+1 entries of y are the base coordinates
    let binv = linalg::inverse(field, &rows)?;
    let lin: Vec<Vec<Elem>> = (0..=base.dim()).map(|i| binv.iter().map(|r| r[i]).collect()).collect();
    c.substitute_linear(field, &lin)
}

/// A degree-d cone over `d` secant lines of the base Hermitian curve with
/// pairwise disjoint meeting sets, against the rank-3 surface.
pub fn degenerate_extremal(field: &Field, d: u32) -> Result<(HomogeneousPoly, ExtremalCertificate)> {
    let q = field.q()?;
    check_degree(q, d)?;
    let form = rank3_surface(field)?;
    let v = Variety::new(field, form)?;
    let base_form = HermitianForm::identity(field, 2);
    let curve = Variety::new(field, base_form)?;
    let mut chosen: Vec<Flat> = Vec::new();
    let mut used: BTreeSet<u32> = BTreeSet::new();
    for line in enumerate_flats(field, 2, 1) {
        let ranks: Vec<u32> = line.point_ranks(field, curve.space()).into_iter().filter(|&r| curve.contains_rank(r)).collect();
        if ranks.len() != q as usize + 1 || ranks.iter().any(|r| used.contains(r)) {
            continue;
        }
        used.extend(ranks);
        chosen.push(line);
        if chosen.len() == d as usize {
            break;
        }
    }
    if chosen.len() < d as usize {
        return Err(Error::BaseCurveSearchFailed);
    }
    let base_poly = product_of_flats(field, &chosen)?;
    let vertex = ProjPoint::from_normalized(vec![Elem::ZERO, Elem::ZERO, Elem::ZERO, Elem::ONE]);
    let base = Flat::coordinate_hyperplane(field, 3, 3);
    let poly = cone_poly(field, &vertex, &base_poly, &base)?;
    let claimed = claims::degenerate(q as u64, d as u64);
    certify(claimed, v.count_intersection(&poly)?)?;
    // the base lines as planes through the vertex
    let components = chosen
        .iter()
        .map(|l| {
            let mut rows: Vec<Vec<Elem>> = l.basis().iter().map(|r| [r.as_slice(), &[Elem::ZERO]].concat()).collect();
            rows.push(vertex.coords().to_vec());
            Flat::from_vectors(field, &rows).unwrap()
        })
        .collect();
    Ok((poly, ExtremalCertificate { kind: CertKind::DegenerateConeExtremal, q, d, m: 3, claimed_count: claimed, components }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum QuadricKind {
    TypeI,
    TypeII,
    TypeIII,
}

/// Two hyperplanes meeting the tangency and section conditions of the kind.
pub fn quadric_of_type(v: &Variety, kind: QuadricKind) -> Result<(HomogeneousPoly, ExtremalCertificate)> {
    require(v, 4)?;
    let q = v.q();
    let f = v.field();
    let (want_section, tangent_needed, cert_kind, claimed) = match kind {
        QuadricKind::TypeI => (PlaneTag::NonDegenerateCurve, 0, CertKind::QuadricTypeI, claims::quadric_type_i(q as u64)),
        QuadricKind::TypeII => (PlaneTag::ConcurrentLines, 0, CertKind::QuadricTypeII, claims::quadric_type_ii(q as u64)),
        QuadricKind::TypeIII => (PlaneTag::NonDegenerateCurve, 1, CertKind::QuadricTypeIII, claims::quadric_type_iii(q as u64)),
    };
    for plane in enumerate_flats(f, 4, 2) {
        if v.classify_plane_section(&plane)?.tag != want_section {
            continue;
        }
        let mut tangent = Vec::new();
        let mut non_tangent = Vec::new();
        for h in plane.flats_one_up(f) {
            if v.tangency_point(&h.normal(f)?)?.is_some() {
                tangent.push(h);
            } else {
                non_tangent.push(h);
            }
        }
        let pick: Vec<Flat> = if tangent_needed == 1 {
            if tangent.is_empty() || non_tangent.is_empty() {
                continue;
            }
            vec![tangent[0].clone(), non_tangent[0].clone()]
        } else {
            if non_tangent.len() < 2 {
                continue;
            }
            non_tangent[..2].to_vec()
        };
        let poly = product_of_flats(f, &pick)?;
        certify(claimed, v.count_intersection(&poly)?)?;
        let mut components = pick;
        components.push(plane);
        return Ok((poly, ExtremalCertificate { kind: cert_kind, q, d: 2, m: 4, claimed_count: claimed, components }));
    }
    Err(Error::ConstructionNotFound(format!("{kind:?} quadric")))
}

/// `d` hyperplanes through the codimension-2 flat `x0 = x1 = 0` of P^m:
/// `x0 + a x1` for `a` in index order, then `x1`.
pub fn serre_extremal(field: &Field, d: u32, m: usize) -> Result<(HomogeneousPoly, ExtremalCertificate)> {
    let s = field.size();
    if d < 1 || d > s {
        return Err(Error::Precondition(format!("need 1 <= d <= {s}, got {d}")));
    }
    if m < 2 {
        return Err(Error::Precondition("need m >= 2".into()));
    }
    let normals: Vec<Vec<Elem>> = field
        .elements()
        .map(|a| {
            let mut n = vec![Elem::ZERO; m + 1];
            n[0] = Elem::ONE;
            n[1] = a;
            n
        })
        .chain(std::iter::once({
            let mut n = vec![Elem::ZERO; m + 1];
            n[1] = Elem::ONE;
            n
        }))
        .take(d as usize)
        .collect();
    let forms: Vec<HomogeneousPoly> = normals.iter().map(|n| HomogeneousPoly::linear(field, n)).collect();
    let poly = HomogeneousPoly::product(field, &forms)?;
    let claimed = claims::serre(s as u64, d as u64, m as u32);
    certify(claimed, poly.zero_set(field)?.len() as u64)?;
    let mut components: Vec<Flat> = normals.iter().map(|n| Flat::hyperplane(field, n)).collect::<Result<_>>()?;
    let mut axis = vec![vec![Elem::ZERO; m + 1], vec![Elem::ZERO; m + 1]];
    axis[0][0] = Elem::ONE;
    axis[1][1] = Elem::ONE;
    let ann = linalg::null_space(field, &axis, m + 1);
    components.push(Flat::from_vectors(field, &ann).unwrap());
    let q = field.q().unwrap_or(0);
    Ok((poly, ExtremalCertificate { kind: CertKind::SerreExtremal, q, d, m, claimed_count: claimed, components }))
}
