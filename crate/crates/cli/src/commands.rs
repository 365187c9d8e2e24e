use serde::Serialize;
use serde_json::{json, Value};

use hvlab::audit::identities::verify_identity_suite;
use hvlab::audit::sampling::{sample_against, SamplingReport};
use hvlab::audit::{Auditor, BoundFormula};
use hvlab::constructions::{
    degenerate_extremal, edoukou_extremal, quadric_of_type, rank3_surface, serre_extremal, sorensen_extremal,
    ExtremalCertificate, QuadricKind,
};
use hvlab::plane_cubic::{classify_plane_cubic, CubicTag};
use hvlab::{Field, Flat, HermitianForm, HomogeneousPoly, Variety};

use crate::{ClassifyKind, ConstructKind, Failure, FormArg, Outcome, Params, QuadricArg, VerifyKind};

type Res<T> = Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn mode(q: u32) -> &'static str {
    if q <= hvlab::audit::EXHAUSTIVE_MAX_Q {
        "exhaustive"
    } else {
        "sampled"
    }
}

fn outcome(p: &Params, d: Option<u32>, result: Value) -> Outcome {
    Outcome {
        d,
        mode: mode(p.q),
        identities: vec![],
        bounds: vec![],
        violations: vec![],
        result,
    }
}

fn bound(name: impl Serialize, value: i128, count: u64, ok: bool) -> Value {
    json!({ "name": name, "value": value, "count": count, "ok": ok })
}

fn read_input(p: &Params) -> Res<Value> {
    let path = p.input.as_ref().ok_or_else(|| usage("--in is required"))?;
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// The polynomial of a bare polynomial document, a certificate document, or
/// a report wrapping one.
fn read_poly(p: &Params) -> Res<(Field, HomogeneousPoly)> {
    let v = read_input(p)?;
    let doc = v
        .pointer("/result/polynomial")
        .or_else(|| v.get("polynomial"))
        .unwrap_or(&v);
    let (field, poly) = HomogeneousPoly::from_json(doc)?;
    if field.spec() != Field::quadratic(p.q)?.spec() {
        return Err(usage(format!("the polynomial is not over F_{{q^2}} for q = {}", p.q)));
    }
    Ok((field, poly))
}

fn read_flat(p: &Params, field: &Field) -> Res<Flat> {
    let v = read_input(p)?;
    let doc = v.get("flat").cloned().unwrap_or(v);
    let raw: Flat = serde_json::from_value(doc).map_err(|e| usage(format!("malformed flat: {e}")))?;
    let rows = raw.basis();
    if rows.iter().flatten().any(|e| e.0 >= field.size()) {
        return Err(usage("flat coordinates outside the field"));
    }
    let flat = Flat::from_vectors(field, rows).ok_or_else(|| usage("flat basis is zero"))?;
    if flat.dim() != raw.dim() {
        return Err(usage("flat basis rows are dependent"));
    }
    Ok(flat)
}

fn variety(field: &Field, m: usize, form: FormArg) -> Res<Variety> {
    if !(2..=4).contains(&m) {
        return Err(usage(format!("ambient dimension {m} not in 2..=4")));
    }
    let form = match form {
        FormArg::Rank3 if m == 3 => rank3_surface(field)?,
        FormArg::Rank3 => return Err(usage("--form rank3 needs --m 3")),
        FormArg::Standard => HermitianForm::identity(field, m),
    };
    Ok(Variety::new(field, form)?)
}

fn cert_outcome(p: &Params, field: &Field, poly: &HomogeneousPoly, cert: &ExtremalCertificate, name: BoundFormula) -> Outcome {
    let value = name.evaluate(p.q as u64, cert.d as u64, cert.m as u32);
    let c = cert.claimed_count;
    let mut o = outcome(p, Some(cert.d), cert.document(field, poly));
    o.bounds.push(bound(name, value, c, c as i128 <= value));
    if c as i128 > value {
        o.violations.push(json!({ "bound": name, "value": value, "count": c }));
    }
    o
}

fn quadric_kind(k: QuadricArg) -> QuadricKind {
    match k {
        QuadricArg::TypeI => QuadricKind::TypeI,
        QuadricArg::TypeIi => QuadricKind::TypeII,
        QuadricArg::TypeIii => QuadricKind::TypeIII,
    }
}

pub fn construct(kind: ConstructKind, p: &Params) -> Res<Outcome> {
    let field = Field::quadratic(p.q)?;
    let (poly, cert, name) = match kind {
        ConstructKind::Edoukou => {
            let v = variety(&field, 4, FormArg::Standard)?;
            let (f, c) = edoukou_extremal(&v, p.d)?;
            (f, c, BoundFormula::EdoukouConjecture)
        }
        ConstructKind::Sorensen => {
            let v = variety(&field, 3, FormArg::Standard)?;
            let (f, c) = sorensen_extremal(&v, p.d)?;
            (f, c, BoundFormula::Sorensen)
        }
        ConstructKind::Degenerate => {
            let (f, c) = degenerate_extremal(&field, p.d)?;
            (f, c, BoundFormula::DegenerateSurface)
        }
        ConstructKind::Quadric => {
            let v = variety(&field, 4, FormArg::Standard)?;
            let (f, c) = quadric_of_type(&v, quadric_kind(p.quadric_type))?;
            (f, c, BoundFormula::EdoukouQuadric)
        }
        ConstructKind::Serre => {
            let (f, c) = serre_extremal(&field, p.d, p.m)?;
            (f, c, BoundFormula::Serre)
        }
    };
    Ok(cert_outcome(p, &field, &poly, &cert, name))
}

pub fn classify(kind: ClassifyKind, p: &Params) -> Res<Outcome> {
    let field = Field::quadratic(p.q)?;
    match kind {
        ClassifyKind::Line | ClassifyKind::Plane | ClassifyKind::Hyperplane => {
            let flat = read_flat(p, &field)?;
            let v = variety(&field, flat.ambient_dim(), p.form)?;
            let want = match kind {
                ClassifyKind::Line => 1,
                ClassifyKind::Plane => 2,
                _ => flat.ambient_dim() - 1,
            };
            if flat.dim() != want {
                return Err(usage(format!("expected a {want}-flat, got a {}-flat", flat.dim())));
            }
            let class = match kind {
                ClassifyKind::Line => json!(v.classify_line(&flat)?),
                ClassifyKind::Plane => json!(v.classify_plane_section(&flat)?),
                _ => json!(v.classify_hyperplane_section(&flat)?),
            };
            Ok(outcome(p, None, json!({ "flat": flat, "class": class })))
        }
        ClassifyKind::Quadric => {
            let (field, f) = read_poly(p)?;
            let v = variety(&field, f.nvars().saturating_sub(1), FormArg::Standard)?;
            let class = v.classify_quadric(&f)?;
            let count = v.count_intersection(&f)?;
            Ok(outcome(p, Some(2), json!({ "class": class, "intersection_count": count })))
        }
        ClassifyKind::PlaneCubic => {
            let (field, c) = read_poly(p)?;
            let class = classify_plane_cubic(&field, &c)?;
            let n = c.zero_set(&field)?.len() as u64;
            let mut o = outcome(p, Some(3), json!({ "class": class, "rational_points": n }));
            if class.tag == CubicTag::AbsolutelyIrreducible {
                let s = field.size() as i64;
                let dev = (n as i64 - (s + 1)).unsigned_abs();
                let value = BoundFormula::AubryPerret.evaluate(p.q as u64, 3, 2);
                o.bounds.push(bound(BoundFormula::AubryPerret, value, dev, dev as i128 <= value));
                if dev as i128 > value {
                    o.violations.push(json!({ "bound": BoundFormula::AubryPerret, "value": value, "count": dev }));
                }
            } else if class.tag == CubicTag::IrreducibleNotAbsolutely && n > 1 {
                o.violations.push(json!({ "bound": "IrreducibleNotAbsolutelyAtMostOnePoint", "count": n }));
            }
            Ok(o)
        }
    }
}

pub fn count(p: &Params) -> Res<Outcome> {
    let (field, f) = read_poly(p)?;
    let v = variety(&field, f.nvars().saturating_sub(1), p.form)?;
    let n = v.count_intersection(&f)?;
    Ok(outcome(p, Some(f.degree()), json!({ "intersection_count": n, "variety_count": v.len() })))
}

pub fn audit(p: &Params) -> Res<Outcome> {
    let (field, f) = read_poly(p)?;
    let v = variety(&field, f.nvars().saturating_sub(1), p.form)?;
    let a = Auditor::new(&v);
    let r = a.audit(&f)?;
    let mut o = outcome(p, Some(f.degree()), Value::Null);
    for b in &r.applicable_bounds {
        o.bounds.push(json!({
            "name": b.name, "value": b.value, "count": b.count, "ok": b.satisfied,
            "strict": b.strict, "proven": b.proven,
        }));
        if b.proven && !b.satisfied {
            o.violations.push(json!({ "bound": b.name, "value": b.value, "count": b.count }));
        }
    }
    let double = if v.m() == 4 {
        let (lhs, rhs) = a.incidence_double_count(&f)?;
        if lhs != rhs {
            o.violations.push(json!({ "double_count": [lhs, rhs] }));
        }
        Some(json!({ "lhs": lhs, "rhs": rhs }))
    } else {
        None
    };
    o.result = json!({ "audit": r, "double_count": double, "polynomial": f.to_json(&field) });
    Ok(o)
}

fn tally_bounds(o: &mut Outcome, r: &SamplingReport) {
    for (name, t) in &r.bounds {
        let value = name.evaluate(r.q as u64, r.d as u64, r.m as u32);
        o.bounds.push(json!({
            "name": name, "value": value, "count": t.max_count, "ok": t.satisfied == t.applied,
            "applied": t.applied, "strict": t.strict,
        }));
    }
    for sv in &r.violations {
        o.violations.push(json!(sv));
    }
    for &i in &r.double_count_mismatches {
        o.violations.push(json!({ "double_count_mismatch": i }));
    }
}

pub fn sample(p: &Params) -> Res<Outcome> {
    let field = Field::quadratic(p.q)?;
    let v = variety(&field, p.m, p.form)?;
    let r = sample_against(&Auditor::new(&v), p.d, p.samples, p.seed)?;
    let mut o = outcome(p, Some(p.d), Value::Null);
    tally_bounds(&mut o, &r);
    o.result = json!(r);
    Ok(o)
}

pub fn verify(kind: VerifyKind, p: &Params) -> Res<Outcome> {
    match kind {
        VerifyKind::Identities => {
            let r = verify_identity_suite(p.q)?;
            let mut o = outcome(p, None, json!({ "tier": r.tier, "all_pass": r.all_pass() }));
            for i in &r.identities {
                o.identities.push(json!(i));
                if !i.pass {
                    o.violations.push(json!({ "identity": i.name, "witness": i.witness }));
                }
            }
            Ok(o)
        }
        VerifyKind::Bounds => verify_bounds(p),
    }
}

/// Every construction at `q` against its closed form, then a sampling run.
fn verify_bounds(p: &Params) -> Res<Outcome> {
    let q = p.q;
    let field = Field::quadratic(q)?;
    let v4 = variety(&field, 4, FormArg::Standard)?;
    let v3 = variety(&field, 3, FormArg::Standard)?;
    let mut o = outcome(p, Some(p.d.min(q)), Value::Null);
    let mut record = |label: String, name: BoundFormula, d: u32, m: u32, res: hvlab::Result<(HomogeneousPoly, ExtremalCertificate)>| {
        let value = name.evaluate(q as u64, d as u64, m);
        match res {
            Ok((_, cert)) => {
                let c = cert.claimed_count;
                o.bounds.push(json!({
                    "name": name, "value": value, "count": c, "ok": c as i128 <= value,
                    "construction": label, "attained": c as i128 == value,
                }));
            }
            Err(e) => o.violations.push(json!({ "construction": label, "error": e.to_string() })),
        }
    };
    for d in 2..=q {
        record(format!("edoukou d={d}"), BoundFormula::EdoukouConjecture, d, 4, edoukou_extremal(&v4, d));
    }
    for kind in [QuadricKind::TypeI, QuadricKind::TypeII, QuadricKind::TypeIII] {
        record(format!("quadric {kind:?}"), BoundFormula::EdoukouQuadric, 2, 4, quadric_of_type(&v4, kind));
    }
    for d in 2..=q {
        record(format!("sorensen d={d}"), BoundFormula::Sorensen, d, 3, sorensen_extremal(&v3, d));
        record(format!("degenerate d={d}"), BoundFormula::DegenerateSurface, d, 3, degenerate_extremal(&field, d));
    }
    for d in 1..=q {
        record(format!("serre m=3 d={d}"), BoundFormula::Serre, d, 3, serre_extremal(&field, d, 3));
    }
    let r = sample_against(&Auditor::new(&v4), p.d.min(q), p.samples, p.seed)?;
    tally_bounds(&mut o, &r);
    o.result = json!({
        "samples": r.n,
        "max_count": r.max_count,
        "findings": r.findings,
        "flags": r.flags,
    });
    Ok(o)
}
