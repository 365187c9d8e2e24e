//! Seeded random hypersurfaces audited in bulk.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use super::{AuditReport, Auditor, BoundFormula, Mode};
use crate::error::{Error, Result};
use crate::hermitian::Variety;
use crate::poly::HomogeneousPoly;

#[derive(Clone, Debug, Default, Serialize)]
pub struct BoundTally {
    pub applied: u64,
    pub satisfied: u64,
    pub strict: u64,
    pub max_count: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleViolation {
    pub sample: u64,
    pub bound: BoundFormula,
    pub value: i128,
    pub count: u64,
    pub polynomial: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SamplingReport {
    pub q: u32,
    pub d: u32,
    pub m: usize,
    pub n: u64,
    pub seed: u64,
    pub mode: Mode,
    /// Bound the margins are measured against.
    pub reference: BoundFormula,
    pub max_count: Option<u64>,
    pub argmax: Option<u64>,
    /// `reference value - count`, with multiplicities.
    pub margin_histogram: BTreeMap<i128, u64>,
    pub bounds: BTreeMap<BoundFormula, BoundTally>,
    pub violations: Vec<SampleViolation>,
    pub findings: Vec<SampleViolation>,
    pub flags: Vec<String>,
    pub double_count_checked: u64,
    pub double_count_mismatches: Vec<u64>,
}

/// The `i`-th sample of the campaign: an independent stream of the seed.
pub fn sample_polynomial(v: &Variety, d: u32, seed: u64, i: u64) -> HomogeneousPoly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    HomogeneousPoly::random(v.field(), v.m() + 1, d, &mut rng)
}

/// Audits `n` random degree-`d` hypersurfaces against the standard
/// threefold over `F_{q^2}`.
pub fn sample_hypersurfaces(q: u32, d: u32, n: u64, seed: u64) -> Result<SamplingReport> {
    let v = Variety::standard(q)?;
    sample_against(&Auditor::new(&v), d, n, seed)
}

/// Audits `n` random degree-`d` hypersurfaces against the auditor's variety.
/// At `q <= 3` each threefold sample also gets the incidence double count.
pub fn sample_against(auditor: &Auditor, d: u32, n: u64, seed: u64) -> Result<SamplingReport> {
    let v = auditor.variety();
    if d == 0 || d > v.q() {
        return Err(Error::Precondition(format!("degree {d} not in 1..=q = {}", v.q())));
    }
    let reference = match (v.m(), v.is_nondegenerate()) {
        (4, true) => BoundFormula::EdoukouConjecture,
        (3, true) => BoundFormula::Sorensen,
        (3, false) if v.form_rank() == 3 => BoundFormula::DegenerateSurface,
        _ => return Err(Error::Precondition("sampling needs V3 in P^4 or a surface of rank >= 3 in P^3".into())),
    };
    let double = v.m() == 4 && auditor.mode() == Mode::Exhaustive;
    let results: Vec<Result<(HomogeneousPoly, AuditReport, Option<(u64, u64)>)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let f = sample_polynomial(v, d, seed, i);
            let r = auditor.audit(&f)?;
            let dc = if double { Some(auditor.incidence_double_count(&f)?) } else { None };
            Ok((f, r, dc))
        })
        .collect();

    let mut rep = SamplingReport {
        q: v.q(),
        d,
        m: v.m(),
        n,
        seed,
        mode: auditor.mode(),
        reference,
        max_count: None,
        argmax: None,
        margin_histogram: BTreeMap::new(),
        bounds: BTreeMap::new(),
        violations: Vec::new(),
        findings: Vec::new(),
        flags: Vec::new(),
        double_count_checked: 0,
        double_count_mismatches: Vec::new(),
    };
    for (i, res) in results.into_iter().enumerate() {
        let (f, r, dc) = res?;
        let i = i as u64;
        let c = r.intersection_count;
        if rep.max_count.is_none_or(|m| c > m) {
            rep.max_count = Some(c);
            rep.argmax = Some(i);
        }
        for b in &r.applicable_bounds {
            let t = rep.bounds.entry(b.name).or_default();
            t.applied += 1;
            t.satisfied += b.satisfied as u64;
            t.strict += b.strict as u64;
            t.max_count = t.max_count.max(b.count);
            if b.name == reference {
                *rep.margin_histogram.entry(b.value - b.count as i128).or_insert(0) += 1;
            }
            if !b.satisfied {
                let sv = SampleViolation {
                    sample: i,
                    bound: b.name,
                    value: b.value,
                    count: b.count,
                    polynomial: f.to_json(v.field()),
                };
                if b.proven {
                    rep.violations.push(sv);
                } else {
                    rep.findings.push(sv);
                }
            }
        }
        rep.flags.extend(r.flags.iter().map(|fl| format!("sample {i}: {fl}")));
        if let Some((lhs, rhs)) = dc {
            rep.double_count_checked += 1;
            if lhs != rhs {
                rep.double_count_mismatches.push(i);
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_deterministic() {
        let r = sample_hypersurfaces(2, 2, 0, 7).unwrap();
        assert_eq!(r.max_count, None);
        assert!(r.margin_histogram.is_empty());
        let a = serde_json::to_string(&sample_hypersurfaces(2, 2, 40, 7).unwrap()).unwrap();
        let b = serde_json::to_string(&sample_hypersurfaces(2, 2, 40, 7).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
