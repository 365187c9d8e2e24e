//! Closed-form upper bounds on rational point counts.

use serde::{Deserialize, Serialize};

/// `1 + s + ... + s^delta`.
pub fn p_delta(s: u64, delta: u32) -> u64 {
    (0..=delta).map(|i| s.pow(i)).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BoundFormula {
    /// `|V(F)| <= d s^(m-1) + p_(m-2)` over `F_s`, `s = q^2`, for `d <= s`.
    Serre,
    /// `d (q+1) p_(m-2)` for the intersection with a Hermitian variety of
    /// rank at least 3, for `d <= q`.
    LachaudRolland,
    /// Deviation `(d-1)(d-2) q` of an absolutely irreducible plane curve over
    /// `F_{q^2}` from `q^2 + 1`.
    AubryPerret,
    /// `d (q^3 + q^2 - q) + q + 1`, surfaces against a non-degenerate
    /// Hermitian surface in P^3.
    Sorensen,
    /// `2 q^5 + q^3 + 2 q^2 + 1`, quadrics against V3.
    EdoukouQuadric,
    /// `d (q^5 + q^2) + q^3 + 1`.
    EdoukouConjecture,
    /// `d (q+1) q^2 + 1`, surfaces against a rank-3 Hermitian surface.
    DegenerateSurface,
    /// `d (q^5 + 1)` when no generator is contained.
    NoGenerator,
    /// `(d-1) q^5 + (d-1) q^4 + d q^3 + d q^2 + 1` with a plane but no hyperplane.
    ContainsPlaneNoHyperplane,
    /// `d q^5 - q^4 + d q^3 + d q^2 + 1` with d generators in one plane and no plane.
    DGeneratorsInPlane,
    /// `(d-1) q^5 + q^2 + (d-1) q^3 + (d-1) q + 1` with at most one generator
    /// in any plane and no plane.
    AtMostOneGenerator,
    /// `(d-1) q^5 + (d-1) q^4 + d q^3 + d q^2 + 1` with a tangent line and no plane.
    TangentLineCase,
    /// `2 q^3 + 6 q^2 - 3 q - 4` for a tangent section through a contained
    /// generator of a cubic without cone structure.
    TangentSectionCase,
    /// `3 (q^5 + q^2) + q^3 + 1` for cubics with `q >= 7` or containing a hyperplane.
    MainCubic,
}

impl BoundFormula {
    pub const ALL: [BoundFormula; 14] = [
        BoundFormula::Serre,
        BoundFormula::LachaudRolland,
        BoundFormula::AubryPerret,
        BoundFormula::Sorensen,
        BoundFormula::EdoukouQuadric,
        BoundFormula::EdoukouConjecture,
        BoundFormula::DegenerateSurface,
        BoundFormula::NoGenerator,
        BoundFormula::ContainsPlaneNoHyperplane,
        BoundFormula::DGeneratorsInPlane,
        BoundFormula::AtMostOneGenerator,
        BoundFormula::TangentLineCase,
        BoundFormula::TangentSectionCase,
        BoundFormula::MainCubic,
    ];

    /// Value at `(q, d, m)`, the field having `q^2` elements.
    pub fn evaluate(self, q: u64, d: u64, m: u32) -> i128 {
        let q = q as i128;
        let d = d as i128;
        let s = q * q;
        let pd = |delta: u32| p_delta(s as u64, delta) as i128;
        match self {
            BoundFormula::Serre => d * s.pow(m - 1) + pd(m - 2),
            BoundFormula::LachaudRolland => d * (q + 1) * pd(m - 2),
            BoundFormula::AubryPerret => (d - 1) * (d - 2) * q,
            BoundFormula::Sorensen => d * (q.pow(3) + q * q - q) + q + 1,
            BoundFormula::EdoukouQuadric => 2 * q.pow(5) + q.pow(3) + 2 * q * q + 1,
            BoundFormula::EdoukouConjecture => d * (q.pow(5) + q * q) + q.pow(3) + 1,
            BoundFormula::DegenerateSurface => d * (q + 1) * q * q + 1,
            BoundFormula::NoGenerator => d * (q.pow(5) + 1),
            BoundFormula::ContainsPlaneNoHyperplane | BoundFormula::TangentLineCase => {
                (d - 1) * q.pow(5) + (d - 1) * q.pow(4) + d * q.pow(3) + d * q * q + 1
            }
            BoundFormula::DGeneratorsInPlane => d * q.pow(5) - q.pow(4) + d * q.pow(3) + d * q * q + 1,
            BoundFormula::AtMostOneGenerator => (d - 1) * q.pow(5) + q * q + (d - 1) * q.pow(3) + (d - 1) * q + 1,
            BoundFormula::TangentSectionCase => 2 * q.pow(3) + 6 * q * q - 3 * q - 4,
            BoundFormula::MainCubic => 3 * (q.pow(5) + q * q) + q.pow(3) + 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_values() {
        assert_eq!(BoundFormula::EdoukouConjecture.evaluate(3, 3, 4), 784);
        assert_eq!(BoundFormula::EdoukouConjecture.evaluate(7, 3, 4), 50912);
        assert_eq!(BoundFormula::MainCubic.evaluate(7, 3, 4), 50912);
        assert_eq!(BoundFormula::NoGenerator.evaluate(3, 3, 4), 732);
        assert_eq!(BoundFormula::Sorensen.evaluate(2, 2, 3), 23);
        assert_eq!(BoundFormula::Sorensen.evaluate(3, 3, 3), 103);
        assert_eq!(BoundFormula::DegenerateSurface.evaluate(2, 2, 3), 25);
        assert_eq!(BoundFormula::DegenerateSurface.evaluate(3, 3, 3), 109);
        assert_eq!(BoundFormula::EdoukouQuadric.evaluate(2, 2, 4), 81);
        assert_eq!(BoundFormula::AubryPerret.evaluate(3, 3, 2), 6);
        // d hyperplanes through a common 2-flat of P^4 over F_4
        assert_eq!(BoundFormula::Serre.evaluate(2, 2, 4), 2 * 64 + 21);
        assert_eq!(p_delta(4, 2), 21);
    }
}
