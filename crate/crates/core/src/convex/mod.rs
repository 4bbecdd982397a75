//! Convex-hull membership with explicit convex-combination certificates.
//!
//! Two routes: a planar one for points in ℂ (monotone-chain hull, signed
//! distance to the boundary, at most three generators per certificate) and
//! a phase-one simplex feasibility test for points in ℝ^d.

mod planar;
mod simplex;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{MocError, Result};

pub use planar::{hull2d, hull_diameter, membership2d, PlanarHull, ROUNDING_FLOOR};
pub use simplex::{membership_lp, MAX_LP_GENERATORS, MAX_LP_DIMENSION};

/// Default relative membership tolerance.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Allowed deviation of a certificate's weight sum from one.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Inside,
    Boundary,
    Outside,
}

impl Verdict {
    /// Inside or on the boundary.
    pub fn is_member(self) -> bool {
        self != Verdict::Outside
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Inside => "inside",
            Verdict::Boundary => "boundary",
            Verdict::Outside => "outside",
        }
    }
}

/// One term of a convex-combination certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weighted {
    /// Index into the generator list.
    pub index: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullMembership {
    pub verdict: Verdict,
    /// Negative inside, about zero on the boundary, positive outside, in
    /// units of the hull scale.
    pub signed_distance: f64,
    pub certificate: Option<Vec<Weighted>>,
    /// Absolute reproduction tolerance the certificate satisfies.
    pub tolerance_used: f64,
}

impl HullMembership {
    pub(crate) fn outside(signed_distance: f64, tolerance_used: f64) -> Self {
        HullMembership {
            verdict: Verdict::Outside,
            signed_distance,
            certificate: None,
            tolerance_used,
        }
    }
}

/// A monic polynomial `Π_j (λ + r_j)` as the point `(e_1, .., e_n)` of its
/// elementary symmetric coefficients; the leading 1 is implicit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyPoint {
    pub coefficients: Vec<f64>,
}

impl PolyPoint {
    pub fn from_roots(roots: &[f64]) -> Self {
        let mut coeffs = vec![0.0; roots.len() + 1];
        coeffs[0] = 1.0;
        for (k, &r) in roots.iter().enumerate() {
            for i in (1..=k + 1).rev() {
                coeffs[i] += r * coeffs[i - 1];
            }
        }
        coeffs.remove(0);
        PolyPoint {
            coefficients: coeffs,
        }
    }

    /// Value of `λ^n + e_1 λ^(n-1) + .. + e_n` at `lambda`.
    pub fn eval(&self, lambda: f64) -> f64 {
        self.coefficients.iter().fold(1.0, |acc, &c| acc * lambda + c)
    }
}

/// Normalizes weights to sum one, dropping exact zeros and clamping
/// round-off negatives.
pub(crate) fn normalize(terms: impl IntoIterator<Item = (usize, f64)>) -> Vec<Weighted> {
    let mut terms: Vec<Weighted> = terms
        .into_iter()
        .map(|(index, weight)| Weighted {
            index,
            weight: weight.max(0.0),
        })
        .filter(|w| w.weight > 0.0)
        .collect();
    let total: f64 = terms.iter().map(|w| w.weight).sum();
    for w in &mut terms {
        w.weight /= total;
    }
    terms
}

fn check_weights(cert: &[Weighted], generators: usize) -> bool {
    let mut total = 0.0;
    for w in cert {
        if w.index >= generators || !w.weight.is_finite() || w.weight < 0.0 {
            return false;
        }
        total += w.weight;
    }
    (total - 1.0).abs() <= WEIGHT_SUM_TOL
}

/// Recomputes the weight sum and the reconstruction of `query` in ℝ^d
/// (max-norm per coordinate).
pub fn validate_certificate(
    generators: &[Vec<f64>],
    membership: &HullMembership,
    query: &[f64],
) -> Result<bool> {
    let cert = membership
        .certificate
        .as_ref()
        .ok_or(MocError::MissingCertificate)?;
    if !check_weights(cert, generators.len()) {
        return Ok(false);
    }
    let d = query.len();
    if cert.iter().any(|w| generators[w.index].len() != d) {
        return Err(MocError::Dimension("generator length differs from query".into()));
    }
    let mut recon = vec![0.0; d];
    for w in cert {
        for (r, g) in recon.iter_mut().zip(&generators[w.index]) {
            *r += w.weight * g;
        }
    }
    let err = recon
        .iter()
        .zip(query)
        .map(|(r, q)| (r - q).abs())
        .fold(0.0, f64::max);
    Ok(err <= membership.tolerance_used)
}

/// Planar variant of [`validate_certificate`] (Euclidean distance in ℂ).
pub fn validate_certificate_2d(
    points: &[Complex64],
    membership: &HullMembership,
    query: Complex64,
) -> Result<bool> {
    let cert = membership
        .certificate
        .as_ref()
        .ok_or(MocError::MissingCertificate)?;
    if !check_weights(cert, points.len()) {
        return Ok(false);
    }
    let recon: Complex64 = cert.iter().map(|w| points[w.index] * w.weight).sum();
    Ok((recon - query).norm() <= membership.tolerance_used)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn member(cert: Vec<(usize, f64)>, tol: f64) -> HullMembership {
        HullMembership {
            verdict: Verdict::Inside,
            signed_distance: -0.1,
            certificate: Some(
                cert.into_iter()
                    .map(|(index, weight)| Weighted { index, weight })
                    .collect(),
            ),
            tolerance_used: tol,
        }
    }

    #[test]
    fn validation_accepts_and_rejects() {
        let gens = vec![vec![24.0], vec![25.0]];
        let ok = member(vec![(0, 0.5), (1, 0.5)], 1e-12);
        assert!(validate_certificate(&gens, &ok, &[24.5]).unwrap());

        let negative = member(vec![(0, 1.0 + 1e-6), (1, -1e-6)], 1e-3);
        assert!(!validate_certificate(&gens, &negative, &[24.0]).unwrap());

        let heavy = member(vec![(0, 0.5), (1, 0.5 + 1e-3)], 1.0);
        assert!(!validate_certificate(&gens, &heavy, &[24.5]).unwrap());

        let off = member(vec![(0, 0.5), (1, 0.5)], 1e-12);
        assert!(!validate_certificate(&gens, &off, &[24.6]).unwrap());

        let bad_index = member(vec![(2, 1.0)], 1.0);
        assert!(!validate_certificate(&gens, &bad_index, &[24.0]).unwrap());

        let none = HullMembership::outside(1.0, 1e-8);
        assert_eq!(
            validate_certificate(&gens, &none, &[26.0]),
            Err(MocError::MissingCertificate)
        );
    }

    #[test]
    fn planar_validation() {
        let pts = [Complex64::new(0.0, 0.0), Complex64::new(0.0, 2.0)];
        let m = member(vec![(0, 0.25), (1, 0.75)], 1e-12);
        assert!(validate_certificate_2d(&pts, &m, Complex64::new(0.0, 1.5)).unwrap());
        assert!(!validate_certificate_2d(&pts, &m, Complex64::new(0.0, 1.4)).unwrap());
    }

    #[test]
    fn poly_point_coefficients() {
        // (λ + 1)(λ + 2)(λ + 3) = λ^3 + 6λ^2 + 11λ + 6
        let p = PolyPoint::from_roots(&[1.0, 2.0, 3.0]);
        assert_eq!(p.coefficients, vec![6.0, 11.0, 6.0]);
        for lambda in [-4.0, -0.5, 0.0, 2.5] {
            let direct = (lambda + 1.0) * (lambda + 2.0) * (lambda + 3.0);
            assert!((p.eval(lambda) - direct).abs() <= 1e-12 * direct.abs().max(1.0));
        }
        assert_eq!(PolyPoint::from_roots(&[-2.5]).coefficients, vec![-2.5]);
    }

    #[test]
    fn normalize_drops_zeros() {
        let w = normalize([(0, 2.0), (1, 0.0), (2, -1e-18), (3, 2.0)]);
        assert_eq!(
            w,
            vec![
                Weighted { index: 0, weight: 0.5 },
                Weighted { index: 3, weight: 0.5 }
            ]
        );
    }
}
