use num_complex::Complex64;

use super::{normalize, HullMembership, Verdict};
use crate::error::{check_tol, MocError, Result};

/// Distances are normalized by `max(D, ROUNDING_FLOOR * max|p|)`, where `D`
/// is the hull diameter, so that hulls much smaller than their distance
/// from the origin keep a tolerance band above floating-point round-off.
pub const ROUNDING_FLOOR: f64 = 1e-6;

// Inputs larger than this are pre-filtered against the quadrilateral of
// extreme points before sorting.
const PREFILTER_MIN: usize = 1024;

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

fn dot(a: Complex64, b: Complex64) -> f64 {
    a.re * b.re + a.im * b.im
}

/// Counter-clockwise hull vertices as indices into `points`, starting at
/// the lexicographically smallest point. Collinear and duplicate points are
/// dropped, so a collinear input yields its two endpoints (or one point).
pub fn hull2d(points: &[Complex64]) -> Result<Vec<usize>> {
    if points.is_empty() {
        return Err(MocError::EmptyInput("hull2d needs at least one point"));
    }
    let mut idx = prefilter(points);
    idx.sort_unstable_by(|&i, &j| {
        let (a, b) = (points[i], points[j]);
        a.re.total_cmp(&b.re)
            .then(a.im.total_cmp(&b.im))
            .then(i.cmp(&j))
    });
    idx.dedup_by(|j, i| points[*i] == points[*j]);
    if idx.len() <= 2 {
        return Ok(idx);
    }
    let mut lower: Vec<usize> = Vec::with_capacity(idx.len());
    for &k in &idx {
        while lower.len() >= 2
            && cross(points[lower[lower.len() - 2]], points[lower[lower.len() - 1]], points[k]) <= 0.0
        {
            lower.pop();
        }
        lower.push(k);
    }
    let mut upper: Vec<usize> = Vec::with_capacity(idx.len());
    for &k in idx.iter().rev() {
        while upper.len() >= 2
            && cross(points[upper[upper.len() - 2]], points[upper[upper.len() - 1]], points[k]) <= 0.0
        {
            upper.pop();
        }
        upper.push(k);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    Ok(lower)
}

// Akl-Toussaint: discard points strictly inside the polygon spanned by the
// leftmost, lowest, rightmost and highest points.
fn prefilter(points: &[Complex64]) -> Vec<usize> {
    let all = || (0..points.len()).collect::<Vec<_>>();
    if points.len() < PREFILTER_MIN {
        return all();
    }
    let pick = |key: &dyn Fn(Complex64) -> f64| {
        (0..points.len())
            .min_by(|&i, &j| key(points[i]).total_cmp(&key(points[j])).then(i.cmp(&j)))
            .expect("non-empty")
    };
    let mut quad = vec![
        pick(&|p| p.re),
        pick(&|p| p.im),
        pick(&|p| -p.re),
        pick(&|p| -p.im),
    ];
    quad.dedup_by(|a, b| points[*a] == points[*b]);
    if quad.len() > 1 && points[quad[0]] == points[quad[quad.len() - 1]] {
        quad.pop();
    }
    if quad.len() < 3 {
        return all();
    }
    let corners: Vec<Complex64> = quad.iter().map(|&i| points[i]).collect();
    let edges: Vec<(Complex64, Complex64, f64)> = (0..corners.len())
        .map(|k| {
            let (a, b) = (corners[k], corners[(k + 1) % corners.len()]);
            (a, b, (b - a).norm())
        })
        .collect();
    (0..points.len())
        .filter(|&i| {
            let p = points[i];
            !edges.iter().all(|&(a, b, len)| {
                // margin keeps round-off from discarding true hull vertices
                cross(a, b, p) > 1e-12 * len * (p - a).norm()
            })
        })
        .collect()
}

/// Largest distance between two polygon vertices (rotating calipers).
pub fn hull_diameter(polygon: &[Complex64]) -> f64 {
    let h = polygon.len();
    if h < 2 {
        return 0.0;
    }
    if h <= 3 {
        let mut best = 0.0f64;
        for i in 0..h {
            for j in i + 1..h {
                best = best.max((polygon[i] - polygon[j]).norm());
            }
        }
        return best;
    }
    let mut best = 0.0f64;
    let mut j = 1;
    for i in 0..h {
        let next = (i + 1) % h;
        loop {
            let cand = (j + 1) % h;
            if cross(polygon[i], polygon[next], polygon[cand])
                > cross(polygon[i], polygon[next], polygon[j])
            {
                j = cand;
            } else {
                break;
            }
        }
        best = best
            .max((polygon[i] - polygon[j]).norm())
            .max((polygon[next] - polygon[j]).norm());
    }
    best
}

// Closest point of segment [a, b] to q as (parameter in [0,1], distance).
fn project(a: Complex64, b: Complex64, q: Complex64) -> (f64, f64) {
    let e = b - a;
    let len2 = e.norm_sqr();
    let u = if len2 > 0.0 {
        (dot(q - a, e) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (u, (q - (a + e * u)).norm())
}

/// Hull of a planar point set, kept for repeated membership queries.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarHull {
    /// Counter-clockwise vertices as indices into the input.
    pub vertices: Vec<usize>,
    pub polygon: Vec<Complex64>,
    pub diameter: f64,
    /// Largest vertex modulus.
    pub magnitude: f64,
}

impl PlanarHull {
    pub fn new(points: &[Complex64]) -> Result<Self> {
        let vertices = hull2d(points)?;
        let polygon: Vec<Complex64> = vertices.iter().map(|&i| points[i]).collect();
        let diameter = hull_diameter(&polygon);
        let magnitude = polygon.iter().map(|p| p.norm()).fold(0.0, f64::max);
        Ok(PlanarHull {
            vertices,
            polygon,
            diameter,
            magnitude,
        })
    }

    /// See [`membership2d`].
    pub fn locate(&self, query: Complex64, tol: f64) -> Result<HullMembership> {
        check_tol(tol)?;
        let (hull, polygon) = (&self.vertices, &self.polygon);
        if self.diameter <= tol * self.magnitude.max(1.0) {
            return Ok(point_membership(hull, polygon, query, tol));
        }
        let unit = self.diameter.max(ROUNDING_FLOOR * self.magnitude);
        let band = tol * unit;

        if polygon.len() == 2 {
            let (a, b) = (polygon[0], polygon[1]);
            let (u, dist) = project(a, b, query);
            if dist > band {
                return Ok(HullMembership::outside(dist / unit, band));
            }
            let depth = u.min(1.0 - u) * (b - a).norm() / unit;
            let (verdict, signed_distance) = if depth > tol {
                (Verdict::Inside, -depth)
            } else {
                (Verdict::Boundary, dist / unit)
            };
            return Ok(HullMembership {
                verdict,
                signed_distance,
                certificate: Some(normalize([(hull[0], 1.0 - u), (hull[1], u)])),
                tolerance_used: band,
            });
        }

        let h = polygon.len();
        let inside = (0..h).all(|k| cross(polygon[k], polygon[(k + 1) % h], query) >= 0.0);
        let (nearest_edge, edge_u, edge_dist) = (0..h)
            .map(|k| {
                let (u, d) = project(polygon[k], polygon[(k + 1) % h], query);
                (k, u, d)
            })
            .min_by(|x, y| x.2.total_cmp(&y.2))
            .expect("polygon has edges");
        let signed_distance = if inside { -edge_dist } else { edge_dist } / unit;
        if signed_distance > tol {
            return Ok(HullMembership::outside(signed_distance, band));
        }
        let verdict = if signed_distance >= -tol {
            Verdict::Boundary
        } else {
            Verdict::Inside
        };
        let certificate = if inside {
            fan_certificate(hull, polygon, query)
        } else {
            let next = (nearest_edge + 1) % h;
            normalize([(hull[nearest_edge], 1.0 - edge_u), (hull[next], edge_u)])
        };
        Ok(HullMembership {
            verdict,
            signed_distance,
            certificate: Some(certificate),
            tolerance_used: band,
        })
    }
}

/// Locates `query` relative to the convex hull of `points`.
///
/// The verdict comes from the signed distance to the hull boundary divided
/// by the hull diameter (floored, see [`ROUNDING_FLOOR`]); `tol` is the
/// width of the boundary band. Members get a certificate of at most three
/// generators: a fan triangle around hull vertex 0 for interior queries,
/// the nearest edge otherwise. Degenerate hulls fall back to segment or
/// point logic.
pub fn membership2d(points: &[Complex64], query: Complex64, tol: f64) -> Result<HullMembership> {
    check_tol(tol)?;
    PlanarHull::new(points)?.locate(query, tol)
}

fn point_membership(
    hull: &[usize],
    polygon: &[Complex64],
    query: Complex64,
    tol: f64,
) -> HullMembership {
    let (k, dist) = polygon
        .iter()
        .enumerate()
        .map(|(k, p)| (k, (p - query).norm()))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("non-empty hull");
    let unit = polygon[k].norm().max(1.0);
    let band = tol * unit;
    if dist > band {
        return HullMembership::outside(dist / unit, band);
    }
    HullMembership {
        verdict: Verdict::Boundary,
        signed_distance: dist / unit,
        certificate: Some(normalize([(hull[k], 1.0)])),
        tolerance_used: band,
    }
}

// Barycentric weights in the fan triangle (v0, v_k, v_k+1) containing q.
fn fan_certificate(hull: &[usize], polygon: &[Complex64], q: Complex64) -> Vec<super::Weighted> {
    let h = polygon.len();
    let v0 = polygon[0];
    let (mut lo, mut hi) = (1, h - 2);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if cross(v0, polygon[mid], q) >= 0.0 {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let k = lo;
    let e1 = polygon[k] - v0;
    let e2 = polygon[k + 1] - v0;
    let r = q - v0;
    let det = e1.re * e2.im - e1.im * e2.re;
    let beta = (r.re * e2.im - r.im * e2.re) / det;
    let gamma = (e1.re * r.im - e1.im * r.re) / det;
    normalize([
        (hull[0], 1.0 - beta - gamma),
        (hull[k], beta),
        (hull[k + 1], gamma),
    ])
}

#[cfg(test)]
mod tests {
    use super::super::validate_certificate_2d;
    use super::*;
    use crate::rng::RngSeed;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn square_with_interior_point() {
        let pts = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(1.0, 1.0), c(0.5, 0.5)];
        let hull = hull2d(&pts).unwrap();
        assert_eq!(hull, vec![0, 1, 3, 2]);
    }

    #[test]
    fn degenerate_hulls() {
        let pts = [c(2.0, 0.0), c(1.0, 0.0), c(3.0, 0.0)];
        assert_eq!(hull2d(&pts).unwrap(), vec![1, 2]);
        let same = [c(1.0, 1.0); 4];
        assert_eq!(hull2d(&same).unwrap(), vec![0]);
        assert!(matches!(hull2d(&[]), Err(MocError::EmptyInput(_))));
    }

    #[test]
    fn large_random_disc() {
        let mut rng = RngSeed(1).rng();
        let pts: Vec<Complex64> = (0..100_000)
            .map(|_| loop {
                let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                if z.norm() <= 1.0 {
                    break z;
                }
            })
            .collect();
        let hull = hull2d(&pts).unwrap();
        let poly: Vec<Complex64> = hull.iter().map(|&i| pts[i]).collect();
        let d = hull_diameter(&poly);
        // oracle: every sampled point is on the inner side of every edge
        for k in 0..poly.len() {
            let (a, b) = (poly[k], poly[(k + 1) % poly.len()]);
            let next = poly[(k + 2) % poly.len()];
            assert!(cross(a, b, next) >= -1e-12 * d * d);
            for p in pts.iter().step_by(100) {
                assert!(cross(a, b, *p) / (b - a).norm() >= -1e-12 * d);
            }
        }
        // unfiltered brute-force diameter agrees
        let mut brute = 0.0f64;
        for i in 0..poly.len() {
            for j in 0..poly.len() {
                brute = brute.max((poly[i] - poly[j]).norm());
            }
        }
        assert!((brute - d).abs() <= 1e-15);
    }

    #[test]
    fn prefilter_preserves_hull() {
        let mut rng = RngSeed(5).rng();
        let pts: Vec<Complex64> = (0..5000)
            .map(|_| c(rng.random_range(-3.0..1.0), rng.random_range(-1.0..2.0)))
            .collect();
        let filtered = hull2d(&pts).unwrap();
        let mut kept = prefilter(&pts);
        kept.sort();
        for v in &filtered {
            assert!(kept.binary_search(v).is_ok());
        }
        assert!(kept.len() < pts.len());
    }

    #[test]
    fn segment_membership() {
        let pts = [c(24.0, 0.0), c(25.0, 0.0)];
        let m = membership2d(&pts, c(24.5, 0.0), 1e-8).unwrap();
        assert_eq!(m.verdict, Verdict::Inside);
        let cert = m.certificate.clone().unwrap();
        assert_eq!(cert.len(), 2);
        assert!(cert.iter().all(|w| (w.weight - 0.5).abs() < 1e-15));
        assert!(validate_certificate_2d(&pts, &m, c(24.5, 0.0)).unwrap());

        let m = membership2d(&pts, c(26.0, 0.0), 1e-8).unwrap();
        assert_eq!(m.verdict, Verdict::Outside);
        assert!((m.signed_distance - 1.0).abs() < 1e-15);
        assert!(m.certificate.is_none());

        let m = membership2d(&pts, c(24.0, 0.0), 1e-8).unwrap();
        assert_eq!(m.verdict, Verdict::Boundary);
    }

    #[test]
    fn square_membership() {
        let pts = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(1.0, 1.0)];
        let q = c(0.25, 0.25);
        let m = membership2d(&pts, q, 1e-8).unwrap();
        assert_eq!(m.verdict, Verdict::Inside);
        let cert = m.certificate.clone().unwrap();
        assert!(cert.len() <= 3);
        let recon: Complex64 = cert.iter().map(|w| pts[w.index] * w.weight).sum();
        assert!((recon - q).norm() <= 1e-12);
        assert!((m.signed_distance + 0.25 / 2f64.sqrt()).abs() < 1e-15);

        let edge = membership2d(&pts, c(1.0 + 1e-10, 0.5), 1e-8).unwrap();
        assert_eq!(edge.verdict, Verdict::Boundary);
        assert!(validate_certificate_2d(&pts, &edge, c(1.0 + 1e-10, 0.5)).unwrap());

        let out = membership2d(&pts, c(2.0, 0.5), 1e-8).unwrap();
        assert_eq!(out.verdict, Verdict::Outside);
        assert!(membership2d(&pts, q, 0.0).is_err());
    }

    #[test]
    fn point_hull() {
        let pts = [c(3.0, 4.0); 3];
        let m = membership2d(&pts, c(3.0, 4.0), 1e-8).unwrap();
        assert_eq!(m.verdict, Verdict::Boundary);
        assert_eq!(m.certificate.unwrap()[0].weight, 1.0);
        let m = membership2d(&pts, c(3.0, 4.1), 1e-8).unwrap();
        assert_eq!(m.verdict, Verdict::Outside);
    }

    #[test]
    fn fan_certificates_on_random_polygons() {
        let mut rng = RngSeed(9).rng();
        for _ in 0..200 {
            let pts: Vec<Complex64> = (0..30)
                .map(|_| c(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)))
                .collect();
            let q = c(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
            let m = membership2d(&pts, q, 1e-8).unwrap();
            if m.verdict.is_member() {
                assert!(m.certificate.as_ref().unwrap().len() <= 3);
                assert!(validate_certificate_2d(&pts, &m, q).unwrap());
            }
        }
    }
}
