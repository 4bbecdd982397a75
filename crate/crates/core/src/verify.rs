//! End-to-end checks: spectra, sigma-points and hull membership combined
//! into the determinant-in-hull test for a normal pair, the dilation
//! theorem, the direct-sum composition, and the classical oracles (Fiedler's
//! segment for hermitian pairs, Drury's polynomial hull).
//!
//! Every check is a pure function of its inputs and the seed in
//! [`VerifyConfig`].

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::convex::{
    membership_lp, validate_certificate, validate_certificate_2d, HullMembership, PlanarHull,
    PolyPoint, Verdict, Weighted, DEFAULT_TOL,
};
use crate::error::{check_tol, MocError, Result};
use crate::matrix::{
    block_mixer, classify, conj_add_scalar, determinant, dilate, direct_sum, ComplexMatrix,
    ConjMode, MatrixClassReport,
};
use crate::rng::RngSeed;
use crate::sigma::{
    compose_theta, enumerate_permutations, factorial, scale_guard, sigma_points, sigma_product,
    Permutation, ScaleReport, SigmaPointSet, DEFAULT_CAP,
};
use crate::spectra::{
    eig_hermitian, eig_normal, haar_unitary_with, match_multisets, MultisetMatch, Spectrum,
    HERMITIAN_TOL, NORMALITY_TOL, NORMAL_RESIDUAL_TOL,
};

/// Dilation normality, relative to `max(1, ||N||_F)` on top of `classify`'s
/// own scaling.
pub const DILATION_NORMALITY_TOL: f64 = 1e-12;
/// Entrywise `U* [[M,N],[N,M]] U - (M-N)⊕(M+N)`, relative to
/// `max(1, ||M||_F + ||N||_F)`.
pub const BLOCK_IDENTITY_TOL: f64 = 1e-12;
/// Pairing tolerance for spectra and sigma-point multisets (relative to
/// `max(1, largest modulus)`).
pub const MULTISET_TOL: f64 = 1e-7;
/// Reconstruction tolerance of a composed direct-sum certificate.
pub const COMPOSED_CERT_TOL: f64 = 1e-10;
/// `w_θ(σ,π)` against `z_σ v_π`, relative.
pub const THETA_PRODUCT_TOL: f64 = 1e-12;
pub const UNITARY_TOL: f64 = 1e-10;
/// Relative agreement of `det(A+B)` and `det(VAV* + VBV*)`.
pub const DET_MATCH_TOL: f64 = 1e-10;
/// Largest dimension handled by the polynomial-hull check (`n!` generators).
pub const DRURY_MAX_N: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub tol: f64,
    pub cap: u64,
    pub seed: RngSeed,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            tol: DEFAULT_TOL,
            cap: DEFAULT_CAP,
            seed: RngSeed(0),
        }
    }
}

/// Every threshold a report was produced with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub membership: f64,
    pub normality: f64,
    pub hermitian: f64,
    pub spectral_residual: f64,
    pub cap: u64,
}

impl Tolerances {
    fn from_config(cfg: &VerifyConfig) -> Self {
        Tolerances {
            membership: cfg.tol,
            normality: NORMALITY_TOL,
            hermitian: HERMITIAN_TOL,
            spectral_residual: NORMAL_RESIDUAL_TOL,
            cap: cfg.cap,
        }
    }
}

/// A certificate term resolved to its permutation and sigma-point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub index: usize,
    pub perm: Permutation,
    pub point: Complex64,
    pub weight: f64,
}

/// Outcome of locating `det(A + B)` among the sigma-points of `(A, B)`.
///
/// When the sigma-point magnitudes leave the representable range (see
/// [`scale_guard`]), all factors are divided by `rescale` before
/// evaluation; `det_sum`, `hull` and the certificate points are then in
/// those units, i.e. divided by `rescale^dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MocReport {
    pub dim: usize,
    pub spec_a: Spectrum,
    pub spec_b: Spectrum,
    pub det_sum: Complex64,
    pub sigma_count: usize,
    pub membership: HullMembership,
    pub certificate: Vec<CertificateEntry>,
    pub hull: Vec<Complex64>,
    pub scale: ScaleReport,
    pub rescale: Option<f64>,
    pub residuals: (MatrixClassReport, MatrixClassReport),
    pub seed: RngSeed,
    pub tolerances: Tolerances,
}

impl MocReport {
    pub fn verdict(&self) -> Verdict {
        self.membership.verdict
    }
}

fn check_pair(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<usize> {
    let n = a.require_square("pair")?;
    if b.rows() != n || b.cols() != n {
        return Err(MocError::Dimension(format!(
            "pair of {n}x{n} and {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    Ok(n)
}

fn check_capacity(n: usize, cap: u64) -> Result<()> {
    let needed = factorial(n).unwrap_or(u128::MAX);
    if needed > cap as u128 {
        return Err(MocError::Capacity {
            what: "sigma-points",
            needed,
            cap: cap as u128,
        });
    }
    Ok(())
}

fn require_normal(report: &MatrixClassReport) -> Result<()> {
    if report.normality_residual > NORMALITY_TOL {
        return Err(MocError::Classification {
            property: "normal",
            residual: report.normality_residual,
            tolerance: NORMALITY_TOL,
        });
    }
    Ok(())
}

/// Locates `det(A + B)` in the hull of the sigma-points of a normal pair.
pub fn verify_moc(a: &ComplexMatrix, b: &ComplexMatrix, cfg: &VerifyConfig) -> Result<MocReport> {
    verify_moc_with_points(a, b, cfg).map(|(report, _)| report)
}

/// [`verify_moc`], also returning the full sigma-point set.
pub fn verify_moc_with_points(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    cfg: &VerifyConfig,
) -> Result<(MocReport, SigmaPointSet)> {
    check_tol(cfg.tol)?;
    let n = check_pair(a, b)?;
    let residuals = (classify(a)?, classify(b)?);
    require_normal(&residuals.0)?;
    require_normal(&residuals.1)?;
    check_capacity(n, cfg.cap)?;

    let spec_a = eig_normal(a, cfg.seed)?;
    let spec_b = eig_normal(b, cfg.seed.offset(1))?;
    let sum = a + b;
    let mut det_sum = determinant(&sum)?;
    let mut points = sigma_points(&spec_a.values, &spec_b.values, cfg.cap)?;
    let scale = scale_guard(&points);
    let mut rescale = None;
    if scale.flagged {
        let c = geometric_scale(&spec_a.values, &spec_b.values);
        let shrink = |v: &[Complex64]| v.iter().map(|z| z / c).collect::<Vec<_>>();
        points = sigma_points(&shrink(&spec_a.values), &shrink(&spec_b.values), cfg.cap)?;
        det_sum = determinant(&sum.scale(Complex64::new(1.0 / c, 0.0)))?;
        rescale = Some(c);
    }

    let hull = PlanarHull::new(&points.points)?;
    let membership = hull.locate(det_sum, cfg.tol)?;
    let certificate = resolve(&points, &membership);
    let report = MocReport {
        dim: n,
        spec_a,
        spec_b,
        det_sum,
        sigma_count: points.len(),
        membership,
        certificate,
        hull: hull.polygon,
        scale,
        rescale,
        residuals,
        seed: cfg.seed,
        tolerances: Tolerances::from_config(cfg),
    };
    Ok((report, points))
}

// exp(mean log|a_i + b_j|) over the nonzero factors
fn geometric_scale(a: &[Complex64], b: &[Complex64]) -> f64 {
    let logs: Vec<f64> = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| (x + y).norm()))
        .filter(|r| *r > 0.0)
        .map(f64::ln)
        .collect();
    if logs.is_empty() {
        1.0
    } else {
        (logs.iter().sum::<f64>() / logs.len() as f64).exp()
    }
}

fn resolve(points: &SigmaPointSet, membership: &HullMembership) -> Vec<CertificateEntry> {
    membership
        .certificate
        .iter()
        .flatten()
        .map(|w| CertificateEntry {
            index: w.index,
            perm: points.perm(w.index),
            point: points.points[w.index],
            weight: w.weight,
        })
        .collect()
}

/// Structural diagnostics of the dilation theorem for one `(X, s, Y, t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub moc: MocReport,
    /// Normality residuals of `N(X,s)` and `N(Y,t)`.
    pub dilation_normality: (f64, f64),
    /// Relative residuals of `U* N U = (X - X* + s̄I) ⊕ (X + X* - s̄I)`.
    pub block_identity: (f64, f64),
    /// Spectrum of `N` against the union of the two block spectra.
    pub spectral_union: (MultisetMatch, MultisetMatch),
    /// Human-readable failed checks; empty when everything holds.
    pub violations: Vec<String>,
}

impl Theorem1Report {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Residual of the block-mixer identity for `N(X, s)`.
pub fn block_identity_residual(x: &ComplexMatrix, s: Complex64) -> Result<f64> {
    let n = x.require_square("block identity")?;
    let dil = dilate(x, s)?;
    let u = block_mixer(n)?;
    let mixed = &(&u.adjoint() * &dil) * &u;
    let split = direct_sum(
        &conj_add_scalar(x, ConjMode::Difference, s.conj())?,
        &conj_add_scalar(x, ConjMode::Sum, -s.conj())?,
    )?;
    let off = x.shift(-s).adjoint();
    let worst = mixed
        .entries()
        .iter()
        .zip(split.entries())
        .map(|(p, q)| (p - q).norm())
        .fold(0.0, f64::max);
    Ok(worst / (x.frobenius_norm() + off.frobenius_norm()).max(1.0))
}

fn spectral_union(x: &ComplexMatrix, s: Complex64, dil_spec: &Spectrum, seed: RngSeed) -> Result<MultisetMatch> {
    let left = eig_normal(&conj_add_scalar(x, ConjMode::Difference, s.conj())?, seed.offset(2))?;
    let right = eig_normal(&conj_add_scalar(x, ConjMode::Sum, -s.conj())?, seed.offset(3))?;
    let union: Vec<Complex64> = left.values.iter().chain(&right.values).copied().collect();
    let size = union.iter().map(|z| z.norm()).fold(1.0, f64::max);
    match_multisets(&dil_spec.values, &union, MULTISET_TOL * size)
}

/// Checks `(N(X,s), N(Y,t))`: normality of both dilations, the block
/// identity behind their splitting, and membership of the determinant.
pub fn verify_theorem1(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    s: Complex64,
    t: Complex64,
    cfg: &VerifyConfig,
) -> Result<Theorem1Report> {
    let n = check_pair(x, y)?;
    check_capacity(2 * n, cfg.cap)?;
    let nx = dilate(x, s)?;
    let ny = dilate(y, t)?;
    let dilation_normality = (
        classify(&nx)?.normality_residual,
        classify(&ny)?.normality_residual,
    );
    let block_identity = (block_identity_residual(x, s)?, block_identity_residual(y, t)?);

    let mut violations = Vec::new();
    for (name, residual, m) in [
        ("N(X,s)", dilation_normality.0, &nx),
        ("N(Y,t)", dilation_normality.1, &ny),
    ] {
        let bound = DILATION_NORMALITY_TOL * m.frobenius_norm().max(1.0);
        if residual > bound {
            violations.push(format!("{name} normality residual {residual:.3e} > {bound:.3e}"));
        }
    }
    for (name, residual) in [("X", block_identity.0), ("Y", block_identity.1)] {
        if residual > BLOCK_IDENTITY_TOL {
            violations.push(format!(
                "block identity for {name}: residual {residual:.3e} > {BLOCK_IDENTITY_TOL:.0e}"
            ));
        }
    }

    let moc = verify_moc(&nx, &ny, cfg)?;
    let spectral_union = (
        spectral_union(x, s, &moc.spec_a, cfg.seed)?,
        spectral_union(y, t, &moc.spec_b, cfg.seed.offset(10))?,
    );
    for (name, m) in [("N(X,s)", spectral_union.0), ("N(Y,t)", spectral_union.1)] {
        if !m.matched {
            violations.push(format!(
                "spectrum of {name} differs from the block spectra by {:.3e}",
                m.max_distance
            ));
        }
    }
    if !moc.membership.verdict.is_member() {
        violations.push(format!(
            "det(N(X,s) + N(Y,t)) outside the sigma-point hull (signed distance {:.3e})",
            moc.membership.signed_distance
        ));
    }
    Ok(Theorem1Report {
        moc,
        dilation_normality,
        block_identity,
        spectral_union,
        violations,
    })
}

/// A composed direct-sum certificate and its validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectSumReport {
    /// `(θ(σ,π), w_θ, t_σ s_π)` for every pair of component terms.
    pub terms: Vec<(Permutation, Complex64, f64)>,
    pub query: Complex64,
    pub weight_sum: f64,
    pub reconstruction_error: f64,
    /// Largest relative gap between `w_θ(σ,π)` and `z_σ v_π`.
    pub theta_deviation: f64,
    pub membership: HullMembership,
    pub valid: bool,
}

/// Composes the certificates of `(A,B)` and `(C,D)` into one for
/// `(A⊕C, B⊕D)`: weights `t_σ s_π` on generators `w_θ(σ,π)` evaluated on
/// the concatenated spectra, checked against `det(A+B) det(C+D)`.
pub fn verify_direct_sum(ab: &MocReport, cd: &MocReport, tol: f64) -> Result<DirectSumReport> {
    compose(ab, cd, ab.det_sum * cd.det_sum, tol)
}

/// [`verify_direct_sum`] from the four matrices: runs both component
/// checks, then validates the composed certificate against the LU
/// determinant of `(A⊕C) + (B⊕D)`.
pub fn verify_direct_sum_matrices(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    d: &ComplexMatrix,
    cfg: &VerifyConfig,
) -> Result<(MocReport, MocReport, DirectSumReport)> {
    let ab = verify_moc(a, b, cfg)?;
    let cd = verify_moc(c, d, &VerifyConfig { seed: cfg.seed.offset(2), ..*cfg })?;
    if ab.rescale.is_some() || cd.rescale.is_some() {
        return Err(MocError::Capacity {
            what: "direct sum of rescaled sigma-points",
            needed: 1,
            cap: 0,
        });
    }
    let whole = determinant(&(&direct_sum(a, c)? + &direct_sum(b, d)?))?;
    let composed = compose(&ab, &cd, whole, COMPOSED_CERT_TOL)?;
    Ok((ab, cd, composed))
}

fn compose(ab: &MocReport, cd: &MocReport, query: Complex64, tol: f64) -> Result<DirectSumReport> {
    check_tol(tol)?;
    if ab.certificate.is_empty() || cd.certificate.is_empty() {
        return Err(MocError::MissingCertificate);
    }
    let e: Vec<Complex64> = ab.spec_a.values.iter().chain(&cd.spec_a.values).copied().collect();
    let f: Vec<Complex64> = ab.spec_b.values.iter().chain(&cd.spec_b.values).copied().collect();
    let mut terms = Vec::with_capacity(ab.certificate.len() * cd.certificate.len());
    let mut theta_deviation = 0.0f64;
    for left in &ab.certificate {
        for right in &cd.certificate {
            let theta = compose_theta(&left.perm, &right.perm);
            let w = sigma_product(&e, &f, &theta);
            let zv = left.point * right.point;
            theta_deviation = theta_deviation.max((w - zv).norm() / w.norm().max(zv.norm()).max(f64::MIN_POSITIVE));
            terms.push((theta, w, left.weight * right.weight));
        }
    }
    let generators: Vec<Complex64> = terms.iter().map(|t| t.1).collect();
    let weight_sum: f64 = terms.iter().map(|t| t.2).sum();
    let recon: Complex64 = terms.iter().map(|t| t.1 * t.2).sum();
    let reconstruction_error = (recon - query).norm();
    let size = generators.iter().map(|z| z.norm()).fold(query.norm().max(1.0), f64::max);
    let membership = HullMembership {
        verdict: Verdict::Inside,
        signed_distance: reconstruction_error / size,
        certificate: Some(
            terms
                .iter()
                .enumerate()
                .map(|(index, t)| Weighted { index, weight: t.2 })
                .collect(),
        ),
        tolerance_used: tol * size,
    };
    let valid = validate_certificate_2d(&generators, &membership, query)?
        && theta_deviation <= THETA_PRODUCT_TOL;
    Ok(DirectSumReport {
        terms,
        query,
        weight_sum,
        reconstruction_error,
        theta_deviation,
        membership,
        valid,
    })
}

/// Samples of `det(A + U B U*)` over Haar-random `U`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaSample {
    pub unitaries_used: usize,
    pub dets: Vec<Complex64>,
    pub max_imag: f64,
    pub range_real: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiedlerReport {
    pub sample: DeltaSample,
    /// Smallest and largest (real) sigma-point.
    pub sigma_range: (f64, f64),
    pub scale: f64,
    pub spec_a: Spectrum,
    pub spec_b: Spectrum,
    pub passed: bool,
}

/// For hermitian `A`, `B`, every `det(A + U B U*)` must be real and lie
/// between the extreme sigma-points.
pub fn verify_fiedler(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    samples: usize,
    seed: RngSeed,
    tol: f64,
) -> Result<FiedlerReport> {
    check_tol(tol)?;
    let n = check_pair(a, b)?;
    let spec_a = eig_hermitian(a)?;
    let spec_b = eig_hermitian(b)?;
    let points = sigma_points(&spec_a.values, &spec_b.values, DEFAULT_CAP)?;
    let (lo, hi) = points
        .points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), z| (lo.min(z.re), hi.max(z.re)));
    let scale = points.points.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut rng = seed.rng();
    let dets = sample_delta(&mut rng, a, b, n, samples)?;
    let max_imag = dets.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let range_real = dets
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), z| (lo.min(z.re), hi.max(z.re)));
    let band = tol * scale;
    let passed = max_imag <= band
        && dets.iter().all(|z| z.re >= lo - band && z.re <= hi + band);
    Ok(FiedlerReport {
        sample: DeltaSample {
            unitaries_used: dets.len(),
            dets,
            max_imag,
            range_real,
        },
        sigma_range: (lo, hi),
        scale,
        spec_a,
        spec_b,
        passed,
    })
}

fn sample_delta<R: Rng + ?Sized>(
    rng: &mut R,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    n: usize,
    samples: usize,
) -> Result<Vec<Complex64>> {
    (0..samples)
        .map(|_| {
            let u = haar_unitary_with(rng, n)?;
            let rotated = &(&u * b) * &u.adjoint();
            determinant(&(a + &rotated))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DruryReport {
    pub query: PolyPoint,
    pub generators: Vec<PolyPoint>,
    pub perms: Vec<Permutation>,
    pub membership: HullMembership,
    pub certificate_valid: bool,
}

/// For hermitian `A`, `B` with eigenvalues `a`, `b` and `t = spec(A + B)`:
/// is `Π (λ + t_j)` a convex combination of the polynomials
/// `Π (λ + a_j + b_σ(j))`? Answered by LP over coefficient vectors.
pub fn verify_drury(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<DruryReport> {
    let n = check_pair(a, b)?;
    if n > DRURY_MAX_N {
        return Err(MocError::Capacity {
            what: "polynomial-hull generators",
            needed: factorial(n).unwrap_or(u128::MAX),
            cap: factorial(DRURY_MAX_N).expect("small factorial"),
        });
    }
    let a_vals: Vec<f64> = eig_hermitian(a)?.values.iter().map(|z| z.re).collect();
    let b_vals: Vec<f64> = eig_hermitian(b)?.values.iter().map(|z| z.re).collect();
    let t_vals: Vec<f64> = eig_hermitian(&(a + b))?.values.iter().map(|z| z.re).collect();
    let query = PolyPoint::from_roots(&t_vals);
    let perms: Vec<Permutation> = enumerate_permutations(n, DEFAULT_CAP)?.collect();
    let generators: Vec<PolyPoint> = perms
        .iter()
        .map(|p| {
            let roots: Vec<f64> = (0..n).map(|j| a_vals[j] + b_vals[p.apply(j)]).collect();
            PolyPoint::from_roots(&roots)
        })
        .collect();
    let coords: Vec<Vec<f64>> = generators.iter().map(|g| g.coefficients.clone()).collect();
    let membership = membership_lp(&coords, &query.coefficients, tol)?;
    let certificate_valid = membership.verdict.is_member()
        && validate_certificate(&coords, &membership, &query.coefficients)?;
    Ok(DruryReport {
        query,
        generators,
        perms,
        membership,
        certificate_valid,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityReport {
    pub sigma_match: MultisetMatch,
    pub det_relative_difference: f64,
    pub verdicts: (Verdict, Verdict),
    pub passed: bool,
}

/// Compares `(A, B)` with `(VAV*, VBV*)`: same sigma-points, same
/// determinant, same membership verdict.
pub fn verify_similarity_invariance(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    v: &ComplexMatrix,
    cfg: &VerifyConfig,
) -> Result<SimilarityReport> {
    let n = check_pair(a, b)?;
    if v.rows() != n || v.cols() != n {
        return Err(MocError::Dimension("similarity must match the pair size".into()));
    }
    let unitarity = classify(v)?.unitarity_residual;
    if unitarity > UNITARY_TOL {
        return Err(MocError::Classification {
            property: "unitary",
            residual: unitarity,
            tolerance: UNITARY_TOL,
        });
    }
    let conj = |m: &ComplexMatrix| &(v * m) * &v.adjoint();
    let (before, before_points) = verify_moc_with_points(a, b, cfg)?;
    let (after, after_points) = verify_moc_with_points(&conj(a), &conj(b), cfg)?;
    let size = before_points
        .points
        .iter()
        .map(|z| z.norm())
        .fold(1.0, f64::max);
    let sigma_match = match_multisets(&before_points.points, &after_points.points, MULTISET_TOL * size)?;
    let det_relative_difference = (before.det_sum - after.det_sum).norm()
        / before.det_sum.norm().max(after.det_sum.norm()).max(f64::MIN_POSITIVE);
    let verdicts = (before.verdict(), after.verdict());
    let passed = sigma_match.matched
        && det_relative_difference <= DET_MATCH_TOL
        && verdicts.0.is_member() == verdicts.1.is_member();
    Ok(SimilarityReport {
        sigma_match,
        det_relative_difference,
        verdicts,
        passed,
    })
}
