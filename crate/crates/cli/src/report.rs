//! Report JSON.
//!
//! Every report is an object with the fields of [`Report`]; `result` holds
//! the pipeline-specific section. Complex values are `[re, im]` pairs and
//! certificates are `[[permutation, weight], ...]` with permutations in
//! one-line notation (`"1 0 2"`). Only `wall_time_s` varies between runs
//! with identical inputs and flags.

use moc_core::convex::HullMembership;
use moc_core::matrix::MatrixClassReport;
use moc_core::sigma::{ScaleReport, SigmaPointSet};
use moc_core::spectra::MultisetMatch;
use moc_core::verify::{
    DirectSumReport, DruryReport, FiedlerReport, MocReport, SimilarityReport, Theorem1Report,
    Tolerances,
};
use moc_core::{Complex64, Verdict};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::args::RunConfig;
use crate::error::ErrorRecord;

pub const SCHEMA: &str = "moc-lab/report/v1";
/// Reports embed the full sigma-point list up to this many points.
pub const SIGMA_EMBED_LIMIT: usize = 5040;

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub config: RunConfig,
    pub status: &'static str,
    pub passed: bool,
    pub exit_code: u8,
    pub error: Option<ErrorRecord>,
    pub result: Option<Value>,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub name: String,
    /// SHA-256 of the compact JSON re-serialization of the parsed matrix.
    pub sha256: String,
}

pub fn digest(name: &str, canonical: &str) -> InputDigest {
    let hash = Sha256::digest(canonical.as_bytes());
    InputDigest {
        name: name.to_string(),
        sha256: hash.iter().map(|b| format!("{b:02x}")).collect(),
    }
}

#[derive(Debug, Serialize)]
pub struct MocSection {
    pub dim: usize,
    pub det_sum: Complex64,
    pub sigma_count: usize,
    pub verdict: Verdict,
    pub signed_distance: f64,
    pub tolerance_used: f64,
    pub certificate: Vec<(String, f64)>,
    pub certificate_points: Vec<Complex64>,
    pub hull: Vec<Complex64>,
    pub spec_a: Vec<Complex64>,
    pub spec_b: Vec<Complex64>,
    pub spectral_residuals: (f64, f64),
    pub class_residuals: (MatrixClassReport, MatrixClassReport),
    pub scale: ScaleReport,
    pub rescale: Option<f64>,
    pub seed: u64,
    pub tolerances: Tolerances,
    /// `[permutation, point]` for every sigma-point, when few enough.
    pub sigma_points: Option<Vec<(String, Complex64)>>,
}

impl MocSection {
    pub fn new(r: &MocReport, points: Option<&SigmaPointSet>) -> Self {
        MocSection {
            dim: r.dim,
            det_sum: r.det_sum,
            sigma_count: r.sigma_count,
            verdict: r.membership.verdict,
            signed_distance: r.membership.signed_distance,
            tolerance_used: r.membership.tolerance_used,
            certificate: r
                .certificate
                .iter()
                .map(|e| (e.perm.one_line(), e.weight))
                .collect(),
            certificate_points: r.certificate.iter().map(|e| e.point).collect(),
            hull: r.hull.clone(),
            spec_a: r.spec_a.values.clone(),
            spec_b: r.spec_b.values.clone(),
            spectral_residuals: (r.spec_a.residual, r.spec_b.residual),
            class_residuals: r.residuals,
            scale: r.scale,
            rescale: r.rescale,
            seed: r.seed.0,
            tolerances: r.tolerances,
            sigma_points: points.filter(|p| p.len() <= SIGMA_EMBED_LIMIT).map(|p| {
                (0..p.len())
                    .map(|k| (p.perm(k).one_line(), p.points[k]))
                    .collect()
            }),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Theorem1Section {
    pub holds: bool,
    pub violations: Vec<String>,
    pub dilation_normality: (f64, f64),
    pub block_identity: (f64, f64),
    pub spectral_union: (MultisetMatch, MultisetMatch),
    pub moc: MocSection,
}

impl Theorem1Section {
    pub fn new(r: &Theorem1Report, points: Option<&SigmaPointSet>) -> Self {
        Theorem1Section {
            holds: r.holds(),
            violations: r.violations.clone(),
            dilation_normality: r.dilation_normality,
            block_identity: r.block_identity,
            spectral_union: r.spectral_union,
            moc: MocSection::new(&r.moc, points),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FiedlerSection<'a> {
    pub passed: bool,
    pub unitaries_used: usize,
    pub max_imag: f64,
    pub range_real: (f64, f64),
    pub sigma_range: (f64, f64),
    pub scale: f64,
    pub spec_a: &'a [Complex64],
    pub spec_b: &'a [Complex64],
    pub dets: &'a [Complex64],
}

impl<'a> FiedlerSection<'a> {
    pub fn new(r: &'a FiedlerReport) -> Self {
        FiedlerSection {
            passed: r.passed,
            unitaries_used: r.sample.unitaries_used,
            max_imag: r.sample.max_imag,
            range_real: r.sample.range_real,
            sigma_range: r.sigma_range,
            scale: r.scale,
            spec_a: &r.spec_a.values,
            spec_b: &r.spec_b.values,
            dets: &r.sample.dets,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DrurySection<'a> {
    pub verdict: Verdict,
    pub certificate_valid: bool,
    pub signed_distance: f64,
    pub tolerance_used: f64,
    pub query: &'a [f64],
    pub generator_count: usize,
    pub certificate: Vec<(String, f64)>,
}

impl<'a> DrurySection<'a> {
    pub fn new(r: &'a DruryReport) -> Self {
        DrurySection {
            verdict: r.membership.verdict,
            certificate_valid: r.certificate_valid,
            signed_distance: r.membership.signed_distance,
            tolerance_used: r.membership.tolerance_used,
            query: &r.query.coefficients,
            generator_count: r.generators.len(),
            certificate: certificate_by_perm(&r.membership, |k| r.perms[k].one_line()),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SimilaritySection {
    pub passed: bool,
    pub sigma_match: MultisetMatch,
    pub det_relative_difference: f64,
    pub verdicts: (Verdict, Verdict),
}

impl SimilaritySection {
    pub fn new(r: &SimilarityReport) -> Self {
        SimilaritySection {
            passed: r.passed,
            sigma_match: r.sigma_match,
            det_relative_difference: r.det_relative_difference,
            verdicts: r.verdicts,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DirectSumSection {
    pub valid: bool,
    pub query: Complex64,
    pub weight_sum: f64,
    pub reconstruction_error: f64,
    pub theta_deviation: f64,
    /// `[θ(σ,π), w_θ, t_σ s_π]`.
    pub terms: Vec<(String, Complex64, f64)>,
    pub ab: MocSection,
    pub cd: MocSection,
}

impl DirectSumSection {
    pub fn new(ab: &MocReport, cd: &MocReport, r: &DirectSumReport) -> Self {
        DirectSumSection {
            valid: r.valid,
            query: r.query,
            weight_sum: r.weight_sum,
            reconstruction_error: r.reconstruction_error,
            theta_deviation: r.theta_deviation,
            terms: r
                .terms
                .iter()
                .map(|(p, w, t)| (p.one_line(), *w, *t))
                .collect(),
            ab: MocSection::new(ab, None),
            cd: MocSection::new(cd, None),
        }
    }
}

fn certificate_by_perm(m: &HullMembership, label: impl Fn(usize) -> String) -> Vec<(String, f64)> {
    m.certificate
        .iter()
        .flatten()
        .map(|w| (label(w.index), w.weight))
        .collect()
}
