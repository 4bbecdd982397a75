//! Random-instance batches.
//!
//! Instance `k` draws its matrices from seed `seed + k` (wrapping) and runs
//! with that seed. Instances are spread over a rayon pool whose size comes
//! from `MOC_LAB_THREADS` (default: all cores); results are reported in
//! index order whatever the completion order.

use moc_core::instances::{random_complex, random_hermitian, random_matrix, random_normal};
use moc_core::spectra::haar_unitary_with;
use moc_core::verify::{
    verify_drury, verify_fiedler, verify_moc, verify_similarity_invariance, verify_theorem1,
    VerifyConfig,
};
use moc_core::{RngSeed, Verdict};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{BatchPipeline, RunConfig};
use crate::error::{exit, CliError, ErrorRecord};
use crate::run::{verify_config, Outcome};

pub const THREADS_VAR: &str = "MOC_LAB_THREADS";

#[derive(Debug, Serialize)]
pub struct InstanceRecord {
    pub index: u64,
    pub seed: u64,
    pub status: &'static str,
    pub passed: bool,
    pub verdict: Option<Verdict>,
    pub signed_distance: Option<f64>,
    pub error: Option<ErrorRecord>,
}

#[derive(Debug, Serialize)]
struct BatchSection {
    pipeline: BatchPipeline,
    dim: usize,
    count: u64,
    passed: u64,
    failed: u64,
    errors: u64,
    instances: Vec<InstanceRecord>,
}

pub fn thread_count() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Input(format!("{THREADS_VAR} must be a positive integer, got {v:?}"))),
        },
    }
}

pub fn run_batch(
    pipeline: BatchPipeline,
    count: u64,
    dim: usize,
    run: &RunConfig,
) -> Result<Outcome, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count()? {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Input(format!("thread pool: {e}")))?;
    let base = verify_config(run);
    let instances: Vec<InstanceRecord> = pool.install(|| {
        (0..count)
            .into_par_iter()
            .map(|k| run_instance(pipeline, dim, k, &base, run.samples as usize))
            .collect()
    });

    let passed = instances.iter().filter(|r| r.passed).count() as u64;
    let errors = instances.iter().filter(|r| r.error.is_some()).count() as u64;
    let exit_code = match instances.iter().find_map(|r| r.error.as_ref()) {
        Some(e) => error_exit(e.code),
        None if passed == count => exit::OK,
        None => exit::VERDICT,
    };
    let summary = format!(
        "batch: {passed}/{count} passed, {} failed, {errors} errors (n={dim})",
        count - passed - errors
    );
    let section = BatchSection {
        pipeline,
        dim,
        count,
        passed,
        failed: count - passed - errors,
        errors,
        instances,
    };
    let mut outcome = Outcome::new(section, passed == count, summary);
    outcome.exit_code = exit_code;
    Ok(outcome)
}

fn error_exit(code: &str) -> u8 {
    match code {
        "capacity" => exit::CAPACITY,
        "convergence" => exit::CONVERGENCE,
        "classification" => exit::CLASSIFICATION,
        _ => exit::INPUT,
    }
}

fn run_instance(
    pipeline: BatchPipeline,
    n: usize,
    index: u64,
    base: &VerifyConfig,
    samples: usize,
) -> InstanceRecord {
    let seed = RngSeed(base.seed.0.wrapping_add(index));
    let cfg = VerifyConfig { seed, ..*base };
    let mut rng = seed.rng();
    let outcome: Result<(bool, Option<Verdict>, Option<f64>), CliError> = (|| {
        Ok(match pipeline {
            BatchPipeline::Moc => {
                let a = random_normal(&mut rng, n);
                let b = random_normal(&mut rng, n);
                let r = verify_moc(&a, &b, &cfg)?;
                let v = r.verdict();
                (v.is_member(), Some(v), Some(r.membership.signed_distance))
            }
            BatchPipeline::Theorem1 => {
                let x = random_matrix(&mut rng, n);
                let y = random_matrix(&mut rng, n);
                let s = random_complex(&mut rng);
                let t = random_complex(&mut rng);
                let r = verify_theorem1(&x, &y, s, t, &cfg)?;
                (r.holds(), Some(r.moc.verdict()), Some(r.moc.membership.signed_distance))
            }
            BatchPipeline::Fiedler => {
                let a = random_hermitian(&mut rng, n);
                let b = random_hermitian(&mut rng, n);
                let r = verify_fiedler(&a, &b, samples, seed, cfg.tol)?;
                (r.passed, None, None)
            }
            BatchPipeline::Drury => {
                let a = random_hermitian(&mut rng, n);
                let b = random_hermitian(&mut rng, n);
                let r = verify_drury(&a, &b, cfg.tol)?;
                let m = &r.membership;
                (r.certificate_valid, Some(m.verdict), Some(m.signed_distance))
            }
            BatchPipeline::Similarity => {
                let a = random_normal(&mut rng, n);
                let b = random_normal(&mut rng, n);
                let v = haar_unitary_with(&mut rng, n)?;
                let r = verify_similarity_invariance(&a, &b, &v, &cfg)?;
                (r.passed, Some(r.verdicts.0), None)
            }
        })
    })();
    match outcome {
        Ok((passed, verdict, signed_distance)) => InstanceRecord {
            index,
            seed: seed.0,
            status: "ok",
            passed,
            verdict,
            signed_distance,
            error: None,
        },
        Err(e) => InstanceRecord {
            index,
            seed: seed.0,
            status: "error",
            passed: false,
            verdict: None,
            signed_distance: None,
            error: Some(e.record()),
        },
    }
}
