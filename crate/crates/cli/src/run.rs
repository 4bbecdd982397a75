use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use moc_core::matrix::{classify, dilate};
use moc_core::verify::{
    verify_direct_sum_matrices, verify_drury, verify_fiedler, verify_moc_with_points,
    verify_similarity_invariance, verify_theorem1, VerifyConfig,
};
use moc_core::{ComplexMatrix, RngSeed};
use serde::Serialize;
use serde_json::Value;

use crate::args::{Cli, Command, Format, Pipeline, RunConfig};
use crate::batch::run_batch;
use crate::complex::format_complex;
use crate::error::{exit, CliError};
use crate::export::report_csv;
use crate::report::{
    digest, DirectSumSection, DrurySection, FiedlerSection, InputDigest, MocSection, Report,
    SimilaritySection, Theorem1Section, SCHEMA,
};

/// What a pipeline hands back to the report writer.
pub struct Outcome {
    pub result: Value,
    pub passed: bool,
    pub summary: String,
    pub exit_code: u8,
}

impl Outcome {
    pub fn new(result: impl Serialize, passed: bool, summary: String) -> Self {
        Outcome {
            result: serde_json::to_value(result).expect("report sections serialize"),
            passed,
            summary,
            exit_code: if passed { exit::OK } else { exit::VERDICT },
        }
    }
}

pub fn verify_config(run: &RunConfig) -> VerifyConfig {
    VerifyConfig {
        tol: run.tol,
        cap: run.cap,
        seed: RngSeed(run.seed),
    }
}

/// Runs the parsed command line and returns the process exit code.
pub fn execute(cli: Cli) -> u8 {
    let run = cli.run;
    match cli.command {
        Command::Dilate { input, s } => finish_plain(&run, dilate_cmd(&run, &input, s)),
        Command::Export { report } => finish_plain(&run, export_cmd(&run, &report)),
        Command::Verify { pipeline } => {
            let start = Instant::now();
            let mut inputs = Vec::new();
            let name = pipeline_name(&pipeline);
            let outcome = verify_cmd(&run, &pipeline, &mut inputs);
            finish_report(&run, format!("verify {name}"), inputs, outcome, start)
        }
        Command::Batch {
            pipeline,
            count,
            dim,
        } => {
            let start = Instant::now();
            let outcome = run_batch(pipeline, count, dim as usize, &run);
            let name = serde_json::to_value(pipeline).expect("enum serializes");
            let name = name.as_str().unwrap_or_default().to_string();
            finish_report(&run, format!("batch {name}"), Vec::new(), outcome, start)
        }
    }
}

fn pipeline_name(p: &Pipeline) -> &'static str {
    match p {
        Pipeline::Moc { .. } => "moc",
        Pipeline::Theorem1 { .. } => "theorem1",
        Pipeline::Fiedler { .. } => "fiedler",
        Pipeline::Drury { .. } => "drury",
        Pipeline::Similarity { .. } => "similarity",
        Pipeline::DirectSum { .. } => "direct-sum",
    }
}

pub fn load_matrix(path: &Path, name: &str) -> Result<(ComplexMatrix, InputDigest), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let m: ComplexMatrix = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let canonical = serde_json::to_string(&m).expect("matrix serializes");
    Ok((m, digest(name, &canonical)))
}

fn load_all(
    paths: &[(&str, &Path)],
    inputs: &mut Vec<InputDigest>,
) -> Result<Vec<ComplexMatrix>, CliError> {
    paths
        .iter()
        .map(|(name, path)| {
            let (m, d) = load_matrix(path, name)?;
            inputs.push(d);
            Ok(m)
        })
        .collect()
}

fn verify_cmd(
    run: &RunConfig,
    pipeline: &Pipeline,
    inputs: &mut Vec<InputDigest>,
) -> Result<Outcome, CliError> {
    let cfg = verify_config(run);
    match pipeline {
        Pipeline::Moc { a, b } => {
            let m = load_all(&[("a", a), ("b", b)], inputs)?;
            let (r, points) = verify_moc_with_points(&m[0], &m[1], &cfg)?;
            let summary = format!(
                "moc: n={} det={} {} (signed distance {:.3e}) over {} sigma-points",
                r.dim,
                format_complex(r.det_sum),
                r.verdict().as_str(),
                r.membership.signed_distance,
                r.sigma_count
            );
            Ok(Outcome::new(
                MocSection::new(&r, Some(&points)),
                r.verdict().is_member(),
                summary,
            ))
        }
        Pipeline::Theorem1 { x, y, s, t } => {
            let m = load_all(&[("x", x), ("y", y)], inputs)?;
            let r = verify_theorem1(&m[0], &m[1], *s, *t, &cfg)?;
            let summary = if r.holds() {
                format!(
                    "theorem1: n={} dilations {}x{}, det {} (signed distance {:.3e})",
                    m[0].rows(),
                    r.moc.dim,
                    r.moc.dim,
                    r.moc.verdict().as_str(),
                    r.moc.membership.signed_distance
                )
            } else {
                format!("theorem1: VIOLATION {}", r.violations.join("; "))
            };
            Ok(Outcome::new(Theorem1Section::new(&r, None), r.holds(), summary))
        }
        Pipeline::Fiedler { a, b } => {
            let m = load_all(&[("a", a), ("b", b)], inputs)?;
            let r = verify_fiedler(&m[0], &m[1], run.samples as usize, cfg.seed, cfg.tol)?;
            let summary = format!(
                "fiedler: {} samples, max |Im det| {:.3e}, Re det in [{}, {}] vs sigma range [{}, {}]: {}",
                r.sample.unitaries_used,
                r.sample.max_imag,
                r.sample.range_real.0,
                r.sample.range_real.1,
                r.sigma_range.0,
                r.sigma_range.1,
                if r.passed { "pass" } else { "FAIL" }
            );
            Ok(Outcome::new(FiedlerSection::new(&r), r.passed, summary))
        }
        Pipeline::Drury { a, b } => {
            let m = load_all(&[("a", a), ("b", b)], inputs)?;
            let r = verify_drury(&m[0], &m[1], cfg.tol)?;
            let summary = format!(
                "drury: {} generators, {}, certificate {}",
                r.generators.len(),
                r.membership.verdict.as_str(),
                if r.certificate_valid { "valid" } else { "INVALID" }
            );
            Ok(Outcome::new(DrurySection::new(&r), r.certificate_valid, summary))
        }
        Pipeline::Similarity { a, b, v } => {
            let m = load_all(&[("a", a), ("b", b), ("v", v)], inputs)?;
            let r = verify_similarity_invariance(&m[0], &m[1], &m[2], &cfg)?;
            let summary = format!(
                "similarity: sigma-points {}, det gap {:.3e}, verdicts {}/{}: {}",
                if r.sigma_match.matched { "match" } else { "DIFFER" },
                r.det_relative_difference,
                r.verdicts.0.as_str(),
                r.verdicts.1.as_str(),
                if r.passed { "pass" } else { "FAIL" }
            );
            Ok(Outcome::new(SimilaritySection::new(&r), r.passed, summary))
        }
        Pipeline::DirectSum { a, b, c, d } => {
            let m = load_all(&[("a", a), ("b", b), ("c", c), ("d", d)], inputs)?;
            let (ab, cd, r) = verify_direct_sum_matrices(&m[0], &m[1], &m[2], &m[3], &cfg)?;
            let summary = format!(
                "direct-sum: {} composed terms, weight sum {}, reconstruction error {:.3e}: {}",
                r.terms.len(),
                r.weight_sum,
                r.reconstruction_error,
                if r.valid { "valid" } else { "INVALID" }
            );
            Ok(Outcome::new(DirectSumSection::new(&ab, &cd, &r), r.valid, summary))
        }
    }
}

fn finish_report(
    run: &RunConfig,
    command: String,
    inputs: Vec<InputDigest>,
    outcome: Result<Outcome, CliError>,
    start: Instant,
) -> u8 {
    let (report, summary) = match outcome {
        Ok(o) => (
            Report {
                schema: SCHEMA,
                command,
                inputs,
                config: run.clone(),
                status: "ok",
                passed: o.passed,
                exit_code: o.exit_code,
                error: None,
                result: Some(o.result),
                wall_time_s: start.elapsed().as_secs_f64(),
            },
            Ok(o.summary),
        ),
        Err(e) => (
            Report {
                schema: SCHEMA,
                command,
                inputs,
                config: run.clone(),
                status: "error",
                passed: false,
                exit_code: e.exit_code(),
                error: Some(e.record()),
                result: None,
                wall_time_s: start.elapsed().as_secs_f64(),
            },
            Err(e),
        ),
    };
    let body = match run.format {
        Format::Json => Ok(serde_json::to_string_pretty(&report).expect("report serializes") + "\n"),
        Format::Csv => report_csv(&serde_json::to_value(&report).expect("report serializes")),
    };
    let mut code = report.exit_code;
    match body.and_then(|text| emit(run, &text)) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            if code == exit::OK || code == exit::VERDICT {
                code = e.exit_code();
            }
        }
    }
    match summary {
        Ok(line) if !run.quiet => say(run, &line),
        Ok(_) => {}
        Err(e) => eprintln!("error[{}]: {e}", e.code()),
    }
    code
}

fn finish_plain(run: &RunConfig, outcome: Result<String, CliError>) -> u8 {
    match outcome {
        Ok(line) => {
            if !run.quiet && !line.is_empty() {
                say(run, &line);
            }
            exit::OK
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            e.exit_code()
        }
    }
}

// summary goes to stdout unless stdout carries the payload
fn say(run: &RunConfig, line: &str) {
    if run.out_path.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn emit(run: &RunConfig, text: &str) -> Result<(), CliError> {
    match &run.out_path {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

fn dilate_cmd(run: &RunConfig, input: &Path, s: moc_core::Complex64) -> Result<String, CliError> {
    let (x, _) = load_matrix(input, "x")?;
    let n = dilate(&x, s)?;
    let residual = classify(&n)?.normality_residual;
    let text = serde_json::to_string_pretty(&n).expect("matrix serializes") + "\n";
    emit(run, &text)?;
    Ok(format!(
        "dilated {}x{} -> {}x{}, normality residual {residual:.3e}",
        x.rows(),
        x.cols(),
        n.rows(),
        n.cols()
    ))
}

fn export_cmd(run: &RunConfig, path: &Path) -> Result<String, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let report: Value = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let csv = report_csv(&report)?;
    emit(run, &csv)?;
    Ok(String::new())
}
