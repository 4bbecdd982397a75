//! Convex membership in ℝ^d as a phase-one simplex feasibility problem.
//!
//! For generators `g_i` and query `q` we look for `w >= 0` with `Σ w_i = 1`
//! and `|Σ_i w_i g_ij - q_j| <= δ` for every coordinate `j`. The band is
//! written with bounded slacks `u_j + v_j = 2δ`, `u_j, v_j >= 0`:
//!
//! ```text
//! Σ_i w_i g_ij + u_j = q_j + δ
//! ```
//!
//! Each coordinate row is divided by its largest magnitude before pivoting.
//! The tableau is dense and pivots follow Bland's rule, so the basis
//! sequence, and with it the certificate, is deterministic.

use super::{normalize, HullMembership, Verdict, Weighted};
use crate::error::{check_tol, MocError, Result};

pub const MAX_LP_GENERATORS: usize = 10_000;
pub const MAX_LP_DIMENSION: usize = 16;

// Floating-point allowance, relative to the coordinate scale, added to every
// reconstruction bound.
const ROUND_SLACK: f64 = 1e-13;
// Band used for the first, "exact" solve that separates inside from boundary.
const EXACT_SLACK: f64 = 1e-12;
const EPS_PIVOT: f64 = 1e-11;
const EPS_COST: f64 = 1e-12;

/// Decides whether `query` lies in the convex hull of `generators` within
/// the per-coordinate band `tol * scale`, `scale` being the largest
/// coordinate magnitude in the problem.
///
/// A query reproducible within round-off is `Inside`; one that needs the
/// band is `Boundary`. `signed_distance` is the certificate's worst
/// coordinate residual over `scale` for members, and the phase-one
/// objective (row-normalized infeasibility) for `Outside`.
pub fn membership_lp(generators: &[Vec<f64>], query: &[f64], tol: f64) -> Result<HullMembership> {
    check_tol(tol)?;
    if generators.is_empty() {
        return Err(MocError::EmptyInput("membership_lp needs at least one generator"));
    }
    if generators.len() > MAX_LP_GENERATORS {
        return Err(MocError::Capacity {
            what: "LP generators",
            needed: generators.len() as u128,
            cap: MAX_LP_GENERATORS as u128,
        });
    }
    let d = query.len();
    if d > MAX_LP_DIMENSION {
        return Err(MocError::Dimension(format!(
            "LP membership supports d <= {MAX_LP_DIMENSION}, got {d}"
        )));
    }
    if let Some(g) = generators.iter().find(|g| g.len() != d) {
        return Err(MocError::Dimension(format!(
            "generator of length {} for a query of length {d}",
            g.len()
        )));
    }
    let values = generators.iter().flatten().chain(query);
    if let Some(index) = values.clone().position(|x| !x.is_finite()) {
        return Err(MocError::NonFinite { index });
    }
    let scale = values.fold(0.0f64, |m, x| m.max(x.abs()));
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let band = tol * scale;
    let tolerance_used = band + ROUND_SLACK * scale;

    let exact_slack = (EXACT_SLACK * scale).min(band);
    let exact = Phase1::solve(generators, query, exact_slack)?;
    let (cert, residual) = certificate(generators, query, &exact.weights);
    if !cert.is_empty() && residual <= exact_slack + ROUND_SLACK * scale {
        return Ok(HullMembership {
            verdict: Verdict::Inside,
            signed_distance: residual / scale,
            certificate: Some(cert),
            tolerance_used,
        });
    }

    let banded = Phase1::solve(generators, query, band)?;
    let (cert, residual) = certificate(generators, query, &banded.weights);
    if !cert.is_empty() && residual <= tolerance_used {
        return Ok(HullMembership {
            verdict: Verdict::Boundary,
            signed_distance: residual / scale,
            certificate: Some(cert),
            tolerance_used,
        });
    }
    let excess = if cert.is_empty() {
        0.0
    } else {
        (residual - band) / scale
    };
    Ok(HullMembership::outside(
        banded.objective.max(excess).max(f64::MIN_POSITIVE),
        tolerance_used,
    ))
}

fn certificate(generators: &[Vec<f64>], query: &[f64], weights: &[f64]) -> (Vec<Weighted>, f64) {
    let cert = normalize(weights.iter().copied().enumerate());
    let residual = (0..query.len())
        .map(|j| {
            let recon: f64 = cert.iter().map(|w| w.weight * generators[w.index][j]).sum();
            (recon - query[j]).abs()
        })
        .fold(0.0, f64::max);
    (cert, residual)
}

struct Phase1 {
    weights: Vec<f64>,
    objective: f64,
}

impl Phase1 {
    fn solve(generators: &[Vec<f64>], query: &[f64], slack: f64) -> Result<Phase1> {
        let g = generators.len();
        let d = query.len();
        let rows = 1 + 2 * d;
        // columns: w (g), u (d), v (d), artificials (rows), rhs
        let structural = g + 2 * d;
        let width = structural + rows + 1;
        let rhs = width - 1;
        let mut t = vec![vec![0.0; width]; rows];

        for w in t[0].iter_mut().take(g) {
            *w = 1.0;
        }
        t[0][rhs] = 1.0;
        for j in 0..d {
            let r = generators
                .iter()
                .map(|gen| gen[j].abs())
                .fold(query[j].abs().max(slack), f64::max);
            let row = &mut t[1 + j];
            for (i, gen) in generators.iter().enumerate() {
                row[i] = gen[j] / r;
            }
            row[g + j] = 1.0;
            row[rhs] = (query[j] + slack) / r;
            if row[rhs] < 0.0 {
                for x in row.iter_mut().take(structural) {
                    *x = -*x;
                }
                row[rhs] = -row[rhs];
            }
            let bound = &mut t[1 + d + j];
            bound[g + j] = 1.0;
            bound[g + d + j] = 1.0;
            bound[rhs] = 2.0 * slack / r;
        }
        for (r, row) in t.iter_mut().enumerate() {
            row[structural + r] = 1.0;
        }
        let mut basis: Vec<usize> = (structural..structural + rows).collect();

        // reduced costs of "minimize the sum of artificials"
        let mut cost = vec![0.0; width];
        for row in &t {
            for k in 0..structural {
                cost[k] -= row[k];
            }
            cost[rhs] -= row[rhs];
        }

        let max_iter = 50 * (d + g);
        let mut iterations = 0;
        while let Some(enter) = (0..structural).find(|&k| cost[k] < -EPS_COST) {
            let mut leave: Option<usize> = None;
            let mut best = f64::INFINITY;
            for (r, row) in t.iter().enumerate() {
                if row[enter] > EPS_PIVOT {
                    let ratio = row[rhs] / row[enter];
                    let better = match leave {
                        None => true,
                        Some(l) => ratio < best || (ratio == best && basis[r] < basis[l]),
                    };
                    if better {
                        best = ratio;
                        leave = Some(r);
                    }
                }
            }
            // phase one is bounded below, so an unbounded ray means round-off
            let Some(leave) = leave else {
                return Err(MocError::Convergence {
                    solver: "phase-one simplex",
                    best_residual: -cost[rhs],
                });
            };
            pivot(&mut t, &mut cost, leave, enter);
            basis[leave] = enter;
            iterations += 1;
            if iterations > max_iter {
                return Err(MocError::Convergence {
                    solver: "phase-one simplex",
                    best_residual: -cost[rhs],
                });
            }
        }

        let mut weights = vec![0.0; g];
        let mut objective = 0.0;
        for (r, &b) in basis.iter().enumerate() {
            if b < g {
                weights[b] = t[r][rhs];
            } else if b >= structural {
                objective += t[r][rhs].max(0.0);
            }
        }
        Ok(Phase1 { weights, objective })
    }
}

fn pivot(t: &mut [Vec<f64>], cost: &mut [f64], leave: usize, enter: usize) {
    let p = t[leave][enter];
    for x in t[leave].iter_mut() {
        *x /= p;
    }
    let pivot_row = t[leave].clone();
    for (r, row) in t.iter_mut().enumerate() {
        if r == leave {
            continue;
        }
        let f = row[enter];
        if f != 0.0 {
            for (x, &pr) in row.iter_mut().zip(&pivot_row) {
                *x -= f * pr;
            }
            row[enter] = 0.0;
        }
    }
    let f = cost[enter];
    if f != 0.0 {
        for (x, &pr) in cost.iter_mut().zip(&pivot_row) {
            *x -= f * pr;
        }
        cost[enter] = 0.0;
    }
}
