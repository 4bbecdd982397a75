//! Eigenvalues of hermitian and normal matrices, Haar-random unitaries and
//! tolerance-based multiset comparison of spectra.
//!
//! Hermitian matrices are diagonalized with cyclic complex Jacobi rotations.
//! A normal matrix `A = H + iK` (with `H`, `K` hermitian and commuting) is
//! diagonalized through the Jacobi eigenvectors of the generic combination
//! `H + tK`, `t` drawn from the caller's seed; the eigenvalues are then the
//! diagonal of `V* A V`, accepted only if its off-diagonal mass is small.

use std::cmp::Ordering;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{MocError, Result};
use crate::matrix::{classify, ComplexMatrix};
use crate::rng::{complex_normal, RngSeed};

/// Precondition on `hermitian_residual` for [`eig_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Precondition on `normality_residual` for [`eig_normal`].
pub const NORMALITY_TOL: f64 = 1e-8;
/// Accepted diagonalization residual of [`eig_normal`].
pub const NORMAL_RESIDUAL_TOL: f64 = 1e-8;

const JACOBI_MAX_SWEEPS: usize = 30;
const JACOBI_OFF_TOL: f64 = 1e-14;
const NORMAL_RETRIES: usize = 8;

/// Eigenvalues of a matrix together with the certified residual
/// `||V* A V - D||_F / max(1, ||A||_F)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub values: Vec<Complex64>,
    pub residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<ComplexMatrix>,
}

impl Spectrum {
    /// Wraps an explicit eigenvalue list (no basis, zero residual).
    pub fn from_values(values: Vec<Complex64>) -> Self {
        Spectrum {
            values,
            residual: 0.0,
            basis: None,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Canonical eigenvalue order: ascending by real part, then imaginary part.
pub fn lexicographic(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Eigen-decomposition of a hermitian matrix. Values are real and ascending.
pub fn eig_hermitian(a: &ComplexMatrix) -> Result<Spectrum> {
    a.require_square("eig_hermitian")?;
    let class = classify(a)?;
    if class.hermitian_residual > HERMITIAN_TOL {
        return Err(MocError::Classification {
            property: "hermitian",
            residual: class.hermitian_residual,
            tolerance: HERMITIAN_TOL,
        });
    }
    let sym = hermitian_part(a);
    let (diag, basis) = jacobi(&sym);
    let mut order: Vec<usize> = (0..diag.len()).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values: Vec<Complex64> = order.iter().map(|&i| Complex64::new(diag[i], 0.0)).collect();
    let basis = permute_columns(&basis, &order);
    let residual = diagonalization_residual(a, &basis, &values);
    if residual > HERMITIAN_TOL {
        return Err(MocError::Convergence {
            solver: "hermitian Jacobi",
            best_residual: residual,
        });
    }
    Ok(Spectrum {
        values,
        residual,
        basis: Some(basis),
    })
}

/// Eigen-decomposition of a normal matrix; `seed` drives the choice of the
/// auxiliary hermitian combination and makes the result reproducible.
pub fn eig_normal(a: &ComplexMatrix, seed: RngSeed) -> Result<Spectrum> {
    a.require_square("eig_normal")?;
    let class = classify(a)?;
    if class.normality_residual > NORMALITY_TOL {
        return Err(MocError::Classification {
            property: "normal",
            residual: class.normality_residual,
            tolerance: NORMALITY_TOL,
        });
    }
    let h = hermitian_part(a);
    // K = (A - A*) / 2i
    let k = hermitian_part(&a.scale(Complex64::new(0.0, -1.0)));
    let scale = a.frobenius_norm().max(1.0);
    let mut rng = seed.rng();
    let mut best = f64::INFINITY;
    for _ in 0..=NORMAL_RETRIES {
        let t: f64 = rng.random_range(0.25..0.75);
        let mix = &h + &k.scale(Complex64::new(t, 0.0));
        let (_, basis) = jacobi(&mix);
        let d = &(&basis.adjoint() * a) * &basis;
        let off = off_diagonal_norm(&d);
        let residual = off / scale;
        if residual <= NORMAL_RESIDUAL_TOL {
            let diag = d.diagonal();
            let mut order: Vec<usize> = (0..diag.len()).collect();
            order.sort_by(|&i, &j| lexicographic(&diag[i], &diag[j]));
            return Ok(Spectrum {
                values: order.iter().map(|&i| diag[i]).collect(),
                residual,
                basis: Some(permute_columns(&basis, &order)),
            });
        }
        best = best.min(residual);
    }
    Err(MocError::Convergence {
        solver: "normal eigensolver",
        best_residual: best,
    })
}

/// Haar-distributed `n x n` unitary, reproducible per seed.
pub fn haar_unitary(n: usize, seed: RngSeed) -> Result<ComplexMatrix> {
    haar_unitary_with(&mut seed.rng(), n)
}

/// Haar unitary drawn from an existing stream: QR of a complex Ginibre
/// matrix with the columns of Q rotated by the phases of diag(R).
pub fn haar_unitary_with<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(MocError::Dimension("haar_unitary needs n >= 1".into()));
    }
    let data = (0..n * n).map(|_| complex_normal(rng)).collect();
    let ginibre = ComplexMatrix::new(n, n, data)?;
    let (mut q, r) = householder_qr(&ginibre);
    for j in 0..n {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}

/// Outcome of pairing two multisets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultisetMatch {
    pub matched: bool,
    /// Largest distance within the pairing that was found.
    pub max_distance: f64,
}

/// Decides whether the two multisets can be paired with every pair within
/// `tol`. Tries greedy nearest pairing first; on failure falls back to an
/// exhaustive bottleneck search (size <= 8) or bipartite matching.
pub fn match_multisets(p: &[Complex64], q: &[Complex64], tol: f64) -> Result<MultisetMatch> {
    if p.len() != q.len() {
        return Err(MocError::Dimension(format!(
            "multisets of size {} and {}",
            p.len(),
            q.len()
        )));
    }
    if tol.is_nan() || tol < 0.0 {
        return Err(MocError::InvalidTolerance(tol));
    }
    let greedy = greedy_pairing(p, q);
    if greedy <= tol {
        return Ok(MultisetMatch {
            matched: true,
            max_distance: greedy,
        });
    }
    if p.len() <= 8 {
        let best = bottleneck_exhaustive(p, q);
        return Ok(MultisetMatch {
            matched: best <= tol,
            max_distance: best,
        });
    }
    Ok(match threshold_matching(p, q, tol) {
        Some(max_distance) => MultisetMatch {
            matched: true,
            max_distance,
        },
        None => MultisetMatch {
            matched: false,
            max_distance: greedy,
        },
    })
}

fn greedy_pairing(p: &[Complex64], q: &[Complex64]) -> f64 {
    let mut used = vec![false; q.len()];
    let mut worst = 0.0f64;
    for a in p {
        let (j, d) = q
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, b)| (j, (a - b).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("equal sizes");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

fn bottleneck_exhaustive(p: &[Complex64], q: &[Complex64]) -> f64 {
    fn search(
        i: usize,
        p: &[Complex64],
        q: &[Complex64],
        used: &mut [bool],
        current: f64,
        best: &mut f64,
    ) {
        if current >= *best {
            return;
        }
        if i == p.len() {
            *best = current;
            return;
        }
        for j in 0..q.len() {
            if !used[j] {
                used[j] = true;
                search(i + 1, p, q, used, current.max((p[i] - q[j]).norm()), best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    search(0, p, q, &mut vec![false; q.len()], 0.0, &mut best);
    if p.is_empty() {
        0.0
    } else {
        best
    }
}

// Kuhn's augmenting paths over edges of length <= tol.
fn threshold_matching(p: &[Complex64], q: &[Complex64], tol: f64) -> Option<f64> {
    let n = p.len();
    let adj: Vec<Vec<usize>> = p
        .iter()
        .map(|a| (0..n).filter(|&j| (a - q[j]).norm() <= tol).collect())
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    fn augment(
        i: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                if owner[j].is_none_or(|k| augment(k, adj, seen, owner)) {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    for i in 0..n {
        if !augment(i, &adj, &mut vec![false; n], &mut owner) {
            return None;
        }
    }
    Some(
        owner
            .iter()
            .enumerate()
            .map(|(j, i)| (p[i.expect("perfect matching")] - q[j]).norm())
            .fold(0.0, f64::max),
    )
}

fn hermitian_part(a: &ComplexMatrix) -> ComplexMatrix {
    (a + &a.adjoint()).scale(Complex64::new(0.5, 0.0))
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

fn diagonalization_residual(a: &ComplexMatrix, basis: &ComplexMatrix, values: &[Complex64]) -> f64 {
    let d = &(&basis.adjoint() * a) * basis;
    let err = &d - &ComplexMatrix::from_diag(values);
    err.frobenius_norm() / a.frobenius_norm().max(1.0)
}

fn permute_columns(m: &ComplexMatrix, order: &[usize]) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(m.rows(), m.cols());
    for (new, &old) in order.iter().enumerate() {
        for i in 0..m.rows() {
            out[(i, new)] = m[(i, old)];
        }
    }
    out
}

/// Cyclic Jacobi on a hermitian matrix. Returns the (unsorted) real
/// diagonal and the accumulated unitary `V` with `V* A V` diagonal.
fn jacobi(a: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = a.rows();
    let mut m = a.clone();
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_OFF_TOL * m.frobenius_norm();
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&m) <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let b = apq.norm();
                if b == 0.0 {
                    continue;
                }
                // Phase-rotate the pair to a real symmetric 2x2 block, then
                // apply the classical real rotation.
                let phase = apq / b;
                let tau = (m[(q, q)].re - m[(p, p)].re) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let vpp = Complex64::new(c, 0.0);
                let vpq = Complex64::new(s, 0.0);
                let vqp = phase.conj() * -s;
                let vqq = phase.conj() * c;
                for k in 0..n {
                    let (akp, akq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = akp * vpp + akq * vqp;
                    m[(k, q)] = akp * vpq + akq * vqq;
                }
                for k in 0..n {
                    let (apk, aqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = vpp.conj() * apk + vqp.conj() * aqk;
                    m[(q, k)] = vpq.conj() * apk + vqq.conj() * aqk;
                }
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
                m[(p, p)].im = 0.0;
                m[(q, q)].im = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vkp * vpp + vkq * vqp;
                    v[(k, q)] = vkp * vpq + vkq * vqq;
                }
            }
        }
    }
    ((0..n).map(|i| m[(i, i)].re).collect(), v)
}

/// Householder QR of a square matrix: returns unitary `Q` and upper
/// triangular `R` with `A = Q R`.
fn householder_qr(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.rows();
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n {
        let x: Vec<Complex64> = (k..n).map(|i| r[(i, k)]).collect();
        let norm_x = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 {
            x[0] / x[0].norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let mut w = x;
        w[0] += phase * norm_x;
        let norm_w = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm_w == 0.0 {
            continue;
        }
        for z in &mut w {
            *z /= norm_w;
        }
        // R <- (I - 2 w w*) R on rows k..n
        for j in 0..n {
            let dot: Complex64 = w
                .iter()
                .enumerate()
                .map(|(i, wi)| wi.conj() * r[(k + i, j)])
                .sum();
            for (i, wi) in w.iter().enumerate() {
                r[(k + i, j)] -= wi * dot * 2.0;
            }
        }
        // Q <- Q (I - 2 w w*) on columns k..n
        for row in 0..n {
            let dot: Complex64 = w
                .iter()
                .enumerate()
                .map(|(i, wi)| q[(row, k + i)] * wi)
                .sum();
            for (i, wi) in w.iter().enumerate() {
                q[(row, k + i)] -= dot * wi.conj() * 2.0;
            }
        }
        for i in k + 1..n {
            r[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    (q, r)
}
