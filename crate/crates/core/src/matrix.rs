//! Dense complex matrices and the block constructions built from them:
//! the normal dilation, the block mixing unitary, direct sums and the
//! hermitian/skew parts shifted by a scalar.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{MocError, Result};

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixFile", into = "MatrixFile")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

/// On-disk layout: `{"rows": R, "cols": C, "entries": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl TryFrom<MatrixFile> for ComplexMatrix {
    type Error = MocError;

    fn try_from(file: MatrixFile) -> Result<Self> {
        let data = file
            .entries
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        ComplexMatrix::new(file.rows, file.cols, data)
    }
}

impl From<ComplexMatrix> for MatrixFile {
    fn from(m: ComplexMatrix) -> Self {
        MatrixFile {
            rows: m.rows,
            cols: m.cols,
            entries: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(MocError::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(index) = data.iter().position(|z| !z.is_finite()) {
            return Err(MocError::NonFinite { index });
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(MocError::Dimension("ragged rows".into()));
        }
        ComplexMatrix::new(r, c, rows.concat())
    }

    /// Builds a matrix from real entries given row by row.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        ComplexMatrix::from_rows(&rows)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = ComplexMatrix::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    /// `self + alpha * I`.
    pub fn shift(&self, alpha: Complex64) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out[(i, i)] += alpha;
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        self.diagonal().into_iter().sum()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "addition")?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "subtraction")?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(MocError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Copies the `rows x cols` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Result<Self> {
        if r0 + rows > self.rows || c0 + cols > self.cols {
            return Err(MocError::Dimension(format!(
                "block {rows}x{cols} at ({r0},{c0}) exceeds {}x{}",
                self.rows, self.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = self[(r0 + i, c0 + j)];
            }
        }
        Ok(out)
    }

    /// Assembles `[[top_left, top_right], [bottom_left, bottom_right]]`.
    pub fn from_blocks(
        top_left: &Self,
        top_right: &Self,
        bottom_left: &Self,
        bottom_right: &Self,
    ) -> Result<Self> {
        let (r0, c0) = (top_left.rows, top_left.cols);
        let (r1, c1) = (bottom_right.rows, bottom_right.cols);
        if top_right.rows != r0
            || top_right.cols != c1
            || bottom_left.rows != r1
            || bottom_left.cols != c0
        {
            return Err(MocError::Dimension("incompatible block shapes".into()));
        }
        let mut out = ComplexMatrix::zeros(r0 + r1, c0 + c1);
        for (block, ro, co) in [
            (top_left, 0, 0),
            (top_right, 0, c0),
            (bottom_left, r0, 0),
            (bottom_right, r0, c0),
        ] {
            for i in 0..block.rows {
                for j in 0..block.cols {
                    out[(ro + i, co + j)] = block[(i, j)];
                }
            }
        }
        Ok(out)
    }

    pub(crate) fn require_square(&self, op: &str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(MocError::Dimension(format!(
                "{op} needs a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    fn same_shape(&self, other: &Self, op: &str) -> Result<()> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(MocError::Dimension(format!(
                "{op} of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )))
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

// The operator impls panic on shape mismatch; use the `try_*` methods for
// untrusted shapes.
impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix addition")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        self.try_sub(rhs).expect("matrix subtraction")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Structural residuals of a square matrix, each a Frobenius norm divided
/// by `max(1, ||A||_F)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatrixClassReport {
    /// `||A A* - A* A||`
    pub normality_residual: f64,
    /// `||A - A*||`
    pub hermitian_residual: f64,
    /// `||A + A*||`
    pub skew_residual: f64,
    /// `||A* A - I||`
    pub unitarity_residual: f64,
}

/// Which combination of a matrix with its adjoint to form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConjMode {
    /// `X + X*`
    Sum,
    /// `X - X*`
    Difference,
}

/// The normal dilation `[[X, (X - sI)*], [(X - sI)*, X]]` of a square `X`.
pub fn dilate(x: &ComplexMatrix, s: Complex64) -> Result<ComplexMatrix> {
    x.require_square("dilate")?;
    let off = x.shift(-s).adjoint();
    ComplexMatrix::from_blocks(x, &off, &off, x)
}

/// `U = (1/sqrt 2) [[I, I], [-I, I]]` of size `2n`. Conjugating
/// `[[M, N], [N, M]]` by it gives `(M - N) ⊕ (M + N)`.
pub fn block_mixer(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(MocError::Dimension("block_mixer needs n >= 1".into()));
    }
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut u = ComplexMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        u[(i, i)] = h;
        u[(i, n + i)] = h;
        u[(n + i, i)] = -h;
        u[(n + i, n + i)] = h;
    }
    Ok(u)
}

/// Block-diagonal `A ⊕ C`.
pub fn direct_sum(a: &ComplexMatrix, c: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.require_square("direct_sum")?;
    let m = c.require_square("direct_sum")?;
    ComplexMatrix::from_blocks(
        a,
        &ComplexMatrix::zeros(n, m),
        &ComplexMatrix::zeros(m, n),
        c,
    )
}

/// Determinant by LU factorization with partial pivoting.
pub fn determinant(a: &ComplexMatrix) -> Result<Complex64> {
    let n = a.require_square("determinant")?;
    let mut lu = a.data.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&i, &j| lu[i * n + k].norm().total_cmp(&lu[j * n + k].norm()))
            .expect("non-empty pivot range");
        let pivot = lu[pivot_row * n + k];
        if pivot == Complex64::new(0.0, 0.0) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if pivot_row != k {
            for j in 0..n {
                lu.swap(k * n + j, pivot_row * n + j);
            }
            det = -det;
        }
        det *= pivot;
        for i in k + 1..n {
            let factor = lu[i * n + k] / pivot;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in k + 1..n {
                let u = lu[k * n + j];
                lu[i * n + j] -= factor * u;
            }
        }
    }
    Ok(det)
}

pub fn classify(a: &ComplexMatrix) -> Result<MatrixClassReport> {
    let n = a.require_square("classify")?;
    let scale = a.frobenius_norm().max(1.0);
    let adj = a.adjoint();
    let aa = a * &adj;
    let a_a = &adj * a;
    Ok(MatrixClassReport {
        normality_residual: (&aa - &a_a).frobenius_norm() / scale,
        hermitian_residual: (a - &adj).frobenius_norm() / scale,
        skew_residual: (a + &adj).frobenius_norm() / scale,
        unitarity_residual: (&a_a - &ComplexMatrix::identity(n)).frobenius_norm() / scale,
    })
}

/// `X + X* + alpha I` or `X - X* + alpha I`.
pub fn conj_add_scalar(
    x: &ComplexMatrix,
    mode: ConjMode,
    alpha: Complex64,
) -> Result<ComplexMatrix> {
    x.require_square("conj_add_scalar")?;
    let adj = x.adjoint();
    let base = match mode {
        ConjMode::Sum => x + &adj,
        ConjMode::Difference => x - &adj,
    };
    Ok(base.shift(alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        a.entries()
            .iter()
            .zip(b.entries())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    // Recursive Laplace expansion along the first row.
    fn cofactor_det(m: &ComplexMatrix) -> Complex64 {
        let n = m.rows();
        if n == 1 {
            return m[(0, 0)];
        }
        let mut total = c(0.0, 0.0);
        for j in 0..n {
            let mut minor = Vec::new();
            for i in 1..n {
                for k in 0..n {
                    if k != j {
                        minor.push(m[(i, k)]);
                    }
                }
            }
            let minor = ComplexMatrix::new(n - 1, n - 1, minor).unwrap();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            total += m[(0, j)] * cofactor_det(&minor) * sign;
        }
        total
    }

    fn sample(n: usize, salt: u64) -> ComplexMatrix {
        // small deterministic pseudo-random fill, independent of crate RNG
        let mut state = salt.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let data = (0..n * n).map(|_| c(next(), next())).collect();
        ComplexMatrix::new(n, n, data).unwrap()
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![c(1.0, 0.0); 3]),
            Err(MocError::Dimension(_))
        ));
        assert!(matches!(
            ComplexMatrix::new(1, 2, vec![c(1.0, 0.0), c(f64::NAN, 0.0)]),
            Err(MocError::NonFinite { index: 1 })
        ));
    }

    #[test]
    fn dilate_one_by_one() {
        let x = ComplexMatrix::from_rows(&[vec![c(0.0, 1.0)]]).unwrap();
        let n = dilate(&x, c(0.0, 0.0)).unwrap();
        let want = ComplexMatrix::from_rows(&[
            vec![c(0.0, 1.0), c(0.0, -1.0)],
            vec![c(0.0, -1.0), c(0.0, 1.0)],
        ])
        .unwrap();
        assert_eq!(n, want);

        let x = ComplexMatrix::from_rows(&[vec![c(0.0, 0.0)]]).unwrap();
        let n = dilate(&x, c(1.0, 0.0)).unwrap();
        let want = ComplexMatrix::from_real_rows(&[vec![0.0, -1.0], vec![-1.0, 0.0]]).unwrap();
        assert_eq!(n, want);
    }

    #[test]
    fn dilate_two_by_two_matches_entrywise_adjoint() {
        let x = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let s = c(1.0, 1.0);
        let n = dilate(&x, s).unwrap();
        assert_eq!((n.rows(), n.cols()), (4, 4));
        // (X - sI)* computed entry by entry
        let mut w = [[c(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let shifted = x[(j, i)] - if i == j { s } else { c(0.0, 0.0) };
                w[i][j] = shifted.conj();
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(n[(i, j)], x[(i, j)]);
                assert_eq!(n[(i + 2, j + 2)], x[(i, j)]);
                assert_eq!(n[(i, j + 2)], w[i][j]);
                assert_eq!(n[(i + 2, j)], w[i][j]);
            }
        }
        assert_eq!(w[0][0], c(0.0, 1.0));
        assert_eq!(w[0][1], c(3.0, 0.0));
        // (X - sI)* == X* - conj(s) I
        let alt = x.adjoint().shift(-s.conj());
        assert_eq!(n.block(0, 2, 2, 2).unwrap(), alt);
    }

    #[test]
    fn dilate_rejects_non_square() {
        let x = ComplexMatrix::zeros(2, 3);
        assert!(matches!(dilate(&x, c(0.0, 0.0)), Err(MocError::Dimension(_))));
    }

    #[test]
    fn block_mixer_values_and_unitarity() {
        let u = block_mixer(1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let want = ComplexMatrix::from_real_rows(&[vec![h, h], vec![-h, h]]).unwrap();
        assert_eq!(u, want);
        let u2 = block_mixer(2).unwrap();
        let gram = &u2.adjoint() * &u2;
        assert!(max_abs_diff(&gram, &ComplexMatrix::identity(4)) <= 1e-15);
        assert!(matches!(block_mixer(0), Err(MocError::Dimension(_))));
    }

    #[test]
    fn block_mixer_splits_symmetric_block_matrix() {
        for n in 1..=4 {
            let m = sample(n, 10 + n as u64);
            let nn = sample(n, 20 + n as u64);
            let big = ComplexMatrix::from_blocks(&m, &nn, &nn, &m).unwrap();
            let u = block_mixer(n).unwrap();
            let got = &(&u.adjoint() * &big) * &u;
            // explicit block product: U* [[M,N],[N,M]] U = 1/2 [[I,-I],[I,I]] [[M+N, N+M]...]
            let want = direct_sum(&(&m - &nn), &(&m + &nn)).unwrap();
            assert!(max_abs_diff(&got, &want) <= 1e-12);
        }
    }

    #[test]
    fn direct_sum_examples() {
        let a = ComplexMatrix::from_real_rows(&[vec![1.0]]).unwrap();
        let b = ComplexMatrix::from_real_rows(&[vec![2.0]]).unwrap();
        let want = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        assert_eq!(direct_sum(&a, &b).unwrap(), want);
        assert_eq!(
            direct_sum(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3)).unwrap(),
            ComplexMatrix::identity(5)
        );
        assert!(direct_sum(&ComplexMatrix::zeros(1, 2), &a).is_err());
    }

    #[test]
    fn direct_sum_determinant_is_multiplicative() {
        let a = sample(3, 1);
        let c_ = sample(2, 2);
        let sum = direct_sum(&a, &c_).unwrap();
        let whole = cofactor_det(&sum);
        let lu = determinant(&sum).unwrap();
        let product = determinant(&a).unwrap() * determinant(&c_).unwrap();
        assert!((lu - whole).norm() <= 1e-12 * whole.norm());
        assert!((product - whole).norm() <= 1e-12 * whole.norm());
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&ComplexMatrix::identity(3)).unwrap(), c(1.0, 0.0));
        let d = ComplexMatrix::from_diag(&[c(2.0, 0.0), c(0.0, 3.0)]);
        assert_eq!(determinant(&d).unwrap(), c(0.0, 6.0));
        for salt in 0..5 {
            let m = sample(4, 100 + salt);
            let lu = determinant(&m).unwrap();
            let oracle = cofactor_det(&m);
            assert!((lu - oracle).norm() <= 1e-12 * oracle.norm());
        }
        // singular
        let s = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert_eq!(determinant(&s).unwrap(), c(0.0, 0.0));
        assert!(determinant(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn classify_examples() {
        let h = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, -1.0)],
            vec![c(1.0, 1.0), c(-3.0, 0.0)],
        ])
        .unwrap();
        assert!(classify(&h).unwrap().hermitian_residual <= 1e-15);

        let jordan = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let r = classify(&jordan).unwrap();
        assert!((r.normality_residual - 2f64.sqrt()).abs() <= 1e-15);

        for n in 1..=4 {
            let x = sample(n, 40 + n as u64);
            let d = dilate(&x, c(0.3, -1.2)).unwrap();
            assert!(classify(&d).unwrap().normality_residual <= 1e-12);
        }
    }

    #[test]
    fn conj_add_scalar_examples() {
        let x = ComplexMatrix::from_rows(&[vec![c(0.0, 1.0)]]).unwrap();
        let d = conj_add_scalar(&x, ConjMode::Difference, c(0.0, 0.0)).unwrap();
        assert_eq!(d[(0, 0)], c(0.0, 2.0));
        let s = conj_add_scalar(&x, ConjMode::Sum, c(1.0, 0.0)).unwrap();
        assert_eq!(s[(0, 0)], c(1.0, 0.0));

        let x = sample(3, 7);
        let s = conj_add_scalar(&x, ConjMode::Sum, c(0.0, 0.0)).unwrap();
        assert!(classify(&s).unwrap().hermitian_residual <= 1e-15);
        let d = conj_add_scalar(&x, ConjMode::Difference, c(0.5, 0.0)).unwrap();
        assert!(classify(&d.shift(c(-0.5, 0.0))).unwrap().skew_residual <= 1e-15);
    }

    #[test]
    fn json_layout() {
        let m = ComplexMatrix::from_rows(&[vec![c(1.0, -2.0), c(0.5, 0.0)]]).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"{"rows":1,"cols":2,"entries":[[1.0,-2.0],[0.5,0.0]]}"#);
        let back: ComplexMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<ComplexMatrix>(r#"{"rows":2,"cols":2,"entries":[]}"#).is_err());
    }
}
