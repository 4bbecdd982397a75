//! Python bindings: `import moc_lab`.
//!
//! Matrices are [`Matrix`] objects built from nested lists of numbers.
//! Pipeline functions return plain dicts mirroring the Rust report structs,
//! with complex values as `[re, im]` pairs. Failures raise
//! `moc_lab.MocError` with `args == (code, message)`.

use moc_core::convex::{self, DEFAULT_TOL};
use moc_core::matrix::{self, ComplexMatrix};
use moc_core::sigma::{self, DEFAULT_CAP};
use moc_core::spectra;
use moc_core::verify::{self, VerifyConfig};
use moc_core::{Complex64, RngSeed};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(moc_lab, MocError, PyValueError, "Error raised by the moc_lab pipelines.");

fn err(e: moc_core::MocError) -> PyErr {
    MocError::new_err((e.code(), e.to_string()))
}

fn to_dict<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn config(tol: f64, cap: u64, seed: u64) -> VerifyConfig {
    VerifyConfig {
        tol,
        cap,
        seed: RngSeed(seed),
    }
}

/// Dense complex matrix.
#[pyclass(name = "Matrix", module = "moc_lab", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Matrix {
    inner: ComplexMatrix,
}

impl From<ComplexMatrix> for Matrix {
    fn from(inner: ComplexMatrix) -> Self {
        Matrix { inner }
    }
}

#[pymethods]
impl Matrix {
    /// Builds a matrix from a list of equal-length rows.
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        ComplexMatrix::from_rows(&rows).map(Matrix::from).map_err(err)
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        ComplexMatrix::identity(n).into()
    }

    #[staticmethod]
    fn zeros(n: usize) -> Self {
        ComplexMatrix::zeros(n, n).into()
    }

    #[staticmethod]
    fn diag(values: Vec<Complex64>) -> Self {
        ComplexMatrix::from_diag(&values).into()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str::<ComplexMatrix>(text)
            .map(Matrix::from)
            .map_err(|e| MocError::new_err(("parse", e.to_string())))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("matrix serializes")
    }

    #[getter]
    fn rows(&self) -> usize {
        self.inner.rows()
    }

    #[getter]
    fn cols(&self) -> usize {
        self.inner.cols()
    }

    fn to_list(&self) -> Vec<Vec<Complex64>> {
        (0..self.inner.rows())
            .map(|i| (0..self.inner.cols()).map(|j| self.inner[(i, j)]).collect())
            .collect()
    }

    fn adjoint(&self) -> Self {
        self.inner.adjoint().into()
    }

    fn trace(&self) -> Complex64 {
        self.inner.trace()
    }

    fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    fn __add__(&self, other: &Matrix) -> PyResult<Self> {
        self.inner.try_add(&other.inner).map(Matrix::from).map_err(err)
    }

    fn __sub__(&self, other: &Matrix) -> PyResult<Self> {
        self.inner.try_sub(&other.inner).map(Matrix::from).map_err(err)
    }

    fn __matmul__(&self, other: &Matrix) -> PyResult<Self> {
        self.inner.matmul(&other.inner).map(Matrix::from).map_err(err)
    }

    fn __eq__(&self, other: &Matrix) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Matrix({}x{})", self.inner.rows(), self.inner.cols())
    }
}

/// The normal dilation N(X, s) = [[X, (X - sI)*], [(X - sI)*, X]].
#[pyfunction]
#[pyo3(signature = (x, s = Complex64::new(0.0, 0.0)))]
fn dilate(x: &Matrix, s: Complex64) -> PyResult<Matrix> {
    matrix::dilate(&x.inner, s).map(Matrix::from).map_err(err)
}

#[pyfunction]
fn block_mixer(n: usize) -> PyResult<Matrix> {
    matrix::block_mixer(n).map(Matrix::from).map_err(err)
}

#[pyfunction]
fn direct_sum(a: &Matrix, c: &Matrix) -> PyResult<Matrix> {
    matrix::direct_sum(&a.inner, &c.inner).map(Matrix::from).map_err(err)
}

#[pyfunction]
fn determinant(a: &Matrix) -> PyResult<Complex64> {
    matrix::determinant(&a.inner).map_err(err)
}

/// Normality, hermitian, skew and unitarity residuals.
#[pyfunction]
fn classify<'py>(py: Python<'py>, a: &Matrix) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &matrix::classify(&a.inner).map_err(err)?)
}

#[pyfunction]
fn eig_hermitian(a: &Matrix) -> PyResult<Vec<Complex64>> {
    spectra::eig_hermitian(&a.inner).map(|s| s.values).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, seed = 0))]
fn eig_normal(a: &Matrix, seed: u64) -> PyResult<Vec<Complex64>> {
    spectra::eig_normal(&a.inner, RngSeed(seed)).map(|s| s.values).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, seed = 0))]
fn haar_unitary(n: usize, seed: u64) -> PyResult<Matrix> {
    spectra::haar_unitary(n, RngSeed(seed)).map(Matrix::from).map_err(err)
}

/// `[(permutation, z_σ), ...]` in enumeration order.
#[pyfunction]
#[pyo3(signature = (a, b, cap = DEFAULT_CAP))]
fn sigma_points(a: Vec<Complex64>, b: Vec<Complex64>, cap: u64) -> PyResult<Vec<(Vec<usize>, Complex64)>> {
    let set = sigma::sigma_points(&a, &b, cap).map_err(err)?;
    Ok((0..set.len())
        .map(|k| (set.perm(k).images().to_vec(), set.points[k]))
        .collect())
}

/// Planar hull membership with a certificate over `points`.
#[pyfunction]
#[pyo3(signature = (points, query, tol = DEFAULT_TOL))]
fn hull_membership<'py>(
    py: Python<'py>,
    points: Vec<Complex64>,
    query: Complex64,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &convex::membership2d(&points, query, tol).map_err(err)?)
}

/// Hull membership in R^d by linear programming.
#[pyfunction]
#[pyo3(signature = (generators, query, tol = DEFAULT_TOL))]
fn membership_lp<'py>(
    py: Python<'py>,
    generators: Vec<Vec<f64>>,
    query: Vec<f64>,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &convex::membership_lp(&generators, &query, tol).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (a, b, tol = DEFAULT_TOL, cap = DEFAULT_CAP, seed = 0))]
fn verify_moc<'py>(
    py: Python<'py>,
    a: &Matrix,
    b: &Matrix,
    tol: f64,
    cap: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &verify::verify_moc(&a.inner, &b.inner, &config(tol, cap, seed)).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (
    x, y, s = Complex64::new(0.0, 0.0), t = Complex64::new(0.0, 0.0),
    tol = DEFAULT_TOL, cap = DEFAULT_CAP, seed = 0
))]
#[allow(clippy::too_many_arguments)]
fn verify_theorem1<'py>(
    py: Python<'py>,
    x: &Matrix,
    y: &Matrix,
    s: Complex64,
    t: Complex64,
    tol: f64,
    cap: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let r = verify::verify_theorem1(&x.inner, &y.inner, s, t, &config(tol, cap, seed)).map_err(err)?;
    let dict = to_dict(py, &r)?;
    dict.set_item("holds", r.holds())?;
    Ok(dict)
}

#[pyfunction]
#[pyo3(signature = (a, b, samples = 200, seed = 0, tol = DEFAULT_TOL))]
fn verify_fiedler<'py>(
    py: Python<'py>,
    a: &Matrix,
    b: &Matrix,
    samples: usize,
    seed: u64,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    to_dict(
        py,
        &verify::verify_fiedler(&a.inner, &b.inner, samples, RngSeed(seed), tol).map_err(err)?,
    )
}

#[pyfunction]
#[pyo3(signature = (a, b, tol = DEFAULT_TOL))]
fn verify_drury<'py>(py: Python<'py>, a: &Matrix, b: &Matrix, tol: f64) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &verify::verify_drury(&a.inner, &b.inner, tol).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (a, b, v, tol = DEFAULT_TOL, cap = DEFAULT_CAP, seed = 0))]
fn verify_similarity<'py>(
    py: Python<'py>,
    a: &Matrix,
    b: &Matrix,
    v: &Matrix,
    tol: f64,
    cap: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let r = verify::verify_similarity_invariance(&a.inner, &b.inner, &v.inner, &config(tol, cap, seed))
        .map_err(err)?;
    to_dict(py, &r)
}

/// Returns `(report_ab, report_cd, composed)`.
#[pyfunction]
#[pyo3(signature = (a, b, c, d, tol = DEFAULT_TOL, cap = DEFAULT_CAP, seed = 0))]
#[allow(clippy::too_many_arguments)]
fn verify_direct_sum<'py>(
    py: Python<'py>,
    a: &Matrix,
    b: &Matrix,
    c: &Matrix,
    d: &Matrix,
    tol: f64,
    cap: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let r = verify::verify_direct_sum_matrices(&a.inner, &b.inner, &c.inner, &d.inner, &config(tol, cap, seed))
        .map_err(err)?;
    to_dict(py, &r)
}

#[pymodule]
fn moc_lab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("MocError", m.py().get_type::<MocError>())?;
    m.add("DEFAULT_TOL", DEFAULT_TOL)?;
    m.add("DEFAULT_CAP", DEFAULT_CAP)?;
    m.add_class::<Matrix>()?;
    m.add_function(wrap_pyfunction!(dilate, m)?)?;
    m.add_function(wrap_pyfunction!(block_mixer, m)?)?;
    m.add_function(wrap_pyfunction!(direct_sum, m)?)?;
    m.add_function(wrap_pyfunction!(determinant, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(eig_hermitian, m)?)?;
    m.add_function(wrap_pyfunction!(eig_normal, m)?)?;
    m.add_function(wrap_pyfunction!(haar_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_points, m)?)?;
    m.add_function(wrap_pyfunction!(hull_membership, m)?)?;
    m.add_function(wrap_pyfunction!(membership_lp, m)?)?;
    m.add_function(wrap_pyfunction!(verify_moc, m)?)?;
    m.add_function(wrap_pyfunction!(verify_theorem1, m)?)?;
    m.add_function(wrap_pyfunction!(verify_fiedler, m)?)?;
    m.add_function(wrap_pyfunction!(verify_drury, m)?)?;
    m.add_function(wrap_pyfunction!(verify_similarity, m)?)?;
    m.add_function(wrap_pyfunction!(verify_direct_sum, m)?)?;
    Ok(())
}
