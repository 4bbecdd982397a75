//! Numerical toolkit around the Marcus-de Oliveira determinant conjecture:
//! for normal matrices `A`, `B` with eigenvalues `a_i`, `b_j`, is
//! `det(A + B)` in the convex hull of the sigma-points
//! `z_σ = Π_i (a_i + b_σ(i))`?
//!
//! The crate builds the normal dilations `N(X, s)`, enumerates
//! sigma-points, and answers hull membership with explicit
//! convex-combination certificates. The [`verify`] module strings these
//! together into end-to-end checks.

pub mod convex;
pub mod error;
pub mod instances;
pub mod matrix;
pub mod rng;
pub mod sigma;
pub mod spectra;
pub mod verify;

pub use convex::{HullMembership, Verdict, Weighted};
pub use error::{MocError, Result};
pub use matrix::{ComplexMatrix, ConjMode, MatrixClassReport};
pub use num_complex::Complex64;
pub use rng::RngSeed;
pub use sigma::{Permutation, SigmaPointSet};
pub use spectra::Spectrum;
