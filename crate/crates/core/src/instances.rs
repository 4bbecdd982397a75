//! Random test instances.
//!
//! Entries are i.i.d. standard complex normals (`E|z|^2 = 1`). Hermitian
//! matrices are `(G + G*) / 2`; normal matrices are `U diag(λ) U*` with
//! Haar `U` and standard complex normal `λ`. Everything is drawn from the
//! caller's stream, so instances reproduce per seed.

use num_complex::Complex64;
use rand::Rng;

use crate::matrix::ComplexMatrix;
use crate::rng::complex_normal;
use crate::spectra::haar_unitary_with;

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    complex_normal(rng)
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let data = (0..n * n).map(|_| complex_normal(rng)).collect();
    ComplexMatrix::new(n, n, data).expect("finite gaussian entries")
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = random_matrix(rng, n);
    (&g + &g.adjoint()).scale(Complex64::new(0.5, 0.0))
}

pub fn random_normal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let values: Vec<Complex64> = (0..n).map(|_| complex_normal(rng)).collect();
    let u = haar_unitary_with(rng, n).expect("n >= 1");
    &(&u * &ComplexMatrix::from_diag(&values)) * &u.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::classify;
    use crate::rng::RngSeed;

    #[test]
    fn instances_have_their_structure() {
        let mut rng = RngSeed(4).rng();
        for n in 1..=6 {
            assert!(classify(&random_hermitian(&mut rng, n)).unwrap().hermitian_residual <= 1e-15);
            assert!(classify(&random_normal(&mut rng, n)).unwrap().normality_residual <= 1e-12);
        }
    }
}
