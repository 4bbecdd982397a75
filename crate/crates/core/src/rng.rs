//! Seeded randomness.
//!
//! Every random stream in the crate is a ChaCha8 generator keyed by
//! `rand_chacha`'s `seed_from_u64` expansion of a 64-bit seed. ChaCha8 is a
//! fixed, platform-independent cipher stream, so a given seed reproduces the
//! same matrices, rotation parameters and unitaries everywhere. Gaussian
//! samples use `rand_distr::StandardNormal` (ziggurat), which is also
//! deterministic given the underlying stream.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Seed of the `index`-th instance in a batch started from `self`.
    pub fn offset(self, index: u64) -> RngSeed {
        RngSeed(self.0.wrapping_add(index))
    }
}

impl From<u64> for RngSeed {
    fn from(seed: u64) -> Self {
        RngSeed(seed)
    }
}

/// Standard complex normal: real and imaginary parts i.i.d. `N(0, 1/2)`,
/// so `E|z|^2 = 1`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}
