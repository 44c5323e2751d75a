//! Seeded, platform-independent random streams.

#[allow(unused_imports)]
use num_traits::Float;
use core::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// A 64-bit seed. Equal seeds produce bit-identical streams.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    pub fn new(value: u64) -> Self {
        Seed(value)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Independent child seed for sub-stream `stream` (splitmix64 finalizer).
    pub fn derive(self, stream: u64) -> Seed {
        let mut z = self
            .0
            .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(stream.wrapping_add(1)));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        Seed(z ^ (z >> 31))
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

/// Uniform point on the unit circle.
pub fn unit_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let theta: f64 = rng.gen::<f64>() * TAU;
    Complex64::new(theta.cos(), theta.sin())
}

/// Standard complex Gaussian (independent N(0, 1/2) parts).
pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    let r = (-u1.ln()).sqrt();
    let theta = TAU * u2;
    Complex64::new(r * theta.cos(), r * theta.sin())
}

/// Standard real Gaussian.
pub fn gaussian_real<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}
