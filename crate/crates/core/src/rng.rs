//! Reproducible random streams.
//!
//! Each Monte Carlo trial gets its own ChaCha8 stream addressed by
//! `(seed, stream_id)`, so results never depend on how trials are scheduled.

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::linalg::ComplexVector;

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.inner)
    }

    /// One circularly-symmetric complex Gaussian with `E|z|^2 = 1`.
    #[inline]
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let re: f64 = StandardNormal.sample(&mut self.inner);
        let im: f64 = StandardNormal.sample(&mut self.inner);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn fill_complex_gaussian(&mut self, out: &mut [Complex64]) {
        for z in out {
            *z = self.complex_gaussian();
        }
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Draws `n` i.i.d. standard complex Gaussians (variance 1/2 per real part).
pub fn sample_standard_complex_gaussian(rng: &mut RngStream, n: usize) -> Result<ComplexVector> {
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    rng.fill_complex_gaussian(&mut v);
    ComplexVector::new(v)
}
