//! Deterministic, platform-independent random streams.
//!
//! A stream is identified by `(master_seed, stream_id)`. The master seed is
//! expanded with SplitMix64 into a ChaCha8 key and the stream id selects the
//! ChaCha stream, so replicate `r` of an experiment always sees the same
//! variates no matter which thread draws them.
//!
//! Variate generation is fixed: uniforms take the top 53 bits of a `u64`,
//! Gaussians use the Box–Muller transform (the sine branch is cached and
//! returned by the next call), exponentials and geometrics use inversion.
//! Transcendentals come from `libm` so results do not depend on the host C
//! library.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_id: u64,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a lane tag into a seed so that distinct sample sets of one
/// experiment draw from unrelated key spaces.
pub fn lane_seed(master_seed: u64, lane: u64) -> u64 {
    let mut s = master_seed ^ lane.wrapping_mul(0xD1B5_4A32_D192_ED03);
    splitmix64(&mut s)
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        Self { master_seed, stream_id }
    }

    /// Same replicate index, different key space.
    pub fn with_lane(self, lane: u64) -> Self {
        Self { master_seed: lane_seed(self.master_seed, lane), stream_id: self.stream_id }
    }

    pub fn rng(&self) -> StreamRng {
        let mut state = self.master_seed;
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut inner = ChaCha8Rng::from_seed(key);
        inner.set_stream(self.stream_id);
        StreamRng { inner, spare_normal: None }
    }
}

/// Variate generator bound to one [`RngStream`].
#[derive(Debug, Clone)]
pub struct StreamRng {
    inner: ChaCha8Rng,
    spare_normal: Option<f64>,
}

const TWO_POW_NEG_53: f64 = 1.0 / (1u64 << 53) as f64;

impl StreamRng {
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * TWO_POW_NEG_53
    }

    /// Uniform on `(0, 1]`.
    pub fn uniform_open0(&mut self) -> f64 {
        1.0 - self.uniform()
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let u1 = self.uniform_open0();
        let u2 = self.uniform();
        let r = libm::sqrt(-2.0 * libm::log(u1));
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare_normal = Some(r * libm::sin(theta));
        r * libm::cos(theta)
    }

    /// Complex Gaussian with `E|z|^2 = 1`: real and imaginary parts are
    /// independent with variance 1/2 each.
    pub fn complex_normal(&mut self) -> (f64, f64) {
        let re = self.standard_normal() * std::f64::consts::FRAC_1_SQRT_2;
        let im = self.standard_normal() * std::f64::consts::FRAC_1_SQRT_2;
        (re, im)
    }

    /// Exponential with unit mean.
    pub fn exponential(&mut self) -> f64 {
        -libm::log(self.uniform_open0())
    }

    /// Geometric on `{0, 1, 2, ...}` with `P(X = s) = (1 - q) q^s`.
    pub fn geometric(&mut self, q: f64) -> u64 {
        debug_assert!(q > 0.0 && q < 1.0);
        let u = self.uniform_open0();
        // P(X >= s) = q^s, so X = floor(ln U / ln q).
        let x = libm::floor(libm::log(u) / libm::log(q));
        if x >= u64::MAX as f64 {
            u64::MAX
        } else {
            x as u64
        }
    }

    /// Uniform integer in `0..bound`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        // Lemire's widening multiply with rejection.
        loop {
            let x = self.next_u64();
            let m = (x as u128) * (bound as u128);
            let low = m as u64;
            if low >= bound.wrapping_neg() % bound {
                return (m >> 64) as u64;
            }
        }
    }
}
