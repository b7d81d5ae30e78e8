//! Counter-based random streams.
//!
//! Every noise draw is keyed by `(seed, block, site)` so that a shot's
//! outcome never depends on which worker sampled it or in what order.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// SplitMix64 stream started from a hashed key.
#[derive(Clone, Debug)]
pub struct KeyedStream {
    state: u64,
}

impl KeyedStream {
    #[inline]
    pub fn new(seed: u64, block: u64, site: u64) -> Self {
        let key = mix64(seed ^ mix64(block.wrapping_mul(GOLDEN) ^ mix64(site.wrapping_add(GOLDEN))));
        KeyedStream { state: key }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform draw in (0, 1].
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..n` (n small).
    #[inline]
    pub fn below(&mut self, n: u32) -> u32 {
        (((self.next_u64() >> 32) * n as u64) >> 32) as u32
    }
}

/// Precomputed Bernoulli sampler for 64 independent trials at once.
#[derive(Clone, Copy, Debug)]
pub struct BernoulliWord {
    p: f64,
    /// Probability that none of 64 trials fires.
    none64: f64,
    ln_q: f64,
}

impl BernoulliWord {
    pub fn new(p: f64) -> Self {
        let p = p.clamp(0.0, 1.0);
        BernoulliWord {
            p,
            none64: (1.0 - p).powi(64),
            ln_q: (1.0 - p).ln(),
        }
    }

    pub fn probability(&self) -> f64 {
        self.p
    }

    /// Draws a 64-bit mask whose bits are independent Bernoulli(p) trials,
    /// using geometric skipping so the common all-zero case costs one draw.
    #[inline]
    pub fn sample(&self, rng: &mut KeyedStream) -> u64 {
        if self.p <= 0.0 {
            return 0;
        }
        if self.p >= 1.0 {
            return u64::MAX;
        }
        let u = rng.next_open01();
        if u <= self.none64 {
            return 0;
        }
        let mut mask = 0u64;
        let mut pos = (u.ln() / self.ln_q) as u64;
        loop {
            if pos >= 64 {
                break;
            }
            mask |= 1u64 << pos;
            let u = rng.next_open01();
            pos += 1 + (u.ln() / self.ln_q) as u64;
        }
        mask
    }
}
