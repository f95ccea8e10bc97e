//! Portable deterministic random numbers.
//!
//! Experiments must be reproducible bit-for-bit from a 64-bit seed, on any
//! platform and independent of external crate versions, so the generator is
//! pinned here in full:
//!
//! * stream: SplitMix64 (Steele, Lea & Flood 2014) — `state += GOLDEN;`
//!   output = finalizer(state);
//! * uniforms: top 53 bits mapped to `[0, 1)` (or `(0, 1]` where a log is
//!   taken);
//! * normals: Box–Muller on a pair of uniforms, second value cached;
//! * bounded integers: Lemire's widening-multiply rejection method (no
//!   modulo bias);
//! * seed derivation: [`derive_seed`] chains the SplitMix64 finalizer over
//!   the parts, so per-(case, run) streams never overlap when any part
//!   differs.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finalizer.
#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from a base seed and a list of stream labels.
///
/// `derive_seed(base, &[a, b])` differs from `derive_seed(base, &[b, a])`;
/// order is significant.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    let mut state = mix(base ^ GOLDEN);
    for &p in parts {
        state = mix(state ^ p.wrapping_mul(GOLDEN).wrapping_add(1));
    }
    state
}

/// Deterministic generator over the SplitMix64 stream.
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
    cached_normal: Option<f64>,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self {
            state: seed,
            cached_normal: None,
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform on `[0, 1)` with 53-bit resolution.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`; safe to pass to `ln`.
    #[inline]
    fn uniform_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Unbiased integer in `[0, n)`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below: empty range");
        loop {
            let x = self.next_u64();
            let m = (x as u128) * (n as u128);
            let low = m as u64;
            if low < n {
                let threshold = n.wrapping_neg() % n;
                if low < threshold {
                    continue;
                }
            }
            return (m >> 64) as u64;
        }
    }

    /// Standard normal via Box–Muller; generates pairs and caches the spare.
    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.cached_normal.take() {
            return z;
        }
        let r = (-2.0 * self.uniform_open().ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * self.uniform();
        self.cached_normal = Some(r * theta.sin());
        r * theta.cos()
    }

    pub fn normal_vec(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.standard_normal()).collect()
    }

    /// `k` distinct indices drawn uniformly from `0..n` (partial
    /// Fisher–Yates; returned in selection order).
    pub fn sample_without_replacement(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n, "sample: k > n");
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below((n - i) as u64) as usize;
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}
