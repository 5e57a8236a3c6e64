//! Deterministic 64-bit generator for boundary data and sampling.
//!
//! The update is the splitmix64 mix, written out so any port reproduces the
//! same stream bit for bit:
//!
//! ```text
//! state += 0x9E3779B97F4A7C15
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! output = z ^ (z >> 31)
//! ```
//!
//! Floats in [0, 1) take the top 53 bits: `(output >> 11) * 2^-53`.

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1), 53-bit resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn next_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in 0..n.
    pub fn next_below(&mut self, n: u64) -> u64 {
        // Bias is below 2^-53 for the small n used here.
        (self.next_f64() * n as f64) as u64
    }

    /// Uniform direction on the unit sphere in `n` components.
    pub fn next_unit_vector(&mut self, n: usize) -> [f64; 3] {
        loop {
            let mut v = [0.0f64; 3];
            let mut norm_sq = 0.0;
            for c in v.iter_mut().take(n) {
                // Box-Muller gives an isotropic Gaussian.
                let u1 = self.next_f64().max(1e-300);
                let u2 = self.next_f64();
                *c = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
                norm_sq += *c * *c;
            }
            if norm_sq > 1e-12 {
                let inv = 1.0 / norm_sq.sqrt();
                for c in v.iter_mut().take(n) {
                    *c *= inv;
                }
                return v;
            }
        }
    }
}
