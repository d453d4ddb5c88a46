use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Name of the generator behind every stream.
pub const ALGORITHM: &str = "chacha20";

/// Explicit generator state: a seed and the generator family.
///
/// Draw `i` of a batch always reads stream `i`, so batches do not depend on
/// how rows are scheduled across threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngState {
    pub seed: u64,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn algorithm(&self) -> &'static str {
        ALGORITHM
    }

    /// Independent generator for stream `index`.
    pub fn stream(&self, index: u64) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }
}

/// FNV-1a over bytes; stable across platforms and toolchains.
#[derive(Debug, Clone, Copy)]
pub struct Fingerprint(u64);

impl Default for Fingerprint {
    fn default() -> Self {
        Self(0xcbf2_9ce4_8422_2325)
    }
}

impl Fingerprint {
    pub fn bytes(&mut self, data: &[u8]) {
        for &b in data {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
    }

    pub fn value(&self) -> u64 {
        self.0
    }
}
