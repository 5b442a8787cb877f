//! Seeded randomness. A single master seed fans out into independent
//! ChaCha streams keyed by a fixed label (and optionally an index), so any
//! computation can be replayed from `(seed, label)` regardless of thread
//! scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedStream {
    seed: u64,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        SeedStream { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self, label: &str) -> ChaCha8Rng {
        self.indexed(label, 0)
    }

    pub fn indexed(&self, label: &str, index: u64) -> ChaCha8Rng {
        let key = splitmix(self.seed ^ splitmix(fnv1a(label.as_bytes()) ^ splitmix(index)));
        ChaCha8Rng::seed_from_u64(key)
    }

    /// A child stream family, e.g. one per genus inside a multi-genus run.
    pub fn derive(&self, label: &str) -> SeedStream {
        SeedStream { seed: splitmix(self.seed ^ fnv1a(label.as_bytes())) }
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(*b)).wrapping_mul(0x0100_0000_01b3))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
