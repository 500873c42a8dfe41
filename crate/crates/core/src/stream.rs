//! Deterministic random streams keyed by `(master_seed, substream, path_index)`.
//!
//! Every simulated path gets its own generator seeded from its key, so the
//! draws a path sees do not depend on which worker thread simulates it or in
//! what order. Estimators collect per-path results in index order and reduce
//! them sequentially, which makes every estimate bit-identical for any worker
//! count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Generator handed to per-path simulation code.
pub type PathRng = ChaCha8Rng;

/// Identifies one family of independent per-path streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct StreamKey {
    pub master_seed: u64,
    pub substream: u64,
}

impl StreamKey {
    pub fn new(master_seed: u64) -> Self {
        Self {
            master_seed,
            substream: 0,
        }
    }

    /// Derive a child key for a named purpose. Children with different
    /// labels are statistically independent of each other and of the parent.
    pub fn derive(&self, label: &str) -> Self {
        self.derive_index(fnv1a64(label.as_bytes()))
    }

    pub fn derive_index(&self, label: u64) -> Self {
        Self {
            master_seed: self.master_seed,
            substream: mix64(self.substream ^ mix64(label ^ 0x94D0_49BB_1331_11EB)),
        }
    }

    /// Generator for path `index` of this stream.
    pub fn path_rng(&self, index: u64) -> PathRng {
        let mut seed = [0u8; 32];
        let mut state = mix64(self.master_seed ^ 0xA076_1D64_78BD_642F)
            ^ mix64(self.substream.wrapping_add(0xE703_7ED1_A0B4_28DB))
            ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        for chunk in seed.chunks_exact_mut(8) {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            chunk.copy_from_slice(&mix64(state).to_le_bytes());
        }
        ChaCha8Rng::from_seed(seed)
    }
}

/// Run `f` once per path index on the current rayon pool and return the
/// results in index order.
pub fn map_paths<T, F>(key: &StreamKey, n_paths: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut PathRng) -> T + Sync,
{
    (0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = key.path_rng(i);
            f(i, &mut rng)
        })
        .collect()
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0100_0000_01b3);
    }
    hash
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
