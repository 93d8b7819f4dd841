//! Seed-stream derivation.
//!
//! Every stochastic operation draws from a ChaCha stream keyed by
//! `(master seed, operation tag, counter)`, so experiments are bitwise
//! reproducible and independent of how work is split across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

pub type StreamRng = ChaCha20Rng;

/// Derives the RNG stream for `(seed, tag, counter)`.
pub fn stream(seed: u64, tag: &str, counter: u64) -> StreamRng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update((tag.len() as u64).to_le_bytes());
    hasher.update(tag.as_bytes());
    hasher.update(counter.to_le_bytes());
    let digest = hasher.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    ChaCha20Rng::from_seed(key)
}
