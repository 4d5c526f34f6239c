//! Deterministic seeding.
//!
//! Every random quantity in the crate flows from an explicit 64-bit seed.
//! The seed-to-stream mapping below is part of the crate's compatibility
//! contract and must stay stable across releases:
//!
//! 1. a 64-bit seed is expanded into a 256-bit ChaCha8 key by four
//!    successive SplitMix64 outputs (little-endian bytes);
//! 2. child seeds (per frame, per chunk) are `derive_seed(root, label)` --
//!    the SplitMix64 finalizer applied to `root XOR label * C` with an odd
//!    constant, so distinct labels give distinct, uncorrelated streams;
//! 3. uniform doubles take the top 53 bits of one `next_u64`, yielding
//!    values in `[0, 1)`.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const LABEL_MULTIPLIER: u64 = 0xA24B_AED4_963E_E407;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the child seed for `(root, label)`.
pub fn derive_seed(root: u64, label: u64) -> u64 {
    let mut state = root ^ label.wrapping_mul(LABEL_MULTIPLIER);
    splitmix64(&mut state)
}

/// ChaCha8 stream keyed by the SplitMix64 expansion of `seed`.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Uniform draw in `[0, 1)` from the top 53 bits of one `u64`.
pub fn uniform_unit(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Fisher-Yates shuffle driven by `next_u64` modulo reduction.
///
/// The modulo bias is far below anything observable at the slice sizes used
/// here and keeps the index sequence independent of library internals.
pub fn shuffle<T>(items: &mut [T], rng: &mut impl RngCore) {
    for i in (1..items.len()).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        items.swap(i, j);
    }
}
