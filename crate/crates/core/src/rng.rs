//! Seed derivation and per-shot random streams.
//!
//! A master seed fans out into independent ChaCha streams, one per shot
//! index, so shots can be generated in any order (or in parallel) and still
//! reproduce bit-for-bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random stream for one shot: the master seed keys the cipher, the shot
/// index selects the stream.
pub fn shot_rng(master_seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(shot);
    rng
}

/// Stable mix of a seed with a sequence of coordinate tags
/// (SplitMix64-style), for deriving per-task seeds from grid coordinates.
pub fn derive_seed(master_seed: u64, tags: &[u64]) -> u64 {
    let mut state = master_seed ^ 0x9e37_79b9_7f4a_7c15;
    for &tag in tags {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(tag);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        state = z ^ (z >> 31);
    }
    state
}
