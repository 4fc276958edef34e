//! Seeded generators shared by the stochastic baselines and the harness.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// ChaCha8 keyed by the little-endian bytes of `seed`, zero-padded to 32.
pub fn seeded(seed: u128) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..16].copy_from_slice(&seed.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Draws a full 128-bit value.
pub fn next_u128<R: rand::RngCore>(rng: &mut R) -> u128 {
    let lo = rng.next_u64() as u128;
    let hi = rng.next_u64() as u128;
    (hi << 64) | lo
}

/// Derives an independent stream seed for a named purpose from a trial seed.
pub fn derive(seed: u128, stream: u64) -> u128 {
    let mut rng = seeded(seed);
    rng.set_stream(stream.wrapping_add(1));
    next_u128(&mut rng)
}
