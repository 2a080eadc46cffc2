//! Reproducible random streams.
//!
//! Every random draw of an experiment comes from a ChaCha20 generator whose
//! 256-bit key is derived from `(master seed, sweep index, repeat index)`
//! by chained SplitMix64 finalization; the purpose of the draws selects the
//! ChaCha stream. Keys depend only on these integers, so results do not
//! depend on scheduling or platform.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Purpose {
    Truth = 1,
    Measurements = 2,
    SolverInit = 3,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn key(master: u64, sweep: u64, repeat: u64) -> [u64; 4] {
    let a = splitmix64(master);
    let b = splitmix64(a ^ sweep);
    let c = splitmix64(b ^ repeat.rotate_left(32));
    let d = splitmix64(c ^ 0x6473_7379_6e63_0001);
    [a, b, c, d]
}

/// 64-bit identifier of a `(master, sweep, repeat)` cell.
pub fn child_seed(master: u64, sweep: u64, repeat: u64) -> u64 {
    key(master, sweep, repeat)[3]
}

pub fn stream(master: u64, sweep: u64, repeat: u64, purpose: Purpose) -> ChaCha20Rng {
    let mut seed = [0u8; 32];
    for (chunk, word) in seed.chunks_exact_mut(8).zip(key(master, sweep, repeat)) {
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    let mut rng = ChaCha20Rng::from_seed(seed);
    rng.set_stream(purpose as u64);
    rng
}
