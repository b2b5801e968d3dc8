//! Seed derivation. Every randomized component takes an explicit stream derived
//! from a master seed and a structural key, so results never depend on
//! traversal or scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

/// One step of the splitmix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds `parts` into `seed`; distinct keys give (practically) independent seeds.
pub fn derive(seed: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(mix64(seed), |acc, &p| mix64(acc ^ mix64(p)))
}

pub fn stream(seed: u64, parts: &[u64]) -> Stream {
    ChaCha8Rng::seed_from_u64(derive(seed, parts))
}

/// Domain tags keep streams for different purposes apart even when they share
/// a structural key.
pub mod tag {
    pub const TREE: u64 = 0x7472_6565;
    pub const RECONSTRUCT: u64 = 0x7265_636f;
    pub const BETA: u64 = 0x6265_7461;
    pub const INSTANCE: u64 = 0x696e_7374;
    pub const HARD: u64 = 0x6861_7264;
}
