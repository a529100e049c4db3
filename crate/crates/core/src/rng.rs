//! Seed derivation and the random generator used throughout.
//!
//! Every trial draws from its own ChaCha12 stream whose seed is a SplitMix64
//! mix of a master seed and a path of integer labels, so results do not
//! depend on scheduling or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

pub type SimRng = ChaCha12Rng;

/// Stream label for the planted permutation of an instance.
pub const PLANTED_STREAM: u64 = 0x706c_616e_7465_6400;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes `labels` into `master` one at a time.
pub fn derive_seed(master: u64, labels: &[u64]) -> u64 {
    labels.iter().fold(splitmix64(master), |acc, &l| {
        splitmix64(acc ^ splitmix64(l))
    })
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn derived_seeds_differ_by_label_and_order() {
        let a = derive_seed(7, &[1, 2]);
        assert_ne!(a, derive_seed(7, &[2, 1]));
        assert_ne!(a, derive_seed(8, &[1, 2]));
        assert_eq!(a, derive_seed(7, &[1, 2]));
    }

    #[test]
    fn streams_are_reproducible() {
        let x: Vec<u64> = rng_from_seed(42).random_iter().take(4).collect();
        let y: Vec<u64> = rng_from_seed(42).random_iter().take(4).collect();
        assert_eq!(x, y);
    }
}
