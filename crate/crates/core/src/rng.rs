//! Seeded generators and the stream-splitting rule.
//!
//! Every stochastic routine takes an explicit generator. Work that is split
//! across streams derives stream `k`'s seed as `master ^ k`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed of sub-stream `stream` derived from `master`.
pub fn split_seed(master: u64, stream: usize) -> u64 {
    master ^ stream as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn split_rule() {
        assert_eq!(split_seed(7, 0), 7);
        assert_eq!(split_seed(7, 1), 6);
        assert_eq!(split_seed(0, 5), 5);
    }

    #[test]
    fn same_seed_same_stream() {
        let a: Vec<u64> = seeded_rng(11).random_iter().take(8).collect();
        let b: Vec<u64> = seeded_rng(11).random_iter().take(8).collect();
        let c: Vec<u64> = seeded_rng(12).random_iter().take(8).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
