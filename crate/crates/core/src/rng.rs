//! Seeding.
//!
//! Every random stream is ChaCha8 ([`rand_chacha::ChaCha8Rng`]) keyed by
//! `seed_from_u64(seed)`. Monte Carlo replicate `r` uses stream `r` of that
//! key, so results do not depend on thread count or scheduling. Changing the
//! generator changes every pinned sequence in the test suite.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn replicate_rng(seed: u64, replicate: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    rng
}

/// Runs `f` once per replicate with its own stream and returns results in
/// replicate order.
pub fn map_replicates<T, F>(replicates: u64, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut SimRng) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..replicates)
            .into_par_iter()
            .map(|r| f(&mut replicate_rng(seed, r)))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..replicates).map(|r| f(&mut replicate_rng(seed, r))).collect()
    }
}
