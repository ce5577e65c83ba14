//! Reproducible random-number streams.
//!
//! Every Monte Carlo campaign takes an [`RngSeed`] and draws each run from
//! its own ChaCha substream keyed by the run index. Runs are therefore
//! independent of execution order, so a campaign can be distributed across
//! any number of rayon workers and still produce results bit-identical to
//! the sequential evaluation.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Master seed for a simulation campaign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// Derive an unrelated child seed, e.g. one per campaign within a
    /// scenario, so campaigns never share substreams.
    pub fn derive(self, tag: u64) -> RngSeed {
        RngSeed(splitmix64(self.0 ^ splitmix64(tag)))
    }

    /// RNG for one run of a campaign. Same `(seed, index)` always yields the
    /// same stream, regardless of how runs are scheduled across threads.
    pub fn substream(self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(index);
        rng
    }
}

impl From<u64> for RngSeed {
    fn from(seed: u64) -> Self {
        RngSeed(seed)
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}
