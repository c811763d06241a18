//! Splittable, schedule-independent random streams.
//!
//! Every random quantity in the crate is drawn from a [`ChaCha8Rng`] keyed by
//! a [`StreamKey`]. Keys form a tree: a master seed is the root and
//! [`StreamKey::child`] derives an independent key for any integer label
//! (replication index, chunk of limit draws, segment boundary, ...). Because a
//! key depends only on its path from the root, parallel work partitioned by
//! label reproduces the sequential result bit for bit, whatever the thread
//! schedule.
//!
//! ChaCha is itself a counter-based generator, so the pair
//! `(key, block counter)` fully determines every output word.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Node in the stream-derivation tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamKey(u64);

// Stream labels used inside the test pipeline.
pub(crate) const SHAPE_LIMIT_STREAM: u64 = 0x53_4841_5045;
pub(crate) const TOTAL_LIMIT_STREAM: u64 = 0x54_4f54_414c;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl StreamKey {
    pub fn new(master_seed: u64) -> Self {
        StreamKey(splitmix64(master_seed))
    }

    /// Independent key for `label`; `child(a).child(b)` differs from
    /// `child(b).child(a)`.
    pub fn child(self, label: u64) -> Self {
        StreamKey(splitmix64(self.0 ^ splitmix64(label.wrapping_add(0x632b_e59b_d9b4_e019))))
    }

    pub fn raw(self) -> u64 {
        self.0
    }

    pub fn rng(self) -> ChaCha8Rng {
        let mut seed = [0u8; 32];
        let mut state = self.0;
        for chunk in seed.chunks_exact_mut(8) {
            state = splitmix64(state);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        ChaCha8Rng::from_seed(seed)
    }
}
