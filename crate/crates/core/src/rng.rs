//! Keyed random streams.
//!
//! Every random consumer (a simulation run, an instance draw, a Monte Carlo
//! shard) is addressed by a `(master_seed, stream_id)` pair. The pair is
//! turned into a ChaCha8 generator whose key comes from the master seed and
//! whose 64-bit stream selector is the stream id, so draws never depend on
//! execution order or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator type handed out by [`RngStream::rng`].
pub type StreamRng = ChaCha8Rng;

/// Stream ids at or above this value are reserved for non-run consumers
/// (action-set construction, bound estimation).
pub const RESERVED_STREAM_BASE: u64 = 1 << 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub const fn new(master_seed: u64, stream_id: u64) -> Self {
        Self {
            master_seed,
            stream_id,
        }
    }

    /// Derives a child stream. Children of distinct parents or with distinct
    /// labels land on unrelated stream ids.
    pub fn substream(&self, label: u64) -> Self {
        let mixed = splitmix64(self.stream_id ^ splitmix64(label.wrapping_add(0xA076_1D64_78BD_642F)));
        Self {
            master_seed: self.master_seed,
            stream_id: mixed,
        }
    }

    /// Fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> StreamRng {
        let mut key = [0u8; 32];
        let mut state = self.master_seed;
        for chunk in key.chunks_exact_mut(8) {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            chunk.copy_from_slice(&splitmix64(state).to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
