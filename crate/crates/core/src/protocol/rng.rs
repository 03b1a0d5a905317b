//! Reproducible substreams: every (seed, block, party) triple maps to its own ChaCha8 stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Substream roles inside one block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    /// Shared unitary (or Alice's independent basis for shadows).
    Unitary = 0,
    Alice = 1,
    Bob = 2,
    /// Bob's independent basis draws for shadows.
    Aux = 3,
}

pub fn substream(seed: u64, block: u64, party: Party) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block.wrapping_mul(4).wrapping_add(party as u64));
    rng
}
