//! The single seeded generator every random instance is drawn from.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator behind every randomized construction in the workspace.
pub type OtRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> OtRng {
    OtRng::seed_from_u64(seed)
}
