use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Identifies one reproducible random stream: a master seed shared by the
/// whole experiment plus a stream id that separates independent consumers.
///
/// Streams with the same master seed and different ids are statistically
/// independent, so parallel trial workers can each own a stream without any
/// coordination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        SeedSpec {
            master_seed,
            stream_id,
        }
    }

    /// The root stream for a master seed.
    pub fn root(master_seed: u64) -> Self {
        SeedSpec::new(master_seed, 0)
    }

    /// Derive a child stream for a named purpose. The child keeps the master
    /// seed and gets a stream id hashed from (master seed, parent stream,
    /// label), so the same label always yields the same stream and different
    /// labels yield distinct ones.
    pub fn derive(&self, label: &str) -> SeedSpec {
        let mut h = Sha256::new();
        h.update(self.master_seed.to_le_bytes());
        h.update(self.stream_id.to_le_bytes());
        h.update(label.as_bytes());
        let digest = h.finalize();
        let mut id = [0u8; 8];
        id.copy_from_slice(&digest[..8]);
        SeedSpec::new(self.master_seed, u64::from_le_bytes(id))
    }

    /// Instantiate the generator for this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }
}
