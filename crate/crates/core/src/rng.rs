//! Counter-based random streams.
//!
//! Every draw in the generator is a pure function of a key tuple (for example
//! `(seed, generation, candidate, gene)`) so replays never depend on the order
//! in which candidates are evaluated.

use rand::RngCore;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hashes an ordered tuple of words into a single 64-bit key.
pub fn mix(parts: &[u64]) -> u64 {
    parts.iter().fold(0x6A09_E667_F3BC_C908, |acc, &p| {
        finalize(acc.wrapping_add(GOLDEN) ^ finalize(p.wrapping_add(GOLDEN)))
    })
}

/// Uniform draw in `[0, 1)` addressed directly by its key.
pub fn unit(parts: &[u64]) -> f64 {
    (mix(parts) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Stream domains, so different consumers of the same seed never collide.
pub mod stream {
    pub const INIT: u64 = 1;
    pub const BREED: u64 = 2;
    pub const PROPS: u64 = 3;
    pub const DESIGNER: u64 = 4;
    pub const STYLE: u64 = 5;
}

/// SplitMix64 sequence starting from a mixed key: output `i` is
/// `finalize(key + (i + 1) * GOLDEN)`.
#[derive(Debug, Clone)]
pub struct KeyedRng {
    state: u64,
}

impl KeyedRng {
    pub fn new(parts: &[u64]) -> Self {
        Self { state: mix(parts) }
    }
}

impl RngCore for KeyedRng {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        finalize(self.state)
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let bytes = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}
