//! Counter-based random streams keyed by `(seed, record, field, segment)`.
//!
//! Every random decision a perturbation run makes is drawn from a stream whose
//! key is a pure function of the user seed and the position of the text being
//! perturbed. Nothing depends on processing order, so a corpus split across
//! threads produces the same bytes as a sequential run.
//!
//! The construction is frozen. Changing any constant below changes every
//! perturbed corpus ever produced, so the published test vectors in the tests
//! (and in the README) must stay green.
//!
//! ```text
//! mix64(z)        = splitmix64 finalizer:
//!                     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!                     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!                     z ^ (z >> 31)
//! absorb(h, x)    = mix64((h * 0xD6E8FEB86659FD93) ^ (x + 0x9E3779B97F4A7C15))
//! field key       = absorb(absorb(absorb(DOMAIN, seed), record), field)
//! record key      = absorb(absorb(absorb(DOMAIN, seed), record), 2^64 - 1)
//! segment key     = absorb(field key, segment ordinal)
//! draw i (i >= 1) = mix64(key + i * 0x9E3779B97F4A7C15)
//! ```
//!
//! All arithmetic wraps modulo 2^64. `DOMAIN` is `0x6D69_7363_6869_6566`.

/// Weyl increment shared by key absorption and the output counter.
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const ABSORB_MULTIPLIER: u64 = 0xD6E8_FEB8_6659_FD93;
/// ASCII "mischief".
const DOMAIN: u64 = 0x6D69_7363_6869_6566;
/// Lane reserved for the per-record selection draw. Field indices are 32-bit,
/// so this value can never collide with a field lane.
const RECORD_LANE: u64 = u64::MAX;

/// The splitmix64 output finalizer. A bijection on `u64` with full avalanche.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
fn absorb(h: u64, x: u64) -> u64 {
    mix64(h.wrapping_mul(ABSORB_MULTIPLIER) ^ x.wrapping_add(GOLDEN_GAMMA))
}

#[inline]
fn record_prefix(seed: u64, record_index: u64) -> u64 {
    absorb(absorb(DOMAIN, seed), record_index)
}

/// Stream for one field of one record.
pub fn derive_stream(seed: u64, record_index: u64, field_index: u32) -> Stream {
    Stream::from_key(absorb(record_prefix(seed, record_index), u64::from(field_index)))
}

/// Stream used for the per-record "is this sentence selected" draw.
pub fn record_stream(seed: u64, record_index: u64) -> Stream {
    Stream::from_key(absorb(record_prefix(seed, record_index), RECORD_LANE))
}

/// A splitmix64-style counter stream. Cloning a stream clones its position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stream {
    key: u64,
    counter: u64,
}

impl Stream {
    pub fn from_key(key: u64) -> Self {
        Stream { key, counter: 0 }
    }

    /// Convenience for callers that only have a seed (analysis tools).
    pub fn from_seed(seed: u64) -> Self {
        Stream::from_key(absorb(DOMAIN, seed))
    }

    pub fn key(&self) -> u64 {
        self.key
    }

    /// An independent stream for the `ordinal`-th child of this one. Depends
    /// only on the key, never on how many values have been drawn.
    pub fn substream(&self, ordinal: u64) -> Stream {
        Stream::from_key(absorb(self.key, ordinal))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN_GAMMA)))
    }

    /// Uniform draw on the half-open interval (0, 1], on a 2^-53 grid.
    ///
    /// Zero is excluded so that `u <= 0.0` is never true and `u <= 1.0` is
    /// always true: a probability of exactly 0 or 1 behaves exactly.
    #[inline]
    pub fn next_unit(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        ((self.next_u64() >> 11) + 1) as f64 * SCALE
    }

    /// Uniform integer in `0..bound` by Lemire's multiply-and-reject method.
    ///
    /// # Panics
    ///
    /// Panics if `bound == 0`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "below() needs a positive bound");
        let mut m = u128::from(self.next_u64()) * u128::from(bound);
        let mut low = m as u64;
        if low < bound {
            let threshold = bound.wrapping_neg() % bound;
            while low < threshold {
                m = u128::from(self.next_u64()) * u128::from(bound);
                low = m as u64;
            }
        }
        (m >> 64) as u64
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}
