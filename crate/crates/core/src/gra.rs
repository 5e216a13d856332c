//! Interior-letter permutation of single words and whole sentences.
//!
//! A word `w1 w2 ... wn` keeps `w1` and `wn` in place while its interior
//! `w2 ... w(n-1)` is replaced by a uniformly random permutation of itself.
//! Lengths are counted in Unicode scalar values.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::rng::Stream;
use crate::segment::{is_letter, pieces, Piece};

/// Shortest word the procedure will touch by default (`n > 3`).
pub const DEFAULT_MIN_LENGTH: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("p must lie in [0, 1], got {0}")]
    SentenceProbability(f64),
    #[error("r must lie in [0, 1], got {0}")]
    WordProbability(f64),
    #[error("min_length must be positive")]
    ZeroMinLength,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraError {
    #[error("word {word:?} has {len} code points, below the minimum of {min}")]
    TooShort { word: String, len: usize, min: usize },
}

/// Parameters of one perturbation run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerturbConfig {
    p: f64,
    r: f64,
    seed: u64,
    min_length: usize,
    force_nonidentity: bool,
}

impl PerturbConfig {
    /// `p` is the per-sentence selection probability, `r` the per-word one.
    pub fn new(p: f64, r: f64, seed: u64) -> Result<Self, ConfigError> {
        // NaN fails both range checks.
        if !(0.0..=1.0).contains(&p) {
            return Err(ConfigError::SentenceProbability(p));
        }
        if !(0.0..=1.0).contains(&r) {
            return Err(ConfigError::WordProbability(r));
        }
        Ok(PerturbConfig {
            p,
            r,
            seed,
            min_length: DEFAULT_MIN_LENGTH,
            force_nonidentity: false,
        })
    }

    pub fn with_min_length(mut self, min_length: usize) -> Result<Self, ConfigError> {
        if min_length == 0 {
            return Err(ConfigError::ZeroMinLength);
        }
        self.min_length = min_length;
        Ok(self)
    }

    /// Re-draw until the interior actually moves, whenever it can.
    pub fn with_force_nonidentity(mut self, on: bool) -> Self {
        self.force_nonidentity = on;
        self
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn min_length(&self) -> usize {
        self.min_length
    }

    pub fn force_nonidentity(&self) -> bool {
        self.force_nonidentity
    }

    pub fn is_eligible(&self, word: &str) -> bool {
        word.chars().count() >= self.min_length
    }
}

/// What happened to one alphabetic segment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraOutcome {
    pub output: String,
    pub was_eligible: bool,
    pub was_selected: bool,
    pub was_changed: bool,
}

/// Permutes the interior of `word` using `stream`.
///
/// Every one of the `(n-2)!` positional permutations is equally likely,
/// including the identity, unless `force_nonidentity` is set and the interior
/// holds at least two distinct code points; then draws are rejected until the
/// result differs from the input.
pub fn gra(word: &str, config: &PerturbConfig, stream: &mut Stream) -> Result<String, GraError> {
    let mut chars: Vec<char> = word.chars().collect();
    let n = chars.len();
    if n < config.min_length {
        return Err(GraError::TooShort {
            word: word.to_owned(),
            len: n,
            min: config.min_length,
        });
    }
    if n < 4 {
        return Ok(word.to_owned());
    }
    let interior = &mut chars[1..n - 1];
    let movable = interior.iter().any(|&c| c != interior[0]);
    if config.force_nonidentity && movable {
        let original: Vec<char> = interior.to_vec();
        loop {
            stream.shuffle(interior);
            if interior != original.as_slice() {
                break;
            }
        }
    } else {
        stream.shuffle(interior);
    }
    Ok(chars.into_iter().collect())
}

/// Applies the per-word step to every alphabetic segment of `sentence`.
///
/// Segment `k` (counting alphabetic runs left to right over the whole
/// sentence) draws from `stream.substream(k)`: first the selection draw, then,
/// if selected, the permutation. Everything other than selected segments is
/// copied through byte for byte.
pub fn mischief_sentence(
    sentence: &str,
    config: &PerturbConfig,
    stream: &Stream,
) -> (String, Vec<GraOutcome>) {
    let mut out = String::with_capacity(sentence.len());
    let mut outcomes = Vec::new();

    for piece in pieces(sentence) {
        let token = match piece {
            Piece::Space(s) => {
                out.push_str(s);
                continue;
            }
            Piece::Token(t) => t,
        };
        let mut rest = token;
        while !rest.is_empty() {
            let run_end = rest
                .char_indices()
                .find(|&(_, c)| !is_letter(c))
                .map_or(rest.len(), |(i, _)| i);
            if run_end == 0 {
                let skip = rest
                    .char_indices()
                    .find(|&(_, c)| is_letter(c))
                    .map_or(rest.len(), |(i, _)| i);
                out.push_str(&rest[..skip]);
                rest = &rest[skip..];
                continue;
            }
            let (segment, tail) = rest.split_at(run_end);
            let mut sub = stream.substream(outcomes.len() as u64);
            outcomes.push(perturb_segment(segment, config, &mut sub));
            out.push_str(&outcomes.last().expect("just pushed").output);
            rest = tail;
        }
    }
    (out, outcomes)
}

fn perturb_segment(segment: &str, config: &PerturbConfig, stream: &mut Stream) -> GraOutcome {
    let draw = stream.next_unit();
    let was_eligible = config.is_eligible(segment);
    let was_selected = was_eligible && draw <= config.r;
    let output = if was_selected {
        gra(segment, config, stream).expect("eligibility checked above")
    } else {
        segment.to_owned()
    };
    GraOutcome {
        was_changed: output != segment,
        output,
        was_eligible,
        was_selected,
    }
}

/// Number of distinct strings the interior permutation can produce:
/// `(n-2)! / prod(m_c!)` over the multiplicities `m_c` of interior code
/// points. Words of three or fewer code points have exactly one.
pub fn distinct_variant_count(word: &str) -> BigUint {
    let chars: Vec<char> = word.chars().collect();
    if chars.len() <= 3 {
        return BigUint::one();
    }
    let mut multiplicities: BTreeMap<char, u64> = BTreeMap::new();
    for &c in &chars[1..chars.len() - 1] {
        *multiplicities.entry(c).or_default() += 1;
    }
    // Product of binomials C(placed + m, m), built up one factor at a time so
    // every intermediate value is an exact integer.
    let mut count = BigUint::one();
    let mut placed = 0u64;
    for m in multiplicities.into_values() {
        for k in 1..=m {
            count *= placed + k;
            count /= k;
        }
        placed += m;
    }
    count
}
