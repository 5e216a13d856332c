//! Reproducible interior-letter scrambling for text corpora.
//!
//! Words keep their first and last letters while the letters in between are
//! shuffled (`reading` may become `rdaenig`). A corpus run selects each line
//! with probability `p` and, inside selected lines, each word of at least
//! four letters with probability `r`. Every random choice comes from a
//! counter-based stream keyed by the seed and the position of the text, so
//! runs are byte-for-byte repeatable and independent of threading.
//!
//! Besides the perturbation itself the crate carries the tools to study its
//! effect: exact and sampled collision probabilities, a small BPE trainer and
//! tokenizer, and subword divergence reports between a corpus and its
//! perturbed twin.
//!
//! ```
//! use mischief::{perturb_text, PerturbConfig};
//!
//! let config = PerturbConfig::new(1.0, 1.0, 7).unwrap();
//! let out = perturb_text("Scrambled words remain readable.", &config);
//! assert_eq!(out.len(), "Scrambled words remain readable.".len());
//! assert!(out.starts_with('S') && out.ends_with("e."));
//! ```

pub mod analysis;
pub mod bpe;
pub mod cli;
pub mod collision;
pub mod corpus;
pub mod divergence;
pub mod gra;
pub mod manifest;
pub mod mischief;
pub mod rng;
pub mod segment;
pub mod stats;
pub mod synth;

pub use analysis::AnalysisError;
pub use bpe::{bpe_tokenize, bpe_train, MergeTable};
pub use collision::{agreement_probability, collision_probability, empirical_collision_rate, enumerated_collision_rate, CollisionResult};
pub use corpus::{read_corpus, write_corpus, ColumnSelector, CorpusError, CorpusFormat, CorpusKind, Record};
pub use divergence::{divergence_report, DivergenceReport};
pub use gra::{distinct_variant_count, gra, mischief_sentence, ConfigError, GraError, GraOutcome, PerturbConfig};
pub use mischief::{mischief_corpus, perturb_batch, perturb_record, perturb_text};
pub use rng::{derive_stream, Stream};
pub use segment::{segment_token, SegmentedToken};
pub use stats::{corpus_stats, CorpusStats};
