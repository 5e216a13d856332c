//! Word-length statistics over the alphabetic segments of a corpus.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::analysis::AnalysisError;
use crate::corpus::Record;
use crate::gra::distinct_variant_count;
use crate::segment::letter_runs;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusStats {
    pub words: u64,
    pub eligible_words: u64,
    pub min_length: usize,
    pub mean_word_length: f64,
    pub eligible_fraction: f64,
    /// Mean number of distinct scrambles over eligible words.
    pub mean_distinct_variants: f64,
}

#[derive(Clone, Debug, Default)]
pub struct StatsAccumulator {
    words: u64,
    eligible: u64,
    letters: u64,
    variants: f64,
}

impl StatsAccumulator {
    pub fn add_text(&mut self, text: &str, min_length: usize) {
        for run in letter_runs(text) {
            let n = run.chars().count();
            self.words += 1;
            self.letters += n as u64;
            if n >= min_length {
                self.eligible += 1;
                self.variants += distinct_variant_count(run).to_f64().unwrap_or(f64::INFINITY);
            }
        }
    }

    pub fn add_record(&mut self, record: &Record, min_length: usize) {
        for (_, text) in record.masked_fields() {
            self.add_text(text, min_length);
        }
    }

    pub fn finish(self, min_length: usize) -> Result<CorpusStats, AnalysisError> {
        if self.words == 0 {
            return Err(AnalysisError::EmptyCorpus);
        }
        Ok(CorpusStats {
            words: self.words,
            eligible_words: self.eligible,
            min_length,
            mean_word_length: self.letters as f64 / self.words as f64,
            eligible_fraction: self.eligible as f64 / self.words as f64,
            mean_distinct_variants: if self.eligible == 0 {
                0.0
            } else {
                self.variants / self.eligible as f64
            },
        })
    }
}

pub fn corpus_stats<'a, I>(records: I, min_length: usize) -> Result<CorpusStats, AnalysisError>
where
    I: IntoIterator<Item = &'a Record>,
{
    let mut acc = StatsAccumulator::default();
    for r in records {
        acc.add_record(r, min_length);
    }
    acc.finish(min_length)
}
