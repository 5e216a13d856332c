//! How far a perturbed corpus drifts from its original at the subword level.
//!
//! Both corpora are tokenized with the same merge table, word by word, and
//! each aligned pair of words is compared: did the symbol sequence change,
//! how many symbol edits separate the two, and how many symbols fall outside
//! the table's vocabulary.

use serde::Serialize;

use crate::analysis::AnalysisError;
use crate::bpe::{CachedTokenizer, MergeTable};
use crate::corpus::Record;
use crate::segment::words;

/// Levenshtein distance between two symbol sequences (unit costs).
pub fn edit_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, x) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(x != y);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub records: u64,
    pub words: u64,
    pub changed_words: u64,
    pub mean_tokens_per_word_original: f64,
    pub mean_tokens_per_word_perturbed: f64,
    /// Fraction of aligned words whose symbol sequence differs.
    pub changed_token_sequence_rate: f64,
    pub mean_token_edit_distance: f64,
    /// Fraction of perturbed-side symbols missing from the vocabulary.
    pub unknown_symbol_rate: f64,
    pub unknown_symbol_rate_original: f64,
}

impl DivergenceReport {
    pub fn is_zero(&self) -> bool {
        self.changed_words == 0
            && self.changed_token_sequence_rate == 0.0
            && self.mean_token_edit_distance == 0.0
            && self.mean_tokens_per_word_original == self.mean_tokens_per_word_perturbed
    }
}

/// Running totals; feed aligned record pairs, then call [`finish`](Self::finish).
pub struct DivergenceAccumulator<'a> {
    tokenizer: CachedTokenizer<'a>,
    records: u64,
    words: u64,
    changed: u64,
    tokens_original: u64,
    tokens_perturbed: u64,
    edits: u64,
    unknown_original: u64,
    unknown_perturbed: u64,
}

impl<'a> DivergenceAccumulator<'a> {
    pub fn new(table: &'a MergeTable) -> Self {
        DivergenceAccumulator {
            tokenizer: CachedTokenizer::new(table),
            records: 0,
            words: 0,
            changed: 0,
            tokens_original: 0,
            tokens_perturbed: 0,
            edits: 0,
            unknown_original: 0,
            unknown_perturbed: 0,
        }
    }

    pub fn add(&mut self, original: &Record, perturbed: &Record) -> Result<(), AnalysisError> {
        let misaligned = |reason: String| AnalysisError::Misaligned {
            index: original.index,
            reason,
        };
        if original.index != perturbed.index {
            return Err(misaligned(format!("perturbed side has index {}", perturbed.index)));
        }
        if original.fields.len() != perturbed.fields.len() {
            return Err(misaligned(format!(
                "{} fields vs {}",
                original.fields.len(),
                perturbed.fields.len()
            )));
        }
        for (f, text) in original.masked_fields() {
            let ws: Vec<&str> = words(text).collect();
            let ps: Vec<&str> = words(&perturbed.fields[f]).collect();
            if ws.len() != ps.len() {
                return Err(misaligned(format!(
                    "field {f} has {} words vs {}",
                    ws.len(),
                    ps.len()
                )));
            }
            for (w, p) in ws.into_iter().zip(ps) {
                self.add_word(w, p);
            }
        }
        self.records += 1;
        Ok(())
    }

    fn add_word(&mut self, original: &str, perturbed: &str) {
        self.words += 1;
        let a = self.tokenizer.encode_word(original).to_vec();
        let table = self.tokenizer.table();
        self.unknown_original += a.iter().filter(|s| !table.contains(s)).count() as u64;
        self.tokens_original += a.len() as u64;
        if original == perturbed {
            self.tokens_perturbed += a.len() as u64;
            self.unknown_perturbed += a.iter().filter(|s| !table.contains(s)).count() as u64;
            return;
        }
        let table = self.tokenizer.table();
        let b = self.tokenizer.encode_word(perturbed);
        self.tokens_perturbed += b.len() as u64;
        self.unknown_perturbed += b.iter().filter(|s| !table.contains(s)).count() as u64;
        if a.as_slice() != b {
            self.changed += 1;
            self.edits += edit_distance(&a, b) as u64;
        }
    }

    pub fn finish(self) -> DivergenceReport {
        let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        DivergenceReport {
            records: self.records,
            words: self.words,
            changed_words: self.changed,
            mean_tokens_per_word_original: ratio(self.tokens_original, self.words),
            mean_tokens_per_word_perturbed: ratio(self.tokens_perturbed, self.words),
            changed_token_sequence_rate: ratio(self.changed, self.words),
            mean_token_edit_distance: ratio(self.edits, self.words),
            unknown_symbol_rate: ratio(self.unknown_perturbed, self.tokens_perturbed),
            unknown_symbol_rate_original: ratio(self.unknown_original, self.tokens_original),
        }
    }
}

/// Compares two record streams that must line up one-to-one.
pub fn divergence_report<I, J, E>(original: I, perturbed: J, table: &MergeTable) -> Result<DivergenceReport, AnalysisError>
where
    I: IntoIterator<Item = Result<Record, E>>,
    J: IntoIterator<Item = Result<Record, E>>,
    AnalysisError: From<E>,
{
    let mut acc = DivergenceAccumulator::new(table);
    let mut a = original.into_iter();
    let mut b = perturbed.into_iter();
    let mut position = 0u64;
    loop {
        match (a.next(), b.next()) {
            (None, None) => break,
            (Some(x), Some(y)) => acc.add(&x?, &y?)?,
            (Some(_), None) | (None, Some(_)) => {
                return Err(AnalysisError::Misaligned {
                    index: position,
                    reason: "one corpus ends before the other".into(),
                })
            }
        }
        position += 1;
    }
    Ok(acc.finish())
}

/// [`divergence_report`] over in-memory records.
pub fn divergence_of(original: &[Record], perturbed: &[Record], table: &MergeTable) -> Result<DivergenceReport, AnalysisError> {
    divergence_report(
        original.iter().cloned().map(Ok::<_, AnalysisError>),
        perturbed.iter().cloned().map(Ok::<_, AnalysisError>),
        table,
    )
}

/// One cell of an `(r, seed)` sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepEntry {
    pub p: f64,
    pub r: f64,
    pub seed: u64,
    pub report: DivergenceReport,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bpe::{train, WordCounts};

    fn table(text: &str) -> MergeTable {
        let mut c = WordCounts::new();
        c.add_text(text);
        train(&c, 100).unwrap().table
    }

    #[test]
    fn edit_distance_basics() {
        assert_eq!(edit_distance::<u8>(&[], &[]), 0);
        assert_eq!(edit_distance(b"kitten", b"sitting"), 3);
        assert_eq!(edit_distance(b"abc", b""), 3);
        assert_eq!(edit_distance(&["ab", "c"], &["a", "bc"]), 2);
    }

    #[test]
    fn identical_corpora_give_zero_report() {
        let text = "reading between the lines is easy";
        let t = table(&format!("{text} {text}"));
        let recs = vec![Record::plain(0, text), Record::plain(1, "")];
        let r = divergence_of(&recs, &recs, &t).unwrap();
        assert!(r.is_zero());
        assert_eq!(r.words, 6);
        assert_eq!(r.records, 2);
        assert!(r.mean_tokens_per_word_original >= 1.0);
    }

    #[test]
    fn scrambled_word_counts_as_changed() {
        let t = table("reading reading reading");
        let a = vec![Record::plain(0, "reading")];
        let b = vec![Record::plain(0, "rdaeing")];
        let r = divergence_of(&a, &b, &t).unwrap();
        assert_eq!(r.changed_words, 1);
        assert_eq!(r.changed_token_sequence_rate, 1.0);
        assert!(r.mean_tokens_per_word_perturbed > r.mean_tokens_per_word_original);
        assert!(r.mean_token_edit_distance >= 1.0);
    }

    #[test]
    fn misalignment_names_index() {
        let t = MergeTable::empty();
        let a = vec![Record::plain(0, "a b"), Record::plain(1, "c")];
        let b = vec![Record::plain(0, "a b")];
        match divergence_of(&a, &b, &t) {
            Err(AnalysisError::Misaligned { index, .. }) => assert_eq!(index, 1),
            other => panic!("{other:?}"),
        }
        let c = vec![Record::plain(0, "a b c")];
        match divergence_of(&a[..1], &c, &t) {
            Err(AnalysisError::Misaligned { index, .. }) => assert_eq!(index, 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_symbols_counted() {
        let t = table("abab abab");
        let a = vec![Record::plain(0, "abab zz")];
        let r = divergence_of(&a, &a, &t).unwrap();
        assert!(r.unknown_symbol_rate > 0.0);
        assert_eq!(r.unknown_symbol_rate, r.unknown_symbol_rate_original);
    }
}
