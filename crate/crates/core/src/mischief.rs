//! The corpus-level procedure: select sentences with probability `p`, then
//! scramble eligible words inside them with probability `r`.
//!
//! Record `i` draws its selection from `record_stream(seed, i)` and field `f`
//! of that record scrambles words with `derive_stream(seed, i, f)`. Output is
//! therefore a function of `(seed, index, text)` alone and any partitioning of
//! the corpus across workers gives identical bytes.

use rayon::prelude::*;

use crate::corpus::Record;
use crate::gra::{mischief_sentence, GraOutcome, PerturbConfig};
use crate::rng::{derive_stream, record_stream};

/// A perturbed record plus the audit trail of every decision taken.
#[derive(Clone, Debug, PartialEq)]
pub struct RecordAudit {
    pub record: Record,
    pub selected: bool,
    /// One entry per field; empty for unmasked fields or unselected records.
    pub outcomes: Vec<Vec<GraOutcome>>,
}

pub fn perturb_record_audited(record: Record, config: &PerturbConfig) -> RecordAudit {
    let selected = record_stream(config.seed(), record.index).next_unit() <= config.p();
    let mut outcomes = vec![Vec::new(); record.fields.len()];
    if !selected {
        return RecordAudit {
            record,
            selected,
            outcomes,
        };
    }
    let Record {
        index,
        mut fields,
        perturbable,
    } = record;
    for (f, field) in fields.iter_mut().enumerate() {
        if !perturbable[f] {
            continue;
        }
        let stream = derive_stream(config.seed(), index, f as u32);
        let (text, audit) = mischief_sentence(field, config, &stream);
        *field = text;
        outcomes[f] = audit;
    }
    RecordAudit {
        record: Record {
            index,
            fields,
            perturbable,
        },
        selected,
        outcomes,
    }
}

pub fn perturb_record(record: Record, config: &PerturbConfig) -> Record {
    perturb_record_audited(record, config).record
}

/// Lazily perturbs a stream of records, passing errors through untouched.
pub fn mischief_corpus<'a, I, E>(
    records: I,
    config: &'a PerturbConfig,
) -> impl Iterator<Item = Result<Record, E>> + 'a
where
    I: IntoIterator<Item = Result<Record, E>>,
    I::IntoIter: 'a,
{
    records
        .into_iter()
        .map(move |r| r.map(|rec| perturb_record(rec, config)))
}

/// Perturbs records in batches of `batch` on the rayon pool, yielding them in
/// input order. Memory stays bounded by one batch.
pub fn mischief_corpus_parallel<'a, I, E>(
    records: I,
    config: &'a PerturbConfig,
    batch: usize,
) -> impl Iterator<Item = Result<Record, E>> + 'a
where
    I: IntoIterator<Item = Result<Record, E>>,
    I::IntoIter: 'a,
    E: Send + 'a,
{
    let mut source = records.into_iter();
    let batch = batch.max(1);
    let mut pending: std::vec::IntoIter<Result<Record, E>> = Vec::new().into_iter();
    std::iter::from_fn(move || loop {
        if let Some(next) = pending.next() {
            return Some(next);
        }
        let chunk: Vec<Result<Record, E>> = source.by_ref().take(batch).collect();
        if chunk.is_empty() {
            return None;
        }
        let done: Vec<Result<Record, E>> = chunk
            .into_par_iter()
            .map(|r| r.map(|rec| perturb_record(rec, config)))
            .collect();
        pending = done.into_iter();
    })
}

/// Splits `records` into `partitions` contiguous slices, perturbs each on its
/// own thread and merges the results back by record index.
pub fn perturb_partitioned(records: Vec<Record>, config: &PerturbConfig, partitions: usize) -> Vec<Record> {
    let partitions = partitions.max(1);
    let chunk = records.len().div_ceil(partitions).max(1);
    let mut parts: Vec<Vec<Record>> = Vec::new();
    let mut iter = records.into_iter();
    loop {
        let part: Vec<Record> = iter.by_ref().take(chunk).collect();
        if part.is_empty() {
            break;
        }
        parts.push(part);
    }
    let mut merged: Vec<Record> = std::thread::scope(|scope| {
        let handles: Vec<_> = parts
            .into_iter()
            .map(|part| {
                scope.spawn(move || {
                    part.into_iter()
                        .map(|r| perturb_record(r, config))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    merged.sort_by_key(|r| r.index);
    merged
}

/// Perturbs one piece of text as record 0, field 0 of a one-line corpus.
pub fn perturb_text(text: &str, config: &PerturbConfig) -> String {
    perturb_text_at(text, 0, config)
}

/// Perturbs text as if it were line `index` of a plain-text corpus.
pub fn perturb_text_at(text: &str, index: u64, config: &PerturbConfig) -> String {
    let mut rec = perturb_record(Record::plain(index, text), config);
    rec.fields.pop().expect("plain records have one field")
}

/// Element `i` is perturbed as record `i`.
pub fn perturb_batch<S: AsRef<str> + Sync>(texts: &[S], config: &PerturbConfig) -> Vec<String> {
    texts
        .par_iter()
        .enumerate()
        .map(|(i, t)| perturb_text_at(t.as_ref(), i as u64, config))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus() -> Vec<Record> {
        let lines = [
            "Reading between the lines requires patience.",
            "The quick brown fox jumps over the lazy dog",
            "",
            "Transformers struggle with scrambled interiors, apparently.",
        ];
        lines
            .iter()
            .enumerate()
            .map(|(i, l)| Record::plain(i as u64, *l))
            .collect()
    }

    #[test]
    fn p_zero_is_identity() {
        let c = PerturbConfig::new(0.0, 1.0, 5).unwrap();
        for r in corpus() {
            assert_eq!(perturb_record(r.clone(), &c), r);
        }
    }

    #[test]
    fn r_zero_is_identity() {
        let c = PerturbConfig::new(1.0, 0.0, 5).unwrap();
        for r in corpus() {
            let audit = perturb_record_audited(r.clone(), &c);
            assert!(audit.selected);
            assert_eq!(audit.record, r);
        }
    }

    #[test]
    fn runs_are_repeatable() {
        let c = PerturbConfig::new(1.0, 1.0, 5).unwrap();
        let a: Vec<Record> = corpus().into_iter().map(|r| perturb_record(r, &c)).collect();
        let b: Vec<Record> = corpus().into_iter().map(|r| perturb_record(r, &c)).collect();
        assert_eq!(a, b);
        assert_ne!(a, corpus());
    }

    #[test]
    fn unmasked_fields_pass_through() {
        let c = PerturbConfig::new(1.0, 1.0, 9).unwrap();
        let rec = Record::new(
            0,
            vec!["identifier1234".into(), "Something interesting happened".into(), "entailment".into()],
            vec![false, true, false],
        )
        .unwrap();
        let out = perturb_record(rec.clone(), &c);
        assert_eq!(out.fields[0], rec.fields[0]);
        assert_eq!(out.fields[2], rec.fields[2]);
        assert_ne!(out.fields[1], rec.fields[1]);
    }

    #[test]
    fn partitioned_and_parallel_match_sequential() {
        let c = PerturbConfig::new(0.7, 0.6, 12).unwrap();
        let seq: Vec<Record> = corpus().into_iter().map(|r| perturb_record(r, &c)).collect();
        for k in 1..6 {
            assert_eq!(perturb_partitioned(corpus(), &c, k), seq);
        }
        let par: Vec<Record> = mischief_corpus_parallel(corpus().into_iter().map(Ok::<_, ()>), &c, 3)
            .collect::<Result<_, _>>()
            .unwrap();
        assert_eq!(par, seq);
        let lazy: Vec<Record> = mischief_corpus(corpus().into_iter().map(Ok::<_, ()>), &c)
            .collect::<Result<_, _>>()
            .unwrap();
        assert_eq!(lazy, seq);
    }

    #[test]
    fn batch_matches_per_line() {
        let c = PerturbConfig::new(1.0, 0.5, 21).unwrap();
        let texts: Vec<String> = corpus().into_iter().map(|r| r.fields[0].clone()).collect();
        let batch = perturb_batch(&texts, &c);
        for (i, t) in texts.iter().enumerate() {
            assert_eq!(batch[i], perturb_text_at(t, i as u64, &c));
        }
        assert_eq!(batch[0], perturb_text(&texts[0], &c));
        assert!(perturb_batch::<String>(&[], &c).is_empty());
    }
}
