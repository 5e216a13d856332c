// Measure how far subword segmentations drift as the word rate grows.

use std::error::Error;

use mischief::divergence::divergence_of;
use mischief::synth::english_like_corpus;
use mischief::{bpe_train, perturb_record, PerturbConfig, Record};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let clean: Vec<Record> = english_like_corpus(1_000, 2)
        .into_iter()
        .enumerate()
        .map(|(i, l)| Record::plain(i as u64, l))
        .collect();
    let table = bpe_train(&clean, 1_000)?;

    let mut last = 0.0;
    for r in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let config = PerturbConfig::new(1.0, r, 11)?;
        let perturbed: Vec<Record> = clean.iter().cloned().map(|x| perturb_record(x, &config)).collect();
        let report = divergence_of(&clean, &perturbed, &table)?;
        println!(
            "r={r:<4} changed {:.3}  tokens/word {:.2} -> {:.2}  edits/word {:.3}",
            report.changed_token_sequence_rate,
            report.mean_tokens_per_word_original,
            report.mean_tokens_per_word_perturbed,
            report.mean_token_edit_distance
        );
        assert!(report.changed_token_sequence_rate >= last);
        last = report.changed_token_sequence_rate;
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
