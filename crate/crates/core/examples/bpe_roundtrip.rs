// Train a small merge table, save it, load it back and tokenize with it.

use std::error::Error;

use mischief::bpe::detokenize_word;
use mischief::synth::english_like_corpus;
use mischief::{bpe_tokenize, bpe_train, perturb_text, MergeTable, PerturbConfig, Record};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let records: Vec<Record> = english_like_corpus(500, 9)
        .into_iter()
        .enumerate()
        .map(|(i, l)| Record::plain(i as u64, l))
        .collect();
    let table = bpe_train(&records, 600)?;
    println!("{} merges, vocabulary of {}", table.merges().len(), table.vocab().len());

    let saved = table.to_text();
    let loaded = MergeTable::from_text(&saved)?;
    assert_eq!(loaded.merges(), table.merges());
    assert_eq!(loaded.vocab(), table.vocab());
    assert_eq!(loaded.to_text(), saved);

    let sentence = "The government should consider the important question.";
    let scrambled = perturb_text(sentence, &PerturbConfig::new(1.0, 1.0, 5)?);
    for text in [sentence, scrambled.as_str()] {
        let symbols = bpe_tokenize(text, &loaded);
        println!("{} symbols: {}", symbols.len(), symbols.join(" "));
    }

    for word in scrambled.split_whitespace() {
        assert_eq!(detokenize_word(&loaded.encode_word(word)), word);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
