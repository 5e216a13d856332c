// Word-length statistics: how much of a corpus is open to scrambling.

use std::error::Error;

use mischief::{corpus_stats, Record};

const PROSE: &str = "It was the best of times, it was the worst of times, it was the age of \
wisdom, it was the age of foolishness, it was the epoch of belief, it was the epoch of \
incredulity, it was the season of Light, it was the season of Darkness.";

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let records = [Record::plain(0, PROSE)];
    for min_length in [4, 6] {
        let stats = corpus_stats(&records, min_length)?;
        println!("{}", serde_json::to_string_pretty(&stats)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
