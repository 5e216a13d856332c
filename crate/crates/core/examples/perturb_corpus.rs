// Perturb a plain-text corpus at several concentrations, the way a data
// pipeline would call into the library.

use std::error::Error;
use std::io::Cursor;

use mischief::corpus::{read_corpus, write_corpus, CorpusFormat};
use mischief::{mischief_corpus, perturb_batch, perturb_text, PerturbConfig};

const TEXT: &str = "According to research at an English university, it does not matter\n\
in what order the letters in a word are, the only important thing is\n\
that the first and last letter be at the right place.\n";

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for r in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let config = PerturbConfig::new(1.0, r, 42)?;
        let reader = read_corpus(Cursor::new(TEXT), CorpusFormat::plain())?;
        let bytes = write_corpus(mischief_corpus(reader, &config), None, Vec::new())?;
        let out = String::from_utf8(bytes)?;
        println!("r = {r}:\n{out}");
        if r == 0.0 {
            assert_eq!(out, TEXT);
        }
    }

    // One-off strings and batches use the same streams as the corpus path:
    // element i of a batch is line i of a corpus.
    let config = PerturbConfig::new(1.0, 0.5, 42)?;
    let lines: Vec<&str> = TEXT.lines().collect();
    let batch = perturb_batch(&lines, &config);
    assert_eq!(batch[0], perturb_text(lines[0], &config));
    for line in &batch {
        println!("{line}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
