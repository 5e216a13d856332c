// Perturb only the sentence columns of a GLUE-style TSV file, leaving ids
// and labels alone.

use std::error::Error;
use std::io::Cursor;

use mischief::corpus::{read_corpus, write_corpus, CorpusError, CorpusFormat};
use mischief::{mischief_corpus, PerturbConfig};

const TSV: &str = "index\tsentence1\tsentence2\tlabel\n\
0\tThe children were playing outside.\tKids played in the garden.\tentailment\n\
1\tA musician tunes his instrument.\tNobody is making music.\tcontradiction\n\
2\tThe committee postponed the meeting.\tThe meeting happened yesterday.\tneutral\n";

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let format = CorpusFormat::tsv(true, ["sentence1", "sentence2"])?;
    let config = PerturbConfig::new(1.0, 1.0, 3)?;
    let reader = read_corpus(Cursor::new(TSV), format)?;
    let header = reader.header().map(<[String]>::to_vec);
    let out = String::from_utf8(write_corpus(mischief_corpus(reader, &config), header.as_deref(), Vec::new())?)?;
    print!("{out}");

    for (a, b) in TSV.lines().zip(out.lines()) {
        let (a, b): (Vec<&str>, Vec<&str>) = (a.split('\t').collect(), b.split('\t').collect());
        assert_eq!((a[0], a[3]), (b[0], b[3]));
    }

    // Asking to perturb a label column is refused up front.
    let bad = CorpusFormat::tsv(true, ["label"]);
    assert!(matches!(bad, Err(CorpusError::ProtectedColumn(_))));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
