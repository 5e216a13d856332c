//! Deterministic English-like text for demos and desk-scale experiments.
//!
//! Sentences are drawn from a fixed list of a few hundred common English
//! words with Zipf-like frequencies, capitalized and punctuated. The output
//! is a pure function of `(lines, seed)`.

use crate::rng::Stream;

const WORDS: &str = include_str!("../data/words.txt");

pub fn vocabulary() -> Vec<&'static str> {
    WORDS.lines().filter(|l| !l.is_empty()).collect()
}

/// Cumulative Zipf weights `1 / (rank + 2)` over the word list.
struct Sampler {
    words: Vec<&'static str>,
    cumulative: Vec<f64>,
}

impl Sampler {
    fn new() -> Self {
        let words = vocabulary();
        let mut total = 0.0;
        let cumulative = (0..words.len())
            .map(|rank| {
                total += 1.0 / (rank as f64 + 2.0);
                total
            })
            .collect();
        Sampler { words, cumulative }
    }

    fn draw(&self, stream: &mut Stream) -> &'static str {
        let total = *self.cumulative.last().expect("word list is not empty");
        let target = stream.next_unit() * total;
        let i = self.cumulative.partition_point(|&c| c < target);
        self.words[i.min(self.words.len() - 1)]
    }
}

/// `lines` sentences of 6 to 18 words each.
pub fn english_like_corpus(lines: usize, seed: u64) -> Vec<String> {
    let sampler = Sampler::new();
    let base = Stream::from_seed(seed);
    (0..lines)
        .map(|i| {
            let mut stream = base.substream(i as u64);
            let len = 6 + stream.below(13) as usize;
            let mut line = String::new();
            for k in 0..len {
                let word = sampler.draw(&mut stream);
                if k > 0 {
                    line.push(' ');
                    line.push_str(word);
                } else {
                    let mut chars = word.chars();
                    if let Some(c) = chars.next() {
                        line.extend(c.to_uppercase());
                        line.push_str(chars.as_str());
                    }
                }
                if k + 1 < len && stream.next_unit() < 0.06 {
                    line.push(',');
                }
            }
            line.push(if stream.next_unit() < 0.1 { '?' } else { '.' });
            line
        })
        .collect()
}
