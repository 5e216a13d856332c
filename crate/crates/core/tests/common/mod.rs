//! Test-side oracles, written without reference to the library internals.

#![allow(dead_code)]

use std::collections::BTreeMap;

/// xorshift64* generator, independent of the library's streams.
pub struct Xorshift(u64);

impl Xorshift {
    pub fn new(seed: u64) -> Self {
        Xorshift(seed.wrapping_mul(0x2545_F491_4F6C_DD1D) | 1)
    }

    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }

    pub fn pick<T: Copy>(&mut self, items: &[T]) -> T {
        items[self.below(items.len())]
    }
}

/// Letters from several scripts, including astral and non-ASCII ones.
pub const LETTERS: &[char] = &[
    'a', 'b', 'c', 'd', 'e', 'o', 's', 't', 'z', 'é', 'ñ', 'ü', 'ß', 'ø', 'α', 'β', 'λ', 'ω',
    'ж', 'я', 'ш', 'א', 'ש', 'ع', 'ب', '中', '文', 'あ', 'ア', '한', 'ก', '𝔸', '𐐀',
];

pub fn unicode_word(rng: &mut Xorshift, len: usize) -> String {
    (0..len).map(|_| rng.pick(LETTERS)).collect()
}

/// Every ordering of `items`, by plain recursion.
pub fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

/// Ordered pairs `(a, b)` of interior orderings of `word` that spell the same
/// string, out of all `m! * m!` pairs: `(hits, total)`.
pub fn brute_force_pair_collisions(word: &str) -> (u64, u64) {
    let chars: Vec<char> = word.chars().collect();
    let n = chars.len();
    let spell = |interior: &Vec<char>| -> String {
        std::iter::once(chars[0])
            .chain(interior.iter().copied())
            .chain(std::iter::once(chars[n - 1]))
            .collect()
    };
    let outputs: Vec<String> = permutations(&chars[1..n - 1]).iter().map(spell).collect();
    let mut hits = 0u64;
    for a in &outputs {
        for b in &outputs {
            hits += u64::from(a == b);
        }
    }
    let total = outputs.len() as u64;
    (hits, total * total)
}

pub fn sorted_chars(s: &str) -> Vec<char> {
    let mut v: Vec<char> = s.chars().collect();
    v.sort_unstable();
    v
}

pub fn char_counts(s: &str) -> BTreeMap<char, usize> {
    let mut m = BTreeMap::new();
    for c in s.chars() {
        *m.entry(c).or_default() += 1;
    }
    m
}

/// Half-width of a 4-sigma binomial interval around `p` for `n` trials.
pub fn four_sigma(p: f64, n: u64) -> f64 {
    4.0 * (p * (1.0 - p) / n as f64).sqrt()
}

/// A GLUE-style three-column file: `id`, `sentence`, `label`, with a header.
pub fn glue_tsv(rows: usize, seed: u64) -> String {
    let sentences = mischief::synth::english_like_corpus(rows, seed);
    let mut out = String::from("id\tsentence\tlabel\n");
    for (i, s) in sentences.iter().enumerate() {
        let label = ["entailment", "neutral", "contradiction"][i % 3];
        out.push_str(&format!("{}\t{s}\t{label}\n", 1000 + i));
    }
    out
}
