//! Byte pair encoding over code points with an end-of-word marker.
//!
//! Training follows the classic recipe: every whitespace-delimited word is
//! split into code points, the last one carrying [`END_OF_WORD`]; the most
//! frequent adjacent pair (weighted by word frequency) is merged everywhere,
//! and this repeats until the vocabulary reaches the target size or no pair
//! occurs at least twice. Among pairs with equal frequency the one whose
//! `(left, right)` strings sort first, bytewise, wins.
//!
//! # Table file
//!
//! ```text
//! #mischief-bpe<TAB>1
//! #vocab_size<TAB>2000
//! #alphabet<TAB>a b c d</w> ...
//! left right
//! ...
//! ```
//!
//! Header lines contain a tab, merge lines never do (symbols cannot contain
//! whitespace), so the two are unambiguous. Merges are listed in rank order.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, HashSet};
use std::fmt::Write as _;

use crate::analysis::AnalysisError;
use crate::corpus::Record;
use crate::segment::words;

pub const END_OF_WORD: &str = "</w>";
const MAGIC: &str = "#mischief-bpe";
const FORMAT_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Merge {
    pub left: String,
    pub right: String,
}

impl Merge {
    pub fn merged(&self) -> String {
        format!("{}{}", self.left, self.right)
    }
}

/// Ranked merge rules plus the vocabulary they produce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeTable {
    merges: Vec<Merge>,
    /// Pair frequency at the moment each merge was chosen. Empty for tables
    /// loaded from disk.
    frequencies: Vec<u64>,
    alphabet: BTreeSet<String>,
    vocab: BTreeSet<String>,
    vocab_size: usize,
    ranks: HashMap<String, HashMap<String, usize>>,
}

impl MergeTable {
    fn build(merges: Vec<Merge>, frequencies: Vec<u64>, alphabet: BTreeSet<String>, vocab_size: usize) -> Self {
        let mut vocab = alphabet.clone();
        vocab.extend(merges.iter().map(Merge::merged));
        let mut ranks: HashMap<String, HashMap<String, usize>> = HashMap::new();
        for (i, m) in merges.iter().enumerate() {
            ranks
                .entry(m.left.clone())
                .or_default()
                .entry(m.right.clone())
                .or_insert(i);
        }
        MergeTable {
            merges,
            frequencies,
            alphabet,
            vocab,
            vocab_size,
            ranks,
        }
    }

    /// A table with no merges: every word splits into code points.
    pub fn empty() -> Self {
        MergeTable::build(Vec::new(), Vec::new(), BTreeSet::new(), 0)
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    pub fn frequencies(&self) -> &[u64] {
        &self.frequencies
    }

    pub fn vocab(&self) -> &BTreeSet<String> {
        &self.vocab
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.vocab.contains(symbol)
    }

    pub fn rank(&self, left: &str, right: &str) -> Option<usize> {
        self.ranks.get(left)?.get(right).copied()
    }

    /// Segments one word (no whitespace) into symbols.
    pub fn encode_word(&self, word: &str) -> Vec<String> {
        let mut symbols = initial_symbols(word);
        loop {
            let best = symbols
                .windows(2)
                .filter_map(|w| self.rank(&w[0], &w[1]))
                .min();
            let Some(rank) = best else { break };
            let merge = &self.merges[rank];
            symbols = merge_pair(symbols, &merge.left, &merge.right);
        }
        symbols
    }

    /// Segments whitespace-delimited text, concatenating the words' symbols.
    pub fn tokenize(&self, text: &str) -> Vec<String> {
        words(text).flat_map(|w| self.encode_word(w)).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{MAGIC}\t{FORMAT_VERSION}");
        let _ = writeln!(out, "#vocab_size\t{}", self.vocab_size);
        let alphabet: Vec<&str> = self.alphabet.iter().map(String::as_str).collect();
        let _ = writeln!(out, "#alphabet\t{}", alphabet.join(" "));
        for m in &self.merges {
            let _ = writeln!(out, "{} {}", m.left, m.right);
        }
        out
    }

    /// Parses the table file format. Files holding only merge lines (no
    /// header) are accepted; their alphabet is then empty.
    pub fn from_text(text: &str) -> Result<Self, AnalysisError> {
        let mut merges = Vec::new();
        let mut alphabet = BTreeSet::new();
        let mut vocab_size = 0;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.is_empty() {
                continue;
            }
            if let Some((key, value)) = line.split_once('\t') {
                match key {
                    MAGIC => {
                        if value != FORMAT_VERSION {
                            return Err(malformed(line_no, format!("unsupported version {value:?}")));
                        }
                    }
                    "#vocab_size" => {
                        vocab_size = value
                            .parse()
                            .map_err(|_| malformed(line_no, format!("bad vocab size {value:?}")))?;
                    }
                    "#alphabet" => {
                        alphabet.extend(value.split(' ').filter(|s| !s.is_empty()).map(str::to_owned));
                    }
                    _ => return Err(malformed(line_no, format!("unknown header {key:?}"))),
                }
                continue;
            }
            let mut parts = line.split(' ');
            match (parts.next(), parts.next(), parts.next()) {
                (Some(l), Some(r), None) if !l.is_empty() && !r.is_empty() => merges.push(Merge {
                    left: l.to_owned(),
                    right: r.to_owned(),
                }),
                _ => return Err(malformed(line_no, "expected two space-separated symbols".into())),
            }
        }
        Ok(MergeTable::build(merges, Vec::new(), alphabet, vocab_size))
    }
}

fn malformed(line: usize, reason: String) -> AnalysisError {
    AnalysisError::MalformedTable { line, reason }
}

fn initial_symbols(word: &str) -> Vec<String> {
    let mut symbols: Vec<String> = word.chars().map(String::from).collect();
    if let Some(last) = symbols.last_mut() {
        last.push_str(END_OF_WORD);
    }
    symbols
}

fn merge_pair(symbols: Vec<String>, left: &str, right: &str) -> Vec<String> {
    let mut out = Vec::with_capacity(symbols.len());
    let mut iter = symbols.into_iter().peekable();
    while let Some(sym) = iter.next() {
        if sym == left && iter.peek().is_some_and(|n| n == right) {
            let next = iter.next().expect("peeked");
            out.push(sym + &next);
        } else {
            out.push(sym);
        }
    }
    out
}

/// Strips the end-of-word marker and joins symbols back into the word.
pub fn detokenize_word(symbols: &[String]) -> String {
    let joined: String = symbols.concat();
    joined
        .strip_suffix(END_OF_WORD)
        .map(str::to_owned)
        .unwrap_or(joined)
}

/// Word frequencies gathered from a corpus.
#[derive(Clone, Debug, Default)]
pub struct WordCounts {
    counts: BTreeMap<String, u64>,
}

impl WordCounts {
    pub fn new() -> Self {
        WordCounts::default()
    }

    pub fn add_text(&mut self, text: &str) {
        for w in words(text) {
            *self.counts.entry(w.to_owned()).or_default() += 1;
        }
    }

    /// Counts the words of every perturbable field.
    pub fn add_record(&mut self, record: &Record) {
        for (_, text) in record.masked_fields() {
            self.add_text(text);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }
}

impl<'a> FromIterator<&'a Record> for WordCounts {
    fn from_iter<T: IntoIterator<Item = &'a Record>>(iter: T) -> Self {
        let mut counts = WordCounts::new();
        for r in iter {
            counts.add_record(r);
        }
        counts
    }
}

/// A trained table together with the segmentation each training word had
/// when training stopped.
#[derive(Clone, Debug)]
pub struct Training {
    pub table: MergeTable,
    pub segmentations: BTreeMap<String, Vec<String>>,
}

pub fn bpe_train<'a, I>(records: I, vocab_size: usize) -> Result<MergeTable, AnalysisError>
where
    I: IntoIterator<Item = &'a Record>,
{
    Ok(train(&records.into_iter().collect(), vocab_size)?.table)
}

/// Trains a table from word counts.
pub fn train(counts: &WordCounts, vocab_size: usize) -> Result<Training, AnalysisError> {
    if counts.is_empty() {
        return Err(AnalysisError::EmptyCorpus);
    }
    Trainer::new(counts).run(vocab_size)
}

type Pair = (u32, u32);

/// Max-heap entry: highest count first, then the bytewise-smallest pair.
type Candidate = (u64, Reverse<(String, String)>, Pair);

struct Trainer {
    symbols: Vec<String>,
    ids: HashMap<String, u32>,
    words: Vec<Vec<u32>>,
    freqs: Vec<u64>,
    keys: Vec<String>,
    pair_counts: HashMap<Pair, u64>,
    pair_words: HashMap<Pair, HashSet<usize>>,
    heap: BinaryHeap<Candidate>,
}

impl Trainer {
    fn new(counts: &WordCounts) -> Self {
        let mut t = Trainer {
            symbols: Vec::new(),
            ids: HashMap::new(),
            words: Vec::with_capacity(counts.len()),
            freqs: Vec::with_capacity(counts.len()),
            keys: Vec::with_capacity(counts.len()),
            pair_counts: HashMap::new(),
            pair_words: HashMap::new(),
            heap: BinaryHeap::new(),
        };
        for (word, &freq) in &counts.counts {
            let ids: Vec<u32> = initial_symbols(word).into_iter().map(|s| t.intern(s)).collect();
            t.words.push(ids);
            t.freqs.push(freq);
            t.keys.push(word.clone());
        }
        for idx in 0..t.words.len() {
            t.add_word_pairs(idx);
        }
        let pairs: Vec<Pair> = t.pair_counts.keys().copied().collect();
        for p in pairs {
            t.push(p);
        }
        t
    }

    fn intern(&mut self, s: String) -> u32 {
        if let Some(&id) = self.ids.get(&s) {
            return id;
        }
        let id = self.symbols.len() as u32;
        self.ids.insert(s.clone(), id);
        self.symbols.push(s);
        id
    }

    fn add_word_pairs(&mut self, idx: usize) {
        let freq = self.freqs[idx];
        for w in self.words[idx].windows(2) {
            let p = (w[0], w[1]);
            *self.pair_counts.entry(p).or_default() += freq;
            self.pair_words.entry(p).or_default().insert(idx);
        }
    }

    fn remove_word_pairs(&mut self, idx: usize) {
        let freq = self.freqs[idx];
        for w in self.words[idx].windows(2) {
            let p = (w[0], w[1]);
            let c = self.pair_counts.get_mut(&p).expect("pair was counted");
            *c -= freq;
            if *c == 0 {
                self.pair_counts.remove(&p);
            }
        }
    }

    fn push(&mut self, p: Pair) {
        if let Some(&c) = self.pair_counts.get(&p) {
            let key = (self.symbols[p.0 as usize].clone(), self.symbols[p.1 as usize].clone());
            self.heap.push((c, Reverse(key), p));
        }
    }

    /// Most frequent live pair, discarding stale heap entries.
    fn pop_best(&mut self) -> Option<(Pair, u64)> {
        while let Some((c, _, p)) = self.heap.pop() {
            if self.pair_counts.get(&p) == Some(&c) {
                return Some((p, c));
            }
        }
        None
    }

    fn run(mut self, vocab_size: usize) -> Result<Training, AnalysisError> {
        let alphabet: BTreeSet<String> = self.symbols.iter().cloned().collect();
        let mut vocab = alphabet.clone();
        let mut merges = Vec::new();
        let mut frequencies = Vec::new();

        while vocab.len() < vocab_size {
            let Some(((a, b), count)) = self.pop_best() else { break };
            if count < 2 {
                break;
            }
            let merged = format!("{}{}", self.symbols[a as usize], self.symbols[b as usize]);
            merges.push(Merge {
                left: self.symbols[a as usize].clone(),
                right: self.symbols[b as usize].clone(),
            });
            frequencies.push(count);
            vocab.insert(merged.clone());
            let new_id = self.intern(merged);

            let mut affected: Vec<usize> = self
                .pair_words
                .remove(&(a, b))
                .map(|s| s.into_iter().collect())
                .unwrap_or_default();
            affected.sort_unstable();
            let mut touched: HashSet<Pair> = HashSet::new();
            for idx in affected {
                if !self.words[idx].windows(2).any(|w| w[0] == a && w[1] == b) {
                    continue;
                }
                self.remove_word_pairs(idx);
                let old = std::mem::take(&mut self.words[idx]);
                let mut new = Vec::with_capacity(old.len());
                let mut i = 0;
                while i < old.len() {
                    if i + 1 < old.len() && old[i] == a && old[i + 1] == b {
                        new.push(new_id);
                        i += 2;
                    } else {
                        new.push(old[i]);
                        i += 1;
                    }
                }
                touched.extend(new.windows(2).map(|w| (w[0], w[1])));
                touched.extend(old.windows(2).map(|w| (w[0], w[1])));
                self.words[idx] = new;
                self.add_word_pairs(idx);
            }
            for p in touched {
                self.push(p);
            }
        }

        let segmentations = self
            .keys
            .iter()
            .zip(&self.words)
            .map(|(k, ids)| {
                (
                    k.clone(),
                    ids.iter().map(|&id| self.symbols[id as usize].clone()).collect(),
                )
            })
            .collect();
        Ok(Training {
            table: MergeTable::build(merges, frequencies, alphabet, vocab_size),
            segmentations,
        })
    }
}

/// Segments text with `table`.
pub fn bpe_tokenize(text: &str, table: &MergeTable) -> Vec<String> {
    table.tokenize(text)
}

/// A per-word memo in front of a table, for tokenizing large corpora.
pub struct CachedTokenizer<'a> {
    table: &'a MergeTable,
    cache: HashMap<String, Vec<String>>,
}

impl<'a> CachedTokenizer<'a> {
    pub fn new(table: &'a MergeTable) -> Self {
        CachedTokenizer {
            table,
            cache: HashMap::new(),
        }
    }

    pub fn table(&self) -> &'a MergeTable {
        self.table
    }

    pub fn encode_word(&mut self, word: &str) -> &[String] {
        if !self.cache.contains_key(word) {
            let symbols = self.table.encode_word(word);
            self.cache.insert(word.to_owned(), symbols);
        }
        &self.cache[word]
    }
}
