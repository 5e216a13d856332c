//! Splitting whitespace-delimited tokens into alphabetic runs.
//!
//! A raw token such as `"(well-known),"` becomes a non-letter prefix `"("`, the
//! alphabetic runs `"well"` and `"known"` joined by the separator `"-"`, and a
//! non-letter suffix `"),"`. Only the runs are ever permuted.

use serde::Serialize;

/// A raw token decomposed into fixed affixes and permutable alphabetic runs.
///
/// `separators.len() == segments.len().saturating_sub(1)`; reassembling
/// `leading + segments[0] + separators[0] + segments[1] + ... + trailing`
/// gives back `raw` exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SegmentedToken {
    pub raw: String,
    pub leading: String,
    pub segments: Vec<String>,
    pub separators: Vec<String>,
    pub trailing: String,
}

impl SegmentedToken {
    pub fn reassemble(&self) -> String {
        let mut out = String::with_capacity(self.raw.len());
        out.push_str(&self.leading);
        for (i, seg) in self.segments.iter().enumerate() {
            if i > 0 {
                out.push_str(&self.separators[i - 1]);
            }
            out.push_str(seg);
        }
        out.push_str(&self.trailing);
        out
    }
}

#[inline]
pub fn is_letter(c: char) -> bool {
    c.is_alphabetic()
}

/// Decomposes `raw` into affixes and alphabetic runs.
///
/// Tokens are not expected to contain whitespace, but whitespace is handled
/// like any other non-letter if present.
pub fn segment_token(raw: &str) -> SegmentedToken {
    let mut leading = String::new();
    let mut segments: Vec<String> = Vec::new();
    let mut separators: Vec<String> = Vec::new();
    let mut pending = String::new();
    let mut in_run = false;

    for c in raw.chars() {
        if is_letter(c) {
            if !in_run {
                if segments.is_empty() {
                    leading = std::mem::take(&mut pending);
                } else {
                    separators.push(std::mem::take(&mut pending));
                }
                segments.push(String::new());
                in_run = true;
            }
            segments.last_mut().expect("run was opened").push(c);
        } else {
            in_run = false;
            pending.push(c);
        }
    }

    // Whatever non-letter text is left over is the suffix, or the whole token
    // when it had no letters at all.
    let trailing = if segments.is_empty() {
        leading = pending;
        String::new()
    } else {
        pending
    };

    SegmentedToken {
        raw: raw.to_owned(),
        leading,
        segments,
        separators,
        trailing,
    }
}

/// A contiguous piece of a sentence: either a whitespace run or a token.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Piece<'a> {
    Space(&'a str),
    Token(&'a str),
}

/// Splits text into alternating whitespace and token pieces, losslessly.
pub fn pieces(text: &str) -> impl Iterator<Item = Piece<'_>> {
    let mut rest = text;
    std::iter::from_fn(move || {
        let first = rest.chars().next()?;
        let space = first.is_whitespace();
        let end = rest
            .char_indices()
            .find(|&(_, c)| c.is_whitespace() != space)
            .map_or(rest.len(), |(i, _)| i);
        let (head, tail) = rest.split_at(end);
        rest = tail;
        Some(if space { Piece::Space(head) } else { Piece::Token(head) })
    })
}

/// Whitespace-delimited tokens of `text`.
pub fn words(text: &str) -> impl Iterator<Item = &str> {
    text.split_whitespace()
}

/// Alphabetic runs of `text`, in order, across all tokens.
pub fn letter_runs(text: &str) -> impl Iterator<Item = &str> {
    text.split(|c: char| !is_letter(c)).filter(|s| !s.is_empty())
}
