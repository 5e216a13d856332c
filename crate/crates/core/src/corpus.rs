//! Streaming readers and writers for plain-text and GLUE-style TSV corpora.
//!
//! Both formats are UTF-8 and line oriented. Input lines may end in `\n` or
//! `\r\n`; output always uses `\n`, including after the final line. TSV has no
//! quoting or escaping, so a cell can never contain a tab or a newline.

use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("invalid UTF-8 on line {line} at byte offset {offset}")]
    Utf8 { line: u64, offset: u64 },
    #[error("line {line} has {found} columns, expected {expected}")]
    Ragged {
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("column {0:?} not found in header")]
    UnknownColumn(String),
    #[error("column index {index} out of range for {width} columns")]
    ColumnOutOfRange { index: usize, width: usize },
    #[error("column {0:?} looks like an id or label column and cannot be perturbed")]
    ProtectedColumn(String),
    #[error("tsv input needs at least one column to perturb")]
    NoColumns,
    #[error("column names need a header row")]
    MissingHeader,
    #[error("record {index} has {found} fields but the mask has {mask}")]
    MaskMismatch {
        index: u64,
        found: usize,
        mask: usize,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusKind {
    /// One sentence per line, the whole line is a single field.
    Plain,
    Tsv,
}

/// A TSV column picked by position or by header name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum ColumnSelector {
    Index(usize),
    Name(String),
}

impl FromStr for ColumnSelector {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnSelector::Index(i),
            Err(_) => ColumnSelector::Name(s.to_owned()),
        })
    }
}

impl fmt::Display for ColumnSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnSelector::Index(i) => write!(f, "{i}"),
            ColumnSelector::Name(n) => f.write_str(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusFormat {
    pub kind: CorpusKind,
    pub has_header: bool,
    pub perturb_columns: Vec<ColumnSelector>,
}

impl CorpusFormat {
    pub fn plain() -> Self {
        CorpusFormat {
            kind: CorpusKind::Plain,
            has_header: false,
            perturb_columns: Vec::new(),
        }
    }

    pub fn tsv<I, S>(has_header: bool, columns: I) -> Result<Self, CorpusError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let perturb_columns: Vec<ColumnSelector> = columns
            .into_iter()
            .map(|c| c.as_ref().parse().expect("infallible"))
            .collect();
        let format = CorpusFormat {
            kind: CorpusKind::Tsv,
            has_header,
            perturb_columns,
        };
        format.validate()?;
        Ok(format)
    }

    /// Checks what can be checked without seeing the data.
    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.kind == CorpusKind::Tsv {
            if self.perturb_columns.is_empty() {
                return Err(CorpusError::NoColumns);
            }
            for col in &self.perturb_columns {
                if let ColumnSelector::Name(name) = col {
                    if !self.has_header {
                        return Err(CorpusError::MissingHeader);
                    }
                    if is_protected_column(name) {
                        return Err(CorpusError::ProtectedColumn(name.clone()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Builds the perturbation mask for rows of `width` columns.
    fn mask(&self, header: Option<&[String]>, width: usize) -> Result<Vec<bool>, CorpusError> {
        if self.kind == CorpusKind::Plain {
            return Ok(vec![true; width]);
        }
        let mut mask = vec![false; width];
        for col in &self.perturb_columns {
            let index = match col {
                ColumnSelector::Index(i) => *i,
                ColumnSelector::Name(name) => header
                    .ok_or(CorpusError::MissingHeader)?
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| CorpusError::UnknownColumn(name.clone()))?,
            };
            if index >= width {
                return Err(CorpusError::ColumnOutOfRange { index, width });
            }
            if let Some(name) = header.map(|h| &h[index]) {
                if is_protected_column(name) {
                    return Err(CorpusError::ProtectedColumn(name.clone()));
                }
            }
            mask[index] = true;
        }
        Ok(mask)
    }
}

/// Header names used for identifiers and gold labels across the GLUE tasks.
/// Such columns are never perturbed, even when selected by index.
pub fn is_protected_column(name: &str) -> bool {
    let lower = name.trim().to_ascii_lowercase();
    const EXACT: &[&str] = &[
        "id", "idx", "index", "label", "gold_label", "quality", "score", "qid", "qid1", "qid2",
        "is_duplicate", "pairid", "promptid", "genre",
    ];
    EXACT.contains(&lower.as_str())
        || lower.ends_with(" id")
        || lower.ends_with("_id")
        || lower.starts_with("label")
}

/// One corpus line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Record {
    pub index: u64,
    pub fields: Vec<String>,
    pub perturbable: Vec<bool>,
}

impl Record {
    pub fn new(index: u64, fields: Vec<String>, perturbable: Vec<bool>) -> Result<Self, CorpusError> {
        if fields.len() != perturbable.len() {
            return Err(CorpusError::MaskMismatch {
                index,
                found: fields.len(),
                mask: perturbable.len(),
            });
        }
        Ok(Record {
            index,
            fields,
            perturbable,
        })
    }

    /// A single-field plain-text record.
    pub fn plain(index: u64, text: impl Into<String>) -> Self {
        Record {
            index,
            fields: vec![text.into()],
            perturbable: vec![true],
        }
    }

    /// Perturbable cells with their field index.
    pub fn masked_fields(&self) -> impl Iterator<Item = (usize, &str)> {
        self.fields
            .iter()
            .zip(&self.perturbable)
            .enumerate()
            .filter(|(_, (_, &m))| m)
            .map(|(i, (f, _))| (i, f.as_str()))
    }
}

/// Iterator over the records of a corpus. Memory use is bounded by the
/// longest line.
pub struct CorpusReader<R> {
    source: R,
    format: CorpusFormat,
    header: Option<Vec<String>>,
    mask: Option<Vec<bool>>,
    width: Option<usize>,
    buf: Vec<u8>,
    line: u64,
    offset: u64,
    next_index: u64,
    failed: bool,
}

impl<R: BufRead> CorpusReader<R> {
    /// Opens a reader. The header row, if the format has one, is consumed
    /// here so that column names can be resolved before any record is read.
    pub fn new(source: R, format: CorpusFormat) -> Result<Self, CorpusError> {
        format.validate()?;
        let mut reader = CorpusReader {
            source,
            format,
            header: None,
            mask: None,
            width: None,
            buf: Vec::new(),
            line: 0,
            offset: 0,
            next_index: 0,
            failed: false,
        };
        if reader.format.has_header {
            if let Some(cells) = reader.next_line()? {
                reader.width = Some(cells.len());
                reader.header = Some(cells);
            }
        }
        Ok(reader)
    }

    pub fn header(&self) -> Option<&[String]> {
        self.header.as_deref()
    }

    pub fn format(&self) -> &CorpusFormat {
        &self.format
    }

    fn next_line(&mut self) -> Result<Option<Vec<String>>, CorpusError> {
        self.buf.clear();
        let start = self.offset;
        let read = self.source.read_until(b'\n', &mut self.buf)?;
        if read == 0 {
            return Ok(None);
        }
        self.offset += read as u64;
        self.line += 1;
        let mut bytes = self.buf.as_slice();
        if let Some(rest) = bytes.strip_suffix(b"\n") {
            bytes = rest.strip_suffix(b"\r").unwrap_or(rest);
        }
        let text = std::str::from_utf8(bytes).map_err(|e| CorpusError::Utf8 {
            line: self.line,
            offset: start + e.valid_up_to() as u64,
        })?;
        Ok(Some(match self.format.kind {
            CorpusKind::Plain => vec![text.to_owned()],
            CorpusKind::Tsv => text.split('\t').map(str::to_owned).collect(),
        }))
    }

    fn read_record(&mut self) -> Result<Option<Record>, CorpusError> {
        let Some(fields) = self.next_line()? else {
            return Ok(None);
        };
        let expected = *self.width.get_or_insert(fields.len());
        if fields.len() != expected {
            return Err(CorpusError::Ragged {
                line: self.line,
                expected,
                found: fields.len(),
            });
        }
        if self.mask.is_none() {
            self.mask = Some(self.format.mask(self.header.as_deref(), expected)?);
        }
        let record = Record {
            index: self.next_index,
            fields,
            perturbable: self.mask.clone().expect("set above"),
        };
        self.next_index += 1;
        Ok(Some(record))
    }
}

impl<R: BufRead> Iterator for CorpusReader<R> {
    type Item = Result<Record, CorpusError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        match self.read_record() {
            Ok(r) => r.map(Ok),
            Err(e) => {
                self.failed = true;
                Some(Err(e))
            }
        }
    }
}

/// Convenience wrapper: open a reader over `source`.
pub fn read_corpus<R: BufRead>(source: R, format: CorpusFormat) -> Result<CorpusReader<R>, CorpusError> {
    CorpusReader::new(source, format)
}

pub struct CorpusWriter<W> {
    sink: W,
}

impl<W: Write> CorpusWriter<W> {
    pub fn new(mut sink: W, header: Option<&[String]>) -> io::Result<Self> {
        if let Some(h) = header {
            write_cells(&mut sink, h)?;
        }
        Ok(CorpusWriter { sink })
    }

    pub fn write(&mut self, record: &Record) -> io::Result<()> {
        write_cells(&mut self.sink, &record.fields)
    }

    pub fn finish(mut self) -> io::Result<W> {
        self.sink.flush()?;
        Ok(self.sink)
    }
}

fn write_cells<W: Write>(sink: &mut W, cells: &[String]) -> io::Result<()> {
    for (i, cell) in cells.iter().enumerate() {
        if i > 0 {
            sink.write_all(b"\t")?;
        }
        sink.write_all(cell.as_bytes())?;
    }
    sink.write_all(b"\n")
}

/// Writes every record (and the header, if any) to `sink`.
pub fn write_corpus<W, I, E>(records: I, header: Option<&[String]>, sink: W) -> Result<W, E>
where
    W: Write,
    I: IntoIterator<Item = Result<Record, E>>,
    E: From<io::Error>,
{
    let mut writer = CorpusWriter::new(sink, header)?;
    for record in records {
        writer.write(&record?)?;
    }
    Ok(writer.finish()?)
}
