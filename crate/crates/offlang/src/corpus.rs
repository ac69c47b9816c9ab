//! Tweet dataset loading, validation and summary statistics.
//!
//! Datasets are UTF-8 tab-separated files, one tweet per row, with an
//! optional one-line header. Column positions are resolved by name against
//! the header; without a header the columns are taken positionally as
//! `id`, `text`[, `label`]. Fields are taken verbatim: there is no quoting
//! and no escape processing, so a literal `\n` two-character sequence
//! inside a field survives as-is.

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The two task labels: a tweet contains offensive language or it does not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    /// Offensive.
    Off,
    /// Not offensive.
    Not,
}

impl Label {
    /// Canonical file representation.
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Off => "OFF",
            Label::Not => "NOT",
        }
    }

    /// Signed target used by the hinge-loss trainers: OFF ↦ +1, NOT ↦ −1.
    pub fn signed(self) -> f64 {
        match self {
            Label::Off => 1.0,
            Label::Not => -1.0,
        }
    }
}

impl FromStr for Label {
    type Err = CorpusError;

    /// Parsing is case-sensitive: exactly `"OFF"` or `"NOT"`.
    fn from_str(s: &str) -> Result<Self, CorpusError> {
        match s {
            "OFF" => Ok(Label::Off),
            "NOT" => Ok(Label::Not),
            other => Err(CorpusError::BadLabel {
                line: 0,
                value: other.to_string(),
            }),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One row of a dataset: an opaque id, the raw tweet text, and the gold
/// label when the schema declares a label column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledExample {
    pub id: String,
    pub text: String,
    pub label: Option<Label>,
}

/// A named split (train/dev/test) of examples, in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub name: String,
    pub examples: Vec<LabeledExample>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, examples: Vec<LabeledExample>) -> Self {
        Dataset {
            name: name.into(),
            examples,
        }
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    /// Gold labels of all examples; errors on the first unlabeled one.
    pub fn labels(&self) -> Result<Vec<Label>, CorpusError> {
        self.examples
            .iter()
            .map(|ex| {
                ex.label.ok_or_else(|| CorpusError::UnlabeledExample {
                    id: ex.id.clone(),
                })
            })
            .collect()
    }
}

/// Per-class example counts for a fully labeled dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassCounts {
    pub off: usize,
    pub not_off: usize,
    pub total: usize,
}

/// Column mapping for TSV files. Names are resolved against the header
/// row; files without a header use the fixed positional order
/// `id`, `text`[, `label`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    pub id: String,
    pub text: String,
    /// `None` means the dataset carries no gold labels.
    pub label: Option<String>,
}

impl Default for Schema {
    /// The shared-task distribution convention.
    fn default() -> Self {
        Schema {
            id: "id".to_string(),
            text: "tweet".to_string(),
            label: Some("subtask_a".to_string()),
        }
    }
}

impl Schema {
    pub fn unlabeled(mut self) -> Self {
        self.label = None;
        self
    }
}

/// Errors raised while loading, writing or summarizing datasets.
#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: expected {expected} tab-separated columns, found {found}")]
    WrongColumnCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("column {name:?} not found in header")]
    MissingColumn { name: String },
    #[error("line {line}: unparseable label {value:?} (expected \"OFF\" or \"NOT\")")]
    BadLabel { line: usize, value: String },
    #[error("line {line}: duplicate id {id:?}")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: empty text field")]
    EmptyText { line: usize },
    #[error("example {id:?} has no label")]
    UnlabeledExample { id: String },
}

fn resolve(header: &[&str], name: &str) -> Result<usize, CorpusError> {
    header
        .iter()
        .position(|col| *col == name)
        .ok_or_else(|| CorpusError::MissingColumn {
            name: name.to_string(),
        })
}

/// Load a TSV dataset. The dataset name is the file stem.
///
/// Rows are kept in file order; every row must have the same number of
/// columns (the header's when present, otherwise the schema's). Ids must
/// be unique and text fields non-empty. Accepts LF and CRLF line endings.
pub fn load_tsv(
    path: impl AsRef<Path>,
    schema: &Schema,
    has_header: bool,
) -> Result<Dataset, CorpusError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let reader = BufReader::new(file);
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());

    let mut lines = reader.lines().enumerate();
    let (id_idx, text_idx, label_idx, expected);
    if has_header {
        let header_line = match lines.next() {
            Some((_, line)) => line.map_err(|source| CorpusError::Io {
                path: path.display().to_string(),
                source,
            })?,
            None => {
                return Ok(Dataset::new(name, Vec::new()));
            }
        };
        let header: Vec<&str> = trim_newline(&header_line).split('\t').collect();
        expected = header.len();
        id_idx = resolve(&header, &schema.id)?;
        text_idx = resolve(&header, &schema.text)?;
        label_idx = match &schema.label {
            Some(col) => Some(resolve(&header, col)?),
            None => None,
        };
    } else {
        id_idx = 0;
        text_idx = 1;
        label_idx = schema.label.as_ref().map(|_| 2);
        expected = if label_idx.is_some() { 3 } else { 2 };
    }

    let mut examples = Vec::new();
    let mut seen = HashSet::new();
    for (line_no, line) in lines {
        let line = line.map_err(|source| CorpusError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let line_no = line_no + 1; // 1-based for error reporting
        let row = trim_newline(&line);
        if row.is_empty() {
            continue; // trailing blank line
        }
        let fields: Vec<&str> = row.split('\t').collect();
        if fields.len() != expected {
            return Err(CorpusError::WrongColumnCount {
                line: line_no,
                expected,
                found: fields.len(),
            });
        }
        let id = fields[id_idx].to_string();
        if !seen.insert(id.clone()) {
            return Err(CorpusError::DuplicateId { line: line_no, id });
        }
        let text = fields[text_idx].to_string();
        if text.is_empty() {
            return Err(CorpusError::EmptyText { line: line_no });
        }
        let label = match label_idx {
            Some(idx) => Some(fields[idx].parse::<Label>().map_err(|_| {
                CorpusError::BadLabel {
                    line: line_no,
                    value: fields[idx].to_string(),
                }
            })?),
            None => None,
        };
        examples.push(LabeledExample { id, text, label });
    }
    Ok(Dataset::new(name, examples))
}

fn trim_newline(line: &str) -> &str {
    line.strip_suffix('\r').unwrap_or(line)
}

/// Write a dataset as TSV with columns in the order `id`, `text`[, `label`].
///
/// With `has_header` the schema's column names become the header row, so a
/// reload with the same schema round-trips to an equal dataset.
pub fn write_tsv(
    dataset: &Dataset,
    path: impl AsRef<Path>,
    schema: &Schema,
    has_header: bool,
) -> Result<(), CorpusError> {
    let path = path.as_ref();
    let wrap = |source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut out = std::io::BufWriter::new(File::create(path).map_err(wrap)?);
    let emit = |out: &mut dyn Write, id: &str, text: &str, label: Option<&str>| {
        match label {
            Some(label) => writeln!(out, "{id}\t{text}\t{label}"),
            None => writeln!(out, "{id}\t{text}"),
        }
    };
    if has_header {
        emit(&mut out, &schema.id, &schema.text, schema.label.as_deref()).map_err(wrap)?;
    }
    for ex in &dataset.examples {
        let label = match &schema.label {
            Some(_) => Some(
                ex.label
                    .ok_or_else(|| CorpusError::UnlabeledExample { id: ex.id.clone() })?
                    .as_str(),
            ),
            None => None,
        };
        emit(&mut out, &ex.id, &ex.text, label).map_err(wrap)?;
    }
    out.flush().map_err(wrap)
}

/// Count examples per class. Every example must be labeled.
pub fn dataset_stats(dataset: &Dataset) -> Result<ClassCounts, CorpusError> {
    let mut off = 0;
    let mut not_off = 0;
    for ex in &dataset.examples {
        match ex.label {
            Some(Label::Off) => off += 1,
            Some(Label::Not) => not_off += 1,
            None => {
                return Err(CorpusError::UnlabeledExample { id: ex.id.clone() });
            }
        }
    }
    Ok(ClassCounts {
        off,
        not_off,
        total: off + not_off,
    })
}
