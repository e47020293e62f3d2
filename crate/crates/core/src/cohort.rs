//! Cohorts of (score, label) pairs and their CSV / JSON-lines ingest.

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde_json::Value;

use crate::error::{AuditError, Result};
use crate::numfmt::format_g17;
use crate::scalar::{sort_scalars, Scalar};

/// Ground-truth class of one sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    pub fn as_u8(self) -> u8 {
        match self {
            Label::Negative => 0,
            Label::Positive => 1,
        }
    }

    pub fn from_u8(value: u8) -> Option<Self> {
        match value {
            0 => Some(Label::Negative),
            1 => Some(Label::Positive),
            _ => None,
        }
    }

    pub fn is_positive(self) -> bool {
        self == Label::Positive
    }
}

/// Model outputs paired with binary ground truth for one dataset split.
#[derive(Debug, Clone, PartialEq)]
pub struct Cohort<F> {
    name: String,
    scores: Vec<F>,
    labels: Vec<Label>,
}

impl<F: Scalar> Cohort<F> {
    pub fn new(name: impl Into<String>, scores: Vec<F>, labels: Vec<Label>) -> Result<Self> {
        let name = name.into();
        if scores.len() != labels.len() {
            return Err(AuditError::InvalidCohort(format!(
                "{} scores but {} labels",
                scores.len(),
                labels.len()
            )));
        }
        if scores.is_empty() {
            return Err(AuditError::EmptyInput);
        }
        if let Some(row) = scores.iter().position(|s| !s.is_finite_value()) {
            return Err(AuditError::BadScore {
                row: row + 1,
                token: format!("{:?}", scores[row]),
            });
        }
        Ok(Cohort {
            name,
            scores,
            labels,
        })
    }

    /// Build from parallel slices with labels given as 0/1 integers.
    pub fn from_binary(name: impl Into<String>, scores: Vec<F>, labels: &[u8]) -> Result<Self> {
        let labels = labels
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                Label::from_u8(l).ok_or_else(|| AuditError::BadLabel {
                    row: i + 1,
                    token: l.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(name, scores, labels)
    }

    /// Build from separate negative-class and positive-class samples,
    /// negatives first.
    pub fn from_classes(name: impl Into<String>, negatives: &[F], positives: &[F]) -> Result<Self> {
        let scores = negatives.iter().chain(positives).cloned().collect();
        let labels = std::iter::repeat_n(Label::Negative, negatives.len())
            .chain(std::iter::repeat_n(Label::Positive, positives.len()))
            .collect();
        Self::new(name, scores, labels)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn scores(&self) -> &[F] {
        &self.scores
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&F, Label)> + '_ {
        self.scores.iter().zip(self.labels.iter().copied())
    }

    pub fn count(&self, label: Label) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// Scores of one class, in cohort order.
    pub fn class_scores(&self, label: Label) -> Vec<F> {
        self.iter()
            .filter(|(_, l)| *l == label)
            .map(|(s, _)| s.clone())
            .collect()
    }

    /// Same labels and name, every score replaced by `f(score, label)`.
    pub fn map_scores(&self, mut f: impl FnMut(&F, Label) -> F) -> Self {
        Cohort {
            name: self.name.clone(),
            scores: self.iter().map(|(s, l)| f(s, l)).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Check that both classes are present, which the ROC needs.
pub fn validate_for_roc<F: Scalar>(cohort: &Cohort<F>) -> Result<&Cohort<F>> {
    let first = cohort.labels[0];
    if cohort.labels.iter().all(|&l| l == first) {
        return Err(AuditError::SingleClass {
            cohort: cohort.name.clone(),
            label: first.as_u8(),
        });
    }
    Ok(cohort)
}

/// Class-conditional scores, each sorted ascending.
#[derive(Debug, Clone)]
pub(crate) struct SortedClasses<F> {
    pub negatives: Vec<F>,
    pub positives: Vec<F>,
}

impl<F: Scalar> SortedClasses<F> {
    pub fn of(cohort: &Cohort<F>) -> Result<Self> {
        validate_for_roc(cohort)?;
        let mut negatives = cohort.class_scores(Label::Negative);
        let mut positives = cohort.class_scores(Label::Positive);
        sort_scalars(&mut negatives);
        sort_scalars(&mut positives);
        Ok(SortedClasses {
            negatives,
            positives,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputFormat {
    #[default]
    Csv,
    JsonLines,
}

impl InputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            InputFormat::Csv => "csv",
            InputFormat::JsonLines => "jsonl",
        }
    }

    /// Guess from a file extension; `.jsonl`/`.ndjson` are JSON lines,
    /// everything else CSV.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("ndjson") => InputFormat::JsonLines,
            _ => InputFormat::Csv,
        }
    }
}

impl fmt::Display for InputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InputFormat {
    type Err = AuditError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(InputFormat::Csv),
            "jsonl" => Ok(InputFormat::JsonLines),
            other => Err(AuditError::InvalidSchema(format!(
                "unknown format '{other}', expected csv or jsonl"
            ))),
        }
    }
}

/// Where scores and labels live in an input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestSchema {
    score_column: String,
    label_column: String,
    format: InputFormat,
}

impl Default for IngestSchema {
    fn default() -> Self {
        IngestSchema {
            score_column: "score".to_string(),
            label_column: "label".to_string(),
            format: InputFormat::Csv,
        }
    }
}

impl IngestSchema {
    pub fn new(
        score_column: impl Into<String>,
        label_column: impl Into<String>,
        format: InputFormat,
    ) -> Result<Self> {
        let score_column = score_column.into();
        let label_column = label_column.into();
        if score_column.is_empty() || label_column.is_empty() {
            return Err(AuditError::InvalidSchema("column names must be nonempty".into()));
        }
        if score_column == label_column {
            return Err(AuditError::InvalidSchema(format!(
                "score and label column are both '{score_column}'"
            )));
        }
        Ok(IngestSchema {
            score_column,
            label_column,
            format,
        })
    }

    pub fn jsonl() -> Self {
        IngestSchema {
            format: InputFormat::JsonLines,
            ..Self::default()
        }
    }

    pub fn score_column(&self) -> &str {
        &self.score_column
    }

    pub fn label_column(&self) -> &str {
        &self.label_column
    }

    pub fn format(&self) -> InputFormat {
        self.format
    }
}

/// Read a cohort from `source`. Row numbers in errors count data rows from 1.
pub fn parse_cohort<F: Scalar, R: Read>(
    mut source: R,
    schema: &IngestSchema,
    name: &str,
) -> Result<Cohort<F>> {
    let mut bytes = Vec::new();
    source
        .read_to_end(&mut bytes)
        .map_err(|e| AuditError::io(name, e))?;
    let text = std::str::from_utf8(&bytes).map_err(|_| AuditError::InvalidEncoding)?;
    let (scores, labels) = match schema.format {
        InputFormat::Csv => parse_csv(text, schema)?,
        InputFormat::JsonLines => parse_jsonl(text, schema)?,
    };
    if scores.is_empty() {
        return Err(AuditError::EmptyInput);
    }
    Cohort::new(name, scores, labels)
}

fn parse_label_token(token: &str, row: usize) -> Result<Label> {
    match token {
        "0" => Ok(Label::Negative),
        "1" => Ok(Label::Positive),
        _ => Err(AuditError::BadLabel {
            row,
            token: token.to_string(),
        }),
    }
}

fn parse_score_token<F: Scalar>(token: &str, row: usize) -> Result<F> {
    F::parse_decimal(token).ok_or_else(|| AuditError::BadScore {
        row,
        token: token.to_string(),
    })
}

fn parse_csv<F: Scalar>(text: &str, schema: &IngestSchema) -> Result<(Vec<F>, Vec<Label>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| AuditError::MalformedRow {
            row: 0,
            reason: e.to_string(),
        })?
        .clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| AuditError::MissingColumn {
                column: name.to_string(),
            })
    };
    let label_idx = column(&schema.label_column)?;
    let score_idx = column(&schema.score_column)?;

    let mut scores = Vec::new();
    let mut labels = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| AuditError::MalformedRow {
            row,
            reason: e.to_string(),
        })?;
        let field = |idx: usize| {
            record.get(idx).ok_or_else(|| AuditError::MalformedRow {
                row,
                reason: format!("expected at least {} fields, found {}", idx + 1, record.len()),
            })
        };
        labels.push(parse_label_token(field(label_idx)?, row)?);
        scores.push(parse_score_token(field(score_idx)?, row)?);
    }
    Ok((scores, labels))
}

fn parse_jsonl<F: Scalar>(text: &str, schema: &IngestSchema) -> Result<(Vec<F>, Vec<Label>)> {
    let mut scores = Vec::new();
    let mut labels = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let row = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let object: serde_json::Map<String, Value> =
            serde_json::from_str(line).map_err(|e| AuditError::MalformedRow {
                row,
                reason: e.to_string(),
            })?;
        let get = |key: &str| {
            object.get(key).ok_or_else(|| AuditError::MissingColumn {
                column: key.to_string(),
            })
        };
        let label = get(&schema.label_column)?;
        let label = match label {
            Value::Number(n) if n.is_u64() => match n.as_u64() {
                Some(0) => Label::Negative,
                Some(1) => Label::Positive,
                _ => return Err(bad_json_label(row, label)),
            },
            other => return Err(bad_json_label(row, other)),
        };
        let score = match get(&schema.score_column)? {
            Value::Number(n) => parse_score_token(&n.to_string(), row)?,
            other => {
                return Err(AuditError::BadScore {
                    row,
                    token: other.to_string(),
                })
            }
        };
        labels.push(label);
        scores.push(score);
    }
    Ok((scores, labels))
}

fn bad_json_label(row: usize, value: &Value) -> AuditError {
    AuditError::BadLabel {
        row,
        token: value.to_string(),
    }
}

/// Serialise a cohort in `schema`'s format, scores at 17 significant digits.
///
/// CSV output has the header `label,score` (using the schema's column
/// names); JSON lines put the label key first.
pub fn write_cohort<F: Scalar>(cohort: &Cohort<F>, schema: &IngestSchema) -> String {
    let mut out = String::new();
    match schema.format {
        InputFormat::Csv => {
            out.push_str(&format!("{},{}\n", schema.label_column, schema.score_column));
            for (score, label) in cohort.iter() {
                out.push_str(&format!(
                    "{},{}\n",
                    label.as_u8(),
                    format_g17(score.to_f64_lossy())
                ));
            }
        }
        InputFormat::JsonLines => {
            for (score, label) in cohort.iter() {
                out.push_str(&format!(
                    "{{{}:{},{}:{}}}\n",
                    Value::String(schema.label_column.clone()),
                    label.as_u8(),
                    Value::String(schema.score_column.clone()),
                    format_g17(score.to_f64_lossy())
                ));
            }
        }
    }
    out
}
