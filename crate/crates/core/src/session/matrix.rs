//! Student-by-score-column matrices and their CSV form.
//!
//! CSV layout: a mandatory header `student_id,<label>,...`, one row per
//! student, empty cells for missing scores. Column kinds follow from the
//! labels: `A` is the total, `item.field` is a field sub-score, anything
//! else is an item total.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::mathcore::rational::to_f64;

use super::attempt::{Attempt, AttemptState};
use super::quiz::{ItemSource, Quiz};
use super::SessionError;
use crate::assessment::{COEFFICIENT_LABELS, ROOT_LABELS};

pub const TOTAL_LABEL: &str = "A";
const STUDENT_HEADER: &str = "student_id";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColumnKind {
    Total,
    Item,
    Field { item: String, field: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub label: String,
    #[serde(flatten)]
    pub kind: ColumnKind,
}

impl Column {
    pub fn total() -> Self {
        Self {
            label: TOTAL_LABEL.into(),
            kind: ColumnKind::Total,
        }
    }

    pub fn item(label: &str) -> Self {
        Self {
            label: label.into(),
            kind: ColumnKind::Item,
        }
    }

    pub fn field(item: &str, field: &str) -> Self {
        Self {
            label: format!("{item}.{field}"),
            kind: ColumnKind::Field {
                item: item.into(),
                field: field.into(),
            },
        }
    }

    /// Classifies a bare label by the naming convention.
    pub fn from_label(label: &str) -> Self {
        if label == TOTAL_LABEL {
            Self::total()
        } else if let Some((item, field)) = label.split_once('.') {
            Self::field(item, field)
        } else {
            Self::item(label)
        }
    }

    /// The label without its item prefix.
    pub fn short_label(&self) -> &str {
        match &self.kind {
            ColumnKind::Field { field, .. } => field,
            _ => &self.label,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Granularity {
    #[default]
    ItemTotals,
    WithFieldSubscores,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseMatrix {
    pub students: Vec<String>,
    pub columns: Vec<Column>,
    /// `cells[row][col]`; `None` is missing.
    pub cells: Vec<Vec<Option<f64>>>,
}

impl ResponseMatrix {
    pub fn new(students: Vec<String>, columns: Vec<Column>, cells: Vec<Vec<Option<f64>>>) -> Result<Self, SessionError> {
        let bad = |m: String| Err(SessionError::Matrix(m));
        if cells.len() != students.len() {
            return bad(format!("{} rows for {} students", cells.len(), students.len()));
        }
        if let Some(row) = cells.iter().position(|r| r.len() != columns.len()) {
            return bad(format!("row {row} has {} cells, expected {}", cells[row].len(), columns.len()));
        }
        let mut labels = BTreeSet::new();
        for c in &columns {
            if c.label == STUDENT_HEADER || !labels.insert(c.label.as_str()) {
                return bad(format!("duplicate or reserved column label {}", c.label));
            }
        }
        if cells.iter().flatten().flatten().any(|v| !v.is_finite()) {
            return bad("non-finite cell".into());
        }
        Ok(Self {
            students,
            columns,
            cells,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.students.len()
    }

    pub fn column_index(&self, label: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.label == label)
    }

    pub fn column(&self, index: usize) -> Vec<Option<f64>> {
        self.cells.iter().map(|r| r[index]).collect()
    }

    pub fn total_column(&self) -> Option<usize> {
        self.columns.iter().position(|c| c.kind == ColumnKind::Total)
    }

    pub fn item_columns(&self) -> Vec<usize> {
        (0..self.columns.len())
            .filter(|&i| self.columns[i].kind == ColumnKind::Item)
            .collect()
    }

    /// Field columns, optionally only those of one item.
    pub fn field_columns(&self, item: Option<&str>) -> Vec<usize> {
        (0..self.columns.len())
            .filter(|&i| match &self.columns[i].kind {
                ColumnKind::Field { item: owner, .. } => item.is_none_or(|want| want == owner),
                _ => false,
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        let header = std::iter::once(STUDENT_HEADER).chain(self.columns.iter().map(|c| c.label.as_str()));
        w.write_record(header).expect("in-memory write");
        for (student, row) in self.students.iter().zip(&self.cells) {
            let cells = row.iter().map(|v| v.map(|x| x.to_string()).unwrap_or_default());
            w.write_record(std::iter::once(student.clone()).chain(cells)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }

    pub fn from_csv(text: &str) -> Result<Self, SessionError> {
        let bad = |m: String| SessionError::Matrix(m);
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let header = r.headers().map_err(|e| bad(e.to_string()))?.clone();
        if header.get(0) != Some(STUDENT_HEADER) {
            return Err(bad(format!("first column must be {STUDENT_HEADER}")));
        }
        let columns: Vec<Column> = header.iter().skip(1).map(Column::from_label).collect();
        let mut students = Vec::new();
        let mut cells = Vec::new();
        for (n, record) in r.records().enumerate() {
            let record = record.map_err(|e| bad(e.to_string()))?;
            students.push(record.get(0).unwrap_or_default().to_string());
            let row = record
                .iter()
                .skip(1)
                .map(|cell| {
                    let cell = cell.trim();
                    if cell.is_empty() {
                        Ok(None)
                    } else {
                        cell.parse::<f64>()
                            .map(Some)
                            .map_err(|_| bad(format!("row {}: {cell:?} is not a number", n + 1)))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            cells.push(row);
        }
        Self::new(students, columns, cells)
    }
}

/// Field labels an entry always reports, independent of the attempt.
fn entry_fields(quiz: &Quiz, entry: usize) -> Vec<String> {
    match &quiz.entries[entry].source {
        ItemSource::Item(item) => item.part_labels(),
        ItemSource::Generate(_) => COEFFICIENT_LABELS
            .iter()
            .chain(ROOT_LABELS.iter())
            .map(|s| s.to_string())
            .collect(),
        ItemSource::ItemRef(_) => Vec::new(),
    }
}

pub fn matrix_columns(quiz: &Quiz, granularity: Granularity) -> Vec<Column> {
    let mut columns = vec![Column::total()];
    for (k, entry) in quiz.entries.iter().enumerate() {
        columns.push(Column::item(&entry.label));
        if granularity == Granularity::WithFieldSubscores {
            columns.extend(entry_fields(quiz, k).iter().map(|f| Column::field(&entry.label, f)));
        }
    }
    columns
}

/// One row per student from their latest finished attempt, rows sorted by
/// student id. Students without a finished attempt are left out.
///
/// A finalized attempt is preferred over an expired one. Item columns hold
/// earned points, field columns 0/1 sub-scores, and unanswered items are
/// missing.
pub fn export_matrix(quiz: &Quiz, attempts: &[Attempt], granularity: Granularity) -> Result<ResponseMatrix, SessionError> {
    let mut latest: BTreeMap<&str, &Attempt> = BTreeMap::new();
    for a in attempts.iter().filter(|a| a.quiz_id == quiz.id) {
        let rank = |x: &Attempt| (x.state == AttemptState::Finalized, x.started_at, x.id.clone());
        if a.state == AttemptState::InProgress {
            continue;
        }
        match latest.get(a.student_id.as_str()) {
            Some(prev) if rank(prev) >= rank(a) => {}
            _ => {
                latest.insert(&a.student_id, a);
            }
        }
    }

    let columns = matrix_columns(quiz, granularity);
    let mut students = Vec::new();
    let mut cells = Vec::new();
    for (student, attempt) in latest {
        let summary = attempt.summary();
        let mut row = Vec::with_capacity(columns.len());
        row.push(Some(to_f64(&summary.total)));
        for (k, _) in quiz.entries.iter().enumerate() {
            let served = attempt
                .items
                .iter()
                .find(|i| i.entry == k)
                .ok_or_else(|| SessionError::Matrix(format!("attempt {} lacks entry {k}", attempt.id)))?;
            let response = attempt.responses.get(served.item.id());
            row.push(response.map(|r| to_f64(&(&r.result.score * &served.points))));
            if granularity == Granularity::WithFieldSubscores {
                for field in entry_fields(quiz, k) {
                    row.push(response.and_then(|r| r.result.field_score(&field)).map(f64::from));
                }
            }
        }
        students.push(student.to_string());
        cells.push(row);
    }
    ResponseMatrix::new(students, columns, cells)
}
