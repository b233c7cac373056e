use serde::{Deserialize, Serialize};

use crate::session::{ColumnKind, ResponseMatrix};

use super::correlation::{complete_columns, correlation_grid, CorrelationMatrix};
use super::descriptive::{descriptives, histogram, DescriptiveStats};
use super::factor::{fit_one_factor, mcdonald_omega, FactorModel};
use super::reliability::cronbach_alpha;
use super::StatsError;

pub const OMEGA_FORMULA: &str = "omega-total = (sum of loadings)^2 / ((sum of loadings)^2 + sum of uniquenesses), \
from a one-factor principal-axis fit of the item correlation matrix. The variant with the sum of squared loadings \
in the denominator equals K for standardized items and is not used.";

const MIN_ROWS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalysisGranularity {
    /// Item totals plus the test total `A`.
    #[default]
    ItemTotals,
    /// The field sub-scores of one item.
    Fields,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ReportConfig {
    #[serde(default)]
    pub granularity: AnalysisGranularity,
    /// Item whose fields are analysed; defaults to the item with the most
    /// field columns (at least two), the first one on ties.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub item: Option<String>,
    /// Histogram bins; Sturges' rule when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bin_count: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoteKind {
    OmegaFormula,
    Skew,
    MissingData,
    ZeroVariance,
    TooFewItems,
    DegenerateTotal,
    Heywood,
    NotConverged,
    NonInformative,
    OmegaUndefined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Note {
    pub kind: NoteKind,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnStats {
    pub label: String,
    pub n: usize,
    pub missing: usize,
    /// Absent when fewer than two values are available.
    pub stats: Option<DescriptiveStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramSeries {
    pub label: String,
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityReport {
    pub granularity: AnalysisGranularity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub item: Option<String>,
    /// Columns entering alpha and omega.
    pub items: Vec<String>,
    pub rows_total: usize,
    pub rows_used: usize,
    pub descriptives: Vec<ColumnStats>,
    pub histogram: Option<HistogramSeries>,
    pub correlations: CorrelationMatrix,
    pub alpha: Option<f64>,
    pub omega: Option<f64>,
    pub factor: Option<FactorModel>,
    pub notes: Vec<Note>,
}

impl ReliabilityReport {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("reports always serialize");
        out.push('\n');
        out
    }

    pub fn has_note(&self, kind: NoteKind) -> bool {
        self.notes.iter().any(|n| n.kind == kind)
    }
}

struct Selection {
    item: Option<String>,
    /// Column summarized by the histogram and listed first in descriptives.
    headline: Option<usize>,
    /// Columns entering alpha and omega.
    items: Vec<usize>,
    /// Columns of the correlation grid.
    grid: Vec<usize>,
}

fn select(matrix: &ResponseMatrix, config: &ReportConfig) -> Result<Selection, StatsError> {
    match config.granularity {
        AnalysisGranularity::ItemTotals => {
            let total = matrix.total_column();
            let items = matrix.item_columns();
            if items.is_empty() {
                return Err(StatsError::InvalidArgument("matrix has no item columns".into()));
            }
            Ok(Selection {
                item: None,
                headline: total,
                grid: total.into_iter().chain(items.iter().copied()).collect(),
                items,
            })
        }
        AnalysisGranularity::Fields => {
            let item = match &config.item {
                Some(item) => item.clone(),
                None => {
                    let mut best: Option<(usize, String)> = None;
                    for c in matrix.item_columns() {
                        let label = &matrix.columns[c].label;
                        let n = matrix.field_columns(Some(label)).len();
                        if n >= 2 && best.as_ref().is_none_or(|(m, _)| n > *m) {
                            best = Some((n, label.clone()));
                        }
                    }
                    best.map(|(_, label)| label)
                        .ok_or_else(|| StatsError::InvalidArgument("no item has two or more field columns".into()))?
                }
            };
            let fields = matrix.field_columns(Some(&item));
            if fields.is_empty() {
                return Err(StatsError::InvalidArgument(format!("item {item} has no field columns")));
            }
            Ok(Selection {
                headline: matrix
                    .column_index(&item)
                    .filter(|&c| matrix.columns[c].kind == ColumnKind::Item),
                item: Some(item),
                grid: fields.clone(),
                items: fields,
            })
        }
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.3}")
}

fn skew_note(label: &str, s: &DescriptiveStats) -> Option<Note> {
    let gap = s.mean - s.median;
    if s.sd == 0.0 || gap.abs() <= 0.1 * s.sd {
        return None;
    }
    let (relation, direction) = if gap < 0.0 {
        ("below", "negative (left)")
    } else {
        ("above", "positive (right)")
    };
    let coefficient = s
        .skewness
        .map(|g| format!("; adjusted Fisher-Pearson skewness {}", fmt(g)))
        .unwrap_or_default();
    Some(Note {
        kind: NoteKind::Skew,
        message: format!(
            "{label}: mean {} is {relation} median {} by more than 0.1 SD, so the mean-median comparison points to {direction} skew{coefficient}",
            fmt(s.mean),
            fmt(s.median)
        ),
    })
}

/// Descriptives, histogram, correlation grid, alpha, one-factor model and
/// omega for the columns selected by `config`.
pub fn reliability_report(matrix: &ResponseMatrix, config: &ReportConfig) -> Result<ReliabilityReport, StatsError> {
    let sel = select(matrix, config)?;
    let mut notes = vec![Note {
        kind: NoteKind::OmegaFormula,
        message: OMEGA_FORMULA.into(),
    }];

    let complete = complete_columns(matrix, &sel.grid);
    let rows_used = complete.first().map_or(0, Vec::len);
    if rows_used < MIN_ROWS {
        return Err(StatsError::InsufficientData {
            needed: MIN_ROWS,
            got: rows_used,
        });
    }
    if rows_used < matrix.n_rows() {
        notes.push(Note {
            kind: NoteKind::MissingData,
            message: format!(
                "{} of {} rows dropped by listwise deletion",
                matrix.n_rows() - rows_used,
                matrix.n_rows()
            ),
        });
    }

    let described: Vec<usize> = sel.headline.into_iter().chain(sel.grid.iter().copied()).fold(Vec::new(), |mut acc, c| {
        if !acc.contains(&c) {
            acc.push(c);
        }
        acc
    });
    let mut column_stats = Vec::new();
    for &c in &described {
        let column = matrix.column(c);
        let label = matrix.columns[c].label.clone();
        let n = column.iter().flatten().count();
        let stats = descriptives(&column).ok();
        if let Some(note) = stats.as_ref().and_then(|s| skew_note(&label, s)) {
            notes.push(note);
        }
        column_stats.push(ColumnStats {
            label,
            n,
            missing: column.len() - n,
            stats,
        });
    }

    let (hist_label, hist_values): (String, Vec<f64>) = match sel.headline {
        Some(c) => (matrix.columns[c].label.clone(), matrix.column(c).into_iter().flatten().collect()),
        None => {
            let sums = (0..rows_used).map(|r| complete.iter().map(|c| c[r]).sum()).collect();
            ("total".to_string(), sums)
        }
    };
    let histogram = histogram(&hist_values, config.bin_count).ok().map(|h| HistogramSeries {
        label: hist_label,
        edges: h.edges,
        counts: h.counts,
    });

    let labels: Vec<String> = sel.grid.iter().map(|&c| matrix.columns[c].label.clone()).collect();
    let correlations = correlation_grid(&labels, &complete)?;
    if !correlations.zero_variance.is_empty() {
        notes.push(Note {
            kind: NoteKind::ZeroVariance,
            message: format!(
                "correlations undefined for constant columns: {}",
                correlations.zero_variance.join(", ")
            ),
        });
    }

    let item_pos: Vec<usize> = sel
        .items
        .iter()
        .map(|c| sel.grid.iter().position(|g| g == c).expect("items are part of the grid"))
        .collect();
    let item_labels: Vec<String> = item_pos.iter().map(|&p| labels[p].clone()).collect();
    let rows: Vec<Vec<f64>> = (0..rows_used).map(|r| item_pos.iter().map(|&p| complete[p][r]).collect()).collect();
    let alpha = match cronbach_alpha(&rows) {
        Ok(a) => Some(a),
        Err(StatsError::TooFewItems { got, .. }) => {
            notes.push(Note {
                kind: NoteKind::TooFewItems,
                message: format!("alpha needs at least 2 items, got {got}"),
            });
            None
        }
        Err(StatsError::DegenerateTotal) => {
            notes.push(Note {
                kind: NoteKind::DegenerateTotal,
                message: "total score has zero variance; alpha undefined".into(),
            });
            None
        }
        Err(e) => return Err(e),
    };

    let k = item_pos.len();
    let item_grid = nalgebra::DMatrix::from_fn(k, k, |i, j| correlations.values[item_pos[i]][item_pos[j]]);
    let factor = if k < 3 {
        notes.push(Note {
            kind: NoteKind::TooFewItems,
            message: format!("omega needs at least 3 items, got {k}"),
        });
        None
    } else if item_grid.iter().any(Option::is_none) {
        notes.push(Note {
            kind: NoteKind::OmegaUndefined,
            message: "omega undefined: some item correlations are undefined".into(),
        });
        None
    } else {
        let model = fit_one_factor(&item_grid.map(|v| v.unwrap_or_default()))?;
        if model.heywood {
            notes.push(Note {
                kind: NoteKind::Heywood,
                message: "Heywood case: a communality exceeded 1 and was clamped".into(),
            });
        }
        if !model.converged {
            notes.push(Note {
                kind: NoteKind::NotConverged,
                message: format!("factor iteration did not converge in {} iterations", model.iterations),
            });
        }
        if !model.informative {
            notes.push(Note {
                kind: NoteKind::NonInformative,
                message: "no common factor: all loadings are near zero".into(),
            });
        }
        Some(model)
    };
    let omega = factor.as_ref().map(mcdonald_omega);

    Ok(ReliabilityReport {
        granularity: config.granularity,
        item: sel.item,
        items: item_labels,
        rows_total: matrix.n_rows(),
        rows_used,
        descriptives: column_stats,
        histogram,
        correlations,
        alpha,
        omega,
        factor,
        notes,
    })
}
