use serde::{Deserialize, Serialize};

use crate::session::ResponseMatrix;

use super::StatsError;

/// Pearson product-moment correlation, computed in two passes.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(StatsError::InsufficientData {
            needed: 2,
            got: x.len(),
        });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Symmetric grid of pairwise correlations; `None` marks an undefined cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub labels: Vec<String>,
    pub values: Vec<Vec<Option<f64>>>,
    /// Rows entering every cell after listwise deletion.
    pub rows_used: usize,
    /// Columns whose correlations are undefined.
    pub zero_variance: Vec<String>,
}

impl CorrelationMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.labels.iter().position(|l| l == a)?;
        let j = self.labels.iter().position(|l| l == b)?;
        self.values[i][j]
    }

    pub fn is_fully_defined(&self) -> bool {
        self.values.iter().flatten().all(Option::is_some)
    }

    pub fn to_dmatrix(&self) -> Option<nalgebra::DMatrix<f64>> {
        let k = self.labels.len();
        self.is_fully_defined()
            .then(|| nalgebra::DMatrix::from_fn(k, k, |i, j| self.values[i][j].unwrap_or(0.0)))
    }
}

/// Correlations between complete columns of equal length.
pub fn correlation_grid(labels: &[String], columns: &[Vec<f64>]) -> Result<CorrelationMatrix, StatsError> {
    if labels.len() != columns.len() {
        return Err(StatsError::LengthMismatch {
            left: labels.len(),
            right: columns.len(),
        });
    }
    let rows = columns.first().map_or(0, Vec::len);
    if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
        return Err(StatsError::LengthMismatch {
            left: rows,
            right: bad.len(),
        });
    }
    if rows < 2 {
        return Err(StatsError::InsufficientData { needed: 2, got: rows });
    }
    let k = columns.len();
    let mut values = vec![vec![None; k]; k];
    let mut zero_variance = Vec::new();
    for i in 0..k {
        values[i][i] = Some(1.0);
        for j in 0..i {
            let r = match pearson(&columns[i], &columns[j]) {
                Ok(r) => Some(r),
                Err(StatsError::ZeroVariance) => None,
                Err(e) => return Err(e),
            };
            values[i][j] = r;
            values[j][i] = r;
        }
        let first = columns[i][0];
        if columns[i].iter().all(|&v| v == first) {
            zero_variance.push(labels[i].clone());
        }
    }
    Ok(CorrelationMatrix {
        labels: labels.to_vec(),
        values,
        rows_used: rows,
        zero_variance,
    })
}

/// Rows of `matrix` with a value in every one of `columns`, as columns.
pub(crate) fn complete_columns(matrix: &ResponseMatrix, columns: &[usize]) -> Vec<Vec<f64>> {
    let rows: Vec<&Vec<Option<f64>>> = matrix
        .cells
        .iter()
        .filter(|row| columns.iter().all(|&c| row[c].is_some()))
        .collect();
    columns
        .iter()
        .map(|&c| rows.iter().map(|row| row[c].unwrap_or_default()).collect())
        .collect()
}

/// Pairwise correlations of the chosen columns over listwise-complete rows.
pub fn correlation_matrix(matrix: &ResponseMatrix, columns: &[usize]) -> Result<CorrelationMatrix, StatsError> {
    if let Some(&bad) = columns.iter().find(|&&c| c >= matrix.columns.len()) {
        return Err(StatsError::InvalidArgument(format!("no column {bad}")));
    }
    let labels: Vec<String> = columns.iter().map(|&c| matrix.columns[c].label.clone()).collect();
    correlation_grid(&labels, &complete_columns(matrix, columns))
}
