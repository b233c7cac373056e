use nalgebra::DMatrix;

use super::descriptive::sample_variance;
use super::StatsError;

/// Cronbach's alpha from complete rows (one per student, one value per item).
pub fn cronbach_alpha(rows: &[Vec<f64>]) -> Result<f64, StatsError> {
    let k = rows.first().map_or(0, Vec::len);
    if k < 2 {
        return Err(StatsError::TooFewItems { needed: 2, got: k });
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != k) {
        return Err(StatsError::LengthMismatch {
            left: k,
            right: bad.len(),
        });
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let item_var: f64 = (0..k)
        .map(|i| sample_variance(&rows.iter().map(|r| r[i]).collect::<Vec<_>>()))
        .sum::<Result<f64, _>>()?;
    let totals: Vec<f64> = rows.iter().map(|r| r.iter().sum()).collect();
    let total_var = sample_variance(&totals)?;
    if total_var <= 0.0 {
        return Err(StatsError::DegenerateTotal);
    }
    let kf = k as f64;
    Ok(kf / (kf - 1.0) * (1.0 - item_var / total_var))
}

/// Alpha from an item covariance matrix: `K/(K-1) * (1 - tr(S) / sum(S))`.
pub fn alpha_from_covariance(cov: &DMatrix<f64>) -> Result<f64, StatsError> {
    if !cov.is_square() {
        return Err(StatsError::NotSymmetric);
    }
    let k = cov.nrows();
    if k < 2 {
        return Err(StatsError::TooFewItems { needed: 2, got: k });
    }
    let total = cov.sum();
    if total <= 0.0 {
        return Err(StatsError::DegenerateTotal);
    }
    let kf = k as f64;
    Ok(kf / (kf - 1.0) * (1.0 - cov.trace() / total))
}

/// Sample covariance (denominator `n - 1`) of complete columns.
pub fn covariance_matrix(columns: &[Vec<f64>]) -> Result<DMatrix<f64>, StatsError> {
    let n = columns.first().map_or(0, Vec::len);
    if n < 2 {
        return Err(StatsError::InsufficientData { needed: 2, got: n });
    }
    let means: Vec<f64> = columns.iter().map(|c| c.iter().sum::<f64>() / n as f64).collect();
    let k = columns.len();
    Ok(DMatrix::from_fn(k, k, |i, j| {
        columns[i]
            .iter()
            .zip(&columns[j])
            .map(|(a, b)| (a - means[i]) * (b - means[j]))
            .sum::<f64>()
            / (n - 1) as f64
    }))
}
