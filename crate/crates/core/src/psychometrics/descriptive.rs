use serde::{Deserialize, Serialize};

use super::StatsError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveStats {
    pub n: usize,
    pub missing: usize,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (denominator `n - 1`).
    pub sd: f64,
    pub variance: f64,
    pub min: f64,
    pub max: f64,
    /// Adjusted Fisher-Pearson coefficient; needs `n >= 3` and positive variance.
    pub skewness: Option<f64>,
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample variance with denominator `n - 1`.
pub fn sample_variance(values: &[f64]) -> Result<f64, StatsError> {
    if values.len() < 2 {
        return Err(StatsError::InsufficientData {
            needed: 2,
            got: values.len(),
        });
    }
    let m = mean(values);
    Ok(values.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64)
}

fn check_finite(values: &[f64]) -> Result<(), StatsError> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(StatsError::NonFinite)
    }
}

pub fn descriptives(column: &[Option<f64>]) -> Result<DescriptiveStats, StatsError> {
    let mut values: Vec<f64> = column.iter().flatten().copied().collect();
    check_finite(&values)?;
    let variance = sample_variance(&values)?;
    values.sort_by(f64::total_cmp);
    let n = values.len();
    let median = if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    };
    let m = mean(&values);
    let skewness = (n >= 3 && variance > 0.0).then(|| {
        let nf = n as f64;
        let m2 = values.iter().map(|x| (x - m).powi(2)).sum::<f64>() / nf;
        let m3 = values.iter().map(|x| (x - m).powi(3)).sum::<f64>() / nf;
        (nf * (nf - 1.0)).sqrt() / (nf - 2.0) * m3 / m2.powf(1.5)
    });
    Ok(DescriptiveStats {
        n,
        missing: column.len() - n,
        mean: m,
        median,
        sd: variance.sqrt(),
        variance,
        min: values[0],
        max: values[n - 1],
        skewness,
    })
}

/// Uniform bins over `[min, max]`; each bin is right-open except the last.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Index of the bin holding `x`, if `x` lies within the edges.
    pub fn bin_of(&self, x: f64) -> Option<usize> {
        let k = self.counts.len();
        let (lo, hi) = (self.edges[0], self.edges[k]);
        if !(lo..=hi).contains(&x) {
            return None;
        }
        if k == 1 || hi == lo {
            return Some(0);
        }
        let mut i = (((x - lo) / (hi - lo)) * k as f64).floor() as usize;
        i = i.min(k - 1);
        while i > 0 && x < self.edges[i] {
            i -= 1;
        }
        while i < k - 1 && x >= self.edges[i + 1] {
            i += 1;
        }
        Some(i)
    }
}

/// Sturges' rule: `ceil(log2 n) + 1`.
pub fn sturges_bins(n: usize) -> usize {
    if n <= 1 {
        return 1;
    }
    (n as f64).log2().ceil() as usize + 1
}

pub fn histogram(values: &[f64], bin_count: Option<usize>) -> Result<Histogram, StatsError> {
    if values.is_empty() {
        return Err(StatsError::InsufficientData { needed: 1, got: 0 });
    }
    check_finite(values)?;
    let k = bin_count.unwrap_or_else(|| sturges_bins(values.len()));
    if k == 0 {
        return Err(StatsError::InvalidArgument("bin count must be positive".into()));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        return Ok(Histogram {
            edges: vec![lo, hi],
            counts: vec![values.len()],
        });
    }
    let width = (hi - lo) / k as f64;
    let mut edges: Vec<f64> = (0..k).map(|i| lo + width * i as f64).collect();
    edges.push(hi);
    let mut h = Histogram {
        edges,
        counts: vec![0; k],
    };
    for &x in values {
        let i = h.bin_of(x).expect("value lies within its own range");
        h.counts[i] += 1;
    }
    Ok(h)
}
