use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::StatsError;

/// Stop once no communality moves by more than this in one step.
pub const TOLERANCE: f64 = 1e-11;
pub const MAX_ITERATIONS: usize = 500;
const HISTORY: usize = 5;
/// Below this largest communality the solution carries no common factor.
const INFORMATIVE_COMMUNALITY: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorModel {
    pub loadings: Vec<f64>,
    pub uniquenesses: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// Some communality exceeded 1 and was clamped.
    pub heywood: bool,
    /// False when every loading is essentially zero.
    pub informative: bool,
}

impl FactorModel {
    pub fn from_loadings(loadings: &[f64]) -> Self {
        Self {
            loadings: loadings.to_vec(),
            uniquenesses: loadings.iter().map(|l| 1.0 - l * l).collect(),
            converged: true,
            iterations: 0,
            heywood: false,
            informative: true,
        }
    }
}

/// McDonald's omega-total: `(Σλ)² / ((Σλ)² + Σψ)`.
pub fn mcdonald_omega(model: &FactorModel) -> f64 {
    let s: f64 = model.loadings.iter().sum();
    let common = s * s;
    let denom = common + model.uniquenesses.iter().sum::<f64>();
    if denom == 0.0 {
        0.0
    } else {
        common / denom
    }
}

fn standardize(m: &DMatrix<f64>) -> Result<DMatrix<f64>, StatsError> {
    if !m.is_square() {
        return Err(StatsError::NotSymmetric);
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let k = m.nrows();
    let scale = m.amax().max(1.0);
    for i in 0..k {
        for j in 0..i {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-9 * scale {
                return Err(StatsError::NotSymmetric);
            }
        }
    }
    let d: Vec<f64> = (0..k).map(|i| m[(i, i)]).collect();
    if d.iter().any(|&v| v <= 0.0) {
        return Err(StatsError::ZeroVariance);
    }
    Ok(DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            1.0
        } else {
            (m[(i, j)] + m[(j, i)]) / 2.0 / (d[i] * d[j]).sqrt()
        }
    }))
}

/// One principal-axis step: loadings of the reduced matrix with `h` on the
/// diagonal, and the communalities they imply (clamped to 1).
fn step(r: &DMatrix<f64>, h: &DVector<f64>) -> (DVector<f64>, DVector<f64>, bool) {
    let mut reduced = r.clone();
    reduced.set_diagonal(h);
    let eig = SymmetricEigen::new(reduced);
    let top = eig.eigenvalues.imax();
    let mut lambda = eig.eigenvectors.column(top) * eig.eigenvalues[top].max(0.0).sqrt();
    if lambda.sum() < 0.0 {
        lambda = -lambda;
    }
    let mut heywood = false;
    let g = lambda.map(|l| {
        let c = l * l;
        if c > 1.0 {
            heywood = true;
        }
        c.min(1.0)
    });
    (g, lambda, heywood)
}

/// Single-factor principal-axis factoring of a correlation or covariance
/// matrix, which is standardized first.
///
/// Communalities start at each item's largest absolute off-diagonal
/// correlation. The fixed-point iteration is accelerated with Anderson
/// mixing over the last few steps; a mixed step leaving `[0, 1]` falls
/// back to the plain step and clears the history.
pub fn fit_one_factor(matrix: &DMatrix<f64>) -> Result<FactorModel, StatsError> {
    let r = standardize(matrix)?;
    let k = r.nrows();
    if k < 3 {
        return Err(StatsError::TooFewItems { needed: 3, got: k });
    }
    let mut h = DVector::from_fn(k, |i, _| {
        (0..k).filter(|&j| j != i).map(|j| r[(i, j)].abs()).fold(0.0, f64::max)
    });
    let mut xs: Vec<DVector<f64>> = Vec::new();
    let mut gs: Vec<DVector<f64>> = Vec::new();
    let mut result = None;
    for iteration in 1..=MAX_ITERATIONS {
        let (g, lambda, heywood) = step(&r, &h);
        let f = &g - &h;
        if f.amax() < TOLERANCE {
            result = Some((lambda, heywood, iteration, true));
            break;
        }
        xs.push(h.clone());
        gs.push(g.clone());
        if xs.len() > HISTORY + 1 {
            xs.remove(0);
            gs.remove(0);
        }
        let mut next = g.clone();
        if xs.len() >= 2 {
            let m = xs.len() - 1;
            let df = DMatrix::from_fn(k, m, |i, c| (gs[c + 1][i] - xs[c + 1][i]) - (gs[c][i] - xs[c][i]));
            let dg = DMatrix::from_fn(k, m, |i, c| gs[c + 1][i] - gs[c][i]);
            if let Ok(gamma) = df.svd(true, true).solve(&f, 1e-14) {
                let mixed = &g - dg * gamma;
                if mixed.iter().all(|v| v.is_finite() && (0.0..=1.0).contains(v)) {
                    next = mixed;
                } else {
                    xs.clear();
                    gs.clear();
                }
            }
        }
        h = next;
        if iteration == MAX_ITERATIONS {
            let (_, lambda, heywood) = step(&r, &h);
            result = Some((lambda, heywood, iteration, false));
        }
    }
    let (lambda, heywood, iterations, converged) = result.expect("loop runs at least once");
    let loadings: Vec<f64> = lambda.iter().map(|l| l.clamp(-1.0, 1.0)).collect();
    let informative = loadings.iter().any(|l| l * l >= INFORMATIVE_COMMUNALITY);
    Ok(FactorModel {
        uniquenesses: loadings.iter().map(|l| (1.0 - l * l).max(0.0)).collect(),
        loadings,
        converged,
        iterations,
        heywood,
        informative,
    })
}
