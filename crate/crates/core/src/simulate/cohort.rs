use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::seeds;
use crate::session::{Column, ResponseMatrix, TOTAL_LABEL};

use super::SimulateError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Discretization {
    #[default]
    Continuous,
    /// Round to the nearest integer, then clamp to `[0, max_points]`.
    RoundedClamped,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimItem {
    pub label: String,
    pub loading: f64,
    /// Location of the item score.
    #[serde(default)]
    pub difficulty: f64,
    pub max_points: f64,
    /// Spread of the item score around its location.
    #[serde(default = "one")]
    pub scale: f64,
}

impl SimItem {
    pub fn new(label: &str, loading: f64, difficulty: f64, max_points: f64) -> Self {
        Self {
            label: label.into(),
            loading,
            difficulty,
            max_points,
            scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortSpec {
    pub n_students: usize,
    pub items: Vec<SimItem>,
    pub seed: u64,
    #[serde(default)]
    pub discretization: Discretization,
}

impl CohortSpec {
    pub fn validate(&self) -> Result<(), SimulateError> {
        if self.n_students == 0 {
            return Err(SimulateError::NoStudents);
        }
        if self.items.is_empty() {
            return Err(SimulateError::NoItems);
        }
        let mut labels = BTreeSet::new();
        for item in &self.items {
            if item.label == TOTAL_LABEL || item.label.contains('.') || !labels.insert(item.label.as_str()) {
                return Err(SimulateError::InvalidLabel(item.label.clone()));
            }
            if !item.loading.is_finite() || item.loading * item.loading >= 1.0 {
                return Err(SimulateError::InvalidLoading {
                    label: item.label.clone(),
                    loading: item.loading,
                });
            }
            let finite = [item.difficulty, item.max_points, item.scale].iter().all(|v| v.is_finite());
            if !finite || item.max_points < 0.0 || item.scale < 0.0 {
                return Err(SimulateError::InvalidParameter(item.label.clone()));
            }
        }
        Ok(())
    }
}

/// Row `j` of the matrix: item scores `b + s(λθ + √(1−λ²)ε)` for one
/// ability draw θ and independent standard-normal ε per item.
fn student_scores(spec: &CohortSpec, student: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seeds::derive(spec.seed, student as u64));
    let theta: f64 = StandardNormal.sample(&mut rng);
    spec.items
        .iter()
        .map(|item| {
            let eps: f64 = StandardNormal.sample(&mut rng);
            let unique = (1.0 - item.loading * item.loading).sqrt();
            let z = item.difficulty + item.scale * (item.loading * theta + unique * eps);
            match spec.discretization {
                Discretization::Continuous => z,
                Discretization::RoundedClamped => z.round().clamp(0.0, item.max_points),
            }
        })
        .collect()
}

/// Students `s0001, s0002, ...` with columns `A` (sum of items) then each item.
pub fn simulate_matrix(spec: &CohortSpec) -> Result<ResponseMatrix, SimulateError> {
    spec.validate()?;
    let columns = std::iter::once(Column::total())
        .chain(spec.items.iter().map(|i| Column::item(&i.label)))
        .collect();
    let students = (0..spec.n_students).map(|j| format!("s{:04}", j + 1)).collect();
    let cells = (0..spec.n_students)
        .map(|j| {
            let scores = student_scores(spec, j);
            std::iter::once(scores.iter().sum())
                .chain(scores)
                .map(Some)
                .collect()
        })
        .collect();
    Ok(ResponseMatrix::new(students, columns, cells).expect("simulated matrices are rectangular"))
}

/// `n` students with standard-normal abilities.
pub fn sample_students(n: usize, seed: u64) -> Vec<super::SimStudent> {
    (0..n)
        .map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(seeds::derive(seed, j as u64));
            super::SimStudent {
                id: format!("s{:04}", j + 1),
                ability: StandardNormal.sample(&mut rng),
            }
        })
        .collect()
}
