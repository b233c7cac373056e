//! Seeded generation of "find x such that det = 0" tasks.
//!
//! A draw fills a square template: cells listed in `x_positions` hold
//! `x + c`, every other cell a constant `c`, with each `c` uniform over
//! `entry_range`. The draw is accepted when the determinant is a quadratic
//! with two distinct integer roots inside `root_range`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::matrix::{det_cofactor, PolyMatrix};
use super::polynomial::Polynomial;
use super::quadratic::{solve_quadratic, QuadraticRoots, RootKind};
use super::rational::{int, to_i64, Rational};
use super::MathError;

pub const DEFAULT_MAX_DRAWS: usize = 10_000;

/// Inclusive integer interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntRange {
    pub min: i64,
    pub max: i64,
}

impl IntRange {
    pub const fn new(min: i64, max: i64) -> Self {
        Self { min, max }
    }

    pub fn contains(&self, v: i64) -> bool {
        (self.min..=self.max).contains(&v)
    }
}

/// Template parameters shared by every task a generator entry produces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct DetTemplate {
    pub dimension: usize,
    pub root_range: IntRange,
    pub entry_range: IntRange,
    /// Zero-based `(row, col)` cells carrying `x`.
    pub x_positions: Vec<(usize, usize)>,
    pub max_draws: usize,
}

impl Default for DetTemplate {
    fn default() -> Self {
        Self {
            dimension: 3,
            root_range: IntRange::new(-9, 9),
            entry_range: IntRange::new(-9, 9),
            x_positions: vec![(0, 0), (1, 1)],
            max_draws: DEFAULT_MAX_DRAWS,
        }
    }
}

impl DetTemplate {
    pub fn with_seed(&self, seed: u64) -> DetTaskSpec {
        DetTaskSpec {
            template: self.clone(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), MathError> {
        let invalid = |msg: &str| Err(MathError::InvalidSpec(msg.to_string()));
        if self.dimension != 3 {
            return invalid("only 3x3 templates are supported");
        }
        if self.entry_range.min > self.entry_range.max {
            return invalid("entry_range is empty");
        }
        if self.root_range.max - self.root_range.min < 1 {
            return invalid("root_range must hold at least two integers");
        }
        if self.x_positions.is_empty() {
            return invalid("x_positions is empty");
        }
        let mut seen = std::collections::BTreeSet::new();
        for &(r, c) in &self.x_positions {
            if r >= self.dimension || c >= self.dimension {
                return invalid("x position outside the matrix");
            }
            if !seen.insert((r, c)) {
                return invalid("duplicate x position");
            }
        }
        if self.max_draws == 0 {
            return invalid("max_draws must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetTaskSpec {
    #[serde(flatten)]
    pub template: DetTemplate,
    pub seed: u64,
}

impl DetTaskSpec {
    pub fn new(seed: u64) -> Self {
        DetTemplate::default().with_seed(seed)
    }
}

/// An accepted task: the matrix, its determinant coefficients
/// `[x^2, x, 1]`, and the roots.
#[derive(Debug, Clone, PartialEq)]
pub struct DetTask {
    pub matrix: PolyMatrix,
    pub coefficients: [Rational; 3],
    pub roots: QuadraticRoots,
    pub draws: usize,
}

impl DetTask {
    pub fn integer_roots(&self) -> Vec<i64> {
        self.roots
            .exact_roots()
            .unwrap_or_default()
            .iter()
            .filter_map(to_i64)
            .collect()
    }
}

/// Builds a task from a fixed matrix if its determinant passes the
/// acceptance predicate for `root_range`.
pub fn det_task_from_matrix(matrix: PolyMatrix, root_range: IntRange) -> Option<DetTask> {
    let det = det_cofactor(&matrix);
    let (coefficients, roots) = accept(&det, root_range)?;
    Some(DetTask {
        matrix,
        coefficients,
        roots,
        draws: 1,
    })
}

fn accept(det: &Polynomial, root_range: IntRange) -> Option<([Rational; 3], QuadraticRoots)> {
    if det.degree() != 2 {
        return None;
    }
    let coefficients = [det.coeff(2), det.coeff(1), det.coeff(0)];
    let roots = solve_quadratic(&coefficients[0], &coefficients[1], &coefficients[2]).ok()?;
    if roots.kind != RootKind::TwoDistinct {
        return None;
    }
    let exact = roots.exact_roots()?;
    let in_range = exact
        .iter()
        .all(|r| to_i64(r).is_some_and(|v| root_range.contains(v)));
    in_range.then_some((coefficients, roots))
}

fn draw(template: &DetTemplate, rng: &mut ChaCha8Rng) -> PolyMatrix {
    let n = template.dimension;
    let range = template.entry_range;
    let rows = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let constant = Polynomial::constant(int(rng.random_range(range.min..=range.max)));
                    if template.x_positions.contains(&(r, c)) {
                        &constant + &Polynomial::x()
                    } else {
                        constant
                    }
                })
                .collect()
        })
        .collect();
    PolyMatrix::from_rows(rows).expect("template dimension is positive")
}

/// Rejection-samples a task; a pure function of `spec`.
pub fn generate_det_task(spec: &DetTaskSpec) -> Result<DetTask, MathError> {
    let template = &spec.template;
    template.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for attempt in 1..=template.max_draws {
        let matrix = draw(template, &mut rng);
        if let Some(mut task) = det_task_from_matrix(matrix, template.root_range) {
            task.draws = attempt;
            return Ok(task);
        }
    }
    Err(MathError::GenerationExhausted {
        draws: template.max_draws,
    })
}
