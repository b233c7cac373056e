//! Exact linear-algebra kernel: polynomials, determinants, minors,
//! quadratic roots, and task generation.
//!
//! Every value here is immutable once built and every operation is a pure
//! function, so the module is freely shareable across threads.

mod generate;
mod matrix;
mod polynomial;
mod quadratic;
pub mod rational;

use thiserror::Error;

pub use generate::{
    det_task_from_matrix, generate_det_task, DetTask, DetTaskSpec, DetTemplate, IntRange,
    DEFAULT_MAX_DRAWS,
};
pub use matrix::{cofactor, det_cofactor, det_triangular, minor, Matrix, NumericMatrix, PolyMatrix};
pub use polynomial::{poly_arith, PolyOp, Polynomial};
pub use quadratic::{solve_quadratic, QuadraticRoots, Root, RootKind};
pub use rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MathError {
    #[error("matrix has no rows")]
    Empty,
    #[error("matrix is not square: {rows} rows but a row of length {cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("index ({i}, {j}) outside 1..={n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },
    #[error("minors need n >= 2, got n = {n}")]
    TooSmall { n: usize },
    #[error("leading coefficient is zero")]
    NotQuadratic,
    #[error("no acceptable task after {draws} draws")]
    GenerationExhausted { draws: usize },
    #[error("invalid task spec: {0}")]
    InvalidSpec(String),
}

/// The 3x3 matrix `[[x+4, 5, 3], [-5, x-6, -2], [1, 1, 1]]` whose
/// determinant is `x^2 - 3x + 2`.
pub fn walkthrough_matrix() -> PolyMatrix {
    let k = |c| Polynomial::from_ints(&[c]);
    let lin = |c| Polynomial::from_ints(&[c, 1]);
    PolyMatrix::from_rows(vec![
        vec![lin(4), k(5), k(3)],
        vec![k(-5), lin(-6), k(-2)],
        vec![k(1), k(1), k(1)],
    ])
    .expect("3x3 literal")
}
