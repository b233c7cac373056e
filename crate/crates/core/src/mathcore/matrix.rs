//! Square matrices over polynomials and over exact rationals.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::polynomial::Polynomial;
use super::rational::{int, Rational};
use super::MathError;

/// A square `n x n` matrix, row-major, `n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<T>>", into = "Vec<Vec<T>>")]
#[serde(bound(
    serialize = "T: Clone + Serialize",
    deserialize = "T: Deserialize<'de>"
))]
pub struct Matrix<T> {
    n: usize,
    entries: Vec<T>,
}

/// Matrix whose entries are polynomials in `x`.
pub type PolyMatrix = Matrix<Polynomial>;

/// Matrix of exact rationals.
pub type NumericMatrix = Matrix<Rational>;

impl<T> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, MathError> {
        let n = rows.len();
        if n == 0 {
            return Err(MathError::Empty);
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(MathError::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        Ok(Self {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Zero-based entry access.
    pub fn get(&self, row: usize, col: usize) -> &T {
        &self.entries[row * self.n + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.entries.chunks(self.n)
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Swaps two zero-based rows.
    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for col in 0..self.n {
            self.entries.swap(a * self.n + col, b * self.n + col);
        }
    }
}

impl<T: Clone> Matrix<T> {
    /// Deletes zero-based `row` and `col`.
    fn submatrix(&self, row: usize, col: usize) -> Matrix<T> {
        let rows = self
            .rows()
            .enumerate()
            .filter(|(r, _)| *r != row)
            .map(|(_, cells)| {
                cells
                    .iter()
                    .enumerate()
                    .filter(|(c, _)| *c != col)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        Matrix::from_rows(rows).expect("submatrix of a square matrix is square")
    }
}

impl<T: Clone> From<Matrix<T>> for Vec<Vec<T>> {
    fn from(m: Matrix<T>) -> Self {
        m.rows().map(<[T]>::to_vec).collect()
    }
}

impl<T> TryFrom<Vec<Vec<T>>> for Matrix<T> {
    type Error = MathError;

    fn try_from(rows: Vec<Vec<T>>) -> Result<Self, MathError> {
        Matrix::from_rows(rows)
    }
}

impl NumericMatrix {
    pub fn from_ints(rows: &[&[i64]]) -> Result<Self, MathError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Result<Self, MathError> {
        Self::from_rows(
            (0..n)
                .map(|r| (0..n).map(|c| if r == c { int(1) } else { int(0) }).collect())
                .collect(),
        )
    }

    /// Embeds the matrix as constant polynomials.
    pub fn lift(&self) -> PolyMatrix {
        self.map(|v| Polynomial::constant(v.clone()))
    }

    pub fn mul(&self, rhs: &NumericMatrix) -> Result<NumericMatrix, MathError> {
        if self.n != rhs.n {
            return Err(MathError::DimensionMismatch {
                left: self.n,
                right: rhs.n,
            });
        }
        let n = self.n;
        let rows = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        (0..n).fold(Rational::zero(), |acc, k| {
                            acc + self.get(r, k) * rhs.get(k, c)
                        })
                    })
                    .collect()
            })
            .collect();
        Self::from_rows(rows)
    }

    fn check_index(&self, i: usize, j: usize) -> Result<(), MathError> {
        if self.n < 2 {
            return Err(MathError::TooSmall { n: self.n });
        }
        if !(1..=self.n).contains(&i) || !(1..=self.n).contains(&j) {
            return Err(MathError::IndexOutOfRange { i, j, n: self.n });
        }
        Ok(())
    }
}

/// Determinant by Laplace expansion along the first row.
pub fn det_cofactor(m: &PolyMatrix) -> Polynomial {
    let cols: Vec<usize> = (0..m.n).collect();
    expand(m, 0, &cols)
}

fn expand(m: &PolyMatrix, row: usize, cols: &[usize]) -> Polynomial {
    if cols.len() == 1 {
        return m.get(row, cols[0]).clone();
    }
    let mut total = Polynomial::zero();
    for (pos, &col) in cols.iter().enumerate() {
        let entry = m.get(row, col);
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&c| c != col).collect();
        let term = entry * &expand(m, row + 1, &rest);
        total = if pos % 2 == 0 {
            &total + &term
        } else {
            &total - &term
        };
    }
    total
}

/// Determinant by Gaussian elimination to upper-triangular form.
///
/// Pivots on the first nonzero entry at or below the diagonal; each row
/// swap flips the sign.
pub fn det_triangular(m: &NumericMatrix) -> Rational {
    let n = m.n;
    let mut a: Vec<Vec<Rational>> = m.rows().map(<[Rational]>::to_vec).collect();
    let mut det = Rational::one();
    for k in 0..n {
        let Some(pivot_row) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Rational::zero();
        };
        if pivot_row != k {
            a.swap(pivot_row, k);
            det = -det;
        }
        let pivot = a[k][k].clone();
        for r in (k + 1)..n {
            if a[r][k].is_zero() {
                continue;
            }
            let factor = &a[r][k] / &pivot;
            for c in k..n {
                let delta = &factor * &a[k][c];
                a[r][c] -= delta;
            }
        }
        det *= pivot;
    }
    det
}

/// Determinant of `m` with one-based row `i` and column `j` deleted.
pub fn minor(m: &NumericMatrix, i: usize, j: usize) -> Result<Rational, MathError> {
    m.check_index(i, j)?;
    Ok(det_triangular(&m.submatrix(i - 1, j - 1)))
}

/// Signed minor `(-1)^(i+j) * minor(i, j)`, one-based indices.
pub fn cofactor(m: &NumericMatrix, i: usize, j: usize) -> Result<Rational, MathError> {
    let value = minor(m, i, j)?;
    Ok(if (i + j) % 2 == 0 { value } else { -value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mathcore::rational::int;

    fn lin(c: i64) -> Polynomial {
        Polynomial::from_ints(&[c, 1])
    }

    fn k(c: i64) -> Polynomial {
        Polynomial::from_ints(&[c])
    }

    #[test]
    fn worked_matrix_expands_to_the_quadratic() {
        let m = PolyMatrix::from_rows(vec![
            vec![lin(4), k(5), k(3)],
            vec![k(-5), lin(-6), k(-2)],
            vec![k(1), k(1), k(1)],
        ])
        .unwrap();
        assert_eq!(det_cofactor(&m), Polynomial::from_ints(&[2, -3, 1]));
    }

    #[test]
    fn identity_and_one_by_one() {
        let id = NumericMatrix::identity(3).unwrap();
        assert_eq!(det_cofactor(&id.lift()), Polynomial::from_ints(&[1]));
        let single = PolyMatrix::from_rows(vec![vec![lin(7)]]).unwrap();
        assert_eq!(det_cofactor(&single), lin(7));
    }

    #[test]
    fn triangular_examples() {
        let upper = NumericMatrix::from_ints(&[&[2, 1], &[0, 3]]).unwrap();
        assert_eq!(det_triangular(&upper), int(6));
        let singular = NumericMatrix::from_ints(&[&[1, 2], &[2, 4]]).unwrap();
        assert_eq!(det_triangular(&singular), int(0));
        let needs_swap = NumericMatrix::from_ints(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(det_triangular(&needs_swap), int(-1));
    }

    #[test]
    fn minors_and_cofactors_of_two_by_two() {
        let m = NumericMatrix::from_ints(&[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(minor(&m, 1, 1).unwrap(), int(4));
        assert_eq!(minor(&m, 1, 2).unwrap(), int(3));
        assert_eq!(cofactor(&m, 1, 2).unwrap(), int(-3));
        assert_eq!(cofactor(&m, 2, 2).unwrap(), minor(&m, 2, 2).unwrap());
    }

    #[test]
    fn minor_index_errors() {
        let m = NumericMatrix::from_ints(&[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(
            minor(&m, 0, 1),
            Err(MathError::IndexOutOfRange { i: 0, j: 1, n: 2 })
        );
        assert!(matches!(minor(&m, 3, 1), Err(MathError::IndexOutOfRange { .. })));
        let one = NumericMatrix::from_ints(&[&[5]]).unwrap();
        assert_eq!(minor(&one, 1, 1), Err(MathError::TooSmall { n: 1 }));
    }

    #[test]
    fn construction_rejects_non_square() {
        assert_eq!(
            NumericMatrix::from_ints(&[&[1, 2], &[3]]),
            Err(MathError::NotSquare { rows: 2, cols: 1 })
        );
        assert_eq!(NumericMatrix::from_rows(vec![]), Err(MathError::Empty));
    }

    #[test]
    fn serde_uses_nested_rows() {
        let m = NumericMatrix::from_ints(&[&[1, 2], &[3, 4]]).unwrap();
        let lifted = m.lift();
        let json = serde_json::to_string(&lifted).unwrap();
        assert_eq!(json, r#"[[["1"],["2"]],[["3"],["4"]]]"#);
        let back: PolyMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, lifted);
        assert!(serde_json::from_str::<PolyMatrix>(r#"[[["1"]],[["2"]]]"#).is_err());
    }
}
