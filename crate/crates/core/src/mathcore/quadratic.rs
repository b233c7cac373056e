use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, int, to_f64, Rational};
use super::MathError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootKind {
    TwoDistinct,
    Double,
    NoReal,
}

/// A real root, exact when the discriminant is a rational square.
#[derive(Debug, Clone, PartialEq)]
pub enum Root {
    Exact(Rational),
    Approx(f64),
}

impl Root {
    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Root::Exact(r) => Some(r),
            Root::Approx(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Root::Exact(r) => to_f64(r),
            Root::Approx(v) => *v,
        }
    }
}

impl std::fmt::Display for Root {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Root::Exact(r) => f.write_str(&format_rational(r)),
            Root::Approx(v) => write!(f, "{v}"),
        }
    }
}

/// Real roots of a quadratic in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticRoots {
    pub kind: RootKind,
    pub roots: Vec<Root>,
}

impl QuadraticRoots {
    /// Exact roots, or `None` if any root is irrational.
    pub fn exact_roots(&self) -> Option<Vec<Rational>> {
        self.roots.iter().map(|r| r.exact().cloned()).collect()
    }
}

fn rational_sqrt(value: &Rational) -> Option<Rational> {
    if value.is_negative() {
        return None;
    }
    let n = value.numer().sqrt();
    let d = value.denom().sqrt();
    if &(&n * &n) == value.numer() && &(&d * &d) == value.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Solves `a x^2 + b x + c = 0` over the reals.
pub fn solve_quadratic(a: &Rational, b: &Rational, c: &Rational) -> Result<QuadraticRoots, MathError> {
    if a.is_zero() {
        return Err(MathError::NotQuadratic);
    }
    let disc = b * b - int(4) * a * c;
    let two_a = int(2) * a;
    if disc.is_negative() {
        return Ok(QuadraticRoots {
            kind: RootKind::NoReal,
            roots: Vec::new(),
        });
    }
    if disc.is_zero() {
        return Ok(QuadraticRoots {
            kind: RootKind::Double,
            roots: vec![Root::Exact(-b / &two_a)],
        });
    }
    let roots = if let Some(s) = rational_sqrt(&disc) {
        let mut r = [(-b - &s) / &two_a, (-b + &s) / &two_a];
        r.sort();
        r.into_iter().map(Root::Exact).collect()
    } else {
        // Cancellation-free pair: q = -(b + sign(b) sqrt(d)) / 2.
        let (af, bf, cf) = (to_f64(a), to_f64(b), to_f64(c));
        let sd = to_f64(&disc).sqrt();
        let sign = if bf < 0.0 { -1.0 } else { 1.0 };
        let q = -0.5 * (bf + sign * sd);
        let (mut r1, mut r2) = (q / af, cf / q);
        if r1 > r2 {
            std::mem::swap(&mut r1, &mut r2);
        }
        vec![Root::Approx(r1), Root::Approx(r2)]
    };
    Ok(QuadraticRoots {
        kind: RootKind::TwoDistinct,
        roots,
    })
}
