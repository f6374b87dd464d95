//! Delaunay cells and decompositions of `Z^g` for an even positive-definite
//! integral form, computed two independent ways: an exact closest-vector
//! branch-and-bound with pivoting (the production path) and a lifted
//! lower-convex-hull oracle (the verification path).

mod cell;
pub(crate) mod complex;
mod oracle;
pub mod ratlin;
mod svg;

pub use cell::{delaunay_cell, enumerate_ball, equidistance_directions, hole_center, next_event};
pub use complex::{delaunay_complex, CellReport, ComplexReport, DelaunayComplex, Sublattice};
pub use oracle::delaunay_oracle;
pub use svg::render_svg;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{rat, Rat};

#[derive(Debug, Error, PartialEq)]
pub enum DelaunayError {
    #[error("gram matrix must be square and symmetric")]
    NotSymmetric,
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("form is not even (odd diagonal entry {0})")]
    NotEven(i64),
    #[error("sublattice has determinant zero")]
    InfiniteIndex,
    #[error("oracle box radius {0} too small (uncertified boundary cell)")]
    BoxTooSmall(i64),
    #[error("dimension mismatch: expected {0}, got {1}")]
    DimensionMismatch(usize, usize),
}

/// A symmetric positive-definite integral bilinear form with even values
/// `B(x, x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Form {
    gram: Vec<Vec<i64>>,
}

impl Form {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self, DelaunayError> {
        let g = gram.len();
        if gram.iter().any(|row| row.len() != g) {
            return Err(DelaunayError::NotSymmetric);
        }
        for i in 0..g {
            for j in 0..g {
                if gram[i][j] != gram[j][i] {
                    return Err(DelaunayError::NotSymmetric);
                }
            }
        }
        // B(x, x) even for all integer x iff every diagonal entry is even
        for i in 0..g {
            if gram[i][i] % 2 != 0 {
                return Err(DelaunayError::NotEven(gram[i][i]));
            }
        }
        let form = Form { gram };
        // positive definite iff all leading principal minors are positive
        for k in 1..=g {
            if form.leading_minor(k) <= num_bigint::BigInt::from(0) {
                return Err(DelaunayError::NotPositiveDefinite);
            }
        }
        Ok(form)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &Vec<Vec<i64>> {
        &self.gram
    }

    fn leading_minor(&self, k: usize) -> num_bigint::BigInt {
        let rows: Vec<Vec<Rat>> = (0..k)
            .map(|i| (0..k).map(|j| rat(self.gram[i][j])).collect())
            .collect();
        let d = ratlin::det(&rows);
        assert!(d.denom() == &num_bigint::BigInt::from(1));
        d.numer().clone()
    }

    /// `B(x, y)` on integer vectors.
    pub fn eval_int(&self, x: &[i64], y: &[i64]) -> i64 {
        let g = self.rank();
        let mut acc = 0i64;
        for i in 0..g {
            for j in 0..g {
                acc += x[i] * self.gram[i][j] * y[j];
            }
        }
        acc
    }

    /// `B(x, y)` with one rational argument.
    pub fn eval_mixed(&self, lam: &[Rat], y: &[i64]) -> Rat {
        let g = self.rank();
        let mut acc = Rat::zero();
        for i in 0..g {
            for j in 0..g {
                if y[j] != 0 && !lam[i].is_zero() {
                    acc += &lam[i] * rat(self.gram[i][j] * y[j]);
                }
            }
        }
        acc
    }

    /// `B(x, y)` on rational vectors.
    pub fn eval_rat(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let g = self.rank();
        let mut acc = Rat::zero();
        for i in 0..g {
            for j in 0..g {
                acc += &x[i] * rat(self.gram[i][j]) * &y[j];
            }
        }
        acc
    }

    /// `F_lambda(x) = B(x, x) - 2 B(lambda, x)`, whose lattice minimizers
    /// form the Delaunay cell `D(lambda)`.
    pub fn f_lambda(&self, lam: &[Rat], x: &[i64]) -> Rat {
        rat(self.eval_int(x, x)) - rat(2) * self.eval_mixed(lam, x)
    }

    /// Unit-lower-triangular `L` and positive diagonal `D` with
    /// `gram = L D L^T`, exactly over `Q`.
    pub fn ldl(&self) -> (Vec<Vec<Rat>>, Vec<Rat>) {
        let g = self.rank();
        let mut l = vec![vec![Rat::zero(); g]; g];
        let mut d = vec![Rat::zero(); g];
        for j in 0..g {
            let mut dj = rat(self.gram[j][j]);
            for k in 0..j {
                dj -= &l[j][k] * &l[j][k] * &d[k];
            }
            assert!(dj > Rat::zero(), "LDL pivot not positive: form not positive definite");
            d[j] = dj;
            l[j][j] = rat(1);
            for i in j + 1..g {
                let mut v = rat(self.gram[i][j]);
                for k in 0..j {
                    v -= &l[i][k] * &l[j][k] * &d[k];
                }
                l[i][j] = v / &d[j];
            }
        }
        (l, d)
    }

    /// A positive rational lower bound for the smallest eigenvalue:
    /// `det / (sum of principal (g-1)-minors)`.
    pub fn min_eigenvalue_lower_bound(&self) -> Rat {
        let g = self.rank();
        if g == 1 {
            return rat(self.gram[0][0]);
        }
        let rows: Vec<Vec<Rat>> = (0..g)
            .map(|i| (0..g).map(|j| rat(self.gram[i][j])).collect())
            .collect();
        let det = ratlin::det(&rows);
        let mut e = Rat::zero();
        for skip in 0..g {
            let idx: Vec<usize> = (0..g).filter(|&i| i != skip).collect();
            let minor: Vec<Vec<Rat>> = idx
                .iter()
                .map(|&i| idx.iter().map(|&j| rat(self.gram[i][j])).collect())
                .collect();
            e += ratlin::det(&minor);
        }
        det / e
    }
}

/// The vertex set of one Delaunay cell: all lattice minimizers of
/// `F_lambda`, with its affine dimension and the certifying center.
#[derive(Clone, Debug, PartialEq)]
pub struct DelaunayCell {
    /// Sorted lexicographically.
    pub vertices: Vec<Vec<i64>>,
    pub dim: usize,
    /// A rational point whose minimizer set is exactly `vertices`.
    pub center: Vec<Rat>,
}

impl DelaunayCell {
    /// Affine dimension of a nonempty vertex set.
    pub fn dimension_of(vertices: &[Vec<i64>]) -> usize {
        if vertices.len() <= 1 {
            return 0;
        }
        let v0 = &vertices[0];
        let rows: Vec<Vec<Rat>> = vertices[1..]
            .iter()
            .map(|v| v.iter().zip(v0).map(|(a, b)| rat(a - b)).collect())
            .collect();
        ratlin::rank(&rows)
    }

    pub fn translated(&self, shift: &[i64]) -> DelaunayCell {
        let mut vertices: Vec<Vec<i64>> = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(shift).map(|(a, b)| a + b).collect())
            .collect();
        vertices.sort();
        let center = self
            .center
            .iter()
            .zip(shift)
            .map(|(c, s)| c + rat(*s))
            .collect();
        DelaunayCell { vertices, dim: self.dim, center }
    }
}
