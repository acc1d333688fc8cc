use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::Rational;
use crate::error::{Error, Result};

/// Dense symmetric rational matrix. Only the upper triangle is stored, so
/// `get(i, j) == get(j, i)` holds by construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymMatrix {
    dim: usize,
    upper: Vec<Rational>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            upper: vec![Rational::zero(); dim * (dim + 1) / 2],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    /// Builds a matrix from `f(i, j)`, which is only called with `i <= j`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut upper = Vec::with_capacity(dim * (dim + 1) / 2);
        for i in 0..dim {
            for j in i..dim {
                upper.push(f(i, j));
            }
        }
        Self { dim, upper }
    }

    /// Builds a matrix from full rows, rejecting ragged or asymmetric input.
    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self> {
        let dim = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {} in a {dim}x{dim} matrix",
                    row.len()
                )));
            }
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::DimensionMismatch(format!(
                        "entries ({i},{j}) and ({j},{i}) differ"
                    )));
                }
            }
        }
        Ok(Self::from_fn(dim, |i, j| rows[i][j].clone()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.dim - i * (i + 1) / 2 + j
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        assert!(i < self.dim && j < self.dim, "index out of range");
        &self.upper[self.offset(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        assert!(i < self.dim && j < self.dim, "index out of range");
        let k = self.offset(i, j);
        self.upper[k] = value;
    }

    pub fn row(&self, i: usize) -> Vec<Rational> {
        (0..self.dim).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.dim).map(|i| self.row(i)).collect()
    }

    pub fn row_sum(&self, i: usize) -> Rational {
        (0..self.dim).map(|j| self.get(i, j)).sum()
    }

    /// Exact `v^T M v`.
    pub fn quad_form(&self, v: &[Rational]) -> Rational {
        assert_eq!(v.len(), self.dim, "vector length must match dimension");
        let mut acc = Rational::zero();
        for i in 0..self.dim {
            if v[i].is_zero() {
                continue;
            }
            let mut row = self.get(i, i) * &v[i];
            for j in (i + 1)..self.dim {
                if !v[j].is_zero() {
                    row += self.get(i, j) * &v[j] * Rational::from_integer(BigInt::from(2));
                }
            }
            acc += row * &v[i];
        }
        acc
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn principal_submatrix(&self, indices: &[usize]) -> SymMatrix {
        SymMatrix::from_fn(indices.len(), |a, b| {
            self.get(indices[a], indices[b]).clone()
        })
    }

    /// Least common multiple of all entry denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.upper
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| super::rational::to_f64(self.get(i, j)))
                    .collect()
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.upper.iter().all(Zero::is_zero)
    }

    pub fn has_nonnegative_diagonal(&self) -> bool {
        (0..self.dim).all(|i| !self.get(i, i).is_negative())
    }
}

/// `M' = M_rest - m_{.,p} m_{p,.} / m_{p,p}` over the indices other than `pivot`,
/// kept in their original order.
pub fn schur_complement(m: &SymMatrix, pivot: usize) -> Result<SymMatrix> {
    if pivot >= m.dim() {
        return Err(Error::DimensionMismatch(format!(
            "pivot {pivot} out of range for dimension {}",
            m.dim()
        )));
    }
    let d = m.get(pivot, pivot);
    if !d.is_positive() {
        return Err(Error::InvalidPivot {
            index: pivot,
            value: super::rational::to_fraction_string(d),
        });
    }
    let rest: Vec<usize> = (0..m.dim()).filter(|&i| i != pivot).collect();
    Ok(SymMatrix::from_fn(rest.len(), |a, b| {
        let (i, j) = (rest[a], rest[b]);
        m.get(i, j) - m.get(i, pivot) * m.get(pivot, j) / d
    }))
}
