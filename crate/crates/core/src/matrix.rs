//! Dense exact integer matrices. Products use checked `i64` arithmetic and
//! fail with [`Error::Overflow`] rather than wrap; ranks are computed over
//! the rationals by fraction-free elimination in big integers.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{param, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![1; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return param("matrix shapes do not match");
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b == 0 {
                        continue;
                    }
                    let v = a
                        .checked_mul(b)
                        .and_then(|p| p.checked_add(out.get(i, j)))
                        .ok_or(Error::Overflow)?;
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn add_scaled(&mut self, other: &IntMatrix, c: i64) -> Result<()> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return param("matrix shapes do not match");
        }
        for (x, &y) in self.data.iter_mut().zip(&other.data) {
            *x = y.checked_mul(c).and_then(|p| p.checked_add(*x)).ok_or(Error::Overflow)?;
        }
        Ok(())
    }

    /// Rank over `Q`.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        rank_bareiss(rows, self.cols)
    }
}

/// Rank over `Q` of a big-integer matrix by Bareiss elimination.
pub fn rank_bareiss(mut m: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = m.len();
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].abs();
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products() {
        let a = IntMatrix::from_fn(2, 2, |i, j| (i * 2 + j) as i64);
        let i = IntMatrix::identity(2);
        assert_eq!(a.mul(&i).unwrap(), a);
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq.row(0), &[2, 3]);
        assert_eq!(sq.row(1), &[6, 11]);
        let big = IntMatrix::from_fn(1, 1, |_, _| i64::MAX);
        assert!(matches!(big.mul(&big), Err(Error::Overflow)));
    }

    #[test]
    fn ranks() {
        assert_eq!(IntMatrix::identity(5).rank(), 5);
        assert_eq!(IntMatrix::ones(4, 4).rank(), 1);
        assert_eq!(IntMatrix::zeros(3, 2).rank(), 0);
        let m = IntMatrix::from_fn(3, 3, |i, j| (i * 3 + j) as i64);
        assert_eq!(m.rank(), 2);
        // Rank over Q, not mod 2: this matrix is singular mod 2 only.
        let m = IntMatrix::from_fn(2, 2, |i, j| [[1, 1], [1, 3]][i][j]);
        assert_eq!(m.rank(), 2);
    }
}
