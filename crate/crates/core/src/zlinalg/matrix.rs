use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Dense matrix over the integers, row-major, arbitrary precision.
///
/// Arithmetic never overflows; intermediate Smith-form entries can blow up
/// super-polynomially, so fixed-width entries are not an option here.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Self { rows, cols, entries }
    }

    /// Build from row slices of machine integers; handy in tests and presets.
    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count != rows*cols");
        Self { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.at(i, j).is_one()
                    } else {
                        self.at(i, j).is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| -self.at(r, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c) + other.at(r, c))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c) - other.at(r, c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.entries[idx] += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (k, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc += self.at(i, k) * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        (0..self.cols).map(|j| self.at(i, j).clone()).collect()
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(rows: usize, cols: Vec<Vec<BigInt>>) -> Self {
        let c = cols.len();
        assert!(cols.iter().all(|v| v.len() == rows));
        Self::from_fn(rows, c, |i, j| cols[j][i].clone())
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                other.at(r, c - self.cols).clone()
            }
        })
    }

    /// Vertical concatenation [self; other].
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(self.rows + other.rows, self.cols, |r, c| {
            if r < self.rows {
                self.at(r, c).clone()
            } else {
                other.at(r - self.rows, c).clone()
            }
        })
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_fn(self.rows + other.rows, self.cols + other.cols, |r, c| {
            if r < self.rows && c < self.cols {
                self.at(r, c).clone()
            } else if r >= self.rows && c >= self.cols {
                other.at(r - self.rows, c - self.cols).clone()
            } else {
                BigInt::zero()
            }
        })
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Self {
        Self::from_fn(row_idx.len(), col_idx.len(), |r, c| {
            self.at(row_idx[r], col_idx[c]).clone()
        })
    }

    pub fn select_cols(&self, col_idx: &[usize]) -> Self {
        Self::from_fn(self.rows, col_idx.len(), |r, c| self.at(r, col_idx[c]).clone())
    }

    /// Determinant by fraction-free (Bareiss) elimination. Exact.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.entries.clone();
        let idx = |r: usize, c: usize| r * n + c;
        let mut prev = BigInt::one();
        let mut sign = 1i32;
        for k in 0..n - 1 {
            if a[idx(k, k)].is_zero() {
                // pivot search below row k
                match (k + 1..n).find(|&r| !a[idx(r, k)].is_zero()) {
                    Some(r) => {
                        for c in 0..n {
                            a.swap(idx(k, c), idx(r, c));
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[idx(i, j)] * &a[idx(k, k)] - &a[idx(i, k)] * &a[idx(k, j)];
                    a[idx(i, j)] = num / &prev;
                }
                a[idx(i, k)] = BigInt::zero();
            }
            prev = a[idx(k, k)].clone();
        }
        let d = a[idx(n - 1, n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    /// Maximum absolute value of the entries (0 for empty matrices).
    pub fn max_abs(&self) -> BigInt {
        self.entries
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_and_identity() {
        let a = IntMatrix::from_rows_i64(&[vec![1, 2], vec![3, 4]]);
        let i = IntMatrix::identity(2);
        assert_eq!(a.mul(&i), a);
        let b = IntMatrix::from_rows_i64(&[vec![0, 1], vec![1, 0]]);
        let ab = a.mul(&b);
        assert_eq!(ab, IntMatrix::from_rows_i64(&[vec![2, 1], vec![4, 3]]));
    }

    #[test]
    fn det_small() {
        let a = IntMatrix::from_rows_i64(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(a.det(), BigInt::from(-8));
        let s = IntMatrix::from_rows_i64(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(s.det(), BigInt::from(-1));
        assert!(s.is_unimodular());
        let z = IntMatrix::zero(3, 3);
        assert_eq!(z.det(), BigInt::from(0));
    }

    #[test]
    fn det_matches_cofactor_3x3() {
        let a = IntMatrix::from_rows_i64(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]);
        assert_eq!(a.det(), BigInt::from(-3));
    }
}
