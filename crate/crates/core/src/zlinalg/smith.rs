use super::IntMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Smith normal form `U * A * V = D` with unimodular transforms and their
/// inverses. The diagonal satisfies the divisibility chain and is
/// reproducible byte-for-byte: pivots are chosen by smallest nonzero
/// magnitude with lowest (row, col) index as tie-break.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub d: IntMatrix,
    /// Nonzero, non-unit diagonal entries, in order.
    pub invariant_factors: Vec<BigInt>,
    rank: usize,
}

impl SmithDecomposition {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.at(i, i).clone()).collect()
    }

    /// Full verification of the decomposition contract against the input.
    pub fn check(&self, a: &IntMatrix) -> bool {
        if !self.u.mul(a).mul(&self.v).eq(&self.d) {
            return false;
        }
        if !self.u.mul(&self.u_inv).is_identity() || !self.v.mul(&self.v_inv).is_identity() {
            return false;
        }
        if !self.u.is_unimodular() || !self.v.is_unimodular() {
            return false;
        }
        // diagonal shape and chain
        for r in 0..self.d.rows() {
            for c in 0..self.d.cols() {
                if r != c && !self.d.at(r, c).is_zero() {
                    return false;
                }
            }
        }
        let diag = self.diagonal();
        for w in diag.windows(2) {
            if w[0].is_zero() && !w[1].is_zero() {
                return false;
            }
            if !w[0].is_zero() && !w[1].is_zero() && !(&w[1] % &w[0]).is_zero() {
                return false;
            }
        }
        true
    }
}

struct Worker {
    w: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Worker {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for m in [&mut self.w, &mut self.u] {
            for c in 0..m.cols() {
                let a = m.at(i, c).clone();
                let b = m.at(j, c).clone();
                m.set(i, c, b);
                m.set(j, c, a);
            }
        }
        let m = &mut self.u_inv;
        for r in 0..m.rows() {
            let a = m.at(r, i).clone();
            let b = m.at(r, j).clone();
            m.set(r, i, b);
            m.set(r, j, a);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for m in [&mut self.w, &mut self.v] {
            for r in 0..m.rows() {
                let a = m.at(r, i).clone();
                let b = m.at(r, j).clone();
                m.set(r, i, b);
                m.set(r, j, a);
            }
        }
        let m = &mut self.v_inv;
        for c in 0..m.cols() {
            let a = m.at(i, c).clone();
            let b = m.at(j, c).clone();
            m.set(i, c, b);
            m.set(j, c, a);
        }
    }

    /// row_i += q * row_j on the working matrix.
    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for m in [&mut self.w, &mut self.u] {
            for c in 0..m.cols() {
                let add = q * m.at(j, c);
                let cur = m.at(i, c) + add;
                m.set(i, c, cur);
            }
        }
        // inverse op on u_inv: col_j -= q * col_i
        let m = &mut self.u_inv;
        for r in 0..m.rows() {
            let sub = q * m.at(r, i);
            let cur = m.at(r, j) - sub;
            m.set(r, j, cur);
        }
    }

    /// col_i += q * col_j on the working matrix.
    fn add_col(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for m in [&mut self.w, &mut self.v] {
            for r in 0..m.rows() {
                let add = q * m.at(r, j);
                let cur = m.at(r, i) + add;
                m.set(r, i, cur);
            }
        }
        // inverse op on v_inv: row_j -= q * row_i
        let m = &mut self.v_inv;
        for c in 0..m.cols() {
            let sub = q * m.at(i, c);
            let cur = m.at(j, c) - sub;
            m.set(j, c, cur);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.w, &mut self.u] {
            for c in 0..m.cols() {
                let cur = -m.at(i, c);
                m.set(i, c, cur);
            }
        }
        let m = &mut self.u_inv;
        for r in 0..m.rows() {
            let cur = -m.at(r, i);
            m.set(r, i, cur);
        }
    }
}

/// Smallest nonzero entry of the trailing submatrix, ties broken by lowest
/// (row, col).
fn find_pivot(w: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for r in t..w.rows() {
        for c in t..w.cols() {
            let e = w.at(r, c);
            if e.is_zero() {
                continue;
            }
            let a = e.abs();
            match &best {
                Some((m, _, _)) if *m <= a => {}
                _ => best = Some((a, r, c)),
            }
        }
    }
    best.map(|(_, r, c)| (r, c))
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let rows = a.rows();
    let cols = a.cols();
    let mut wk = Worker {
        w: a.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pr, pc)) = find_pivot(&wk.w, t) else {
            break;
        };
        wk.swap_rows(t, pr);
        wk.swap_cols(t, pc);
        // clear row and column t
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !wk.w.at(i, t).is_zero() {
                    let q = wk.w.at(i, t) / wk.w.at(t, t);
                    let nq = -q;
                    wk.add_row(i, t, &nq);
                    if !wk.w.at(i, t).is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !wk.w.at(t, j).is_zero() {
                    let q = wk.w.at(t, j) / wk.w.at(t, t);
                    let nq = -q;
                    wk.add_col(j, t, &nq);
                    if !wk.w.at(t, j).is_zero() {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
            // a nonzero remainder is strictly smaller than the pivot; promote it
            if let Some((pr, pc)) = find_pivot(&wk.w, t) {
                wk.swap_rows(t, pr);
                wk.swap_cols(t, pc);
            }
        }
        // divisibility sweep: pivot must divide the whole trailing block
        'sweep: loop {
            for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(wk.w.at(i, j) % wk.w.at(t, t)).is_zero() {
                        let one = BigInt::one();
                        wk.add_row(t, i, &one);
                        // re-clear row t
                        loop {
                            let mut dirty = false;
                            for jj in t + 1..cols {
                                if !wk.w.at(t, jj).is_zero() {
                                    let q = wk.w.at(t, jj) / wk.w.at(t, t);
                                    let nq = -q;
                                    wk.add_col(jj, t, &nq);
                                    if !wk.w.at(t, jj).is_zero() {
                                        dirty = true;
                                    }
                                }
                            }
                            for ii in t + 1..rows {
                                if !wk.w.at(ii, t).is_zero() {
                                    let q = wk.w.at(ii, t) / wk.w.at(t, t);
                                    let nq = -q;
                                    wk.add_row(ii, t, &nq);
                                    if !wk.w.at(ii, t).is_zero() {
                                        dirty = true;
                                    }
                                }
                            }
                            if !dirty {
                                break;
                            }
                            if let Some((pr, pc)) = find_pivot(&wk.w, t) {
                                wk.swap_rows(t, pr);
                                wk.swap_cols(t, pc);
                            }
                        }
                        continue 'sweep;
                    }
                }
            }
            break;
        }
        if wk.w.at(t, t).is_negative() {
            wk.negate_row(t);
        }
        t += 1;
    }
    let rank = t;
    let invariant_factors = (0..rank)
        .map(|i| wk.w.at(i, i).clone())
        .filter(|d| !d.is_one())
        .collect();
    SmithDecomposition {
        u: wk.u,
        u_inv: wk.u_inv,
        v: wk.v,
        v_inv: wk.v_inv,
        d: wk.w,
        invariant_factors,
        rank,
    }
}

/// Basis of the lattice spanned by the columns, in column-style Hermite
/// form: staircase with positive pivots and entries left of a pivot reduced
/// into `[0, pivot)`. Deterministic, so downstream generator choices are
/// reproducible.
pub fn hermite_column_basis(m: &IntMatrix) -> IntMatrix {
    let rows = m.rows();
    let mut cols: Vec<Vec<BigInt>> = (0..m.cols()).map(|j| m.col(j)).collect();
    let mut fixed = 0;
    for r in 0..rows {
        // eliminate row r among columns >= fixed
        loop {
            let mut live: Vec<usize> = (fixed..cols.len())
                .filter(|&j| !cols[j][r].is_zero())
                .collect();
            if live.is_empty() {
                break;
            }
            if live.len() == 1 {
                let j = live[0];
                cols.swap(fixed, j);
                break;
            }
            // smallest magnitude first, lowest index tie-break
            live.sort_by(|&a, &b| {
                cols[a][r]
                    .abs()
                    .cmp(&cols[b][r].abs())
                    .then(a.cmp(&b))
            });
            let p = live[0];
            for &j in &live[1..] {
                let q = &cols[j][r] / &cols[p][r];
                if !q.is_zero() {
                    for k in 0..rows {
                        let sub = &q * &cols[p][k];
                        cols[j][k] -= sub;
                    }
                }
            }
        }
        if fixed < cols.len() && !cols[fixed][r].is_zero() {
            if cols[fixed][r].is_negative() {
                for k in 0..rows {
                    cols[fixed][k] = -&cols[fixed][k];
                }
            }
            // reduce earlier columns at this pivot row
            let pivot = cols[fixed][r].clone();
            for j in 0..fixed {
                let e = &cols[j][r];
                if e.is_zero() {
                    continue;
                }
                let q = e.div_euclid(&pivot);
                if !q.is_zero() {
                    for k in 0..rows {
                        let sub = &q * &cols[fixed][k];
                        cols[j][k] -= sub;
                    }
                }
            }
            fixed += 1;
        }
    }
    cols.truncate(fixed);
    IntMatrix::from_cols(rows, cols)
}

trait DivEuclidRef {
    fn div_euclid(&self, other: &BigInt) -> BigInt;
}

impl DivEuclidRef for BigInt {
    fn div_euclid(&self, other: &BigInt) -> BigInt {
        let q = self / other;
        let r = self - &q * other;
        if r.is_negative() {
            if other.is_positive() {
                q - 1
            } else {
                q + 1
            }
        } else {
            q
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn snf_2x2_example() {
        // |det| = 8 and gcd 2 force diag(2, 4)
        let a = IntMatrix::from_rows_i64(&[vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&a);
        assert!(s.check(&a));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(s.invariant_factors, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn snf_identity() {
        let a = IntMatrix::identity(4);
        let s = smith_normal_form(&a);
        assert!(s.check(&a));
        assert!(s.invariant_factors.is_empty());
        assert_eq!(s.rank(), 4);
    }

    #[test]
    fn snf_1x1() {
        let a = IntMatrix::from_rows_i64(&[vec![6]]);
        let s = smith_normal_form(&a);
        assert!(s.check(&a));
        assert_eq!(s.diagonal(), vec![BigInt::from(6)]);
    }

    #[test]
    fn snf_diag_2_3_is_1_6() {
        let a = IntMatrix::from_rows_i64(&[vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&a);
        assert!(s.check(&a));
        assert_eq!(s.diagonal(), vec![BigInt::one(), BigInt::from(6)]);
        assert_eq!(s.invariant_factors, vec![BigInt::from(6)]);
    }

    #[test]
    fn snf_rectangular_rank_deficient() {
        let a = IntMatrix::from_rows_i64(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let s = smith_normal_form(&a);
        assert!(s.check(&a));
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn hermite_basis_simple() {
        let m = IntMatrix::from_rows_i64(&[vec![2, 1, 0], vec![0, 0, 3]]);
        let b = hermite_column_basis(&m);
        // lattice is Z x 3Z
        assert_eq!(b.cols(), 2);
        assert_eq!(*b.at(0, 0), BigInt::one());
        assert_eq!(*b.at(1, 1), BigInt::from(3));
    }
}
