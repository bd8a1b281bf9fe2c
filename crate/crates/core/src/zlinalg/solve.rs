use super::{smith_normal_form, IntMatrix, SmithDecomposition};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// One linear condition `sum coeffs[i] * y[i] ≡ 0 (mod modulus)`.
/// Modulus zero means an exact equation over the integers.
#[derive(Clone, Debug)]
pub struct CongruenceRow {
    pub coeffs: Vec<(usize, BigInt)>,
    pub modulus: BigInt,
}

impl CongruenceRow {
    pub fn exact(coeffs: Vec<(usize, BigInt)>) -> Self {
        Self {
            coeffs,
            modulus: BigInt::zero(),
        }
    }
}

/// Basis of the solution lattice `{ y in Z^n : every row holds }`.
///
/// Rows are processed incrementally against a shrinking column basis, so the
/// cost adapts to how quickly the conditions cut the space down. The result
/// is an honest basis (independent columns), and for purely exact rows the
/// lattice is the saturated kernel.
pub fn solve_congruences(
    nvars: usize,
    rows: impl IntoIterator<Item = CongruenceRow>,
) -> IntMatrix {
    // columns of the current basis
    let mut basis: Vec<Vec<BigInt>> = (0..nvars)
        .map(|i| {
            let mut v = vec![BigInt::zero(); nvars];
            v[i] = BigInt::one();
            v
        })
        .collect();
    for row in rows {
        if basis.is_empty() {
            break;
        }
        // w[j] = row . basis[j]
        let mut w: Vec<BigInt> = basis
            .iter()
            .map(|col| {
                let mut acc = BigInt::zero();
                for (i, c) in &row.coeffs {
                    if !col[*i].is_zero() {
                        acc += c * &col[*i];
                    }
                }
                acc
            })
            .collect();
        if !row.modulus.is_zero() {
            for x in w.iter_mut() {
                *x = x.mod_floor(&row.modulus);
            }
        }
        // eliminate w down to at most one nonzero entry by unimodular column ops
        loop {
            let mut live: Vec<usize> = (0..w.len()).filter(|&j| !w[j].is_zero()).collect();
            if live.len() <= 1 {
                break;
            }
            live.sort_by(|&a, &b| w[a].abs().cmp(&w[b].abs()).then(a.cmp(&b)));
            let p = live[0];
            for &j in &live[1..] {
                let q = &w[j] / &w[p];
                if !q.is_zero() {
                    let sub = &q * &w[p];
                    w[j] -= sub;
                    for k in 0..nvars {
                        let s = &q * &basis[p][k];
                        basis[j][k] -= s;
                    }
                }
            }
        }
        if let Some(p) = (0..w.len()).find(|&j| !w[j].is_zero()) {
            if row.modulus.is_zero() {
                basis.remove(p);
            } else {
                let g = w[p].gcd(&row.modulus);
                let scale = &row.modulus / &g;
                if !scale.is_one() {
                    for k in 0..nvars {
                        let s = &basis[p][k] * &scale;
                        basis[p][k] = s;
                    }
                }
            }
        }
    }
    IntMatrix::from_cols(nvars, basis)
}

/// Saturated integer kernel of `A`: columns form a basis of
/// `{ x : A x = 0 }`, the full kernel (never a finite-index sublattice).
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let rows = (0..a.rows()).map(|r| {
        CongruenceRow::exact(
            (0..a.cols())
                .filter(|&c| !a.at(r, c).is_zero())
                .map(|c| (c, a.at(r, c).clone()))
                .collect(),
        )
    });
    solve_congruences(a.cols(), rows)
}

#[derive(Clone, Debug)]
pub struct IntegerSolution {
    pub particular: Vec<BigInt>,
    pub kernel: IntMatrix,
}

/// Solve `A x = b` over the integers through a Smith decomposition.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<IntegerSolution> {
    assert_eq!(a.rows(), b.len(), "rhs length must match rows");
    let snf = smith_normal_form(a);
    let particular = solve_in_basis(&snf, b)?;
    let r = snf.rank();
    let kernel_cols: Vec<usize> = (r..a.cols()).collect();
    Some(IntegerSolution {
        particular,
        kernel: snf.v.select_cols(&kernel_cols),
    })
}

/// Solve `A x = b` reusing a precomputed Smith decomposition of `A`.
pub fn solve_in_basis(snf: &SmithDecomposition, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let c = snf.u.mul_vec(b);
    let r = snf.rank();
    let cols = snf.v.rows();
    let mut y = vec![BigInt::zero(); cols];
    for (i, ci) in c.iter().enumerate() {
        if i < r {
            let d = snf.d.at(i, i);
            let (q, rem) = ci.div_rem(d);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ci.is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_row() {
        // [[1, 1]] -> span of (1, -1)
        let a = IntMatrix::from_rows_i64(&[vec![1, 1]]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 1);
        assert_eq!(k.at(0, 0) + k.at(1, 0), BigInt::zero());
        assert!(k.at(0, 0).abs().is_one());
    }

    #[test]
    fn kernel_of_zero_map() {
        let a = IntMatrix::zero(2, 3);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 3);
    }

    #[test]
    fn kernel_trivial_when_det_nonzero() {
        let a = IntMatrix::from_rows_i64(&[vec![2, 4], vec![6, 8]]);
        assert!(!a.det().is_zero());
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 0);
    }

    #[test]
    fn kernel_is_saturated() {
        // map with kernel (1, -2) -- not (2, -4)
        let a = IntMatrix::from_rows_i64(&[vec![2, 1]]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 1);
        let g = k.at(0, 0).gcd(k.at(1, 0));
        assert!(g.is_one());
    }

    #[test]
    fn solve_simple() {
        let a = IntMatrix::from_rows_i64(&[vec![2]]);
        let sol = solve_integer(&a, &[BigInt::from(4)]).unwrap();
        assert_eq!(sol.particular, vec![BigInt::from(2)]);
        assert!(solve_integer(&a, &[BigInt::from(3)]).is_none());
    }

    #[test]
    fn solve_triangular() {
        let a = IntMatrix::from_rows_i64(&[vec![1, 1], vec![0, 2]]);
        let sol = solve_integer(&a, &[BigInt::from(1), BigInt::from(2)]).unwrap();
        let check = a.mul_vec(&sol.particular);
        assert_eq!(check, vec![BigInt::from(1), BigInt::from(2)]);
    }

    #[test]
    fn congruence_modular() {
        // y ≡ 0 mod 4 in Z^1
        let rows = vec![CongruenceRow {
            coeffs: vec![(0, BigInt::one())],
            modulus: BigInt::from(4),
        }];
        let b = solve_congruences(1, rows);
        assert_eq!(b.cols(), 1);
        assert_eq!(*b.at(0, 0), BigInt::from(4));
    }

    #[test]
    fn congruence_mixed() {
        // x + y = 0 exactly, and x ≡ 0 mod 2: solutions (2k, -2k)
        let rows = vec![
            CongruenceRow::exact(vec![(0, BigInt::one()), (1, BigInt::one())]),
            CongruenceRow {
                coeffs: vec![(0, BigInt::one())],
                modulus: BigInt::from(2),
            },
        ];
        let b = solve_congruences(2, rows);
        assert_eq!(b.cols(), 1);
        assert_eq!(b.at(0, 0).abs(), BigInt::from(2));
        assert_eq!(b.at(0, 0) + b.at(1, 0), BigInt::zero());
    }
}
