use super::{
    hermite_column_basis, smith_normal_form, solve_in_basis, FiniteAbelianGroup, IntMatrix,
    SmithDecomposition,
};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// A finitely generated abelian group presented as a quotient `L1 / L2` of
/// sublattices of an ambient `Z^N`, with a canonical form, canonical
/// generator representatives, and coordinates for arbitrary ambient vectors.
///
/// This is the shared engine behind cohomology groups, Sha kernels, Picard
/// cokernels, and exactness audits.
#[derive(Clone, Debug)]
pub struct LatticeQuotient {
    ambient: usize,
    basis: IntMatrix,
    basis_snf: SmithDecomposition,
    rel_snf: SmithDecomposition,
    group: FiniteAbelianGroup,
    /// positions (in basis coordinates, post-U) kept as canonical coords:
    /// torsion positions then free positions
    torsion_pos: Vec<usize>,
    free_pos: Vec<usize>,
}

impl LatticeQuotient {
    /// `basis` columns must be a basis of L1; every column of `l2_gens`
    /// (ambient coordinates) must lie in L1.
    pub fn from_basis(basis: IntMatrix, l2_gens: &IntMatrix) -> Result<Self> {
        let ambient = basis.rows();
        let r = basis.cols();
        let basis_snf = smith_normal_form(&basis);
        if basis_snf.rank() != r {
            return Err(Error::InvariantViolation(
                "quotient basis columns are dependent".into(),
            ));
        }
        let mut rel_cols: Vec<Vec<BigInt>> = Vec::with_capacity(l2_gens.cols());
        for j in 0..l2_gens.cols() {
            let col = l2_gens.col(j);
            let sol = solve_in_basis(&basis_snf, &col).ok_or_else(|| {
                Error::InvariantViolation("relation generator not inside the sublattice".into())
            })?;
            rel_cols.push(sol);
        }
        let rel = IntMatrix::from_cols(r, rel_cols);
        let rel_snf = smith_normal_form(&rel);
        let diag = rel_snf.diagonal();
        let mut torsion_pos = Vec::new();
        let mut free_pos = Vec::new();
        let mut invariant_factors = Vec::new();
        for i in 0..r {
            let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            if d.is_zero() {
                free_pos.push(i);
            } else if !d.is_one() {
                torsion_pos.push(i);
                invariant_factors.push(d);
            }
        }
        let group = FiniteAbelianGroup {
            invariant_factors,
            free_rank: free_pos.len(),
        };
        Ok(Self {
            ambient,
            basis,
            basis_snf,
            rel_snf,
            group,
            torsion_pos,
            free_pos,
        })
    }

    /// Build from a generating set of L1 (not necessarily independent).
    pub fn from_generators(l1_gens: &IntMatrix, l2_gens: &IntMatrix) -> Result<Self> {
        let basis = hermite_column_basis(l1_gens);
        Self::from_basis(basis, l2_gens)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn is_trivial(&self) -> bool {
        self.group.is_trivial()
    }

    pub fn lattice_basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Orders of the canonical generators: invariant factors then zeros for
    /// the free generators.
    pub fn generator_orders(&self) -> Vec<BigInt> {
        let mut o = self.group.invariant_factors.clone();
        o.extend(std::iter::repeat(BigInt::zero()).take(self.group.free_rank));
        o
    }

    /// Ambient representatives of the canonical generators, torsion first.
    pub fn canonical_generator_reps(&self) -> Vec<Vec<BigInt>> {
        self.torsion_pos
            .iter()
            .chain(self.free_pos.iter())
            .map(|&i| {
                let coeffs = self.rel_snf.u_inv.col(i);
                self.basis.mul_vec(&coeffs)
            })
            .collect()
    }

    /// Membership of an ambient vector in L1.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        solve_in_basis(&self.basis_snf, v).is_some()
    }

    /// Canonical coordinates of the class of `v` (torsion coords reduced mod
    /// their invariant factor, then free coords). None if `v` is not in L1.
    pub fn class_coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = solve_in_basis(&self.basis_snf, v)?;
        let w = self.rel_snf.u.mul_vec(&y);
        let diag = self.rel_snf.diagonal();
        let mut out = Vec::with_capacity(self.torsion_pos.len() + self.free_pos.len());
        for &i in &self.torsion_pos {
            out.push(w[i].mod_floor(&diag[i]));
        }
        for &i in &self.free_pos {
            out.push(w[i].clone());
        }
        Some(out)
    }

    pub fn is_zero_class(&self, v: &[BigInt]) -> bool {
        match self.class_coords(v) {
            Some(c) => c.iter().all(Zero::is_zero),
            None => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_z_by_2z() {
        let l1 = IntMatrix::identity(1);
        let l2 = IntMatrix::from_rows_i64(&[vec![2]]);
        let q = LatticeQuotient::from_basis(l1, &l2).unwrap();
        assert_eq!(*q.group(), FiniteAbelianGroup::cyclic(2));
        let reps = q.canonical_generator_reps();
        assert_eq!(reps.len(), 1);
        assert!(q.is_zero_class(&[BigInt::from(4)]));
        assert!(!q.is_zero_class(&[BigInt::from(3)]));
    }

    #[test]
    fn quotient_with_free_part() {
        // Z^2 / <(2, 0)> = Z/2 + Z
        let l1 = IntMatrix::identity(2);
        let l2 = IntMatrix::from_rows_i64(&[vec![2], vec![0]]);
        let q = LatticeQuotient::from_basis(l1, &l2).unwrap();
        assert_eq!(q.group().invariant_factors, vec![BigInt::from(2)]);
        assert_eq!(q.group().free_rank, 1);
    }

    #[test]
    fn sublattice_quotient() {
        // L1 = 2Z x Z inside Z^2, L2 = <(4,0),(0,3)>: quotient Z/2 + Z/3 = Z/6
        let l1 = IntMatrix::from_rows_i64(&[vec![2, 0], vec![0, 1]]);
        let l2 = IntMatrix::from_rows_i64(&[vec![4, 0], vec![0, 3]]);
        let q = LatticeQuotient::from_basis(l1, &l2).unwrap();
        assert_eq!(*q.group(), FiniteAbelianGroup::cyclic(6));
    }

    #[test]
    fn rejects_vector_outside_l1() {
        let l1 = IntMatrix::from_rows_i64(&[vec![2], vec![0]]);
        let l2 = IntMatrix::zero(2, 0);
        let q = LatticeQuotient::from_basis(l1, &l2).unwrap();
        assert!(q.contains(&[BigInt::from(4), BigInt::zero()]));
        assert!(!q.contains(&[BigInt::from(1), BigInt::zero()]));
        assert!(q.class_coords(&[BigInt::from(1), BigInt::zero()]).is_none());
    }

    #[test]
    fn generator_reps_hit_canonical_coords() {
        let l1 = IntMatrix::identity(2);
        let l2 = IntMatrix::from_rows_i64(&[vec![2, 0], vec![0, 6]]);
        let q = LatticeQuotient::from_generators(&l1, &l2).unwrap();
        assert_eq!(
            q.group().invariant_factors,
            vec![BigInt::from(2), BigInt::from(6)]
        );
        let reps = q.canonical_generator_reps();
        let orders = q.generator_orders();
        assert_eq!(reps.len(), 2);
        for (rep, ord) in reps.iter().zip(&orders) {
            // ord * rep must be a zero class, and rep itself must not be
            let scaled: Vec<BigInt> = rep.iter().map(|x| x * ord).collect();
            assert!(q.is_zero_class(&scaled));
            assert!(!q.is_zero_class(rep));
        }
    }
}
