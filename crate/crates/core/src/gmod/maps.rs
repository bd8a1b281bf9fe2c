use super::FgGModule;
use crate::zlinalg::{
    solve_congruences, solve_in_basis, smith_normal_form, IntMatrix, LatticeQuotient,
};
use crate::{Error, Result};
use num_bigint::BigInt;
use std::sync::Arc;

/// Equivariant map between presented modules, given by a matrix on the
/// ambient spaces. Equivariance and relation transport are verified modulo
/// the target relations at construction.
#[derive(Clone, Debug)]
pub struct GModuleMap {
    pub source: FgGModule,
    pub target: FgGModule,
    pub matrix: IntMatrix,
}

impl GModuleMap {
    pub fn new(source: FgGModule, target: FgGModule, matrix: IntMatrix) -> Result<Self> {
        if !Arc::ptr_eq(source.group(), target.group()) {
            return Err(Error::Invalid("map across different groups".into()));
        }
        if matrix.rows() != target.ambient_rank() || matrix.cols() != source.ambient_rank() {
            return Err(Error::Dimension(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.ambient_rank(),
                source.ambient_rank()
            )));
        }
        let map = Self {
            source,
            target,
            matrix,
        };
        map.verify()?;
        Ok(map)
    }

    fn verify(&self) -> Result<()> {
        let g = self.source.group();
        for &gen in g.generators() {
            let lhs = self.target.action(gen).mul(&self.matrix);
            let rhs = self.matrix.mul(self.source.action(gen));
            let diff = lhs.sub(&rhs);
            for j in 0..diff.cols() {
                if !self.target.is_zero_element(&diff.col(j)) {
                    return Err(Error::ActionRelation(format!(
                        "map does not commute with generator {gen} on column {j}"
                    )));
                }
            }
        }
        let moved = self.matrix.mul(self.source.relations());
        for j in 0..moved.cols() {
            if !self.target.is_zero_element(&moved.col(j)) {
                return Err(Error::InvariantViolation(format!(
                    "map does not send source relation {j} into target relations"
                )));
            }
        }
        Ok(())
    }

    pub fn identity(module: &FgGModule) -> Self {
        Self {
            source: module.clone(),
            target: module.clone(),
            matrix: IntMatrix::identity(module.ambient_rank()),
        }
    }

    /// other ∘ self.
    pub fn then(&self, other: &GModuleMap) -> Result<GModuleMap> {
        if self.target != other.source {
            return Err(Error::Invalid("composition of non-matching maps".into()));
        }
        GModuleMap::new(
            self.source.clone(),
            other.target.clone(),
            other.matrix.mul(&self.matrix),
        )
    }

    /// Lattice `{ x : F x ∈ im R_target }` in the source ambient space;
    /// together with the source relations it presents ker(induced map).
    pub fn kernel_preimage_basis(&self) -> IntMatrix {
        let rows = super::membership_rows_for(
            self.target.relations_snf(),
            self.target.ambient_rank(),
            &self.matrix,
            0,
        );
        solve_congruences(self.source.ambient_rank(), rows)
    }

    /// Kernel of the induced map, as a lattice quotient (trivial iff the
    /// induced map is injective).
    pub fn kernel_quotient(&self) -> Result<LatticeQuotient> {
        let k = self.kernel_preimage_basis();
        LatticeQuotient::from_basis(k, self.source.relations())
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel_quotient()?.is_trivial())
    }

    /// Cokernel of the induced map as a module over the same group.
    pub fn cokernel_module(&self) -> Result<FgGModule> {
        let rel = self.matrix.hstack(self.target.relations());
        FgGModule::from_full_action(
            self.target.group().clone(),
            self.target.ambient_rank(),
            rel,
            self.target.action_matrices().to_vec(),
        )
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.cokernel_module()?.underlying_group().is_trivial())
    }

    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.is_injective()? && self.is_surjective()?)
    }

    /// Kernel of the induced map presented as a module: ambient = basis of
    /// the preimage lattice, relations = source relations in that basis,
    /// action = restricted source action.
    pub fn kernel_module(&self) -> Result<FgGModule> {
        let basis = self.kernel_preimage_basis();
        let basis_snf = smith_normal_form(&basis);
        let k = basis.cols();
        let group = self.source.group().clone();
        let mut action = Vec::with_capacity(group.order());
        for g in 0..group.order() {
            let moved = self.source.action(g).mul(&basis);
            let mut cols = Vec::with_capacity(k);
            for j in 0..k {
                let sol = solve_in_basis(&basis_snf, &moved.col(j)).ok_or_else(|| {
                    Error::InvariantViolation("kernel lattice is not G-stable".into())
                })?;
                cols.push(sol);
            }
            action.push(IntMatrix::from_cols(k, cols));
        }
        let mut rel_cols: Vec<Vec<BigInt>> = Vec::new();
        for j in 0..self.source.relations().cols() {
            let sol = solve_in_basis(&basis_snf, &self.source.relations().col(j))
                .ok_or_else(|| {
                    Error::InvariantViolation("source relations escape the kernel lattice".into())
                })?;
            rel_cols.push(sol);
        }
        let relations = IntMatrix::from_cols(k, rel_cols);
        FgGModule::from_full_action(group, k, relations, action)
    }
}

/// Exactness of `0 -> A -> B -> C -> 0` presented by two maps:
/// injectivity at A, im(f) = ker(g) at B, surjectivity at C.
pub fn short_sequence_exact(f: &GModuleMap, g: &GModuleMap) -> Result<bool> {
    if f.target != g.source {
        return Err(Error::Invalid("maps do not chain".into()));
    }
    if !f.is_injective()? {
        return Ok(false);
    }
    if !g.is_surjective()? {
        return Ok(false);
    }
    // composite must vanish
    let comp = g.matrix.mul(&f.matrix);
    for j in 0..comp.cols() {
        if !g.target.is_zero_element(&comp.col(j)) {
            return Ok(false);
        }
    }
    // ker(g) / (im f + relations) must be trivial
    let ker = g.kernel_preimage_basis();
    let l2 = f.matrix.hstack(f.target.relations());
    let q = LatticeQuotient::from_basis(ker, &l2)?;
    Ok(q.is_trivial())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmod::GLattice;
    use crate::groups::named_group;

    #[test]
    fn multiplication_by_two_on_z() {
        let g = named_group("1").unwrap();
        let z = GLattice::trivial(g.clone(), 1).as_module();
        let rel = IntMatrix::from_rows_i64(&[vec![2]]);
        let z2 = FgGModule::new(g, 1, rel, vec![]).unwrap();
        let double = GModuleMap::new(z.clone(), z.clone(), IntMatrix::from_rows_i64(&[vec![2]]))
            .unwrap();
        assert!(double.is_injective().unwrap());
        assert!(!double.is_surjective().unwrap());
        let proj = GModuleMap::new(z.clone(), z2, IntMatrix::identity(1)).unwrap();
        assert!(proj.is_surjective().unwrap());
        assert!(short_sequence_exact(&double, &proj).unwrap());
    }

    #[test]
    fn non_exact_detected() {
        let g = named_group("1").unwrap();
        let z = GLattice::trivial(g.clone(), 1).as_module();
        let rel = IntMatrix::from_rows_i64(&[vec![4]]);
        let z4 = FgGModule::new(g, 1, rel, vec![]).unwrap();
        let double = GModuleMap::new(z.clone(), z.clone(), IntMatrix::from_rows_i64(&[vec![2]]))
            .unwrap();
        let proj = GModuleMap::new(z.clone(), z4, IntMatrix::identity(1)).unwrap();
        // im(x2) = 2Z but ker(Z -> Z/4) = 4Z: not exact in the middle
        assert!(!short_sequence_exact(&double, &proj).unwrap());
    }

    #[test]
    fn kernel_module_of_projection() {
        let g = named_group("Z2").unwrap();
        let reg = crate::gmod::permutation_module(
            &g,
            &[(crate::groups::subgroup_reps(&g)[0].clone(), 1)],
        )
        .unwrap()
        .as_module();
        // augmentation to the trivial lattice
        let triv = GLattice::trivial(g, 1).as_module();
        let aug = GModuleMap::new(reg.clone(), triv, IntMatrix::from_rows_i64(&[vec![1, 1]]))
            .unwrap();
        assert!(aug.is_surjective().unwrap());
        let ker = aug.kernel_module().unwrap();
        // augmentation ideal of Z[Z/2] is free of rank 1 with sign action
        assert_eq!(ker.ambient_rank(), 1);
        let nontrivial = (0..2).find(|&e| e != ker.group().identity()).unwrap();
        assert_eq!(*ker.action(nontrivial).at(0, 0), BigInt::from(-1));
    }
}
