//! G-lattices and finitely generated G-modules: the carriers of character
//! lattices, cocharacter lattices, fundamental groups and their finite
//! duals. Actions are stored per group element, extended from generator
//! matrices along the enumeration tree and audited against the full
//! multiplication structure.

mod maps;
mod ops;
pub mod sampler;

pub use maps::GModuleMap;
pub use ops::{coinvariants, finite_dual, hom_to_zmod, invariant_generators, invariants_sublattice, TorsionFreeSplit};

use crate::groups::{coset_permutation_action, FiniteGroup, Subgroup};
use crate::zlinalg::{smith_normal_form, solve_in_basis, CongruenceRow, FiniteAbelianGroup, IntMatrix, SmithDecomposition};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::sync::Arc;

/// Witness that a lattice basis is permuted by the group: per element, the
/// image index of every basis vector, plus the orbit blocks it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermCertificate {
    /// perms[g][b] = image basis index of basis vector b under element g
    pub perms: Vec<Vec<usize>>,
    /// (start, length, subgroup order) per coset-lattice block
    pub blocks: Vec<(usize, usize, usize)>,
}

impl PermCertificate {
    fn matches(&self, action: &[IntMatrix]) -> bool {
        action.iter().enumerate().all(|(g, m)| {
            let p = &self.perms[g];
            (0..m.cols()).all(|b| {
                (0..m.rows()).all(|r| {
                    let want = if r == p[b] { BigInt::one() } else { BigInt::zero() };
                    *m.at(r, b) == want
                })
            })
        })
    }
}

/// Free Z-module of finite rank with a group acting by unimodular matrices.
#[derive(Clone, Debug)]
pub struct GLattice {
    group: Arc<FiniteGroup>,
    rank: usize,
    action: Arc<Vec<IntMatrix>>,
    cert: Option<PermCertificate>,
}

impl PartialEq for GLattice {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group)
            && self.rank == other.rank
            && *self.action == *other.action
    }
}

/// Extend generator matrices to all elements along the BFS tree; verify the
/// result is a homomorphism against the multiplication table.
fn extend_action(
    group: &Arc<FiniteGroup>,
    gen_matrices: &[IntMatrix],
    rank: usize,
) -> Result<Vec<IntMatrix>> {
    if gen_matrices.len() != group.generators().len() {
        return Err(Error::Invalid(format!(
            "expected {} action matrices, got {}",
            group.generators().len(),
            gen_matrices.len()
        )));
    }
    for m in gen_matrices {
        if m.rows() != rank || m.cols() != rank {
            return Err(Error::Dimension(format!(
                "action matrix is {}x{}, expected {rank}x{rank}",
                m.rows(),
                m.cols()
            )));
        }
    }
    let n = group.order();
    let mut action: Vec<Option<IntMatrix>> = vec![None; n];
    action[group.identity()] = Some(IntMatrix::identity(rank));
    for &e in group.bfs_order() {
        if let Some((parent, gi)) = group.bfs_edge(e) {
            let pm = action[parent].as_ref().expect("parent visited first");
            action[e] = Some(pm.mul(&gen_matrices[gi]));
        }
    }
    let action: Vec<IntMatrix> = action.into_iter().map(|m| m.expect("bfs covers group")).collect();
    verify_action(group, &action)?;
    Ok(action)
}

/// The extension is a homomorphism iff rho(x * gen) = rho(x) * rho(gen)
/// for every element x and generator (induction over word length).
fn verify_action(group: &Arc<FiniteGroup>, action: &[IntMatrix]) -> Result<()> {
    if !action[group.identity()].is_identity() {
        return Err(Error::ActionRelation("identity does not act trivially".into()));
    }
    for x in 0..group.order() {
        for &g in group.generators() {
            let prod = group.mul(x, g);
            if action[prod] != action[x].mul(&action[g]) {
                return Err(Error::ActionRelation(format!(
                    "rho({x})*rho({g}) != rho({x}*{g})"
                )));
            }
        }
    }
    Ok(())
}

impl GLattice {
    /// Lattice from one action matrix per group generator.
    pub fn from_generator_action(
        group: Arc<FiniteGroup>,
        rank: usize,
        gen_matrices: Vec<IntMatrix>,
    ) -> Result<Self> {
        for m in &gen_matrices {
            if m.rows() == m.cols() && !m.is_unimodular() {
                return Err(Error::Invalid("lattice action matrix is not unimodular".into()));
            }
        }
        let action = extend_action(&group, &gen_matrices, rank)?;
        Ok(Self {
            group,
            rank,
            action: Arc::new(action),
            cert: None,
        })
    }

    /// Internal: from a full per-element action that is already verified.
    pub(crate) fn from_full_action(
        group: Arc<FiniteGroup>,
        rank: usize,
        action: Vec<IntMatrix>,
        cert: Option<PermCertificate>,
    ) -> Result<Self> {
        verify_action(&group, &action)?;
        if let Some(c) = &cert {
            if !c.matches(&action) {
                return Err(Error::InvariantViolation(
                    "permutation certificate does not match the action".into(),
                ));
            }
        }
        Ok(Self {
            group,
            rank,
            action: Arc::new(action),
            cert,
        })
    }

    /// Rank-k lattice with trivial action.
    pub fn trivial(group: Arc<FiniteGroup>, rank: usize) -> Self {
        let n = group.order();
        let action = vec![IntMatrix::identity(rank); n];
        let cert = PermCertificate {
            perms: vec![(0..rank).collect(); n],
            blocks: (0..rank).map(|i| (i, 1, group.order())).collect(),
        };
        Self {
            group,
            rank,
            action: Arc::new(action),
            cert: Some(cert),
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self, element: usize) -> &IntMatrix {
        &self.action[element]
    }

    pub fn action_matrices(&self) -> &[IntMatrix] {
        &self.action
    }

    pub fn certificate(&self) -> Option<&PermCertificate> {
        self.cert.as_ref()
    }

    /// Contragredient lattice: sigma acts by transpose of the inverse
    /// action. Permutation certificates survive unchanged because the
    /// inverse-transpose of a permutation matrix is itself.
    pub fn dual(&self) -> Self {
        let action: Vec<IntMatrix> = (0..self.group.order())
            .map(|g| self.action[self.group.inv(g)].transpose())
            .collect();
        Self {
            group: self.group.clone(),
            rank: self.rank,
            action: Arc::new(action),
            cert: self.cert.clone(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if !Arc::ptr_eq(&self.group, &other.group) {
            return Err(Error::Invalid("direct sum across different groups".into()));
        }
        let action: Vec<IntMatrix> = (0..self.group.order())
            .map(|g| self.action[g].direct_sum(&other.action[g]))
            .collect();
        let cert = match (&self.cert, &other.cert) {
            (Some(a), Some(b)) => Some(PermCertificate {
                perms: (0..self.group.order())
                    .map(|g| {
                        a.perms[g]
                            .iter()
                            .copied()
                            .chain(b.perms[g].iter().map(|&i| i + self.rank))
                            .collect()
                    })
                    .collect(),
                blocks: a
                    .blocks
                    .iter()
                    .copied()
                    .chain(b.blocks.iter().map(|&(s, l, o)| (s + self.rank, l, o)))
                    .collect(),
            }),
            _ => None,
        };
        Ok(Self {
            group: self.group.clone(),
            rank: self.rank + other.rank,
            action: Arc::new(action),
            cert,
        })
    }

    /// View as a finitely generated module with no relations.
    pub fn as_module(&self) -> FgGModule {
        FgGModule {
            group: self.group.clone(),
            ambient: self.rank,
            relations: IntMatrix::zero(self.rank, 0),
            rel_snf: Arc::new(smith_normal_form(&IntMatrix::zero(self.rank, 0))),
            action: self.action.clone(),
        }
    }
}

/// Direct sum of coset lattices Z[G/h], with the permutation certificate
/// attached. The basis is tagged by its G-set structure.
pub fn permutation_module(
    group: &Arc<FiniteGroup>,
    subgroups: &[(Subgroup, usize)],
) -> Result<GLattice> {
    let n = group.order();
    let mut perms: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut blocks = Vec::new();
    let mut offset = 0usize;
    for (h, mult) in subgroups {
        if !Arc::ptr_eq(&h.parent, group) {
            return Err(Error::ForeignSubgroup(
                "permutation module over a foreign subgroup".into(),
            ));
        }
        let act = coset_permutation_action(group, h)?;
        let deg = act.reps.len();
        for _ in 0..*mult {
            for g in 0..n {
                perms[g].extend(act.perms[g].iter().map(|&c| c + offset));
            }
            blocks.push((offset, deg, h.order()));
            offset += deg;
        }
    }
    let rank = offset;
    let action: Vec<IntMatrix> = (0..n)
        .map(|g| {
            IntMatrix::from_fn(rank, rank, |r, c| {
                if perms[g][c] == r {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            })
        })
        .collect();
    GLattice::from_full_action(
        group.clone(),
        rank,
        action,
        Some(PermCertificate { perms, blocks }),
    )
}

/// Finitely generated G-module presented as Z^ambient / im(relations), with
/// a group action on the ambient space that descends to the quotient.
#[derive(Clone, Debug)]
pub struct FgGModule {
    group: Arc<FiniteGroup>,
    ambient: usize,
    relations: IntMatrix,
    rel_snf: Arc<SmithDecomposition>,
    action: Arc<Vec<IntMatrix>>,
}

impl PartialEq for FgGModule {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group)
            && self.ambient == other.ambient
            && self.relations == other.relations
            && *self.action == *other.action
    }
}

impl FgGModule {
    pub fn new(
        group: Arc<FiniteGroup>,
        ambient: usize,
        relations: IntMatrix,
        gen_matrices: Vec<IntMatrix>,
    ) -> Result<Self> {
        let action = extend_action(&group, &gen_matrices, ambient)?;
        Self::from_full_action(group, ambient, relations, action)
    }

    pub(crate) fn from_full_action(
        group: Arc<FiniteGroup>,
        ambient: usize,
        relations: IntMatrix,
        action: Vec<IntMatrix>,
    ) -> Result<Self> {
        if relations.rows() != ambient {
            return Err(Error::Dimension(format!(
                "relations have {} rows, ambient rank is {ambient}",
                relations.rows()
            )));
        }
        verify_action(&group, &action)?;
        let rel_snf = smith_normal_form(&relations);
        // the action must map the relation image into itself
        for &g in group.generators() {
            for j in 0..relations.cols() {
                let img = action[g].mul_vec(&relations.col(j));
                if solve_in_basis(&rel_snf, &img).is_none() {
                    return Err(Error::ActionRelation(format!(
                        "generator {g} does not preserve relation column {j}"
                    )));
                }
            }
        }
        Ok(Self {
            group,
            ambient,
            relations,
            rel_snf: Arc::new(rel_snf),
            action: Arc::new(action),
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn relations_snf(&self) -> &SmithDecomposition {
        &self.rel_snf
    }

    pub fn action(&self, element: usize) -> &IntMatrix {
        &self.action[element]
    }

    pub fn action_matrices(&self) -> &[IntMatrix] {
        &self.action
    }

    /// Membership of an ambient vector in the relation image.
    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        solve_in_basis(&self.rel_snf, v).is_some()
    }

    /// Congruence rows expressing `expr · x ∈ im(relations)` for a matrix
    /// `expr` whose rows live in the ambient space; unit invariant factors
    /// are skipped. `var_offset` shifts variable indices, for block systems.
    pub(crate) fn membership_rows(
        &self,
        expr: &IntMatrix,
        var_offset: usize,
    ) -> Vec<CongruenceRow> {
        membership_rows_for(&self.rel_snf, self.ambient, expr, var_offset)
    }

    /// Canonical form of the underlying abelian group.
    pub fn underlying_group(&self) -> FiniteAbelianGroup {
        let diag = self.rel_snf.diagonal();
        let mut orders: Vec<BigInt> = diag;
        orders.resize(self.ambient, BigInt::zero());
        FiniteAbelianGroup::from_orders(&orders)
    }

    pub fn is_lattice(&self) -> bool {
        self.underlying_group().invariant_factors.is_empty() && self.relations.cols() == 0
            || self.rel_snf.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.underlying_group().is_finite()
    }

    /// Reduce the presentation through the Smith form of the relations:
    /// ambient coordinates with unit invariant factors are dropped, torsion
    /// coordinates keep diagonal relations, free coordinates none. Returns
    /// the canonical presentation together with both halves of the
    /// isomorphism (as ambient-level matrices).
    pub fn normalize(&self) -> Result<NormalizedModule> {
        let u = &self.rel_snf.u;
        let u_inv = &self.rel_snf.u_inv;
        let diag = self.rel_snf.diagonal();
        let mut keep: Vec<usize> = Vec::new();
        let mut orders: Vec<BigInt> = Vec::new();
        for i in 0..self.ambient {
            let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            if !d.is_one() {
                keep.push(i);
                orders.push(d);
            }
        }
        let k = keep.len();
        let all_cols: Vec<usize> = (0..self.ambient).collect();
        let to_canonical = u.submatrix(&keep, &all_cols);
        let from_canonical = u_inv.submatrix(&all_cols, &keep);
        let rel_cols: Vec<Vec<BigInt>> = orders
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(i, d)| {
                let mut col = vec![BigInt::zero(); k];
                col[i] = d.clone();
                col
            })
            .collect();
        let relations = IntMatrix::from_cols(k, rel_cols);
        let action: Vec<IntMatrix> = (0..self.group.order())
            .map(|g| to_canonical.mul(&self.action[g]).mul(&from_canonical))
            .collect();
        let module = FgGModule::from_full_action(self.group.clone(), k, relations, action)?;
        Ok(NormalizedModule {
            module,
            to_canonical,
            from_canonical,
        })
    }

    /// Split off the torsion: an exact 0 -> torsion -> M -> free -> 0 with
    /// the maps realized on presentations. Torsion is characteristic, so
    /// the G-action restricts and descends.
    pub fn torsion_free_split(&self) -> Result<TorsionFreeSplit> {
        ops::torsion_free_split_impl(self)
    }
}

pub(crate) fn membership_rows_for(
    rel_snf: &SmithDecomposition,
    ambient: usize,
    expr: &IntMatrix,
    var_offset: usize,
) -> Vec<CongruenceRow> {
    assert_eq!(expr.rows(), ambient);
    let transformed = rel_snf.u.mul(expr);
    let diag = rel_snf.diagonal();
    let mut rows = Vec::new();
    for s in 0..ambient {
        let d = diag.get(s).cloned().unwrap_or_else(BigInt::zero);
        if d.is_one() {
            continue;
        }
        let coeffs: Vec<(usize, BigInt)> = (0..expr.cols())
            .filter(|&c| !transformed.at(s, c).is_zero())
            .map(|c| (c + var_offset, transformed.at(s, c).clone()))
            .collect();
        if coeffs.is_empty() {
            continue;
        }
        rows.push(CongruenceRow { coeffs, modulus: d });
    }
    rows
}

/// Canonical presentation of a module plus the isomorphism to and from it.
#[derive(Clone, Debug)]
pub struct NormalizedModule {
    pub module: FgGModule,
    /// rows map ambient coordinates onto canonical coordinates
    pub to_canonical: IntMatrix,
    /// columns lift canonical coordinates back to the ambient space
    pub from_canonical: IntMatrix,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::named_group;

    pub(crate) fn sign_lattice(group: &Arc<FiniteGroup>) -> GLattice {
        // Z with the nontrivial element of Z/2 acting by -1
        let m = IntMatrix::from_rows_i64(&[vec![-1]]);
        GLattice::from_generator_action(group.clone(), 1, vec![m]).unwrap()
    }

    #[test]
    fn trivial_lattice_certificate() {
        let g = named_group("Z2").unwrap();
        let l = GLattice::trivial(g, 3);
        assert!(l.certificate().is_some());
        assert_eq!(l.rank(), 3);
    }

    #[test]
    fn regular_lattice_is_self_dual() {
        let g = named_group("S3").unwrap();
        let reps = crate::groups::subgroup_reps(&g);
        let regular = permutation_module(&g, &[(reps[0].clone(), 1)]).unwrap();
        assert_eq!(regular.rank(), 6);
        let dual = regular.dual();
        assert_eq!(regular, dual);
        assert!(dual.certificate().is_some());
    }

    #[test]
    fn sign_lattice_dual_is_itself() {
        let g = named_group("Z2").unwrap();
        let l = sign_lattice(&g);
        assert_eq!(l.dual(), l);
    }

    #[test]
    fn double_dual_is_identity() {
        let g = named_group("S3").unwrap();
        let reps = crate::groups::subgroup_reps(&g);
        let p = permutation_module(&g, &[(reps[1].clone(), 1), (reps[2].clone(), 2)]).unwrap();
        assert_eq!(p.dual().dual(), p);
    }

    #[test]
    fn permutation_module_ranks() {
        let g = named_group("Z2").unwrap();
        let reps = crate::groups::subgroup_reps(&g);
        assert_eq!(reps.len(), 2);
        // [G itself] -> rank 1 trivial
        let one = permutation_module(&g, &[(reps[1].clone(), 1)]).unwrap();
        assert_eq!(one.rank(), 1);
        // [trivial] -> regular of rank 2
        let reg = permutation_module(&g, &[(reps[0].clone(), 1)]).unwrap();
        assert_eq!(reg.rank(), 2);
        // [trivial, G] -> rank 3
        let both =
            permutation_module(&g, &[(reps[0].clone(), 1), (reps[1].clone(), 1)]).unwrap();
        assert_eq!(both.rank(), 3);
    }

    #[test]
    fn action_relation_audit_rejects_bad_matrices() {
        let g = named_group("Z2").unwrap();
        // infinite-order shear cannot satisfy g^2 = e
        let m = IntMatrix::from_rows_i64(&[vec![1, 1], vec![0, 1]]);
        let r = GLattice::from_generator_action(g.clone(), 2, vec![m]);
        assert!(r.is_err());
        // non-faithful actions are fine: Z/4 acting through -1
        let z4 = named_group("Z4").unwrap();
        let m = IntMatrix::from_rows_i64(&[vec![-1]]);
        assert!(GLattice::from_generator_action(z4, 1, vec![m]).is_ok());
    }

    #[test]
    fn module_with_torsion_normalizes() {
        let g = named_group("Z2").unwrap();
        // Z + Z/2 with trivial action
        let rel = IntMatrix::from_rows_i64(&[vec![0], vec![2]]);
        let m = FgGModule::new(g, 2, rel, vec![IntMatrix::identity(2)]).unwrap();
        let grp = m.underlying_group();
        assert_eq!(grp.invariant_factors, vec![BigInt::from(2)]);
        assert_eq!(grp.free_rank, 1);
        let norm = m.normalize().unwrap();
        assert_eq!(norm.module.ambient_rank(), 2);
        assert_eq!(norm.module.underlying_group(), grp);
    }

    #[test]
    fn relation_stability_rejected_when_violated() {
        let g = named_group("Z2").unwrap();
        // relations <(1,0)> but the swap action does not preserve it
        let rel = IntMatrix::from_rows_i64(&[vec![1], vec![0]]);
        let swap = IntMatrix::from_rows_i64(&[vec![0, 1], vec![1, 0]]);
        let r = FgGModule::new(g, 2, rel, vec![swap]);
        assert!(r.is_err());
    }
}
