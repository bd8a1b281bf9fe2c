use super::{FgGModule, GLattice};
use crate::groups::Subgroup;
use crate::zlinalg::{
    hermite_column_basis, solve_congruences, CongruenceRow, IntMatrix,
};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::sync::Arc;

/// Saturated basis of the sublattice of `m` fixed pointwise by `h`,
/// as columns in ambient coordinates.
pub fn invariants_sublattice(m: &GLattice, h: &Subgroup) -> Result<IntMatrix> {
    if !Arc::ptr_eq(m.group(), &h.parent) {
        return Err(Error::ForeignSubgroup("invariants under foreign subgroup".into()));
    }
    let n = m.rank();
    let mut rows = Vec::new();
    for &sigma in &h.elements {
        if sigma == m.group().identity() {
            continue;
        }
        let a = m.action(sigma);
        for r in 0..n {
            let coeffs: Vec<(usize, BigInt)> = (0..n)
                .filter_map(|c| {
                    let mut v = a.at(r, c).clone();
                    if r == c {
                        v -= BigInt::one();
                    }
                    if v.is_zero() {
                        None
                    } else {
                        Some((c, v))
                    }
                })
                .collect();
            if !coeffs.is_empty() {
                rows.push(CongruenceRow::exact(coeffs));
            }
        }
    }
    Ok(solve_congruences(n, rows))
}

/// Hermite-reduced generating set for the invariants `M^h` of a finitely
/// generated module: columns span the full preimage lattice
/// `{ x : (sigma - 1) x ∈ im R for all sigma in h }`, so their classes
/// generate M^h including its torsion part. Deterministic ordering.
pub fn invariant_generators(m: &FgGModule, h: &Subgroup) -> Result<IntMatrix> {
    if !Arc::ptr_eq(m.group(), &h.parent) {
        return Err(Error::ForeignSubgroup("invariants under foreign subgroup".into()));
    }
    let n = m.ambient_rank();
    let mut rows = Vec::new();
    for &sigma in &h.elements {
        if sigma == m.group().identity() {
            continue;
        }
        let mut diff = m.action(sigma).clone();
        for i in 0..n {
            let v = diff.at(i, i) - BigInt::one();
            diff.set(i, i, v);
        }
        rows.extend(m.membership_rows(&diff, 0));
    }
    let basis = solve_congruences(n, rows);
    Ok(hermite_column_basis(&basis))
}

/// Coinvariants M_h: quotient of M by the span of `m - sigma m`. The
/// residual action matrices are the same; construction fails when the
/// augmentation span is not G-stable (h not normal), which never happens
/// for the h = G use this models.
pub fn coinvariants(m: &FgGModule, h: &Subgroup) -> Result<FgGModule> {
    if !Arc::ptr_eq(m.group(), &h.parent) {
        return Err(Error::ForeignSubgroup("coinvariants under foreign subgroup".into()));
    }
    let n = m.ambient_rank();
    let mut rel = m.relations().clone();
    for &sigma in &h.elements {
        if sigma == m.group().identity() {
            continue;
        }
        let mut diff = m.action(sigma).clone();
        for i in 0..n {
            let v = diff.at(i, i) - BigInt::one();
            diff.set(i, i, v);
        }
        rel = rel.hstack(&diff);
    }
    FgGModule::from_full_action(
        m.group().clone(),
        n,
        rel,
        m.action_matrices().to_vec(),
    )
}

/// Torsion / free decomposition of a module, with the two presentation
/// maps realizing 0 -> torsion -> M -> free -> 0.
#[derive(Clone, Debug)]
pub struct TorsionFreeSplit {
    pub torsion: FgGModule,
    pub free_quotient: GLattice,
    /// torsion ambient -> M ambient
    pub torsion_to_module: IntMatrix,
    /// M ambient -> free ambient
    pub module_to_free: IntMatrix,
}

pub(super) fn torsion_free_split_impl(m: &FgGModule) -> Result<TorsionFreeSplit> {
    let snf = m.relations_snf();
    let diag = snf.diagonal();
    let n = m.ambient_rank();
    let mut torsion_pos = Vec::new();
    let mut free_pos = Vec::new();
    let mut torsion_orders = Vec::new();
    for i in 0..n {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            free_pos.push(i);
        } else if !d.is_one() {
            torsion_pos.push(i);
            torsion_orders.push(d);
        }
    }
    let all: Vec<usize> = (0..n).collect();
    let u = &snf.u;
    let u_inv = &snf.u_inv;
    let t = torsion_pos.len();
    let f = free_pos.len();
    // torsion block in Smith coordinates
    let torsion_action: Vec<IntMatrix> = (0..m.group().order())
        .map(|g| {
            let conj = u.mul(m.action(g)).mul(u_inv);
            conj.submatrix(&torsion_pos, &torsion_pos)
        })
        .collect();
    let torsion_rel = IntMatrix::from_fn(t, t, |r, c| {
        if r == c {
            torsion_orders[r].clone()
        } else {
            BigInt::zero()
        }
    });
    let torsion = FgGModule::from_full_action(m.group().clone(), t, torsion_rel, torsion_action)?;
    let free_action: Vec<IntMatrix> = (0..m.group().order())
        .map(|g| {
            let conj = u.mul(m.action(g)).mul(u_inv);
            conj.submatrix(&free_pos, &free_pos)
        })
        .collect();
    let free_quotient =
        GLattice::from_full_action(m.group().clone(), f, free_action, None)?;
    let torsion_to_module = u_inv.submatrix(&all, &torsion_pos);
    let module_to_free = u.submatrix(&free_pos, &all);
    Ok(TorsionFreeSplit {
        torsion,
        free_quotient,
        torsion_to_module,
        module_to_free,
    })
}

/// Pontryagin-style dual Hom(A, Q/Z) of a finite module, with the action
/// (sigma f)(a) = f(sigma^{-1} a). Presented on the canonical form of A.
pub fn finite_dual(a: &FgGModule) -> Result<FgGModule> {
    if !a.is_finite() {
        return Err(Error::Invalid("finite_dual of a module with free rank".into()));
    }
    let norm = a.normalize()?;
    let canon = &norm.module;
    let k = canon.ambient_rank();
    let orders: Vec<BigInt> = {
        let diag = canon.relations_snf().diagonal();
        (0..k).map(|i| diag[i].clone()).collect()
    };
    dual_with_orders(canon, &orders)
}

/// Hom(M, Z/n) with the same contragredient action, computed on the
/// canonical presentation. Order of the result is
/// n^free_rank * prod gcd(d_i, n).
pub fn hom_to_zmod(m: &FgGModule, n: &BigInt) -> Result<FgGModule> {
    if n < &BigInt::one() {
        return Err(Error::Invalid("hom_to_zmod needs n >= 1".into()));
    }
    let norm = m.normalize()?;
    let canon = &norm.module;
    let k = canon.ambient_rank();
    let diag = canon.relations_snf().diagonal();
    // gcd with the coordinate order; free coordinates contribute Z/n
    let orders: Vec<BigInt> = (0..k)
        .map(|i| {
            let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            if d.is_zero() {
                n.clone()
            } else {
                d.gcd(n)
            }
        })
        .collect();
    dual_with_orders(canon, &orders)
}

/// Shared kernel of finite_dual and hom_to_zmod: given a canonical module
/// with coordinate orders o_i and target orders g_i, the dual of the basis
/// functional f_j transforms by E(sigma)_{ij} = g_i * C(sigma^{-1})_{ji} / g_j,
/// which is integral because the action preserves the relation image.
fn dual_with_orders(canon: &FgGModule, target_orders: &[BigInt]) -> Result<FgGModule> {
    let k = canon.ambient_rank();
    let group = canon.group().clone();
    let mut action = Vec::with_capacity(group.order());
    for g in 0..group.order() {
        let c_inv = canon.action(group.inv(g));
        let mat = IntMatrix::from_fn(k, k, |i, j| {
            let num = &target_orders[i] * c_inv.at(j, i);
            let (q, r) = num.div_rem(&target_orders[j]);
            assert!(r.is_zero(), "dual action failed integrality");
            q
        });
        action.push(mat);
    }
    let rel = IntMatrix::from_fn(k, k, |r, c| {
        if r == c {
            target_orders[r].clone()
        } else {
            BigInt::zero()
        }
    });
    FgGModule::from_full_action(group, k, rel, action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmod::permutation_module;
    use crate::groups::{named_group, subgroup_reps};
    use crate::zlinalg::FiniteAbelianGroup;

    fn z2() -> Arc<crate::groups::FiniteGroup> {
        named_group("Z2").unwrap()
    }

    fn sign_lattice(g: &Arc<crate::groups::FiniteGroup>) -> GLattice {
        GLattice::from_generator_action(
            g.clone(),
            1,
            vec![IntMatrix::from_rows_i64(&[vec![-1]])],
        )
        .unwrap()
    }

    #[test]
    fn invariants_of_trivial_action_are_everything() {
        let g = z2();
        let l = GLattice::trivial(g.clone(), 2);
        let full = subgroup_reps(&g).last().unwrap().clone();
        let inv = invariants_sublattice(&l, &full).unwrap();
        assert_eq!(inv.cols(), 2);
    }

    #[test]
    fn invariants_of_sign_lattice_vanish() {
        let g = z2();
        let l = sign_lattice(&g);
        let full = subgroup_reps(&g).last().unwrap().clone();
        let inv = invariants_sublattice(&l, &full).unwrap();
        assert_eq!(inv.cols(), 0);
    }

    #[test]
    fn invariants_of_regular_z2_lattice() {
        let g = z2();
        let reps = subgroup_reps(&g);
        let reg = permutation_module(&g, &[(reps[0].clone(), 1)]).unwrap();
        let full = reps.last().unwrap().clone();
        let inv = invariants_sublattice(&reg, &full).unwrap();
        // spanned by e + sigma(e)
        assert_eq!(inv.cols(), 1);
        assert_eq!(inv.at(0, 0).abs(), BigInt::one());
        assert_eq!(inv.at(0, 0), inv.at(1, 0));
    }

    #[test]
    fn coinvariants_examples() {
        let g = z2();
        let reps = subgroup_reps(&g);
        let full = reps.last().unwrap().clone();
        // regular lattice: coinvariants Z
        let reg = permutation_module(&g, &[(reps[0].clone(), 1)]).unwrap();
        let co = coinvariants(&reg.as_module(), &full).unwrap();
        assert_eq!(co.underlying_group(), FiniteAbelianGroup::free(1));
        // sign lattice: coinvariants Z/2
        let sgn = sign_lattice(&g);
        let co = coinvariants(&sgn.as_module(), &full).unwrap();
        assert_eq!(co.underlying_group(), FiniteAbelianGroup::cyclic(2));
        // trivial action: M itself
        let t = GLattice::trivial(g.clone(), 2);
        let co = coinvariants(&t.as_module(), &full).unwrap();
        assert_eq!(co.underlying_group(), FiniteAbelianGroup::free(2));
    }

    #[test]
    fn torsion_free_split_of_mixed_module() {
        let g = z2();
        // Z + Z/2 with trivial action
        let rel = IntMatrix::from_rows_i64(&[vec![0], vec![2]]);
        let m = FgGModule::new(g, 2, rel, vec![IntMatrix::identity(2)]).unwrap();
        let split = m.torsion_free_split().unwrap();
        assert_eq!(split.torsion.underlying_group(), FiniteAbelianGroup::cyclic(2));
        assert_eq!(split.free_quotient.rank(), 1);
        // lattice input: torsion 0
        let l = GLattice::trivial(named_group("Z2").unwrap(), 3).as_module();
        let split = l.torsion_free_split().unwrap();
        assert!(split.torsion.underlying_group().is_trivial());
        assert_eq!(split.free_quotient.rank(), 3);
    }

    #[test]
    fn finite_dual_preserves_order_and_twists() {
        let g = z2();
        // Z/3 with the nontrivial element acting by -1
        let rel = IntMatrix::from_rows_i64(&[vec![3]]);
        let m = FgGModule::new(g.clone(), 1, rel, vec![IntMatrix::from_rows_i64(&[vec![-1]])])
            .unwrap();
        let d = finite_dual(&m).unwrap();
        assert_eq!(d.underlying_group(), FiniteAbelianGroup::cyclic(3));
        // action still by -1 (mod 3): entry is 2 or -1 up to the relation
        let e = d.action(1 - d.group().identity());
        let val = e.at(0, 0).mod_floor(&BigInt::from(3));
        assert_eq!(val, BigInt::from(2));
        // trivial Z/n self-dual
        let rel = IntMatrix::from_rows_i64(&[vec![5]]);
        let m5 = FgGModule::new(g, 1, rel, vec![IntMatrix::identity(1)]).unwrap();
        let d5 = finite_dual(&m5).unwrap();
        assert_eq!(d5.underlying_group(), FiniteAbelianGroup::cyclic(5));
    }

    #[test]
    fn finite_dual_swap_module() {
        let g = z2();
        // (Z/2)^2 with swap action
        let rel = IntMatrix::from_rows_i64(&[vec![2, 0], vec![0, 2]]);
        let swap = IntMatrix::from_rows_i64(&[vec![0, 1], vec![1, 0]]);
        let m = FgGModule::new(g, 2, rel, vec![swap]).unwrap();
        let d = finite_dual(&m).unwrap();
        assert_eq!(
            d.underlying_group(),
            FiniteAbelianGroup::from_orders(&[BigInt::from(2), BigInt::from(2)])
        );
        // double dual has the same canonical data
        let dd = finite_dual(&d).unwrap();
        assert_eq!(dd.underlying_group(), d.underlying_group());
    }

    #[test]
    fn finite_dual_rejects_free_rank() {
        let g = z2();
        let m = GLattice::trivial(g, 1).as_module();
        assert!(finite_dual(&m).is_err());
    }

    #[test]
    fn hom_to_zmod_orders() {
        let g = z2();
        // M = Z, n = 5 -> Z/5
        let zt = GLattice::trivial(g.clone(), 1).as_module();
        let h = hom_to_zmod(&zt, &BigInt::from(5)).unwrap();
        assert_eq!(h.underlying_group(), FiniteAbelianGroup::cyclic(5));
        // M = Z/2, n = 3 -> 0
        let rel = IntMatrix::from_rows_i64(&[vec![2]]);
        let m2 = FgGModule::new(g.clone(), 1, rel, vec![IntMatrix::identity(1)]).unwrap();
        let h = hom_to_zmod(&m2, &BigInt::from(3)).unwrap();
        assert!(h.underlying_group().is_trivial());
        // M = Z/3, n = 3 -> Z/3
        let rel = IntMatrix::from_rows_i64(&[vec![3]]);
        let m3 = FgGModule::new(g, 1, rel, vec![IntMatrix::identity(1)]).unwrap();
        let h = hom_to_zmod(&m3, &BigInt::from(3)).unwrap();
        assert_eq!(h.underlying_group(), FiniteAbelianGroup::cyclic(3));
        // n = 0 rejected
        assert!(hom_to_zmod(&m3, &BigInt::zero()).is_err());
    }
}
