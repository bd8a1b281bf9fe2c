use super::{h_i, restrict_cocycle, Cohomology};
use crate::gmod::{hom_to_zmod, FgGModule};
use crate::groups::{cyclic_subgroup_reps, FiniteGroup, Subgroup};
use crate::zlinalg::{
    solve_congruences, solve_integer, CongruenceRow, FiniteAbelianGroup, IntMatrix,
    LatticeQuotient,
};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use std::sync::Arc;

/// Kernel data of the total restriction map out of H^i(G, M): the group,
/// plus cocycle vectors generating the kernel inside the top cohomology.
#[derive(Clone, Debug)]
pub struct ShaGroup {
    pub group: FiniteAbelianGroup,
    pub top: Cohomology,
    /// cocycle representatives (in the top cochain layout) generating the
    /// kernel subgroup
    pub generators: Vec<Vec<BigInt>>,
}

/// Sha_omega^i: kernel of H^i(G, M) -> prod over cyclic subgroup classes
/// H^i(h, M). Conjugation-invariance of cohomology makes class
/// representatives sufficient.
pub fn sha_omega(degree: u8, g: &Arc<FiniteGroup>, m: &FgGModule) -> Result<ShaGroup> {
    if degree == 0 {
        return Err(Error::Invalid("sha_omega needs degree 1 or 2".into()));
    }
    let full = Subgroup::full(g.clone());
    let top = h_i(&full, m, degree)?;
    let gens = top.cocycle_representatives();
    let orders = top.generator_orders();
    let k = gens.len();
    if k == 0 {
        return Ok(ShaGroup {
            group: FiniteAbelianGroup::trivial(),
            top,
            generators: vec![],
        });
    }
    if orders.iter().any(Zero::is_zero) {
        return Err(Error::InvariantViolation(
            "positive-degree cohomology of a finite group must be finite".into(),
        ));
    }
    // rows: for every cyclic subgroup and every canonical coordinate of its
    // cohomology, the restriction of a combination must vanish
    let mut rows: Vec<CongruenceRow> = Vec::new();
    for h in cyclic_subgroup_reps(g) {
        if h.is_trivial() {
            continue;
        }
        let sub = h_i(&h, m, degree)?;
        if sub.group().is_trivial() {
            continue;
        }
        let sub_orders = sub.generator_orders();
        // coordinates of each top generator's restriction
        let mut coords: Vec<Vec<BigInt>> = Vec::with_capacity(k);
        for rep in &gens {
            let restricted = restrict_cocycle(&top, &sub, rep)?;
            let c = sub.class_coords(&restricted).ok_or_else(|| {
                Error::InvariantViolation("restriction of a cocycle failed".into())
            })?;
            coords.push(c);
        }
        for (l, ord) in sub_orders.iter().enumerate() {
            let coeffs: Vec<(usize, BigInt)> = (0..k)
                .filter(|&j| !coords[j][l].is_zero())
                .map(|j| (j, coords[j][l].clone()))
                .collect();
            if coeffs.is_empty() {
                continue;
            }
            rows.push(CongruenceRow {
                coeffs,
                modulus: ord.clone(),
            });
        }
    }
    let kernel_basis = solve_congruences(k, rows);
    let diag = IntMatrix::from_fn(k, k, |r, c| {
        if r == c {
            orders[r].clone()
        } else {
            BigInt::zero()
        }
    });
    let q = LatticeQuotient::from_basis(kernel_basis.clone(), &diag)?;
    // kernel generators as cocycle vectors
    let mut generators = Vec::new();
    for combo in q.canonical_generator_reps() {
        let n = top.cochain_dim();
        let mut vec = vec![BigInt::zero(); n];
        for (j, c) in combo.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (t, x) in gens[j].iter().enumerate() {
                vec[t] += c * x;
            }
        }
        generators.push(vec);
    }
    Ok(ShaGroup {
        group: q.group().clone(),
        top,
        generators,
    })
}

/// Sha^1_omega of Hom(M, Q/Z), computed level-wise through Hom(M, Z/m).
///
/// Q/Z coefficients are never materialized: degree-one classes over a
/// finite group are |G|-torsion and cohomology commutes with the filtered
/// colimit, so two consecutive levels m1 = |G| * exp(tors M) and
/// m2 = |G| * m1 must already agree. The audit compares the images of the
/// natural comparison map generator by generator; disagreement escalates
/// one more level and then fails loudly.
pub fn sha1_omega_qz_dual(g: &Arc<FiniteGroup>, m: &FgGModule) -> Result<FiniteAbelianGroup> {
    let order = BigInt::from(g.order() as i64);
    let exp = m.underlying_group().exponent();
    let m1 = &order * &exp;
    let m2 = &order * &m1;
    match levels_agree(g, m, &m1, &m2)? {
        Some(result) => Ok(result),
        None => {
            let m3 = &order * &m2;
            match levels_agree(g, m, &m2, &m3)? {
                Some(result) => Ok(result),
                None => Err(Error::Stabilization(format!(
                    "Sha^1_omega levels {m2} and {m3} disagree"
                ))),
            }
        }
    }
}

/// Compare Sha at two levels under the coefficient map Z/m1 -> Z/m2.
/// Returns the stabilized group when the images agree.
fn levels_agree(
    g: &Arc<FiniteGroup>,
    m: &FgGModule,
    m1: &BigInt,
    m2: &BigInt,
) -> Result<Option<FiniteAbelianGroup>> {
    let n1 = hom_to_zmod(m, m1)?;
    let n2 = hom_to_zmod(m, m2)?;
    let sha1 = sha_omega(1, g, &n1)?;
    let sha2 = sha_omega(1, g, &n2)?;
    if sha1.group != sha2.group {
        return Ok(None);
    }
    if sha1.group.is_trivial() {
        return Ok(Some(sha1.group));
    }
    // coefficient map scales canonical coordinate i by g2_i / g1_i
    let k = n1.ambient_rank();
    let d1 = n1.relations_snf().diagonal();
    let d2 = n2.relations_snf().diagonal();
    let scale: Vec<BigInt> = (0..k).map(|i| &d2[i] / &d1[i]).collect();
    let mapped: Vec<Vec<BigInt>> = sha1
        .generators
        .iter()
        .map(|v| {
            v.iter()
                .enumerate()
                .map(|(idx, x)| x * &scale[idx % k])
                .collect()
        })
        .collect();
    // both subgroups of H^1(G, N2): mutual membership of generators
    let coords_of = |coh: &Cohomology, v: &[BigInt]| -> Result<Vec<BigInt>> {
        coh.class_coords(v).ok_or_else(|| {
            Error::InvariantViolation("comparison image is not a cocycle".into())
        })
    };
    let h2_orders = sha2.top.generator_orders();
    let l = h2_orders.len();
    let subgroup_matrix = |gens: &[Vec<BigInt>]| -> Result<IntMatrix> {
        let mut cols = Vec::new();
        for v in gens {
            cols.push(coords_of(&sha2.top, v)?);
        }
        for (i, ord) in h2_orders.iter().enumerate() {
            let mut c = vec![BigInt::zero(); l];
            c[i] = ord.clone();
            cols.push(c);
        }
        Ok(IntMatrix::from_cols(l, cols))
    };
    let img_mat = subgroup_matrix(&mapped)?;
    let sha2_mat = subgroup_matrix(&sha2.generators)?;
    for v in &sha2.generators {
        let c = coords_of(&sha2.top, v)?;
        if solve_integer(&img_mat, &c).is_none() {
            return Ok(None);
        }
    }
    for v in &mapped {
        let c = coords_of(&sha2.top, v)?;
        if solve_integer(&sha2_mat, &c).is_none() {
            return Ok(None);
        }
    }
    Ok(Some(sha2.group.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmod::GLattice;
    use crate::groups::named_group;

    #[test]
    fn cyclic_group_kills_sha() {
        // G itself is in the index set, so both Sha groups vanish
        let g = named_group("Z4").unwrap();
        let m = GLattice::trivial(g.clone(), 1).as_module();
        for d in [1u8, 2] {
            let s = sha_omega(d, &g, &m).unwrap();
            assert!(s.group.is_trivial(), "degree {d}");
        }
    }

    #[test]
    fn trivial_group_sha_vanishes() {
        let g = named_group("1").unwrap();
        let m = GLattice::trivial(g.clone(), 2).as_module();
        assert!(sha1_omega_qz_dual(&g, &m).unwrap().is_trivial());
    }

    #[test]
    fn permutation_module_sha1_vanishes() {
        let g = named_group("V4").unwrap();
        let reps = crate::groups::subgroup_reps(&g);
        let p = crate::gmod::permutation_module(&g, &[(reps[1].clone(), 1)])
            .unwrap()
            .as_module();
        let s = sha_omega(1, &g, &p).unwrap();
        assert!(s.group.is_trivial());
    }

    #[test]
    fn qz_dual_of_trivial_z_over_cyclic_group() {
        // H^1(Z/n, Q/Z) = Z/n but the group is cyclic, so Sha = 0
        let g = named_group("Z3").unwrap();
        let m = GLattice::trivial(g.clone(), 1).as_module();
        assert!(sha1_omega_qz_dual(&g, &m).unwrap().is_trivial());
    }
}
