//! Group cohomology H^0/H^1/H^2 of G-modules from the bar resolution:
//! cochains are indexed by full element tuples of the subgroup and the
//! cocycle/coboundary conditions are integer congruence systems modulo the
//! relation image. No generator-relation shortcuts; the linear algebra is
//! solved incrementally instead.

mod predicates;
mod sha;

pub use predicates::{is_coflasque, is_flasque, is_permutation, PermDecision, PredicateWitness, SearchConfig};
pub use sha::{sha1_omega_qz_dual, sha_omega};

use crate::gmod::FgGModule;
use crate::groups::Subgroup;
use crate::zlinalg::{
    solve_congruences, CongruenceRow, FiniteAbelianGroup, IntMatrix, LatticeQuotient,
};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

/// H^i(h, M) with its canonical form, cocycle representatives for the
/// canonical generators, and enough structure to compute restriction maps
/// on cocycle classes.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub degree: u8,
    pub subgroup: Subgroup,
    quotient: LatticeQuotient,
    elems: Vec<usize>,
    ambient: usize,
}

impl Cohomology {
    pub fn group(&self) -> &FiniteAbelianGroup {
        self.quotient.group()
    }

    /// Integer cocycle vectors representing the canonical generators
    /// (torsion generators first, then free ones).
    pub fn cocycle_representatives(&self) -> Vec<Vec<BigInt>> {
        self.quotient.canonical_generator_reps()
    }

    pub fn generator_orders(&self) -> Vec<BigInt> {
        self.quotient.generator_orders()
    }

    /// Canonical coordinates of a cocycle's class; None if the vector is
    /// not a cocycle.
    pub fn class_coords(&self, cocycle: &[BigInt]) -> Option<Vec<BigInt>> {
        self.quotient.class_coords(cocycle)
    }

    pub fn is_zero_class(&self, cocycle: &[BigInt]) -> bool {
        self.quotient.is_zero_class(cocycle)
    }

    /// Layout: cochains are blocks of `ambient` coordinates, one per
    /// `degree`-tuple of subgroup elements in `elems` order.
    pub fn tuple_elements(&self) -> &[usize] {
        &self.elems
    }

    pub fn ambient_per_tuple(&self) -> usize {
        self.ambient
    }

    pub fn cochain_dim(&self) -> usize {
        self.ambient * self.elems.len().pow(self.degree as u32)
    }
}

/// Assemble `sum_b coeff_b x_b ∈ im R` conditions for a sparse block row,
/// where each block holds `ambient` variables.
fn block_membership_rows(
    module: &FgGModule,
    blocks: &BTreeMap<usize, IntMatrix>,
    rows: &mut Vec<CongruenceRow>,
) {
    let n = module.ambient_rank();
    let snf = module.relations_snf();
    let diag = snf.diagonal();
    let transformed: Vec<(usize, IntMatrix)> = blocks
        .iter()
        .map(|(&b, m)| (b, snf.u.mul(m)))
        .collect();
    for s in 0..n {
        let d = diag.get(s).cloned().unwrap_or_else(BigInt::zero);
        if d.is_one() {
            continue;
        }
        let mut coeffs = Vec::new();
        for (b, tm) in &transformed {
            for c in 0..n {
                if !tm.at(s, c).is_zero() {
                    coeffs.push((b * n + c, tm.at(s, c).clone()));
                }
            }
        }
        if coeffs.is_empty() {
            continue;
        }
        coeffs.sort_by_key(|(i, _)| *i);
        // merge duplicate variable indices from coinciding blocks
        let mut merged: Vec<(usize, BigInt)> = Vec::with_capacity(coeffs.len());
        for (i, v) in coeffs {
            match merged.last_mut() {
                Some((j, acc)) if *j == i => *acc += v,
                _ => merged.push((i, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        if merged.is_empty() {
            continue;
        }
        rows.push(CongruenceRow {
            coeffs: merged,
            modulus: d,
        });
    }
}

fn accumulate_block(blocks: &mut BTreeMap<usize, IntMatrix>, idx: usize, m: IntMatrix) {
    match blocks.get_mut(&idx) {
        Some(existing) => *existing = existing.add(&m),
        None => {
            blocks.insert(idx, m);
        }
    }
}

fn neg_identity(n: usize) -> IntMatrix {
    IntMatrix::from_fn(n, n, |r, c| {
        if r == c {
            BigInt::from(-1)
        } else {
            BigInt::zero()
        }
    })
}

/// Bar-resolution cohomology H^i(h, M) for i in {0, 1, 2}.
pub fn h_i(h: &Subgroup, m: &FgGModule, degree: u8) -> Result<Cohomology> {
    if !Arc::ptr_eq(&h.parent, m.group()) {
        return Err(Error::ForeignSubgroup("cohomology over foreign subgroup".into()));
    }
    if degree > 2 {
        return Err(Error::Invalid(format!("degree {degree} not in {{0,1,2}}")));
    }
    let elems = h.elements.clone();
    let q = elems.len();
    let n = m.ambient_rank();
    let pos: BTreeMap<usize, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let g = m.group().clone();
    let nvars = n * q.pow(degree as u32);
    let mut rows: Vec<CongruenceRow> = Vec::new();
    let ident = IntMatrix::identity(n);

    match degree {
        0 => {
            // (sigma - 1) x ∈ im R per sigma
            for &sigma in &elems {
                if sigma == g.identity() {
                    continue;
                }
                let mut blocks = BTreeMap::new();
                accumulate_block(&mut blocks, 0, m.action(sigma).sub(&ident));
                block_membership_rows(m, &blocks, &mut rows);
            }
        }
        1 => {
            // sigma f(tau) - f(sigma tau) + f(sigma) ∈ im R
            for (si, &sigma) in elems.iter().enumerate() {
                for (ti, &tau) in elems.iter().enumerate() {
                    let st = pos[&g.mul(sigma, tau)];
                    let mut blocks = BTreeMap::new();
                    accumulate_block(&mut blocks, ti, m.action(sigma).clone());
                    accumulate_block(&mut blocks, st, neg_identity(n));
                    accumulate_block(&mut blocks, si, ident.clone());
                    block_membership_rows(m, &blocks, &mut rows);
                }
            }
        }
        2 => {
            // sigma c(tau,ups) - c(sigma tau, ups) + c(sigma, tau ups) - c(sigma, tau)
            for (si, &sigma) in elems.iter().enumerate() {
                for (ti, &tau) in elems.iter().enumerate() {
                    let st = pos[&g.mul(sigma, tau)];
                    for (ui, &ups) in elems.iter().enumerate() {
                        let tu = pos[&g.mul(tau, ups)];
                        let mut blocks = BTreeMap::new();
                        accumulate_block(&mut blocks, ti * q + ui, m.action(sigma).clone());
                        accumulate_block(&mut blocks, st * q + ui, neg_identity(n));
                        accumulate_block(&mut blocks, si * q + tu, ident.clone());
                        accumulate_block(&mut blocks, si * q + ti, neg_identity(n));
                        block_membership_rows(m, &blocks, &mut rows);
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    let cocycles = solve_congruences(nvars, rows);

    // coboundaries plus per-block relation columns
    let mut l2_cols: Vec<Vec<BigInt>> = Vec::new();
    match degree {
        0 => {
            for j in 0..m.relations().cols() {
                l2_cols.push(m.relations().col(j));
            }
        }
        1 => {
            // d0 of ambient basis vectors
            for j in 0..n {
                let mut col = vec![BigInt::zero(); nvars];
                for (si, &sigma) in elems.iter().enumerate() {
                    let a = m.action(sigma);
                    for r in 0..n {
                        let mut v = a.at(r, j).clone();
                        if r == j {
                            v -= BigInt::one();
                        }
                        col[si * n + r] = v;
                    }
                }
                l2_cols.push(col);
            }
            push_block_relations(m, q, nvars, &mut l2_cols);
        }
        2 => {
            // d1 of level-one basis vectors e_(alpha, j)
            for (ai, _alpha) in elems.iter().enumerate() {
                for j in 0..n {
                    let mut col = vec![BigInt::zero(); nvars];
                    for (si, &sigma) in elems.iter().enumerate() {
                        for (ti, &tau) in elems.iter().enumerate() {
                            let block = si * q + ti;
                            if ti == ai {
                                let a = m.action(sigma);
                                for r in 0..n {
                                    col[block * n + r] += a.at(r, j);
                                }
                            }
                            if pos[&g.mul(sigma, tau)] == ai {
                                col[block * n + j] -= BigInt::one();
                            }
                            if si == ai {
                                col[block * n + j] += BigInt::one();
                            }
                        }
                    }
                    l2_cols.push(col);
                }
            }
            push_block_relations(m, q * q, nvars, &mut l2_cols);
        }
        _ => unreachable!(),
    }
    let l2 = IntMatrix::from_cols(nvars, l2_cols);
    let quotient = LatticeQuotient::from_basis(cocycles, &l2)?;
    Ok(Cohomology {
        degree,
        subgroup: h.clone(),
        quotient,
        elems,
        ambient: n,
    })
}

fn push_block_relations(m: &FgGModule, blocks: usize, nvars: usize, out: &mut Vec<Vec<BigInt>>) {
    let n = m.ambient_rank();
    for b in 0..blocks {
        for j in 0..m.relations().cols() {
            let mut col = vec![BigInt::zero(); nvars];
            for r in 0..n {
                col[b * n + r] = m.relations().at(r, j).clone();
            }
            out.push(col);
        }
    }
}

/// Restrict a cocycle on `from.subgroup` to `to.subgroup` (which must be
/// contained in it) by selecting tuple coordinates.
pub fn restrict_cocycle(from: &Cohomology, to: &Cohomology, rep: &[BigInt]) -> Result<Vec<BigInt>> {
    if from.degree != to.degree || from.ambient != to.ambient {
        return Err(Error::Invalid("restriction between incompatible cohomologies".into()));
    }
    for e in &to.elems {
        if !from.elems.contains(e) {
            return Err(Error::ForeignSubgroup("restriction target is not contained".into()));
        }
    }
    let n = from.ambient;
    let q_from = from.elems.len();
    let fpos: BTreeMap<usize, usize> = from
        .elems
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i))
        .collect();
    let q_to = to.elems.len();
    let degree = from.degree as u32;
    let mut out = vec![BigInt::zero(); to.cochain_dim()];
    let tuples_to = q_to.pow(degree);
    // block layout is row-major: the first tuple component is the most
    // significant digit, both here and in h_i
    for t in 0..tuples_to {
        let mut digits = Vec::with_capacity(degree as usize);
        let mut rem = t;
        for _ in 0..degree {
            digits.push(rem % q_to);
            rem /= q_to;
        }
        digits.reverse();
        let mut from_block = 0usize;
        for &d in &digits {
            from_block = from_block * q_from + fpos[&to.elems[d]];
        }
        for r in 0..n {
            out[t * n + r] = rep[from_block * n + r].clone();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmod::{permutation_module, GLattice};
    use crate::groups::{named_group, subgroup_reps, Subgroup};

    fn sign_lattice(g: &Arc<crate::groups::FiniteGroup>) -> GLattice {
        GLattice::from_generator_action(
            g.clone(),
            1,
            vec![IntMatrix::from_rows_i64(&[vec![-1]])],
        )
        .unwrap()
    }

    #[test]
    fn h1_z2_trivial_z_vanishes() {
        let g = named_group("Z2").unwrap();
        let m = GLattice::trivial(g.clone(), 1).as_module();
        let full = Subgroup::full(g);
        let h = h_i(&full, &m, 1).unwrap();
        assert!(h.group().is_trivial());
    }

    #[test]
    fn h1_z2_sign_is_z2() {
        let g = named_group("Z2").unwrap();
        let m = sign_lattice(&g).as_module();
        let full = Subgroup::full(g);
        let h = h_i(&full, &m, 1).unwrap();
        assert_eq!(*h.group(), FiniteAbelianGroup::cyclic(2));
    }

    #[test]
    fn h2_cyclic_trivial_z_is_cyclic() {
        for n in 2..=6u64 {
            let g = named_group(&format!("Z{n}")).unwrap();
            let m = GLattice::trivial(g.clone(), 1).as_module();
            let full = Subgroup::full(g);
            let h = h_i(&full, &m, 2).unwrap();
            assert_eq!(*h.group(), FiniteAbelianGroup::cyclic(n), "H2(Z/{n}, Z)");
        }
    }

    #[test]
    fn h1_regular_lattice_vanishes() {
        let g = named_group("Z2").unwrap();
        let reps = subgroup_reps(&g);
        let reg = permutation_module(&g, &[(reps[0].clone(), 1)]).unwrap().as_module();
        let full = Subgroup::full(g);
        let h = h_i(&full, &reg, 1).unwrap();
        assert!(h.group().is_trivial());
    }

    #[test]
    fn h0_is_invariants() {
        let g = named_group("Z2").unwrap();
        let m = sign_lattice(&g).as_module();
        let full = Subgroup::full(g.clone());
        let h = h_i(&full, &m, 0).unwrap();
        assert!(h.group().is_trivial());
        let t = GLattice::trivial(g.clone(), 2).as_module();
        let h = h_i(&full, &t, 0).unwrap();
        assert_eq!(*h.group(), FiniteAbelianGroup::free(2));
    }

    #[test]
    fn h1_torsion_coefficients() {
        // H^1(Z/2, Z/2 trivial) = Hom(Z/2, Z/2) = Z/2
        let g = named_group("Z2").unwrap();
        let rel = IntMatrix::from_rows_i64(&[vec![2]]);
        let m = crate::gmod::FgGModule::new(g.clone(), 1, rel, vec![IntMatrix::identity(1)])
            .unwrap();
        let full = Subgroup::full(g);
        let h = h_i(&full, &m, 1).unwrap();
        assert_eq!(*h.group(), FiniteAbelianGroup::cyclic(2));
    }

    #[test]
    fn annihilation_by_subgroup_order() {
        let g = named_group("S3").unwrap();
        let m = permutation_module(&g, &[(subgroup_reps(&g)[1].clone(), 1)])
            .unwrap()
            .dual()
            .as_module();
        for h in subgroup_reps(&g) {
            let order = BigInt::from(h.order() as i64);
            for d in [1u8, 2] {
                let c = h_i(&h, &m, d).unwrap();
                assert!(c.group().annihilated_by(&order), "annihilation {d}");
            }
        }
    }

    #[test]
    fn representative_classes_are_nonzero_and_bounded() {
        let g = named_group("Z4").unwrap();
        let m = GLattice::trivial(g.clone(), 1).as_module();
        let full = Subgroup::full(g);
        let h = h_i(&full, &m, 2).unwrap();
        let reps = h.cocycle_representatives();
        let orders = h.generator_orders();
        assert_eq!(reps.len(), 1);
        assert_eq!(orders[0], BigInt::from(4));
        assert!(!h.is_zero_class(&reps[0]));
        let scaled: Vec<BigInt> = reps[0].iter().map(|x| x * &orders[0]).collect();
        assert!(h.is_zero_class(&scaled));
    }

    #[test]
    fn restriction_to_cyclic_subgroup() {
        // H^2(V4, Z) restricted to each Z/2: the three restriction maps
        // jointly have nontrivial kernel (the classical Sha example needs
        // the twisted module, but restriction itself must be well-defined)
        let g = named_group("V4").unwrap();
        let m = GLattice::trivial(g.clone(), 1).as_module();
        let full = Subgroup::full(g.clone());
        let top = h_i(&full, &m, 2).unwrap();
        for h in crate::groups::cyclic_subgroup_reps(&g) {
            let sub = h_i(&h, &m, 2).unwrap();
            for rep in top.cocycle_representatives() {
                let r = restrict_cocycle(&top, &sub, &rep).unwrap();
                assert!(sub.class_coords(&r).is_some(), "restriction must be a cocycle");
            }
        }
    }
}
