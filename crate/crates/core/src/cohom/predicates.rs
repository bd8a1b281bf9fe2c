use super::h_i;
use crate::gmod::GLattice;
use crate::groups::{subgroup_reps, FiniteGroup, Subgroup};
use crate::zlinalg::{smith_normal_form, FiniteAbelianGroup, IntMatrix};
use crate::Result;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;
use std::sync::Arc;

/// Outcome of a flasque/coflasque test with the offending subgroup and its
/// nonzero cohomology group on failure.
#[derive(Clone, Debug)]
pub struct PredicateWitness {
    pub holds: bool,
    pub witness: Option<(Subgroup, FiniteAbelianGroup)>,
}

/// H^1(h, M) = 0 for every subgroup class representative h.
pub fn is_coflasque(m: &GLattice) -> Result<PredicateWitness> {
    let module = m.as_module();
    for h in subgroup_reps(m.group()) {
        let c = h_i(&h, &module, 1)?;
        if !c.group().is_trivial() {
            return Ok(PredicateWitness {
                holds: false,
                witness: Some((h, c.group().clone())),
            });
        }
    }
    Ok(PredicateWitness {
        holds: true,
        witness: None,
    })
}

/// H^1(h, Hom(M, Z)) = 0 for every subgroup class representative h.
pub fn is_flasque(m: &GLattice) -> Result<PredicateWitness> {
    is_coflasque(&m.dual())
}

/// Three-valued permutation test: a construction certificate or a found
/// permuted basis certifies yes; a cohomological or character obstruction
/// certifies no; otherwise the bounded search gives up honestly.
#[derive(Clone, Debug)]
pub enum PermDecision {
    CertifiedYes(IntMatrix),
    CertifiedNo(String),
    Unknown,
}

impl PermDecision {
    pub fn is_yes(&self) -> bool {
        matches!(self, PermDecision::CertifiedYes(_))
    }
    pub fn is_no(&self) -> bool {
        matches!(self, PermDecision::CertifiedNo(_))
    }
    pub fn label(&self) -> &'static str {
        match self {
            PermDecision::CertifiedYes(_) => "yes",
            PermDecision::CertifiedNo(_) => "no",
            PermDecision::Unknown => "unknown",
        }
    }
}

/// Bounds for the orbit-basis search.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// sup-norm bound on candidate basis vectors
    pub sup_norm: i64,
    /// maximum number of vectors enumerated before falling back to a
    /// smaller bound (and finally giving up with Unknown)
    pub vector_budget: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            sup_norm: 2,
            vector_budget: 200_000,
        }
    }
}

pub fn is_permutation(m: &GLattice, config: &SearchConfig) -> Result<PermDecision> {
    if m.certificate().is_some() {
        return Ok(PermDecision::CertifiedYes(IntMatrix::identity(m.rank())));
    }
    if m.rank() == 0 {
        return Ok(PermDecision::CertifiedYes(IntMatrix::identity(0)));
    }
    let co = is_coflasque(m)?;
    if let Some((h, grp)) = co.witness {
        return Ok(PermDecision::CertifiedNo(format!(
            "H1 of subgroup of order {} is {}",
            h.order(),
            grp
        )));
    }
    let fl = is_flasque(m)?;
    if let Some((h, grp)) = fl.witness {
        return Ok(PermDecision::CertifiedNo(format!(
            "H1 of subgroup of order {} on the dual is {}",
            h.order(),
            grp
        )));
    }
    if !character_decomposes(m) {
        return Ok(PermDecision::CertifiedNo(
            "character is not a nonnegative combination of coset-lattice characters".into(),
        ));
    }
    if let Some(basis) = orbit_basis_search(m, config) {
        return Ok(PermDecision::CertifiedYes(basis));
    }
    Ok(PermDecision::Unknown)
}

/// Conjugacy classes of group elements.
fn element_classes(g: &Arc<FiniteGroup>) -> Vec<Vec<usize>> {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut classes = Vec::new();
    for e in 0..n {
        if seen[e] {
            continue;
        }
        let mut cls = BTreeSet::new();
        for x in 0..n {
            cls.insert(g.mul(g.mul(x, e), g.inv(x)));
        }
        for &c in &cls {
            seen[c] = true;
        }
        classes.push(cls.into_iter().collect());
    }
    classes
}

/// Necessary condition: the character of M must be a nonnegative integer
/// combination of coset-lattice characters. Searched exhaustively with
/// pointwise-nonnegativity pruning; coset characters are nonnegative, so
/// any valid completion keeps the residual nonnegative.
fn character_decomposes(m: &GLattice) -> bool {
    let g = m.group();
    let classes = element_classes(g);
    let chi_m: Vec<BigInt> = classes
        .iter()
        .map(|cls| {
            let a = m.action(cls[0]);
            (0..m.rank()).map(|i| a.at(i, i).clone()).sum()
        })
        .collect();
    if chi_m.iter().any(|x| x.is_negative()) {
        return false;
    }
    let reps = subgroup_reps(g);
    // coset character: number of fixed cosets
    let mut coset_chars: Vec<(usize, Vec<BigInt>)> = reps
        .iter()
        .map(|h| {
            let act = crate::groups::coset_permutation_action(g, h).expect("own subgroup");
            let chi: Vec<BigInt> = classes
                .iter()
                .map(|cls| {
                    let p = &act.perms[cls[0]];
                    BigInt::from((0..p.len()).filter(|&c| p[c] == c).count() as i64)
                })
                .collect();
            (act.reps.len(), chi)
        })
        .collect();
    // try large degrees first so the residual shrinks fast
    coset_chars.sort_by(|a, b| b.0.cmp(&a.0));
    fn dfs(coset_chars: &[(usize, Vec<BigInt>)], residual: &mut Vec<BigInt>) -> bool {
        if residual.iter().all(Zero::is_zero) {
            return true;
        }
        let Some((deg, chi)) = coset_chars.first() else {
            return false;
        };
        let rest = &coset_chars[1..];
        // max multiplicity from the identity column (residual[0] = rank left)
        let max_c = (&residual[0] / BigInt::from(*deg as i64))
            .max(BigInt::zero());
        let max_c: i64 = max_c.try_into().unwrap_or(0);
        for c in (0..=max_c).rev() {
            let big = BigInt::from(c);
            let candidate: Vec<BigInt> = residual
                .iter()
                .zip(chi)
                .map(|(r, x)| r - &big * x)
                .collect();
            if candidate.iter().any(|x| x.is_negative()) {
                continue;
            }
            let mut cand = candidate;
            if dfs(rest, &mut cand) {
                return true;
            }
        }
        false
    }
    // identity class first so residual[0] tracks remaining rank
    let id_class = classes
        .iter()
        .position(|cls| cls.contains(&g.identity()))
        .expect("identity class");
    let reorder = |v: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![v[id_class].clone()];
        out.extend(
            v.iter()
                .enumerate()
                .filter(|(i, _)| *i != id_class)
                .map(|(_, x)| x.clone()),
        );
        out
    };
    let chars: Vec<(usize, Vec<BigInt>)> = coset_chars
        .into_iter()
        .map(|(d, chi)| (d, reorder(&chi)))
        .collect();
    let mut residual = reorder(&chi_m);
    dfs(&chars, &mut residual)
}

/// Enumerate candidate vectors, group them into G-orbits, and search for a
/// disjoint union of orbits forming a unimodular basis.
fn orbit_basis_search(m: &GLattice, config: &SearchConfig) -> Option<IntMatrix> {
    let n = m.rank();
    let g = m.group();
    let mut bound = config.sup_norm;
    // shrink the ball until the enumeration fits the budget
    loop {
        if bound == 0 {
            return None;
        }
        let count = (2 * bound as u128 + 1).checked_pow(n as u32);
        match count {
            Some(c) if c <= config.vector_budget as u128 => break,
            _ => bound -= 1,
        }
    }
    let width = 2 * bound + 1;
    let total = (width as u128).pow(n as u32) as usize;
    let mut orbits: Vec<Vec<Vec<BigInt>>> = Vec::new();
    let mut seen: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for code in 0..total {
        let mut v = Vec::with_capacity(n);
        let mut rem = code;
        for _ in 0..n {
            v.push(BigInt::from((rem % width as usize) as i64 - bound));
            rem /= width as usize;
        }
        if v.iter().all(Zero::is_zero) || seen.contains(&v) {
            continue;
        }
        let mut orbit: BTreeSet<Vec<BigInt>> = BTreeSet::new();
        for e in 0..g.order() {
            orbit.insert(m.action(e).mul_vec(&v));
        }
        // a permuted basis vector has an orbit inside the ball; otherwise
        // this orbit cannot participate
        let in_ball = orbit
            .iter()
            .all(|w| w.iter().all(|x| x.abs() <= BigInt::from(bound)));
        for w in &orbit {
            seen.insert(w.clone());
        }
        if in_ball && orbit.len() <= n {
            orbits.push(orbit.into_iter().collect());
        }
    }
    orbits.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    // DFS over orbit subsets accumulating a full-rank unimodular stack
    fn dfs(
        orbits: &[Vec<Vec<BigInt>>],
        start: usize,
        chosen: &mut Vec<Vec<BigInt>>,
        n: usize,
    ) -> bool {
        if chosen.len() == n {
            let mat = IntMatrix::from_cols(n, chosen.clone());
            return mat.is_unimodular();
        }
        for i in start..orbits.len() {
            if chosen.len() + orbits[i].len() > n {
                continue;
            }
            let before = chosen.len();
            chosen.extend(orbits[i].iter().cloned());
            // rank check
            let mat = IntMatrix::from_cols(n, chosen.clone());
            let full_rank = smith_normal_form(&mat).rank() == chosen.len();
            if full_rank && dfs(orbits, i + 1, chosen, n) {
                return true;
            }
            chosen.truncate(before);
        }
        false
    }
    let mut chosen = Vec::new();
    if dfs(&orbits, 0, &mut chosen, n) {
        Some(IntMatrix::from_cols(n, chosen))
    } else {
        None
    }
}
