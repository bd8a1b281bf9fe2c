//! Finite groups given by permutation or unimodular matrix generators,
//! enumerated with a full multiplication table. These model the Galois
//! group through a finite quotient acting faithfully on every module in
//! play; procyclic closed subgroups become cyclic subgroups of the quotient.

use crate::zlinalg::IntMatrix;
use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

pub const DEFAULT_ORDER_CAP: usize = 64;

/// A group element: permutation images (0-based) or a unimodular matrix.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Element {
    Perm(Vec<usize>),
    Mat(IntMatrix),
}

impl Element {
    fn mul(&self, other: &Element) -> Element {
        match (self, other) {
            (Element::Perm(p), Element::Perm(q)) => {
                Element::Perm(q.iter().map(|&i| p[i]).collect())
            }
            (Element::Mat(a), Element::Mat(b)) => Element::Mat(a.mul(b)),
            _ => panic!("mixed element kinds"),
        }
    }

    fn identity_like(&self) -> Element {
        match self {
            Element::Perm(p) => Element::Perm((0..p.len()).collect()),
            Element::Mat(m) => Element::Mat(IntMatrix::identity(m.rows())),
        }
    }
}

/// Enumerated finite group: canonical element order, multiplication table,
/// inverses, and a generator word for every element. Immutable after
/// construction.
#[derive(Debug)]
pub struct FiniteGroup {
    elements: Vec<Element>,
    mul_table: Vec<Vec<usize>>,
    inv: Vec<usize>,
    identity: usize,
    generators: Vec<usize>,
    /// bfs_edges[e] = (parent, generator position) with e = parent * gen;
    /// None for the identity. bfs_order lists elements parent-first.
    bfs_edges: Vec<Option<(usize, usize)>>,
    bfs_order: Vec<usize>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements && self.generators == other.generators
    }
}
impl Eq for FiniteGroup {}

impl FiniteGroup {
    pub fn trivial() -> Arc<Self> {
        Self::from_generator_elements(vec![], DEFAULT_ORDER_CAP).expect("trivial group")
    }

    /// Generators as permutations given by 0-based image lists.
    pub fn from_permutations(gens: Vec<Vec<usize>>, cap: usize) -> Result<Arc<Self>> {
        let degree = gens.first().map(|g| g.len()).unwrap_or(1);
        for g in &gens {
            if g.len() != degree {
                return Err(Error::Invalid(
                    "permutation generators have mixed degrees".into(),
                ));
            }
            let mut seen = vec![false; degree];
            for &i in g {
                if i >= degree || seen[i] {
                    return Err(Error::Invalid(format!(
                        "not a permutation of 0..{degree}: {g:?}"
                    )));
                }
                seen[i] = true;
            }
        }
        Self::from_generator_elements(gens.into_iter().map(Element::Perm).collect(), cap)
    }

    /// Generators as square integer matrices; each must be unimodular.
    pub fn from_matrices(gens: Vec<IntMatrix>, cap: usize) -> Result<Arc<Self>> {
        let size = gens.first().map(|m| m.rows()).unwrap_or(1);
        for m in &gens {
            if m.rows() != m.cols() || m.rows() != size {
                return Err(Error::Invalid("matrix generators have mixed sizes".into()));
            }
            if !m.is_unimodular() {
                return Err(Error::Invalid("non-invertible matrix generator".into()));
            }
        }
        Self::from_generator_elements(gens.into_iter().map(Element::Mat).collect(), cap)
    }

    fn from_generator_elements(gens: Vec<Element>, cap: usize) -> Result<Arc<Self>> {
        let identity = gens
            .first()
            .map(|g| g.identity_like())
            .unwrap_or_else(|| Element::Perm(vec![0]));
        // BFS enumeration
        let mut index: BTreeMap<Element, usize> = BTreeMap::new();
        let mut elems: Vec<Element> = vec![identity.clone()];
        index.insert(identity, 0);
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(e) = queue.pop_front() {
            for g in &gens {
                let prod = elems[e].mul(g);
                if !index.contains_key(&prod) {
                    if elems.len() >= cap {
                        return Err(Error::OrderCap {
                            order: elems.len() + 1,
                            cap,
                        });
                    }
                    index.insert(prod.clone(), elems.len());
                    elems.push(prod);
                    queue.push_back(elems.len() - 1);
                }
            }
        }
        // canonical element order
        elems.sort();
        let index: BTreeMap<Element, usize> = elems
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let n = elems.len();
        let mut mul_table = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                let prod = elems[a].mul(&elems[b]);
                mul_table[a][b] = *index
                    .get(&prod)
                    .ok_or_else(|| Error::ActionRelation("multiplication left the set".into()))?;
            }
        }
        let id_elem = elems[0].identity_like();
        let identity = *index
            .get(&id_elem)
            .ok_or_else(|| Error::Invalid("identity missing".into()))?;
        let mut inv = vec![0usize; n];
        for a in 0..n {
            inv[a] = (0..n)
                .find(|&b| mul_table[a][b] == identity)
                .expect("finite group has inverses");
        }
        let generators: Vec<usize> = gens.iter().map(|g| index[g]).collect();
        // rebuild BFS words in sorted index space
        let mut bfs_edges: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut bfs_order = vec![identity];
        seen[identity] = true;
        let mut queue: VecDeque<usize> = VecDeque::from([identity]);
        while let Some(e) = queue.pop_front() {
            for (gi, &g) in generators.iter().enumerate() {
                let prod = mul_table[e][g];
                if !seen[prod] {
                    seen[prod] = true;
                    bfs_edges[prod] = Some((e, gi));
                    bfs_order.push(prod);
                    queue.push_back(prod);
                }
            }
        }
        if bfs_order.len() != n {
            return Err(Error::Invalid("generators do not generate the group".into()));
        }
        Ok(Arc::new(Self {
            elements: elems,
            mul_table,
            inv,
            identity,
            generators,
            bfs_edges,
            bfs_order,
        }))
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul_table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn bfs_order(&self) -> &[usize] {
        &self.bfs_order
    }

    pub fn bfs_edge(&self, e: usize) -> Option<(usize, usize)> {
        self.bfs_edges[e]
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_cyclic_group(&self) -> bool {
        (0..self.order()).any(|g| self.element_order(g) == self.order())
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a..n).all(|b| self.mul_table[a][b] == self.mul_table[b][a]))
    }

    /// Closure of a subset under multiplication (contains the identity).
    pub fn closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut set = BTreeSet::new();
        set.insert(self.identity);
        let mut queue: Vec<usize> = vec![self.identity];
        for &s in seed {
            if set.insert(s) {
                queue.push(s);
            }
        }
        while let Some(x) = queue.pop() {
            let snapshot: Vec<usize> = set.iter().copied().collect();
            for y in snapshot {
                for p in [self.mul(x, y), self.mul(y, x)] {
                    if set.insert(p) {
                        queue.push(p);
                    }
                }
            }
        }
        set.into_iter().collect()
    }

    fn cyclic_closure(&self, g: usize) -> Vec<usize> {
        let mut set = BTreeSet::new();
        let mut x = self.identity;
        loop {
            set.insert(x);
            x = self.mul(x, g);
            if x == self.identity {
                break;
            }
        }
        set.into_iter().collect()
    }

    fn conjugate_set(&self, set: &[usize], g: usize) -> Vec<usize> {
        let gi = self.inv(g);
        let mut out: Vec<usize> = set.iter().map(|&h| self.mul(self.mul(g, h), gi)).collect();
        out.sort_unstable();
        out
    }

    /// Every subgroup, as sorted element-index sets.
    pub fn all_subgroups(&self) -> Vec<Vec<usize>> {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue: Vec<Vec<usize>> = Vec::new();
        let trivial = vec![self.identity];
        all.insert(trivial.clone());
        queue.push(trivial);
        for g in 0..self.order() {
            let c = self.cyclic_closure(g);
            if all.insert(c.clone()) {
                queue.push(c);
            }
        }
        while let Some(h) = queue.pop() {
            for g in 0..self.order() {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut seed = h.clone();
                seed.push(g);
                let k = self.closure(&seed);
                if all.insert(k.clone()) {
                    queue.push(k);
                }
            }
        }
        all.into_iter().collect()
    }

    fn conjugacy_class_reps(&self, subgroups: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        let pool: BTreeSet<Vec<usize>> = subgroups.into_iter().collect();
        let mut reps: Vec<Vec<usize>> = Vec::new();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for h in &pool {
            if seen.contains(h) {
                continue;
            }
            let mut orbit: Vec<Vec<usize>> = (0..self.order())
                .map(|g| self.conjugate_set(h, g))
                .collect();
            orbit.sort();
            orbit.dedup();
            let rep = orbit[0].clone();
            for o in orbit {
                seen.insert(o);
            }
            reps.push(rep);
        }
        reps.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        reps
    }
}

/// A subgroup of an enumerated group: element index set plus cyclicity data.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub parent: Arc<FiniteGroup>,
    /// sorted element indices
    pub elements: Vec<usize>,
    pub is_cyclic: bool,
    pub cyclic_generator: Option<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) && self.elements == other.elements
    }
}

impl Subgroup {
    pub fn full(parent: Arc<FiniteGroup>) -> Self {
        let elements: Vec<usize> = (0..parent.order()).collect();
        Self::from_elements(parent, elements).expect("whole group is a subgroup")
    }

    pub fn trivial_subgroup(parent: Arc<FiniteGroup>) -> Self {
        let id = parent.identity();
        Self::from_elements(parent, vec![id]).expect("identity is a subgroup")
    }

    pub fn from_elements(parent: Arc<FiniteGroup>, mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.iter().any(|&e| e >= parent.order()) {
            return Err(Error::ForeignSubgroup("element index out of range".into()));
        }
        if elements.is_empty() || !elements.contains(&parent.identity()) {
            return Err(Error::ForeignSubgroup("missing identity".into()));
        }
        for &a in &elements {
            if elements.binary_search(&parent.inv(a)).is_err() {
                return Err(Error::ForeignSubgroup("not closed under inverse".into()));
            }
            for &b in &elements {
                if elements.binary_search(&parent.mul(a, b)).is_err() {
                    return Err(Error::ForeignSubgroup("not closed under product".into()));
                }
            }
        }
        let cyclic_generator = elements
            .iter()
            .copied()
            .find(|&g| parent.cyclic_closure(g) == elements);
        Ok(Self {
            parent,
            is_cyclic: cyclic_generator.is_some(),
            cyclic_generator,
            elements,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    pub fn is_full(&self) -> bool {
        self.order() == self.parent.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn contains(&self, e: usize) -> bool {
        self.elements.binary_search(&e).is_ok()
    }

    pub fn is_normal(&self) -> bool {
        (0..self.parent.order())
            .all(|g| self.parent.conjugate_set(&self.elements, g) == self.elements)
    }
}

/// One representative per conjugacy class of subgroups, sorted by order
/// then lexicographically; always includes the trivial and full subgroups.
pub fn subgroup_reps(g: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    g.conjugacy_class_reps(g.all_subgroups())
        .into_iter()
        .map(|set| Subgroup::from_elements(g.clone(), set).expect("enumerated subgroups close"))
        .collect()
}

/// One representative per conjugacy class of cyclic subgroups, including
/// the trivial one.
pub fn cyclic_subgroup_reps(g: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    let cyclics: Vec<Vec<usize>> = (0..g.order()).map(|e| g.cyclic_closure(e)).collect();
    g.conjugacy_class_reps(cyclics)
        .into_iter()
        .map(|set| Subgroup::from_elements(g.clone(), set).expect("cyclic subgroups close"))
        .collect()
}

/// Transitive permutation action of the group on left cosets of `h`,
/// of degree [G:h]. `perms[g][c]` is the image coset of coset `c` under
/// the group element `g`; cosets are listed in order of their smallest
/// element, with a fixed representative each.
#[derive(Clone, Debug)]
pub struct CosetAction {
    pub reps: Vec<usize>,
    pub coset_of: Vec<usize>,
    pub perms: Vec<Vec<usize>>,
}

pub fn coset_permutation_action(g: &Arc<FiniteGroup>, h: &Subgroup) -> Result<CosetAction> {
    if !Arc::ptr_eq(g, &h.parent) {
        return Err(Error::ForeignSubgroup(
            "subgroup belongs to a different group".into(),
        ));
    }
    let n = g.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &hh in &h.elements {
            coset_of[g.mul(x, hh)] = c;
        }
    }
    let degree = reps.len();
    let mut perms = Vec::with_capacity(n);
    for e in 0..n {
        let mut p = vec![0usize; degree];
        for (c, &rep) in reps.iter().enumerate() {
            p[c] = coset_of[g.mul(e, rep)];
        }
        perms.push(p);
    }
    Ok(CosetAction {
        reps,
        coset_of,
        perms,
    })
}

fn cycle_perm(degree: usize, cycles: &[Vec<usize>]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..degree).collect();
    for cy in cycles {
        for w in 0..cy.len() {
            p[cy[w]] = cy[(w + 1) % cy.len()];
        }
    }
    p
}

/// Small catalog of named groups used by presets, sweeps, and the CLI.
/// Names: "1", "Zn" (n <= 16), "V4"/"Z2xZ2", "Z2xZ4", "Z2xZ2xZ2", "Z3xZ3",
/// "Z2xZ6", "Z2xZ8", "Z4xZ4", "S3", "S4", "A4", "D4".."D8", "Q8".
pub fn named_group(name: &str) -> Result<Arc<FiniteGroup>> {
    let cap = DEFAULT_ORDER_CAP;
    let cyclic = |n: usize| {
        if n == 1 {
            FiniteGroup::from_permutations(vec![], cap)
        } else {
            FiniteGroup::from_permutations(vec![cycle_perm(n, &[(0..n).collect()])], cap)
        }
    };
    let dihedral = |n: usize| {
        let r = cycle_perm(n, &[(0..n).collect()]);
        let s: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        FiniteGroup::from_permutations(vec![r, s], cap)
    };
    let product_of_cycles = |sizes: &[usize]| {
        let degree: usize = sizes.iter().sum();
        let mut gens = Vec::new();
        let mut off = 0;
        for &s in sizes {
            gens.push(cycle_perm(degree, &[(off..off + s).collect()]));
            off += s;
        }
        FiniteGroup::from_permutations(gens, cap)
    };
    match name {
        "1" | "trivial" | "Z1" => cyclic(1),
        _ if name.starts_with('Z') && !name.contains('x') => {
            let n: usize = name[1..]
                .parse()
                .map_err(|_| Error::Invalid(format!("unknown group name: {name}")))?;
            if n == 0 || n > 16 {
                return Err(Error::Invalid(format!("cyclic order out of range: {n}")));
            }
            cyclic(n)
        }
        "V4" | "Z2xZ2" => product_of_cycles(&[2, 2]),
        "Z2xZ4" => product_of_cycles(&[2, 4]),
        "Z2xZ2xZ2" => product_of_cycles(&[2, 2, 2]),
        "Z3xZ3" => product_of_cycles(&[3, 3]),
        "Z2xZ6" => product_of_cycles(&[2, 6]),
        "Z2xZ8" => product_of_cycles(&[2, 8]),
        "Z4xZ4" => product_of_cycles(&[4, 4]),
        "S3" => FiniteGroup::from_permutations(
            vec![cycle_perm(3, &[vec![0, 1]]), cycle_perm(3, &[vec![0, 1, 2]])],
            cap,
        ),
        "S4" => FiniteGroup::from_permutations(
            vec![
                cycle_perm(4, &[vec![0, 1]]),
                cycle_perm(4, &[vec![0, 1, 2, 3]]),
            ],
            cap,
        ),
        "A4" => FiniteGroup::from_permutations(
            vec![
                cycle_perm(4, &[vec![0, 1, 2]]),
                cycle_perm(4, &[vec![0, 1], vec![2, 3]]),
            ],
            cap,
        ),
        "D4" => dihedral(4),
        "D5" => dihedral(5),
        "D6" => dihedral(6),
        "D7" => dihedral(7),
        "D8" => dihedral(8),
        "Q8" => FiniteGroup::from_permutations(
            vec![
                // left multiplication by i and j on {1,-1,i,-i,j,-j,k,-k}
                vec![2, 3, 1, 0, 6, 7, 5, 4],
                vec![4, 5, 7, 6, 1, 0, 2, 3],
            ],
            cap,
        ),
        _ => Err(Error::Invalid(format!("unknown group name: {name}"))),
    }
}

/// Names of the catalog groups with order at most `max_order`.
pub fn catalog_group_names(max_order: usize) -> Vec<&'static str> {
    let all: Vec<(&str, usize)> = vec![
        ("1", 1),
        ("Z2", 2),
        ("Z3", 3),
        ("Z4", 4),
        ("V4", 4),
        ("Z5", 5),
        ("Z6", 6),
        ("S3", 6),
        ("Z7", 7),
        ("Z8", 8),
        ("Z2xZ4", 8),
        ("Z2xZ2xZ2", 8),
        ("D4", 8),
        ("Q8", 8),
        ("Z9", 9),
        ("Z3xZ3", 9),
        ("Z10", 10),
        ("D5", 10),
        ("Z11", 11),
        ("Z12", 12),
        ("Z2xZ6", 12),
        ("A4", 12),
        ("D6", 12),
        ("Z13", 13),
        ("Z14", 14),
        ("D7", 14),
        ("Z15", 15),
        ("Z16", 16),
        ("Z2xZ8", 16),
        ("Z4xZ4", 16),
        ("D8", 16),
        ("S4", 24),
    ];
    all.into_iter()
        .filter(|&(_, o)| o <= max_order)
        .map(|(n, _)| n)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_transposition_gives_order_two() {
        let g = FiniteGroup::from_permutations(vec![vec![1, 0]], 64).unwrap();
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let g = FiniteGroup::from_permutations(vec![], 64).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.identity(), 0);
    }

    #[test]
    fn s3_enumerates_to_order_six() {
        let g = named_group("S3").unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        // closure and inverse sanity over the table
        for a in 0..6 {
            assert_eq!(g.mul(a, g.inv(a)), g.identity());
        }
    }

    #[test]
    fn s3_subgroup_classes() {
        let g = named_group("S3").unwrap();
        let reps = subgroup_reps(&g);
        // 1, <(12)>, <(123)>, S3
        assert_eq!(reps.len(), 4);
        let orders: Vec<usize> = reps.iter().map(|h| h.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
        let cyc = cyclic_subgroup_reps(&g);
        assert_eq!(cyc.len(), 3); // trivial, order 2, order 3
    }

    #[test]
    fn klein_four_has_five_subgroups() {
        let g = named_group("V4").unwrap();
        let all = g.all_subgroups();
        assert_eq!(all.len(), 5);
        let reps = subgroup_reps(&g);
        assert_eq!(reps.len(), 5); // all normal
        let cyc = cyclic_subgroup_reps(&g);
        assert_eq!(cyc.len(), 4);
    }

    #[test]
    fn z4_cyclic_subgroups() {
        let g = named_group("Z4").unwrap();
        let cyc = cyclic_subgroup_reps(&g);
        assert_eq!(cyc.len(), 3);
        assert!(g.is_cyclic_group());
    }

    #[test]
    fn q8_is_the_quaternion_group() {
        let g = named_group("Q8").unwrap();
        assert_eq!(g.order(), 8);
        assert!(!g.is_abelian());
        // exactly one element of order 2
        let order2 = (0..8).filter(|&e| g.element_order(e) == 2).count();
        assert_eq!(order2, 1);
    }

    #[test]
    fn coset_action_on_s3() {
        let g = named_group("S3").unwrap();
        let reps = subgroup_reps(&g);
        let h2 = reps.iter().find(|h| h.order() == 2).unwrap();
        let act = coset_permutation_action(&g, h2).unwrap();
        assert_eq!(act.reps.len(), 3);
        // action is transitive: some element moves coset 0 to each coset
        for target in 0..3 {
            assert!((0..6).any(|e| act.perms[e][0] == target));
        }
        // full subgroup: degree 1
        let full = reps.last().unwrap();
        let act1 = coset_permutation_action(&g, full).unwrap();
        assert_eq!(act1.reps.len(), 1);
        // trivial subgroup: regular representation
        let act_reg = coset_permutation_action(&g, &reps[0]).unwrap();
        assert_eq!(act_reg.reps.len(), 6);
    }

    #[test]
    fn lagrange_audit_on_catalog() {
        for name in catalog_group_names(16) {
            let g = named_group(name).unwrap();
            for h in subgroup_reps(&g) {
                assert_eq!(g.order() % h.order(), 0, "{name}");
            }
        }
    }

    #[test]
    fn matrix_generators_rejected_when_singular() {
        let m = IntMatrix::from_rows_i64(&[vec![2, 0], vec![0, 1]]);
        assert!(FiniteGroup::from_matrices(vec![m], 64).is_err());
    }

    #[test]
    fn matrix_group_minus_one() {
        let m = IntMatrix::from_rows_i64(&[vec![-1]]);
        let g = FiniteGroup::from_matrices(vec![m], 64).unwrap();
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn order_cap_enforced() {
        let r = FiniteGroup::from_permutations(
            vec![cycle_perm(7, &[(0..7).collect()])],
            5,
        );
        assert!(matches!(r, Err(Error::OrderCap { .. })));
    }
}
