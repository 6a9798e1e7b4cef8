//! Finite groups given by multiplication tables.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Orders up to this bound get a full associativity check; larger tables are sampled.
const FULL_ASSOCIATIVITY_ORDER: usize = 64;
const ASSOCIATIVITY_SAMPLES: usize = 10_000;

/// A finite group stored as its multiplication table: `table[a * order + b]`
/// is the index of `a·b`.
#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
    generators: Vec<usize>,
    names: Vec<String>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.identity == other.identity && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("generators", &self.generator_names())
            .finish()
    }
}

impl FiniteGroup {
    /// Validates a multiplication table. The identity is inferred; when
    /// `generators` is `None` a generating set is chosen greedily, and when
    /// `names` is `None` elements are named by their index.
    pub fn from_table(
        table: Vec<Vec<usize>>,
        generators: Option<Vec<usize>>,
        names: Option<Vec<String>>,
    ) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        let mut flat = Vec::with_capacity(order * order);
        for (a, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidGroup(format!("row {a} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= order) {
                return Err(Error::InvalidGroup(format!("entry {bad} out of range in row {a}")));
            }
            flat.extend_from_slice(row);
        }
        Self::from_flat(order, flat, generators, names)
    }

    fn from_flat(
        order: usize,
        table: Vec<usize>,
        generators: Option<Vec<usize>>,
        names: Option<Vec<String>>,
    ) -> Result<Self> {
        let mul = |a: usize, b: usize| table[a * order + b];

        // Latin square
        for a in 0..order {
            let mut row_seen = vec![false; order];
            let mut col_seen = vec![false; order];
            for b in 0..order {
                row_seen[mul(a, b)] = true;
                col_seen[mul(b, a)] = true;
            }
            if !row_seen.iter().all(|&x| x) || !col_seen.iter().all(|&x| x) {
                return Err(Error::InvalidGroup(format!("not a Latin square at element {a}")));
            }
        }

        let identity = (0..order)
            .find(|&e| (0..order).all(|a| mul(e, a) == a && mul(a, e) == a))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;

        let check = |a: usize, b: usize, c: usize| mul(mul(a, b), c) == mul(a, mul(b, c));
        if order <= FULL_ASSOCIATIVITY_ORDER {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        if !check(a, b, c) {
                            return Err(Error::InvalidGroup(format!(
                                "not associative at ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..ASSOCIATIVITY_SAMPLES {
                let (a, b, c) =
                    (rng.gen_range(0..order), rng.gen_range(0..order), rng.gen_range(0..order));
                if !check(a, b, c) {
                    return Err(Error::InvalidGroup(format!("not associative at ({a},{b},{c})")));
                }
            }
        }

        let mut inverses = vec![0; order];
        for a in 0..order {
            let inv = (0..order)
                .find(|&b| mul(a, b) == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
            if mul(inv, a) != identity {
                return Err(Error::InvalidGroup(format!("inverse of {a} is not two-sided")));
            }
            inverses[a] = inv;
        }

        let names = match names {
            Some(n) if n.len() != order => {
                return Err(Error::InvalidGroup(format!("{} names for order {order}", n.len())))
            }
            Some(n) => {
                if n.iter().collect::<BTreeSet<_>>().len() != order {
                    return Err(Error::InvalidGroup("element names are not distinct".into()));
                }
                n
            }
            None => (0..order).map(|i| i.to_string()).collect(),
        };

        let mut group = FiniteGroup {
            order,
            table,
            identity,
            inverses,
            generators: Vec::new(),
            names,
        };
        group.generators = match generators {
            Some(gens) => {
                if let Some(&bad) = gens.iter().find(|&&g| g >= order) {
                    return Err(Error::InvalidGroup(format!("generator {bad} out of range")));
                }
                if group.closure(&gens).len() != order {
                    return Err(Error::InvalidGroup("generators do not generate the group".into()));
                }
                gens
            }
            None => group.greedy_generators(0..order),
        };
        Ok(group)
    }

    fn greedy_generators(&self, candidates: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.closure(&gens);
        for c in candidates {
            if !span.contains(&c) {
                gens.push(c);
                span = self.closure(&gens);
            }
        }
        gens
    }

    /// Elements of the subgroup generated by `seed`.
    fn closure(&self, seed: &[usize]) -> BTreeSet<usize> {
        let mut set = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(a) = frontier.pop() {
            for &s in seed {
                let b = self.mul(s, a);
                if set.insert(b) {
                    frontier.push(b);
                }
            }
        }
        set
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn generator_names(&self) -> Vec<&str> {
        self.generators.iter().map(|&g| self.name(g)).collect()
    }

    pub fn element_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != self.identity {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// Same group with a different generating set and display names.
    pub fn relabelled(&self, generators: Vec<usize>, names: Vec<String>) -> Result<Self> {
        Self::from_flat(self.order, self.table.clone(), Some(generators), Some(names))
    }

    /// Breadth-first spanning tree of the Cayley graph: entries
    /// `(element, generator position, predecessor)` with `element = gen · predecessor`,
    /// listed in discovery order (the identity is omitted).
    pub fn cayley_tree(&self) -> Vec<(usize, usize, usize)> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut queue = std::collections::VecDeque::from([self.identity]);
        let mut out = Vec::with_capacity(self.order.saturating_sub(1));
        while let Some(a) = queue.pop_front() {
            for (gi, &s) in self.generators.iter().enumerate() {
                let b = self.mul(s, a);
                if !seen[b] {
                    seen[b] = true;
                    out.push((b, gi, a));
                    queue.push_back(b);
                }
            }
        }
        out
    }
}

/// A subgroup of a parent group, also available as a standalone group.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    elements: Vec<usize>,
    as_group: Arc<FiniteGroup>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.elements == other.elements
    }
}

impl Subgroup {
    /// Validates that `elements` is closed under products and inverses.
    pub fn new(parent: Arc<FiniteGroup>, elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = elements.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&a| a >= parent.order()) {
            return Err(Error::InvalidGroup(format!("element {bad} out of range")));
        }
        if !set.contains(&parent.identity()) {
            return Err(Error::InvalidGroup("subgroup must contain the identity".into()));
        }
        for &a in &set {
            if !set.contains(&parent.inverse(a)) {
                return Err(Error::InvalidGroup(format!("not closed under inverse at {a}")));
            }
            for &b in &set {
                if !set.contains(&parent.mul(a, b)) {
                    return Err(Error::InvalidGroup(format!("not closed at ({a},{b})")));
                }
            }
        }
        let elements: Vec<usize> = set.into_iter().collect();
        let local = |x: usize| elements.binary_search(&x).expect("closed");
        let table: Vec<Vec<usize>> = elements
            .iter()
            .map(|&a| elements.iter().map(|&b| local(parent.mul(a, b))).collect())
            .collect();
        let names = elements.iter().map(|&a| parent.name(a).to_string()).collect();
        // Prefer the parent's generators (in order) when they lie in the subgroup.
        let mut probe: Vec<usize> =
            parent.generators().iter().copied().filter(|g| elements.contains(g)).collect();
        probe.extend(elements.iter().copied());
        let as_group = FiniteGroup::from_table(table, None, Some(names))?;
        let gens = as_group.greedy_generators(probe.into_iter().map(local));
        let as_group = Arc::new(as_group.relabelled(gens, as_group.names().to_vec())?);
        Ok(Subgroup { parent, elements, as_group })
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    /// Sorted parent indices of the subgroup's elements.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.elements.binary_search(&a).is_ok()
    }

    /// Position of a parent element inside the standalone group.
    pub fn local_index(&self, a: usize) -> Option<usize> {
        self.elements.binary_search(&a).ok()
    }

    /// The subgroup re-packaged as a group in its own right; element `i` is
    /// the parent's `elements()[i]`.
    pub fn as_group(&self) -> &Arc<FiniteGroup> {
        &self.as_group
    }

    /// The whole group as a subgroup of itself.
    pub fn full(parent: Arc<FiniteGroup>) -> Self {
        let n = parent.order();
        Self::new(parent, 0..n).expect("a group is a subgroup of itself")
    }
}

/// Cyclic group of order `n`; element `i` is `x^i` and `x` (index 1) generates.
pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidGroup("cyclic group of order 0".into()));
    }
    let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    let names = (0..n)
        .map(|i| match i {
            0 => "e".to_string(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        })
        .collect();
    let gens = if n > 1 { vec![1] } else { vec![] };
    FiniteGroup::from_table(table, Some(gens), Some(names))
}

/// `G × K` with `(a, b)` stored at index `a·|K| + b`. Generators are the
/// embedded generators of `G` followed by those of `K`.
pub fn direct_product(g: &FiniteGroup, k: &FiniteGroup) -> Result<FiniteGroup> {
    let (m, n) = (g.order(), k.order());
    let idx = |a: usize, b: usize| a * n + b;
    let table = (0..m * n)
        .map(|x| {
            let (a1, b1) = (x / n, x % n);
            (0..m * n)
                .map(|y| {
                    let (a2, b2) = (y / n, y % n);
                    idx(g.mul(a1, a2), k.mul(b1, b2))
                })
                .collect()
        })
        .collect();
    let mut gens: Vec<usize> = g.generators().iter().map(|&a| idx(a, k.identity())).collect();
    gens.extend(k.generators().iter().map(|&b| idx(g.identity(), b)));
    let names = (0..m * n).map(|x| format!("({},{})", g.name(x / n), k.name(x % n))).collect();
    FiniteGroup::from_table(table, Some(gens), Some(names))
}

/// Smallest subgroup containing `seed`.
pub fn subgroup_closure(g: &Arc<FiniteGroup>, seed: &[usize]) -> Result<Subgroup> {
    if let Some(&bad) = seed.iter().find(|&&a| a >= g.order()) {
        return Err(Error::InvalidGroup(format!("element {bad} out of range")));
    }
    Subgroup::new(Arc::clone(g), g.closure(seed))
}

/// One representative per left coset `tH`, the smallest index in each coset;
/// the first representative is the identity.
pub fn coset_transversal(g: &FiniteGroup, h: &Subgroup) -> Result<Vec<usize>> {
    if h.parent().as_ref() != g {
        return Err(Error::GroupMismatch);
    }
    let mut covered = vec![false; g.order()];
    let mut reps = vec![g.identity()];
    for &x in h.elements() {
        covered[g.mul(g.identity(), x)] = true;
    }
    for t in 0..g.order() {
        if covered[t] {
            continue;
        }
        reps.push(t);
        for &x in h.elements() {
            covered[g.mul(t, x)] = true;
        }
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn klein() -> Arc<FiniteGroup> {
        let c2 = cyclic(2).unwrap();
        Arc::new(direct_product(&c2, &c2).unwrap())
    }

    #[test]
    fn cyclic_examples() {
        let c1 = cyclic(1).unwrap();
        assert_eq!(c1.order(), 1);
        assert!(c1.generators().is_empty());
        assert_eq!(cyclic(2).unwrap().table_rows(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(cyclic(3).unwrap().element_order(1), 3);
        assert!(cyclic(0).is_err());
    }

    #[test]
    fn direct_product_examples() {
        let k = klein();
        assert_eq!(k.order(), 4);
        let involutions = (0..4).filter(|&a| a != k.identity() && k.element_order(a) == 2).count();
        assert_eq!(involutions, 3);

        let c2 = cyclic(2).unwrap();
        let c3 = cyclic(3).unwrap();
        let trivial = cyclic(1).unwrap();
        assert_eq!(direct_product(&c3, &trivial).unwrap().table_rows(), c3.table_rows());

        // (1,1) = index 1*3+1; iterate its powers.
        let c6 = direct_product(&c2, &c3).unwrap();
        assert_eq!(c6.element_order(4), 6);
    }

    #[test]
    fn embedded_factor_matches() {
        let c3 = cyclic(3).unwrap();
        let c2 = cyclic(2).unwrap();
        let prod = direct_product(&c3, &c2).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(prod.mul(a * 2, b * 2), c3.mul(a, b) * 2);
            }
        }
    }

    #[test]
    fn closure_examples() {
        let k = klein();
        assert_eq!(subgroup_closure(&k, &[]).unwrap().elements(), &[0]);
        // h = (e, x) = index 1
        assert_eq!(subgroup_closure(&k, &[1]).unwrap().elements(), &[0, 1]);
        let c6 = Arc::new(direct_product(&cyclic(2).unwrap(), &cyclic(3).unwrap()).unwrap());
        assert_eq!(subgroup_closure(&c6, &[3]).unwrap().order(), 2);
    }

    #[test]
    fn transversal_examples() {
        let k = klein();
        let full = Subgroup::full(Arc::clone(&k));
        assert_eq!(coset_transversal(&k, &full).unwrap(), vec![0]);
        let h = subgroup_closure(&k, &[1]).unwrap();
        assert_eq!(coset_transversal(&k, &h).unwrap(), vec![0, 2]);
        let c6 = Arc::new(direct_product(&cyclic(2).unwrap(), &cyclic(3).unwrap()).unwrap());
        let h2 = subgroup_closure(&c6, &[3]).unwrap();
        assert_eq!(coset_transversal(&c6, &h2).unwrap().len(), 3);
    }

    #[test]
    fn inverses_and_index() {
        for g in [cyclic(5).unwrap(), direct_product(&cyclic(2).unwrap(), &cyclic(4).unwrap()).unwrap()]
        {
            let g = Arc::new(g);
            for a in 0..g.order() {
                let inv = g.inverse(a);
                assert_eq!(g.mul(a, inv), g.identity());
                assert_eq!(g.mul(inv, a), g.identity());
                assert_eq!((0..g.order()).filter(|&b| g.mul(a, b) == g.identity()).count(), 1);
            }
            for a in 0..g.order() {
                let h = subgroup_closure(&g, &[a]).unwrap();
                assert_eq!(coset_transversal(&g, &h).unwrap().len() * h.order(), g.order());
            }
        }
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![0, 1]], None, None).is_err());
        // Latin square without associativity: a loop of order 5.
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(FiniteGroup::from_table(loop5, None, None).is_err());
        let c2 = cyclic(2).unwrap();
        assert!(FiniteGroup::from_table(c2.table_rows(), Some(vec![0]), None).is_err());
    }

    #[test]
    fn subgroup_standalone_group() {
        let k = klein();
        let h = subgroup_closure(&k, &[2]).unwrap();
        let hg = h.as_group();
        assert_eq!(hg.order(), 2);
        assert_eq!(hg.generators(), &[1]);
        assert_eq!(hg.name(1), k.name(2));
    }
}
