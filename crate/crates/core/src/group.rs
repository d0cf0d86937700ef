//! Finite permutation groups stored as complete, canonically ordered element tables.

use std::collections::HashSet;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Default bound on the number of elements produced by [`generate_group`].
pub const DEFAULT_ELEMENT_CAP: usize = 10_000;

/// Multiplication tables are materialized up to this order.
const MUL_TABLE_LIMIT: usize = 2048;

/// A finite group of permutations with its full element list.
///
/// Elements are sorted lexicographically by image array, so index 0 is always the identity.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    degree: usize,
    elements: Vec<Permutation>,
    generators: Vec<usize>,
    mul_table: Option<Vec<u32>>,
    inverses: Vec<u32>,
    orders: Vec<u64>,
}

/// Closure of `gens` under composition, with the default element cap.
pub fn generate_group(degree: usize, gens: &[Permutation]) -> Result<FiniteGroup> {
    generate_group_with_cap(degree, gens, DEFAULT_ELEMENT_CAP)
}

pub fn generate_group_with_cap(
    degree: usize,
    gens: &[Permutation],
    cap: usize,
) -> Result<FiniteGroup> {
    if degree == 0 {
        return Err(Error::Input("degree must be at least 1".into()));
    }
    for g in gens {
        if g.degree() != degree {
            return Err(Error::Input(format!(
                "generator {g} has degree {} but the group has degree {degree}",
                g.degree()
            )));
        }
    }
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::new();
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for g in gens {
                let y = x.compose_unchecked(g);
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(Error::Size {
                            what: "group order",
                            cap,
                        });
                    }
                    seen.insert(y.clone());
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    let mut elements: Vec<Permutation> = seen.into_iter().collect();
    elements.sort();
    let mut generators = Vec::new();
    for g in gens {
        let i = elements
            .binary_search(g)
            .expect("generator lies in its closure");
        if !generators.contains(&i) {
            generators.push(i);
        }
    }
    Ok(FiniteGroup::from_sorted(degree, elements, generators, None))
}

impl FiniteGroup {
    /// Assembles a group from an already sorted, closed element list.
    fn from_sorted(
        degree: usize,
        elements: Vec<Permutation>,
        generators: Vec<usize>,
        mul_table: Option<Vec<u32>>,
    ) -> Self {
        let n = elements.len();
        let lookup = |p: &Permutation| elements.binary_search(p).expect("closed element set");
        let mul_table = mul_table.or_else(|| {
            (n <= MUL_TABLE_LIMIT).then(|| {
                let mut t = Vec::with_capacity(n * n);
                for a in &elements {
                    for b in &elements {
                        t.push(lookup(&a.compose_unchecked(b)) as u32);
                    }
                }
                t
            })
        });
        let inverses = elements
            .iter()
            .map(|p| lookup(&p.inverse()) as u32)
            .collect();
        let orders = elements.iter().map(Permutation::order).collect();
        FiniteGroup {
            degree,
            elements,
            generators,
            mul_table,
            inverses,
            orders,
        }
    }

    pub fn trivial(degree: usize) -> Result<Self> {
        generate_group(degree, &[])
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    #[inline]
    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    /// Generator indices into [`FiniteGroup::elements`].
    #[inline]
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_perms(&self) -> Vec<Permutation> {
        self.generators
            .iter()
            .map(|&i| self.elements[i].clone())
            .collect()
    }

    #[inline]
    pub fn identity(&self) -> usize {
        0
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.elements.binary_search(p).ok()
    }

    /// Index of `elements[a] ∘ elements[b]`.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.mul_table {
            Some(t) => t[a * self.order() + b] as usize,
            None => self
                .index_of(&self.elements[a].compose_unchecked(&self.elements[b]))
                .expect("group is closed"),
        }
    }

    #[inline]
    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    #[inline]
    pub fn element_order(&self, a: usize) -> u64 {
        self.orders[a]
    }

    pub fn power(&self, a: usize, k: u64) -> usize {
        let mut result = self.identity();
        let mut base = a;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        result
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter()
            .all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Exponent of the group: lcm of the element orders.
    pub fn exponent(&self) -> u64 {
        use num_integer::Integer;
        self.orders.iter().fold(1, |acc, o| acc.lcm(o))
    }

    /// Sorted `(element order, count)` pairs.
    pub fn order_histogram(&self) -> Vec<(u64, usize)> {
        histogram(self.orders.iter().copied())
    }

    /// Index set of the whole group.
    pub fn all(&self) -> BitSet {
        BitSet::full(self.order())
    }

    /// Smallest subgroup containing `start` and the elements `gens`.
    ///
    /// `start` must contain the identity and be closed under right multiplication by its own
    /// generators, which holds for any subgroup.
    pub fn closure(&self, start: &BitSet, gens: &[usize]) -> BitSet {
        let mut set = start.clone();
        set.insert(self.identity());
        let mut queue: Vec<usize> = set.iter().collect();
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push(y);
                }
            }
        }
        set
    }

    /// Subgroup generated by the given element indices.
    pub fn subgroup_generated(&self, gens: &[usize]) -> BitSet {
        self.closure(&BitSet::new(self.order()), gens)
    }

    /// The complex product `HK = {hk : h ∈ H, k ∈ K}`.
    pub fn product_set(&self, h: &BitSet, k: &BitSet) -> BitSet {
        let mut out = BitSet::new(self.order());
        let ks: Vec<usize> = k.iter().collect();
        for a in h.iter() {
            for &b in &ks {
                out.insert(self.mul(a, b));
            }
        }
        out
    }

    pub fn is_subgroup(&self, set: &BitSet) -> bool {
        if !set.contains(self.identity()) {
            return false;
        }
        let members: Vec<usize> = set.iter().collect();
        members.iter().all(|&a| {
            set.contains(self.inverse(a)) && members.iter().all(|&b| set.contains(self.mul(a, b)))
        })
    }

    /// Hughes subgroup `H_p(G)`: generated by the elements `g` with `g^p ≠ 1`.
    pub fn hughes_subgroup(&self, p: u64) -> Result<BitSet> {
        if !is_prime(p) {
            return Err(Error::Input(format!("{p} is not prime")));
        }
        let gens: Vec<usize> = (0..self.order())
            .filter(|&g| self.power(g, p) != self.identity())
            .collect();
        Ok(self.subgroup_generated(&gens))
    }

    /// Re-materializes a subgroup as a standalone group, re-indexing its elements in canonical
    /// order. Returns the group and, for each new index, the index in `self`.
    pub fn restrict(&self, members: &BitSet, generators: &[usize]) -> (FiniteGroup, Vec<usize>) {
        let old: Vec<usize> = members.iter().collect();
        let n = old.len();
        let mut new_index = vec![u32::MAX; self.order()];
        for (new, &o) in old.iter().enumerate() {
            new_index[o] = new as u32;
        }
        let elements: Vec<Permutation> = old.iter().map(|&o| self.elements[o].clone()).collect();
        let gens: Vec<usize> = generators
            .iter()
            .map(|&g| new_index[g] as usize)
            .filter(|&g| g != 0)
            .collect();
        let mul_table = self.mul_table.as_ref().map(|_| {
            let mut t = Vec::with_capacity(n * n);
            for &a in &old {
                for &b in &old {
                    t.push(new_index[self.mul(a, b)]);
                }
            }
            t
        });
        let inverses = old.iter().map(|&o| new_index[self.inverse(o)]).collect();
        let orders = old.iter().map(|&o| self.orders[o]).collect();
        let group = FiniteGroup {
            degree: self.degree,
            elements,
            generators: gens,
            mul_table,
            inverses,
            orders,
        };
        (group, old)
    }
}

pub(crate) fn histogram(values: impl Iterator<Item = u64>) -> Vec<(u64, usize)> {
    let mut v: Vec<u64> = values.collect();
    v.sort_unstable();
    let mut out: Vec<(u64, usize)> = Vec::new();
    for x in v {
        match out.last_mut() {
            Some((k, c)) if *k == x => *c += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
