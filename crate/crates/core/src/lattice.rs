//! The subgroup lattice `L(G)`: enumeration, meet/join, Möbius values, and the permuting core.

use std::collections::HashMap;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::Permutation;

/// Default bound on the number of subgroups produced by [`enumerate_subgroups`].
pub const DEFAULT_SUBGROUP_CAP: usize = 100_000;

/// A subgroup of the parent group, identified by its position in the canonical lattice order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub id: usize,
    /// Member set over the parent's element indices.
    pub members: BitSet,
    pub order: usize,
    /// Canonical generating set (parent element indices).
    pub generators: Vec<usize>,
}

/// An interval `[upper/lower] = {Z : lower ≤ Z ≤ upper}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lower: usize,
    pub upper: usize,
    pub members: Vec<usize>,
}

/// All subgroups of a finite group ordered by inclusion.
///
/// Subgroups are sorted by `(order, member list)`, so `a ≤ b` implies `a.id ≤ b.id`; id 0 is the
/// trivial subgroup and the last id is the whole group. Möbius rows and the permutability
/// relation are filled lazily and behave as one logical map under concurrent queries.
#[derive(Debug)]
pub struct SubgroupLattice {
    group: FiniteGroup,
    subgroups: Vec<Subgroup>,
    index: HashMap<BitSet, usize>,
    up: Vec<BitSet>,
    permutes: OnceLock<Vec<BitSet>>,
    mobius_rows: Vec<OnceLock<Vec<i64>>>,
}

/// Enumerates every subgroup of `group` with the default subgroup cap.
pub fn enumerate_subgroups(group: FiniteGroup) -> Result<SubgroupLattice> {
    enumerate_subgroups_with_cap(group, DEFAULT_SUBGROUP_CAP)
}

/// Seeds with the cyclic subgroups, then joins every known subgroup with every cyclic subgroup
/// until no new subgroup appears. Every subgroup is a join of cyclic subgroups, so this reaches
/// all of them.
pub fn enumerate_subgroups_with_cap(group: FiniteGroup, cap: usize) -> Result<SubgroupLattice> {
    let n = group.order();
    let mut sets: Vec<BitSet> = Vec::new();
    let mut gens: Vec<Vec<usize>> = Vec::new();
    let mut index: HashMap<BitSet, usize> = HashMap::new();

    let mut push = |set: BitSet,
                    g: Vec<usize>,
                    sets: &mut Vec<BitSet>,
                    gens: &mut Vec<Vec<usize>>|
     -> Result<Option<usize>> {
        if index.contains_key(&set) {
            return Ok(None);
        }
        if sets.len() >= cap {
            return Err(Error::Size {
                what: "subgroup count",
                cap,
            });
        }
        index.insert(set.clone(), sets.len());
        sets.push(set);
        gens.push(g);
        Ok(Some(sets.len() - 1))
    };

    let mut cyclic: Vec<(usize, usize)> = Vec::new();
    for g in 0..n {
        let c = group.subgroup_generated(&[g]);
        let gen = if g == group.identity() {
            vec![]
        } else {
            vec![g]
        };
        if let Some(id) = push(c, gen, &mut sets, &mut gens)? {
            cyclic.push((id, g));
        }
    }

    let mut i = 0;
    while i < sets.len() {
        for &(cid, g) in &cyclic {
            if sets[cid].is_subset(&sets[i]) {
                continue;
            }
            let mut jg = gens[i].clone();
            jg.push(g);
            let joined = group.closure(&sets[i], &jg);
            push(joined, jg, &mut sets, &mut gens)?;
        }
        i += 1;
    }

    let mut order: Vec<usize> = (0..sets.len()).collect();
    order.sort_by(|&a, &b| {
        sets[a]
            .len()
            .cmp(&sets[b].len())
            .then_with(|| sets[a].cmp(&sets[b]))
    });
    let members: Vec<BitSet> = order.into_iter().map(|k| sets[k].clone()).collect();
    Ok(SubgroupLattice::assemble(group, members, None))
}

impl SubgroupLattice {
    pub fn new(group: FiniteGroup) -> Result<Self> {
        enumerate_subgroups(group)
    }

    /// Builds the lattice from canonically sorted member sets.
    fn assemble(group: FiniteGroup, members: Vec<BitSet>, permutes: Option<Vec<BitSet>>) -> Self {
        let count = members.len();
        let subgroups: Vec<Subgroup> = members
            .into_iter()
            .enumerate()
            .map(|(id, m)| {
                let generators = canonical_generators(&group, &m);
                Subgroup {
                    id,
                    order: m.len(),
                    members: m,
                    generators,
                }
            })
            .collect();
        let index = subgroups
            .iter()
            .map(|s| (s.members.clone(), s.id))
            .collect();
        let up = (0..count)
            .map(|i| {
                let mut row = BitSet::new(count);
                let a = &subgroups[i];
                for b in &subgroups[i..] {
                    if b.order % a.order == 0 && a.members.is_subset(&b.members) {
                        row.insert(b.id);
                    }
                }
                row
            })
            .collect();
        let cell = OnceLock::new();
        if let Some(p) = permutes {
            let _ = cell.set(p);
        }
        SubgroupLattice {
            group,
            subgroups,
            index,
            up,
            permutes: cell,
            mobius_rows: (0..count).map(|_| OnceLock::new()).collect(),
        }
    }

    #[inline]
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    #[inline]
    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    #[inline]
    pub fn subgroup(&self, id: usize) -> &Subgroup {
        &self.subgroups[id]
    }

    #[inline]
    pub fn bottom(&self) -> usize {
        0
    }

    #[inline]
    pub fn top(&self) -> usize {
        self.subgroups.len() - 1
    }

    pub fn id_of(&self, members: &BitSet) -> Option<usize> {
        self.index.get(members).copied()
    }

    /// Looks up the subgroup generated by the given permutations.
    pub fn id_generated_by(&self, gens: &[Permutation]) -> Result<usize> {
        let idx = gens
            .iter()
            .map(|p| {
                self.group
                    .index_of(p)
                    .ok_or_else(|| Error::Input(format!("{p} is not an element of the group")))
            })
            .collect::<Result<Vec<_>>>()?;
        let set = self.group.subgroup_generated(&idx);
        Ok(self.id_of(&set).expect("every subgroup is enumerated"))
    }

    /// `a ≤ b` in the containment order.
    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    /// Ids of all `Z` with `a ≤ Z`.
    pub fn up_set(&self, a: usize) -> &BitSet {
        &self.up[a]
    }

    /// Ids of all `Z` with `Z ≤ a`, ascending.
    pub fn down_set(&self, a: usize) -> Vec<usize> {
        (0..=a).filter(|&z| self.leq(z, a)).collect()
    }

    /// Intersection of two subgroups.
    pub fn meet(&self, a: usize, b: usize) -> usize {
        let m = self.subgroups[a]
            .members
            .intersection(&self.subgroups[b].members);
        self.id_of(&m).expect("lattice is meet-closed")
    }

    /// Subgroup generated by the union of two subgroups.
    pub fn join(&self, a: usize, b: usize) -> usize {
        if self.leq(a, b) {
            return b;
        }
        if self.leq(b, a) {
            return a;
        }
        let sa = &self.subgroups[a];
        let mut gens = sa.generators.clone();
        gens.extend_from_slice(&self.subgroups[b].generators);
        let j = self.group.closure(&sa.members, &gens);
        self.id_of(&j).expect("lattice is join-closed")
    }

    pub fn interval(&self, lower: usize, upper: usize) -> Result<Interval> {
        if !self.leq(lower, upper) {
            return Err(Error::Domain(format!(
                "subgroup {lower} is not contained in subgroup {upper}"
            )));
        }
        let members = self.up[lower]
            .iter()
            .filter(|&z| self.leq(z, upper))
            .collect();
        Ok(Interval {
            lower,
            upper,
            members,
        })
    }

    /// `μ(lower, upper)` from the recursion `μ(H,H) = 1`, `Σ_{H ≤ Z ≤ K} μ(H,Z) = 0` for `H < K`.
    pub fn mobius(&self, lower: usize, upper: usize) -> Result<i64> {
        if !self.leq(lower, upper) {
            return Err(Error::Domain(format!(
                "mobius({lower}, {upper}): subgroup {lower} is not contained in subgroup {upper}"
            )));
        }
        Ok(self.mobius_row(lower)[upper])
    }

    /// `μ(lower, Z)` for every id `Z` (zero where `lower ≰ Z`).
    pub fn mobius_row(&self, lower: usize) -> &[i64] {
        self.mobius_rows[lower].get_or_init(|| {
            let ups: Vec<usize> = self.up[lower].iter().collect();
            let mut row = vec![0i64; self.len()];
            for (k, &w) in ups.iter().enumerate() {
                if w == lower {
                    row[w] = 1;
                    continue;
                }
                let s: i64 = ups[..k]
                    .iter()
                    .filter(|&&z| self.leq(z, w))
                    .map(|&z| row[z])
                    .sum();
                row[w] = -s;
            }
            row
        })
    }

    /// `μ(T, G)` for every subgroup `T`.
    pub fn mobius_to_top(&self) -> Vec<i64> {
        let top = self.top();
        (0..self.len())
            .into_par_iter()
            .map(|t| self.mobius_row(t)[top])
            .collect()
    }

    /// Whether `XY = YX` as element sets, via the complex products.
    pub fn permutes(&self, a: usize, b: usize) -> bool {
        self.permutability()[a].contains(b)
    }

    /// Row `a` holds every `b` with `XaXb = XbXa`.
    pub fn permutability(&self) -> &[BitSet] {
        self.permutes.get_or_init(|| {
            let n = self.len();
            let upper: Vec<Vec<usize>> = (0..n)
                .into_par_iter()
                .map(|a| {
                    let x = &self.subgroups[a].members;
                    ((a + 1)..n)
                        .filter(|&b| {
                            let y = &self.subgroups[b].members;
                            self.group.product_set(x, y) == self.group.product_set(y, x)
                        })
                        .collect()
                })
                .collect();
            let mut rows: Vec<BitSet> = (0..n).map(|a| BitSet::from_indices(n, [a])).collect();
            for (a, bs) in upper.into_iter().enumerate() {
                for b in bs {
                    rows[a].insert(b);
                    rows[b].insert(a);
                }
            }
            rows
        })
    }

    /// Ordered pairs `(X, Y)` with `XY = YX`.
    pub fn permuting_pair_count(&self) -> u64 {
        self.permutability().iter().map(|r| r.len() as u64).sum()
    }

    /// Subgroups permuting with every subgroup.
    pub fn permuting_with_all(&self) -> BitSet {
        let n = self.len();
        BitSet::from_indices(n, (0..n).filter(|&a| self.permutability()[a].len() == n))
    }

    /// Smallest sublattice containing every subgroup that permutes with all subgroups.
    pub fn permuting_core(&self) -> BitSet {
        let mut core = self.permuting_with_all();
        loop {
            let ids: Vec<usize> = core.iter().collect();
            let mut next = core.clone();
            for (i, &a) in ids.iter().enumerate() {
                for &b in &ids[i + 1..] {
                    next.insert(self.meet(a, b));
                }
            }
            let ids: Vec<usize> = next.iter().collect();
            for (i, &a) in ids.iter().enumerate() {
                for &b in &ids[i + 1..] {
                    next.insert(self.join(a, b));
                }
            }
            if next == core {
                return core;
            }
            core = next;
        }
    }

    /// Every ordered pair of subgroups permutes.
    pub fn is_quasihamiltonian(&self) -> bool {
        let n = self.len();
        self.permutability().iter().all(|r| r.len() == n)
    }

    pub fn is_normal(&self, id: usize) -> bool {
        let s = &self.subgroups[id];
        self.group.generators().iter().all(|&g| {
            let gi = self.group.inverse(g);
            s.generators
                .iter()
                .all(|&h| s.members.contains(self.group.mul(self.group.mul(g, h), gi)))
        })
    }

    pub fn is_subgroup_abelian(&self, id: usize) -> bool {
        let g = &self.subgroups[id].generators;
        g.iter().all(|&a| {
            g.iter()
                .all(|&b| self.group.mul(a, b) == self.group.mul(b, a))
        })
    }

    /// Generator notation such as `<(1,2,3),(1,2)>`.
    pub fn label(&self, id: usize) -> String {
        let gens: Vec<String> = self.subgroups[id]
            .generators
            .iter()
            .map(|&g| self.group.element(g).to_cycle_string())
            .collect();
        if gens.is_empty() {
            "<()>".to_string()
        } else {
            format!("<{}>", gens.join(","))
        }
    }

    /// The lattice of subgroup `h` as a standalone group, re-indexed in canonical order.
    ///
    /// Permutability data already computed here carries over, since complex products do not
    /// depend on the ambient group.
    pub fn restrict(&self, h: usize) -> SubgroupLattice {
        let sub = &self.subgroups[h];
        let (group, old) = self.group.restrict(&sub.members, &sub.generators);
        let mut new_index = vec![usize::MAX; self.group.order()];
        for (new, &o) in old.iter().enumerate() {
            new_index[o] = new;
        }
        let ids = self.down_set(h);
        let members: Vec<BitSet> = ids
            .iter()
            .map(|&j| {
                BitSet::from_indices(
                    group.order(),
                    self.subgroups[j].members.iter().map(|e| new_index[e]),
                )
            })
            .collect();
        let permutes = self.permutes.get().map(|rows| {
            ids.iter()
                .map(|&a| {
                    BitSet::from_indices(
                        ids.len(),
                        ids.iter()
                            .enumerate()
                            .filter(|(_, &b)| rows[a].contains(b))
                            .map(|(k, _)| k),
                    )
                })
                .collect()
        });
        SubgroupLattice::assemble(group, members, permutes)
    }

    pub fn to_dump(&self) -> LatticeDump {
        LatticeDump {
            degree: self.group.degree(),
            elements: self.group.elements().to_vec(),
            generators: self.group.generators().to_vec(),
            subgroups: self
                .subgroups
                .iter()
                .map(|s| SubgroupDump {
                    id: s.id,
                    order: s.order,
                    generators: s.generators.clone(),
                    members: s.members.to_vec(),
                })
                .collect(),
            leq: (0..self.len())
                .flat_map(|a| {
                    self.up[a]
                        .iter()
                        .filter(move |&b| b != a)
                        .map(move |b| (a, b))
                })
                .collect(),
            core: self.permuting_core().to_vec(),
        }
    }

    /// Rebuilds a lattice from a dump, validating it against `group`.
    pub fn from_dump(group: FiniteGroup, dump: &LatticeDump) -> Result<SubgroupLattice> {
        if dump.elements != group.elements() {
            return Err(Error::Input(
                "lattice dump was produced for a different element table".into(),
            ));
        }
        let n = group.order();
        let mut members = Vec::with_capacity(dump.subgroups.len());
        for (k, s) in dump.subgroups.iter().enumerate() {
            if s.id != k || s.members.iter().any(|&e| e >= n) {
                return Err(Error::Input(format!("malformed subgroup entry {k}")));
            }
            let set = BitSet::from_indices(n, s.members.iter().copied());
            if set.len() != s.order || !group.is_subgroup(&set) {
                return Err(Error::Input(format!("entry {k} is not a subgroup")));
            }
            members.push(set);
        }
        let sorted = members
            .windows(2)
            .all(|w| (w[0].len(), &w[0]) < (w[1].len(), &w[1]));
        if !sorted || members.is_empty() {
            return Err(Error::Input("subgroups are not in canonical order".into()));
        }
        let lattice = SubgroupLattice::assemble(group, members, None);
        if lattice.subgroups[lattice.top()].order != n {
            return Err(Error::Input("dump does not contain the whole group".into()));
        }
        let expected: Vec<(usize, usize)> = (0..lattice.len())
            .flat_map(|a| {
                lattice.up[a]
                    .iter()
                    .filter(move |&b| b != a)
                    .map(move |b| (a, b))
            })
            .collect();
        if expected != dump.leq {
            return Err(Error::Input(
                "containment pairs do not match member sets".into(),
            ));
        }
        Ok(lattice)
    }
}

/// Greedy generating set: scan members by decreasing element order, keeping each element not
/// already in the span of those kept.
fn canonical_generators(group: &FiniteGroup, members: &BitSet) -> Vec<usize> {
    let mut candidates: Vec<usize> = members.iter().filter(|&e| e != 0).collect();
    candidates.sort_by(|&a, &b| {
        group
            .element_order(b)
            .cmp(&group.element_order(a))
            .then(a.cmp(&b))
    });
    let target = members.len();
    let mut span = BitSet::from_indices(group.order(), [group.identity()]);
    let mut gens = Vec::new();
    for e in candidates {
        if span.len() == target {
            break;
        }
        if !span.contains(e) {
            gens.push(e);
            span = group.closure(&span, &gens);
        }
    }
    gens
}

/// Serializable lattice: element table, subgroups as member index arrays, strict containment
/// pairs, and the permuting-core ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDump {
    pub degree: usize,
    pub elements: Vec<Permutation>,
    pub generators: Vec<usize>,
    pub subgroups: Vec<SubgroupDump>,
    pub leq: Vec<(usize, usize)>,
    pub core: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupDump {
    pub id: usize,
    pub order: usize,
    pub generators: Vec<usize>,
    pub members: Vec<usize>,
}
