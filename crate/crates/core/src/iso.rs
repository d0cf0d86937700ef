//! Coarse isomorphism-type signatures for subgroups.
//!
//! `(order, abelian, exponent, element-order histogram)` separates every type that occurs in
//! the groups this crate targets; it is not a general isomorphism test.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::group::{histogram, FiniteGroup};
use crate::lattice::SubgroupLattice;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeSignature {
    pub order: usize,
    pub abelian: bool,
    pub exponent: u64,
    pub histogram: Vec<(u64, usize)>,
}

impl TypeSignature {
    pub fn of_group(g: &FiniteGroup) -> Self {
        TypeSignature {
            order: g.order(),
            abelian: g.is_abelian(),
            exponent: g.exponent(),
            histogram: g.order_histogram(),
        }
    }

    pub fn of_subgroup(l: &SubgroupLattice, id: usize) -> Self {
        let g = l.group();
        let s = l.subgroup(id);
        let hist = histogram(s.members.iter().map(|e| g.element_order(e)));
        TypeSignature {
            order: s.order,
            abelian: l.is_subgroup_abelian(id),
            exponent: hist.iter().fold(1, |acc, &(o, _)| num_integer::lcm(acc, o)),
            histogram: hist,
        }
    }

    fn count_of_order(&self, k: u64) -> usize {
        self.histogram
            .iter()
            .find(|&&(o, _)| o == k)
            .map_or(0, |&(_, c)| c)
    }

    fn is_elementary_abelian(&self) -> bool {
        self.abelian && self.histogram.len() == 2 && crate::group::is_prime(self.histogram[1].0)
    }

    /// Dihedral of order `2m` (`m ≥ 3`): an element of order `m` and the right number of
    /// involutions.
    fn is_dihedral(&self) -> bool {
        let n = self.order;
        if self.abelian || !n.is_multiple_of(2) || n < 6 {
            return false;
        }
        let m = n / 2;
        let involutions = if m % 2 == 1 { m } else { m + 1 };
        self.count_of_order(m as u64) > 0 && self.count_of_order(2) == involutions
    }

    /// Short name, e.g. `C4`, `V4`, `E8`, `S3`, `Dih10`, `Q8`, `A4`, `S4`, `A5`.
    ///
    /// Dihedral groups are named by their order (`Dih8` has order 8).
    pub fn label(&self) -> String {
        let n = self.order;
        let hist = |v: &[(u64, usize)]| self.histogram.as_slice() == v;
        if n == 1 {
            return "1".into();
        }
        if self.count_of_order(n as u64) > 0 {
            return format!("C{n}");
        }
        if self.is_elementary_abelian() {
            return if n == 4 { "V4".into() } else { format!("E{n}") };
        }
        if self.abelian {
            let parts: Vec<String> = self
                .histogram
                .iter()
                .map(|(o, c)| format!("{o}^{c}"))
                .collect();
            return format!("Ab{n}[{}]", parts.join(","));
        }
        if n == 6 {
            return "S3".into();
        }
        if n == 8 && self.count_of_order(2) == 1 {
            return "Q8".into();
        }
        if hist(&[(1, 1), (2, 3), (3, 8)]) {
            return "A4".into();
        }
        if hist(&[(1, 1), (2, 9), (3, 8), (4, 6)]) {
            return "S4".into();
        }
        if hist(&[(1, 1), (2, 15), (3, 20), (5, 24)]) {
            return "A5".into();
        }
        if hist(&[(1, 1), (2, 21), (3, 56), (4, 42), (7, 48)]) {
            return "PSL(2,7)".into();
        }
        if self.is_dihedral() {
            return format!("Dih{n}");
        }
        if n >= 16 && n.is_power_of_two() && self.count_of_order(n as u64 / 2) > 0 {
            if self.count_of_order(2) == 3 {
                return format!("M{n}");
            }
            if self.count_of_order(2) == 1 {
                return format!("Q{n}");
            }
        }
        let parts: Vec<String> = self
            .histogram
            .iter()
            .map(|(o, c)| format!("{o}^{c}"))
            .collect();
        format!("G{n}[{}]", parts.join(","))
    }
}

/// Number of subgroups of each type, keyed by [`TypeSignature::label`].
pub fn type_census(l: &SubgroupLattice) -> BTreeMap<String, u64> {
    let mut out = BTreeMap::new();
    for id in 0..l.len() {
        *out.entry(TypeSignature::of_subgroup(l, id).label())
            .or_insert(0) += 1;
    }
    out
}
