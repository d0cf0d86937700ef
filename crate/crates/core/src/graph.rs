//! The non-permutability graph `Γ_L(G)`.
//!
//! Vertices are the subgroups outside the permuting core (the smallest sublattice containing
//! every subgroup that permutes with all others); two vertices are adjacent when their complex
//! products differ.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::lattice::SubgroupLattice;
use crate::spectral::DenseSymMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonPermutabilityGraph {
    /// Subgroup ids, in lattice order.
    vertices: Vec<usize>,
    /// Adjacency rows over vertex positions.
    adj: Vec<BitSet>,
    edge_count: u64,
    /// Ordered non-permuting pairs with at least one member inside the permuting core. These
    /// pairs are not edges; a nonzero count breaks `2|E| = |L|²(1 − sd)`.
    lost_pairs: u64,
    lattice_size: usize,
}

/// Builds `Γ_L(G)` from the lattice's permutability relation.
pub fn build_graph(lattice: &SubgroupLattice) -> NonPermutabilityGraph {
    let core = lattice.permuting_core();
    let vertices: Vec<usize> = (0..lattice.len()).filter(|&i| !core.contains(i)).collect();
    let m = vertices.len();
    let perm = lattice.permutability();
    let adj: Vec<BitSet> = vertices
        .iter()
        .map(|&x| {
            BitSet::from_indices(
                m,
                vertices
                    .iter()
                    .enumerate()
                    .filter(|(_, &y)| !perm[x].contains(y))
                    .map(|(k, _)| k),
            )
        })
        .collect();
    let set_bits: u64 = adj.iter().map(|r| r.len() as u64).sum();
    let lost_pairs = core
        .iter()
        .map(|c| (lattice.len() - perm[c].len()) as u64)
        .sum::<u64>()
        * 2
        - core
            .iter()
            .map(|c| core.iter().filter(|&d| !perm[c].contains(d)).count() as u64)
            .sum::<u64>();
    NonPermutabilityGraph {
        vertices,
        adj,
        edge_count: set_bits / 2,
        lost_pairs,
        lattice_size: lattice.len(),
    }
}

impl NonPermutabilityGraph {
    #[inline]
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    /// Size of the lattice the graph was built from.
    #[inline]
    pub fn lattice_size(&self) -> usize {
        self.lattice_size
    }

    #[inline]
    pub fn lost_pairs(&self) -> u64 {
        self.lost_pairs
    }

    pub fn is_null(&self) -> bool {
        self.edge_count == 0
    }

    /// Whether vertex positions `a` and `b` are adjacent.
    #[inline]
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    /// Degree of the vertex at position `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.vertex_count()).map(|v| self.degree(v)).collect()
    }

    /// Unordered edges as vertex-position pairs `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.vertex_count())
            .flat_map(|a| {
                self.adj[a]
                    .iter()
                    .filter(move |&b| b > a)
                    .map(move |b| (a, b))
            })
            .collect()
    }

    /// Edges as subgroup-id pairs.
    pub fn subgroup_edges(&self) -> Vec<(usize, usize)> {
        self.edges()
            .into_iter()
            .map(|(a, b)| (self.vertices[a], self.vertices[b]))
            .collect()
    }

    pub fn adjacency_matrix(&self) -> DenseSymMatrix<i64> {
        let mut m = DenseSymMatrix::zeros(self.vertex_count());
        for (a, b) in self.edges() {
            m.set_sym(a, b, 1);
        }
        m
    }

    /// `D − A`.
    pub fn laplacian_matrix(&self) -> DenseSymMatrix<i64> {
        let mut m = DenseSymMatrix::zeros(self.vertex_count());
        for (a, b) in self.edges() {
            m.set_sym(a, b, -1);
        }
        for v in 0..self.vertex_count() {
            m.set_sym(v, v, self.degree(v) as i64);
        }
        m
    }

    /// Number of connected components (union-find).
    pub fn component_count(&self) -> usize {
        let n = self.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (a, b) in self.edges() {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        (0..n).filter(|&x| find(&mut parent, x) == x).count()
    }

    /// Graphviz `graph` document; `label` maps a subgroup id to its display text.
    pub fn dot_export(&self, label: impl Fn(usize) -> String) -> String {
        if self.vertices.is_empty() {
            return "graph G { }\n".to_string();
        }
        let mut out = String::from("graph G {\n");
        for &v in &self.vertices {
            let text = label(v).replace('\\', "\\\\").replace('"', "\\\"");
            let _ = writeln!(out, "  s{v} [label=\"{text}\"];");
        }
        for (a, b) in self.subgroup_edges() {
            let _ = writeln!(out, "  s{a} -- s{b};");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_dump(&self) -> GraphDump {
        GraphDump {
            vertices: self.vertices.clone(),
            edges: self.subgroup_edges(),
            lost_pairs: self.lost_pairs,
        }
    }
}

/// Serializable graph: vertex subgroup ids and edges as subgroup-id pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDump {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    pub lost_pairs: u64,
}
