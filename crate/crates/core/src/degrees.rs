//! Subgroup commutativity degree `sd(G)` and factorization number `F₂(G)`, each computed along
//! several independent routes with exact arithmetic, plus the identity verifier tying them
//! together.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{build_graph, NonPermutabilityGraph};
use crate::iso::TypeSignature;
use crate::lattice::SubgroupLattice;
use crate::literature;
use crate::spectral::{
    eigenvalues_symmetric, spectral_sums, verify_trace_identities, Spectrum, TraceReport,
};

/// Exact fraction used for every commutativity degree.
pub type ExactRational = BigRational;

/// Invariants of one subgroup `H`, computed on `H` as a standalone group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalInvariants {
    /// `|L(H)|`.
    pub lattice_size: u64,
    /// Ordered pairs of subgroups of `H` that permute.
    pub permuting_pairs: u64,
    /// `F₂(H)` by direct count.
    pub f2: u64,
    pub quasihamiltonian: bool,
    /// `|E(Γ_L(H))|`.
    pub edge_count: u64,
    pub lost_pairs: u64,
    /// Floating `Σσ` over the Laplacian spectrum of `Γ_L(H)`.
    pub laplacian_sum: f64,
    /// Floating `Σλ²` over the adjacency spectrum of `Γ_L(H)`.
    pub adjacency_square_sum: f64,
    pub trace: TraceReport,
}

impl LocalInvariants {
    fn compute(sub: &SubgroupLattice, tol: f64) -> Result<Self> {
        let graph = build_graph(sub);
        let (adj, lap) = graph_spectra(&graph, tol)?;
        let trace = verify_trace_identities(graph.edge_count(), &adj, &lap);
        Ok(LocalInvariants {
            lattice_size: sub.len() as u64,
            permuting_pairs: sub.permuting_pair_count(),
            f2: f2_direct(sub),
            quasihamiltonian: sub.is_quasihamiltonian(),
            edge_count: graph.edge_count(),
            lost_pairs: graph.lost_pairs(),
            laplacian_sum: spectral_sums(&lap).0,
            adjacency_square_sum: spectral_sums(&adj).1,
            trace,
        })
    }

    pub fn sd(&self) -> ExactRational {
        ratio(self.permuting_pairs, self.lattice_size * self.lattice_size)
    }
}

/// Adjacency and Laplacian spectra of a graph.
pub fn graph_spectra(
    g: &NonPermutabilityGraph,
    tol: f64,
) -> Result<(Spectrum<f64>, Spectrum<f64>)> {
    let adj = g.adjacency_matrix().cast::<f64>().expect("0/1 entries");
    let lap = g.laplacian_matrix().cast::<f64>().expect("integer entries");
    Ok((
        eigenvalues_symmetric(&adj, tol)?,
        eigenvalues_symmetric(&lap, tol)?,
    ))
}

fn ratio(num: u64, den: u64) -> ExactRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Split of `L(G)` into non-quasihamiltonian (`ℋ`) and quasihamiltonian (`𝒦`) subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HKPartition {
    pub h_ids: Vec<usize>,
    pub k_ids: Vec<usize>,
}

/// Which spectrum stands in for `2|E(Γ_L(H))|` in the split formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitVariant {
    /// `Σσ` over the Laplacian spectrum.
    Laplacian,
    /// `Σλ²` over the adjacency spectrum.
    Adjacency,
}

/// One summand of the split formula.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitTerm {
    pub id: usize,
    pub in_h: bool,
    pub lattice_size: u64,
    /// `2|E(Γ_L(H))|` for members of `ℋ`, zero for `𝒦`.
    pub spectral_sum: u64,
    /// The floating sum the exact value replaces.
    pub floating_sum: f64,
    pub mobius: i64,
    #[serde(with = "crate::bigstr")]
    pub value: BigInt,
}

/// Per-lattice computation context. Local invariants and Möbius values are computed once and
/// shared by every method.
pub struct DegreeAnalysis<'a> {
    lattice: &'a SubgroupLattice,
    tol: f64,
    local: OnceLock<Result<Vec<LocalInvariants>>>,
    graph: OnceLock<NonPermutabilityGraph>,
    mobius_top: OnceLock<Vec<i64>>,
}

impl<'a> DegreeAnalysis<'a> {
    pub fn new(lattice: &'a SubgroupLattice, tol: f64) -> Self {
        DegreeAnalysis {
            lattice,
            tol,
            local: OnceLock::new(),
            graph: OnceLock::new(),
            mobius_top: OnceLock::new(),
        }
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        self.lattice
    }

    pub fn graph(&self) -> &NonPermutabilityGraph {
        self.graph.get_or_init(|| build_graph(self.lattice))
    }

    pub fn mobius_to_top(&self) -> &[i64] {
        self.mobius_top.get_or_init(|| self.lattice.mobius_to_top())
    }

    /// Invariants of every subgroup, indexed by lattice id.
    pub fn local(&self) -> Result<&[LocalInvariants]> {
        let res = self.local.get_or_init(|| {
            let l = self.lattice;
            // Fill the permutability relation once so restrictions inherit it.
            l.permutability();
            let top = l.top();
            (0..l.len())
                .into_par_iter()
                .map(|h| {
                    if h == top {
                        LocalInvariants::compute(l, self.tol)
                    } else {
                        LocalInvariants::compute(&l.restrict(h), self.tol)
                    }
                })
                .collect()
        });
        res.as_deref().map_err(Clone::clone)
    }

    fn size_squared(&self) -> u64 {
        let n = self.lattice.len() as u64;
        n * n
    }

    pub fn sd_direct(&self) -> ExactRational {
        sd_direct(self.lattice)
    }

    pub fn sd_spectral(&self) -> ExactRational {
        sd_spectral(self.lattice, self.graph())
    }

    /// `(1/|L(G)|²) Σ_H F₂(H)`.
    pub fn sd_via_f2(&self) -> Result<ExactRational> {
        let total: u64 = self.local()?.iter().map(|x| x.f2).sum();
        Ok(ratio(total, self.size_squared()))
    }

    pub fn f2_direct(&self) -> u64 {
        f2_direct(self.lattice)
    }

    /// `Σ_T sd(T)·|L(T)|²·μ(T, G)`, which must come out integral.
    pub fn f2_mobius(&self) -> Result<BigInt> {
        let local = self.local()?;
        let mu = self.mobius_to_top();
        let mut total = BigRational::zero();
        for (t, inv) in local.iter().enumerate() {
            if mu[t] == 0 {
                continue;
            }
            let size2 = BigInt::from(inv.lattice_size * inv.lattice_size);
            total += inv.sd() * BigRational::from_integer(size2 * mu[t]);
        }
        if !total.is_integer() {
            return Err(Error::Consistency(format!(
                "Möbius inversion produced the non-integer {total}"
            )));
        }
        Ok(total.to_integer())
    }

    pub fn partition_hk(&self) -> Result<HKPartition> {
        let local = self.local()?;
        let (k, h): (Vec<usize>, Vec<usize>) =
            (0..local.len()).partition(|&i| local[i].quasihamiltonian);
        Ok(HKPartition { h_ids: h, k_ids: k })
    }

    /// Summands of the split formula, in lattice order.
    pub fn split_terms(&self, variant: SplitVariant) -> Result<Vec<SplitTerm>> {
        if self.lattice.is_quasihamiltonian() {
            return Err(Error::Domain(
                "the split formula requires sd(G) ≠ 1; this group is quasihamiltonian".into(),
            ));
        }
        let local = self.local()?;
        let mu = self.mobius_to_top();
        local
            .iter()
            .enumerate()
            .map(|(id, inv)| {
                let in_h = !inv.quasihamiltonian;
                let exact = if in_h { 2 * inv.edge_count } else { 0 };
                let floating = match variant {
                    SplitVariant::Laplacian => inv.laplacian_sum,
                    SplitVariant::Adjacency => inv.adjacency_square_sum,
                };
                if (floating - exact as f64).abs() > inv.trace.tolerance {
                    return Err(Error::Consistency(format!(
                        "spectral sum {floating} for subgroup {id} disagrees with 2|E| = {exact}"
                    )));
                }
                let size2 = inv.lattice_size * inv.lattice_size;
                let value = BigInt::from(size2 as i128 - exact as i128) * mu[id];
                Ok(SplitTerm {
                    id,
                    in_h,
                    lattice_size: inv.lattice_size,
                    spectral_sum: exact,
                    floating_sum: floating,
                    mobius: mu[id],
                    value,
                })
            })
            .collect()
    }

    /// `Σ_{K∈𝒦} |L(K)|² μ(K,G) + Σ_{H∈ℋ} (|L(H)|² − S_H) μ(H,G)`.
    pub fn f2_split(&self, variant: SplitVariant) -> Result<BigInt> {
        Ok(self
            .split_terms(variant)?
            .into_iter()
            .map(|t| t.value)
            .sum())
    }

    /// Runs every identity and assembles the report.
    pub fn report(&self) -> Result<DegreeReport> {
        let l = self.lattice;
        let local = self.local()?;
        let graph = self.graph();
        let n2 = self.size_squared();
        let twice_edges = 2 * graph.edge_count();
        let sig = TypeSignature::of_group(l.group());

        let sd_direct = self.sd_direct();
        let sd_spectral = self.sd_spectral();
        let sd_via_f2 = self.sd_via_f2()?;
        let f2_direct = BigInt::from(self.f2_direct());
        let f2_mobius = self.f2_mobius()?;
        let quasi = l.is_quasihamiltonian();
        let split_lap = (!quasi)
            .then(|| self.f2_split(SplitVariant::Laplacian))
            .transpose()?;
        let split_adj = (!quasi)
            .then(|| self.f2_split(SplitVariant::Adjacency))
            .transpose()?;

        let mut checks = Vec::new();
        let complement = BigRational::one() - &sd_direct;
        let sd_rhs = complement * BigRational::from_integer(BigInt::from(n2));
        checks.push(Check::new(
            "edge_count_vs_sd",
            twice_edges.to_string(),
            sd_rhs.to_string(),
            BigRational::from_integer(BigInt::from(twice_edges)) == sd_rhs,
            format!(
                "2|E| = |L|^2 (1 - sd); ordered non-permuting pairs touching the core: {}",
                graph.lost_pairs()
            ),
        ));
        let f2_sum: u64 = local.iter().map(|x| x.f2).sum();
        checks.push(Check::new(
            "edge_count_vs_f2_sum",
            twice_edges.to_string(),
            (n2 as i128 - f2_sum as i128).to_string(),
            twice_edges as i128 == n2 as i128 - f2_sum as i128,
            "2|E| = |L|^2 - sum of F2(H) over all subgroups".into(),
        ));
        checks.push(Check::new(
            "sd_methods_agree",
            sd_direct.to_string(),
            format!("{sd_spectral} {sd_via_f2}"),
            sd_direct == sd_spectral && sd_direct == sd_via_f2,
            "direct, spectral, and via-F2".into(),
        ));
        let mut f2_all = vec![&f2_mobius];
        f2_all.extend(split_lap.iter());
        f2_all.extend(split_adj.iter());
        checks.push(Check::new(
            "f2_methods_agree",
            f2_direct.to_string(),
            f2_all
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            f2_all.iter().all(|&x| *x == f2_direct),
            if quasi {
                "direct and Mobius; split formulas not applicable".into()
            } else {
                "direct, Mobius, Laplacian split, adjacency split".into()
            },
        ));
        let top_trace = &local[l.top()].trace;
        let worst_sub = local
            .iter()
            .map(|x| {
                x.trace
                    .laplacian_residual
                    .abs()
                    .max(x.trace.adjacency_sum.abs())
                    .max(x.trace.adjacency_square_residual.abs())
            })
            .fold(0.0, f64::max);
        checks.push(Check::new(
            "trace_identities",
            format!(
                "{:.3e} {:.3e} {:.3e}",
                top_trace.laplacian_residual,
                top_trace.adjacency_sum,
                top_trace.adjacency_square_residual
            ),
            format!("{:.3e}", top_trace.tolerance),
            local.iter().all(|x| x.trace.passed),
            format!("worst residual over all subgroup graphs: {worst_sub:.3e}"),
        ));

        let (adj, lap) = graph_spectra(graph, self.tol)?;
        let mut report = DegreeReport {
            group: sig.label(),
            order: l.group().order(),
            lattice_size: l.len(),
            core_size: l.len() - graph.vertex_count(),
            vertex_count: graph.vertex_count(),
            edge_count: graph.edge_count(),
            quasihamiltonian: quasi,
            sd: SdValues {
                direct: sd_direct.to_string(),
                spectral: sd_spectral.to_string(),
                via_f2: sd_via_f2.to_string(),
            },
            f2: F2Values {
                direct: f2_direct.to_string(),
                mobius: f2_mobius.to_string(),
                split_laplacian: split_lap.map(|x| x.to_string()),
                split_adjacency: split_adj.map(|x| x.to_string()),
            },
            mobius_bottom_top: l.mobius(l.bottom(), l.top())?,
            laplacian_spectrum: lap
                .values
                .iter()
                .map(|&v| format_fixed(v, SPECTRUM_DECIMALS))
                .collect(),
            adjacency_spectrum: adj
                .values
                .iter()
                .map(|&v| format_fixed(v, SPECTRUM_DECIMALS))
                .collect(),
            checks,
            notes: Vec::new(),
        };
        report.notes = literature::compare(self, &report)?;
        Ok(report)
    }
}

/// `|{(X,Y) : XY = YX}| / |L(G)|²`.
pub fn sd_direct(lattice: &SubgroupLattice) -> ExactRational {
    let n = lattice.len() as u64;
    ratio(lattice.permuting_pair_count(), n * n)
}

/// `1 − 2|E| / |L(G)|²` with the exact edge count standing in for `Σσ`.
pub fn sd_spectral(lattice: &SubgroupLattice, graph: &NonPermutabilityGraph) -> ExactRational {
    let n = lattice.len() as u64;
    BigRational::one() - ratio(2 * graph.edge_count(), n * n)
}

/// `(1/|L(G)|²) Σ_H F₂(H)`, each `F₂(H)` counted on `H` as a standalone group.
pub fn sd_via_f2(lattice: &SubgroupLattice) -> Result<ExactRational> {
    DegreeAnalysis::new(lattice, crate::spectral::DEFAULT_TOL).sd_via_f2()
}

/// Ordered pairs `(H, K)` with `HK = G`.
///
/// The product set is only formed when `|H||K|/|H∩K| = |G|`, the one case where it can be all of
/// `G`.
pub fn f2_direct(lattice: &SubgroupLattice) -> u64 {
    let g = lattice.group();
    let order = g.order();
    let whole = g.all();
    let n = lattice.len();
    (0..n)
        .into_par_iter()
        .map(|a| {
            let sa = lattice.subgroup(a);
            (0..n)
                .filter(|&b| {
                    let sb = lattice.subgroup(b);
                    let meet = lattice.subgroup(lattice.meet(a, b)).order;
                    sa.order * sb.order == order * meet
                        && g.product_set(&sa.members, &sb.members) == whole
                })
                .count() as u64
        })
        .sum()
}

pub fn f2_mobius(lattice: &SubgroupLattice) -> Result<BigInt> {
    DegreeAnalysis::new(lattice, crate::spectral::DEFAULT_TOL).f2_mobius()
}

pub fn f2_split_laplacian(lattice: &SubgroupLattice) -> Result<BigInt> {
    DegreeAnalysis::new(lattice, crate::spectral::DEFAULT_TOL).f2_split(SplitVariant::Laplacian)
}

pub fn f2_split_adjacency(lattice: &SubgroupLattice) -> Result<BigInt> {
    DegreeAnalysis::new(lattice, crate::spectral::DEFAULT_TOL).f2_split(SplitVariant::Adjacency)
}

pub fn partition_hk(lattice: &SubgroupLattice) -> Result<HKPartition> {
    DegreeAnalysis::new(lattice, crate::spectral::DEFAULT_TOL).partition_hk()
}

pub fn verify_identities(lattice: &SubgroupLattice, tol: f64) -> Result<DegreeReport> {
    DegreeAnalysis::new(lattice, tol).report()
}

/// One internal identity and both of its sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, lhs: String, rhs: String, passed: bool, detail: String) -> Self {
        Check {
            name: name.into(),
            lhs,
            rhs,
            passed,
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SdValues {
    pub direct: String,
    pub spectral: String,
    pub via_f2: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct F2Values {
    pub direct: String,
    pub mobius: String,
    /// `None` when the group is quasihamiltonian.
    pub split_laplacian: Option<String>,
    pub split_adjacency: Option<String>,
}

/// Everything the verifier computed for one group. Notes never affect [`DegreeReport::passed`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub group: String,
    pub order: usize,
    pub lattice_size: usize,
    pub core_size: usize,
    pub vertex_count: usize,
    pub edge_count: u64,
    pub quasihamiltonian: bool,
    pub sd: SdValues,
    pub f2: F2Values,
    pub mobius_bottom_top: i64,
    pub laplacian_spectrum: Vec<String>,
    pub adjacency_spectrum: Vec<String>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl DegreeReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Decimal places used for every printed spectrum.
pub const SPECTRUM_DECIMALS: usize = 9;

/// Formats `v` rounded to `decimals` places with trailing zeros dropped, so `-0.9999999999999`
/// and `-1.0000000000001` both print as `-1`. Negative zero prints as `0`.
pub fn format_fixed(v: f64, decimals: usize) -> String {
    let s = format!("{v:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// Rounds an exact rational to the nearest integer, halves away from zero.
pub fn nearest_integer(r: &ExactRational) -> BigInt {
    r.round().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::generate_group;
    use crate::lattice::enumerate_subgroups;
    use crate::perm::parse_generators;

    fn lattice(deg: usize, gens: &str) -> SubgroupLattice {
        let g = generate_group(deg, &parse_generators(deg, gens).unwrap()).unwrap();
        enumerate_subgroups(g).unwrap()
    }

    fn q(n: i64, d: i64) -> ExactRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn a4_all_methods() {
        let l = lattice(4, "(1,2,3);(2,3,4)");
        let a = DegreeAnalysis::new(&l, 1e-12);
        assert_eq!(l.permuting_pair_count(), 64);
        assert_eq!(a.sd_direct(), q(16, 25));
        assert_eq!(a.sd_spectral(), q(16, 25));
        assert_eq!(a.sd_via_f2().unwrap(), q(16, 25));
        assert_eq!(a.f2_direct(), 27);
        assert_eq!(a.f2_mobius().unwrap(), BigInt::from(27));
        assert_eq!(
            a.f2_split(SplitVariant::Laplacian).unwrap(),
            BigInt::from(27)
        );
        assert_eq!(
            a.f2_split(SplitVariant::Adjacency).unwrap(),
            BigInt::from(27)
        );
        let p = a.partition_hk().unwrap();
        assert_eq!(p.h_ids, vec![l.top()]);
        assert_eq!(p.k_ids.len(), 9);
    }

    #[test]
    fn a4_split_terms() {
        // 4 + 3(2²)(0) + 4(2²)(−1) + (5²)(−1) + (100 − 36)(1)
        let l = lattice(4, "(1,2,3);(2,3,4)");
        let terms = DegreeAnalysis::new(&l, 1e-12)
            .split_terms(SplitVariant::Laplacian)
            .unwrap();
        let values: Vec<i64> = terms
            .iter()
            .map(|t| i64::try_from(&t.value).unwrap())
            .collect();
        assert_eq!(values, vec![4, 0, 0, 0, -4, -4, -4, -4, -25, 64]);
    }

    #[test]
    fn per_subgroup_f2_values() {
        let l = lattice(4, "(1,2,3);(2,3,4)");
        let a = DegreeAnalysis::new(&l, 1e-12);
        let f2: Vec<u64> = a.local().unwrap().iter().map(|x| x.f2).collect();
        assert_eq!(f2, vec![1, 3, 3, 3, 3, 3, 3, 3, 15, 27]);
    }

    #[test]
    fn dihedral_order_eight() {
        let l = lattice(4, "(1,2,3,4);(1,3)");
        let a = DegreeAnalysis::new(&l, 1e-12);
        assert_eq!(a.sd_spectral(), q(23, 25));
        assert_eq!(a.sd_via_f2().unwrap(), q(23, 25));
        assert_eq!(a.f2_direct(), 41);
        assert_eq!(a.f2_mobius().unwrap(), BigInt::from(41));
    }

    #[test]
    fn s3_values() {
        let l = lattice(3, "(1,2);(1,2,3)");
        assert_eq!(sd_via_f2(&l).unwrap(), q(5, 6));
        assert_eq!(f2_direct(&l), 17);
        assert_eq!(f2_split_laplacian(&l).unwrap(), BigInt::from(17));
    }

    #[test]
    fn quasihamiltonian_groups() {
        for (deg, gens) in [
            (8, "(1,2,5,6)(3,4,7,8);(1,3,5,7)(2,8,6,4)"),
            (6, "(1,2,3,4,5,6)"),
            (1, ""),
        ] {
            let l = lattice(deg, gens);
            assert_eq!(sd_direct(&l), BigRational::one());
            assert!(matches!(f2_split_adjacency(&l), Err(Error::Domain(_))));
            assert!(partition_hk(&l).unwrap().h_ids.is_empty());
            let r = verify_identities(&l, 1e-12).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.f2.split_laplacian, None);
        }
        assert_eq!(sd_via_f2(&lattice(1, "")).unwrap(), BigRational::one());
        assert_eq!(f2_mobius(&lattice(1, "")).unwrap(), BigInt::one());
    }

    #[test]
    fn s4_report() {
        let l = lattice(4, "(1,2,3,4);(1,2)");
        let r = verify_identities(&l, 1e-12).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
        assert_eq!(r.f2.direct, "177");
        assert_eq!(r.f2.split_laplacian.as_deref(), Some("177"));
        assert_eq!(r.edge_count, 195);
        assert_eq!(r.vertex_count, 26);
        assert_eq!(r.mobius_bottom_top, -12);
    }

    #[test]
    fn sig_formatting() {
        assert_eq!(format_fixed(7.228630001, 9), "7.228630001");
        assert_eq!(format_fixed(4.0, 9), "4");
        assert_eq!(format_fixed(-3e-15, 9), "0");
        assert_eq!(format_fixed(-0.9999999999999, 9), "-1");
        assert_eq!(format_fixed(-1.0000000000001, 9), "-1");
        assert_eq!(format_fixed(20.4315, 2), "20.43");
        assert_eq!(nearest_integer(&q(7, 2)), BigInt::from(4));
    }
}
