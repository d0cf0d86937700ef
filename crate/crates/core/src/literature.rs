//! Published reference values for a few small groups, and the comparison notes the verifier
//! attaches to its reports.
//!
//! Nothing here feeds back into a computation. A note either confirms a published value or
//! places it next to the computed one.

use num_bigint::BigInt;

use crate::degrees::{DegreeAnalysis, DegreeReport, SplitVariant};
use crate::error::Result;
use crate::iso::TypeSignature;

/// Values stated in the literature for one isomorphism type.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Published {
    pub label: &'static str,
    pub lattice_size: Option<usize>,
    pub vertex_count: Option<usize>,
    pub sd: Option<&'static str>,
    pub f2: Option<i64>,
    pub mobius_bottom: Option<i64>,
    /// Sum of the listed Laplacian eigenvalues of `Γ_L(G)`.
    pub laplacian_sum: Option<u64>,
    pub laplacian_spectrum: Option<&'static [i64]>,
    /// Number of subgroups of type `V4`.
    pub klein_count: Option<usize>,
}

pub const PUBLISHED: &[Published] = &[
    Published {
        label: "S3",
        lattice_size: None,
        vertex_count: None,
        sd: None,
        f2: Some(17),
        mobius_bottom: None,
        laplacian_sum: None,
        laplacian_spectrum: Some(&[0, 3, 3]),
        klein_count: None,
    },
    Published {
        label: "Dih8",
        lattice_size: None,
        vertex_count: None,
        sd: None,
        f2: None,
        mobius_bottom: None,
        laplacian_sum: None,
        laplacian_spectrum: Some(&[0, 2, 2, 4]),
        klein_count: None,
    },
    Published {
        label: "A4",
        lattice_size: Some(10),
        vertex_count: None,
        sd: Some("16/25"),
        f2: Some(27),
        mobius_bottom: Some(4),
        laplacian_sum: Some(36),
        laplacian_spectrum: Some(&[0, 4, 4, 7, 7, 7, 7]),
        klein_count: None,
    },
    Published {
        label: "S4",
        lattice_size: Some(30),
        vertex_count: Some(26),
        sd: None,
        f2: Some(177),
        mobius_bottom: Some(-24),
        laplacian_sum: Some(378),
        laplacian_spectrum: None,
        klein_count: Some(3),
    },
    Published {
        label: "A5",
        lattice_size: None,
        vertex_count: None,
        sd: None,
        f2: Some(237),
        mobius_bottom: None,
        laplacian_sum: None,
        laplacian_spectrum: None,
        klein_count: None,
    },
];

pub fn lookup(label: &str) -> Option<&'static Published> {
    PUBLISHED.iter().find(|p| p.label == label)
}

fn note<T: PartialEq + std::fmt::Display>(
    what: &str,
    published: T,
    computed: T,
    how: &str,
) -> String {
    if published == computed {
        format!("reference agrees: {what} = {computed}")
    } else {
        format!("reference differs: published {what} = {published}, computed {computed} ({how})")
    }
}

/// Comparison notes for `report`. Returns an empty list for types without published values.
pub fn compare(analysis: &DegreeAnalysis<'_>, report: &DegreeReport) -> Result<Vec<String>> {
    let Some(p) = lookup(&report.group) else {
        return Ok(Vec::new());
    };
    let l = analysis.lattice();
    let mut notes = Vec::new();
    if let Some(n) = p.lattice_size {
        notes.push(note(
            "|L(G)|",
            n,
            report.lattice_size,
            "exhaustive enumeration",
        ));
    }
    if let Some(n) = p.vertex_count {
        notes.push(note(
            "|V|",
            n,
            report.vertex_count,
            "lattice minus permuting core",
        ));
    }
    if let Some(sd) = p.sd {
        notes.push(note(
            "sd(G)",
            sd,
            report.sd.direct.as_str(),
            "pairwise product test",
        ));
    }
    if let Some(f2) = p.f2 {
        notes.push(note(
            "F2(G)",
            f2.to_string(),
            report.f2.direct.clone(),
            "direct count",
        ));
    }
    if let Some(mu) = p.mobius_bottom {
        let dual: i64 = (0..l.len()).map(|z| l.mobius_row(l.bottom())[z]).sum();
        notes.push(note(
            "mu(1,G)",
            mu,
            report.mobius_bottom_top,
            &format!("recursion; sum of mu(1,Z) over the whole lattice is {dual}"),
        ));
    }
    if let Some(sum) = p.laplacian_sum {
        notes.push(note(
            "Laplacian eigenvalue sum",
            sum,
            2 * report.edge_count,
            "2|E| from all ordered subgroup pairs",
        ));
    }
    if let Some(spec) = p.laplacian_spectrum {
        let rounded: Vec<String> = report
            .laplacian_spectrum
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .map_or_else(|_| s.clone(), |v| v.round().to_string())
            })
            .collect();
        let published: Vec<String> = spec.iter().map(|v| v.to_string()).collect();
        notes.push(note(
            "Laplacian spectrum",
            format!("{{{}}}", published.join(",")),
            format!("{{{}}}", rounded.join(",")),
            "Jacobi, rounded",
        ));
    }
    if let Some(k) = p.klein_count {
        let found = (0..l.len())
            .filter(|&id| TypeSignature::of_subgroup(l, id).label() == "V4")
            .count();
        notes.push(note(
            "number of V4 subgroups",
            k,
            found,
            "type census of the lattice",
        ));
    }
    if let (Some(mu), Some(sum)) = (p.mobius_bottom, p.laplacian_sum) {
        if !report.quasihamiltonian
            && (mu != report.mobius_bottom_top || sum != 2 * report.edge_count)
        {
            notes.push(split_comparison(analysis, mu, sum)?);
        }
    }
    Ok(notes)
}

/// Re-evaluates the Laplacian split formula with the published `μ(1,G)` and eigenvalue sum in
/// place of the computed ones, term by term.
fn split_comparison(analysis: &DegreeAnalysis<'_>, mu: i64, sum: u64) -> Result<String> {
    let l = analysis.lattice();
    let terms = analysis.split_terms(SplitVariant::Laplacian)?;
    let bottom = &terms[l.bottom()];
    let top = &terms[l.top()];
    let size2 = |t: &crate::degrees::SplitTerm| BigInt::from(t.lattice_size * t.lattice_size);
    let alt_bottom = size2(bottom) * mu;
    let alt_top = (size2(top) - BigInt::from(sum)) * top.mobius;
    let computed: BigInt = terms.iter().map(|t| t.value.clone()).sum();
    let alt = &computed - &bottom.value - &top.value + &alt_bottom + &alt_top;
    Ok(format!(
        "split formula term by term: trivial-subgroup term {} (published {}), whole-group term {} (published {}); total {} (with published values {})",
        bottom.value, alt_bottom, top.value, alt_top, computed, alt
    ))
}
