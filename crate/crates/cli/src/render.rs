//! Plain-text renderings. JSON output goes straight through serde.

use std::fmt::Write as _;

use latspec_core::{DegreeReport, DenseSymMatrix};

/// Left-aligned columns separated by two spaces; the last column is not padded.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            widths[i] = widths[i].max(c.chars().count());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let last = cells.len() - 1;
        for (i, c) in cells.iter().enumerate() {
            if i == last {
                out.push_str(c);
            } else {
                let pad = widths[i] - c.chars().count();
                let _ = write!(out, "{c}{}  ", " ".repeat(pad));
            }
        }
        let trimmed = out.trim_end_matches(' ').len();
        out.truncate(trimmed);
        out.push('\n');
    };
    line(header.to_vec(), &mut out);
    for r in rows {
        line(r.iter().map(|s| s.as_str()).collect(), &mut out);
    }
    out
}

pub fn matrix_csv(m: &DenseSymMatrix<i64>) -> String {
    let mut out = String::new();
    for i in 0..m.dim() {
        let row: Vec<String> = m.row(i).iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn report_table(name: &str, r: &DegreeReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "group {name}: {} of order {}", r.group, r.order);
    let _ = writeln!(
        out,
        "  lattice {} subgroups, core {}, graph {} vertices and {} edges",
        r.lattice_size, r.core_size, r.vertex_count, r.edge_count
    );
    let _ = writeln!(
        out,
        "  sd  direct {}  spectral {}  via F2 {}",
        r.sd.direct, r.sd.spectral, r.sd.via_f2
    );
    let na = "not applicable";
    let _ = writeln!(
        out,
        "  F2  direct {}  mobius {}  laplacian {}  adjacency {}",
        r.f2.direct,
        r.f2.mobius,
        r.f2.split_laplacian.as_deref().unwrap_or(na),
        r.f2.split_adjacency.as_deref().unwrap_or(na)
    );
    let _ = writeln!(out, "  mu(1,G) {}", r.mobius_bottom_top);
    let rows: Vec<Vec<String>> = r
        .checks
        .iter()
        .map(|c| {
            vec![
                format!("  {}", c.name),
                if c.passed { "pass" } else { "FAIL" }.to_string(),
                c.lhs.clone(),
                c.rhs.clone(),
            ]
        })
        .collect();
    out.push_str(&table(&["  check", "result", "lhs", "rhs"], &rows));
    for n in &r.notes {
        let _ = writeln!(out, "  note: {n}");
    }
    out
}
