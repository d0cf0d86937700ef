use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use latspec_core::degrees::{format_fixed, graph_spectra, SPECTRUM_DECIMALS};
use latspec_core::{
    build_graph, compare_census, dickson_census, enumerate_subgroups, f2_pgl_closed, f2_psl_closed,
    type_census, DegreeAnalysis, DegreeReport, Error, NonPermutabilityGraph, PrimePower,
    SplitVariant, SubgroupLattice, TypeSignature,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cache::{Cache, CacheEntry, Signature, Spectra, TOOL_VERSION};
use crate::catalog::CATALOG;
use crate::groupspec::{parse_group_spec, Family, ParsedGroup};
use crate::render;

#[derive(Parser, Debug)]
#[command(
    name = "latspec",
    version,
    about = "Subgroup lattices, non-permutability graphs, and factorization numbers"
)]
pub struct Cli {
    /// Cache directory for lattices and reports
    #[arg(long, global = true, env = "LATSPEC_CACHE")]
    pub cache: Option<PathBuf>,
    /// Relative tolerance for the eigensolver
    #[arg(long, global = true, default_value = "1e-12")]
    pub tol: f64,
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Order, abelian and quasihamiltonian flags
    Info { group: String },
    /// List every subgroup
    Lattice { group: String },
    /// The non-permutability graph
    Graph {
        group: String,
        /// Write Graphviz text to FILE ("-" for stdout)
        #[arg(long, value_name = "FILE")]
        dot: Option<String>,
        /// Print a matrix instead of the summary
        #[arg(long, value_enum)]
        matrix: Option<MatrixKind>,
        #[arg(long)]
        csv: bool,
    },
    /// Eigenvalues of the graph's adjacency or Laplacian matrix
    Spectrum {
        group: String,
        #[arg(long, value_enum, default_value_t = MatrixKind::Laplacian)]
        matrix: MatrixKind,
        #[arg(long)]
        csv: bool,
    },
    /// Table of mu(H, U) for every H below U (default U = G)
    Mobius {
        group: String,
        #[arg(long, value_name = "ID")]
        upper: Option<usize>,
    },
    /// Subgroup commutativity degree
    Sd {
        group: String,
        #[arg(long, value_enum, default_value_t = SdMethod::All)]
        method: SdMethod,
    },
    /// Factorization number
    F2 {
        group: String,
        #[arg(long, value_enum, default_value_t = F2Method::All)]
        method: F2Method,
    },
    /// Subgroup generated by the elements of order other than p
    Hughes {
        group: String,
        #[arg(short = 'p')]
        p: u64,
    },
    /// Subgroup list of PSL(2,q), checked by brute force where feasible
    Census {
        #[arg(short = 'q')]
        q: u64,
    },
    /// Cross-check every identity for one group or the whole catalog
    Verify {
        group: Option<String>,
        #[arg(long)]
        catalog: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Adjacency,
    Laplacian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SdMethod {
    Direct,
    Spectral,
    F2,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum F2Method {
    Direct,
    Mobius,
    Laplacian,
    Adjacency,
    ClosedForm,
    All,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("identity check failed")]
    Failed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Input(_) | Error::Size { .. } | Error::Domain(_)) => 2,
            CliError::Io(_) => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

const NOT_APPLICABLE: &str = "not applicable: the split formula needs sd(G) != 1";

/// Everything loaded for one group.
struct Loaded {
    name: String,
    parsed: ParsedGroup,
    lattice: SubgroupLattice,
    cached: Option<CacheEntry>,
}

struct Ctx<'a> {
    cache: Option<Cache>,
    tol: f64,
    json: bool,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn load(&mut self, spec: &str) -> CliResult<Loaded> {
        let parsed = parse_group_spec(spec)?;
        for n in &parsed.notes {
            writeln!(self.err, "note: {n}")?;
        }
        load_parsed(self.cache.as_ref(), parsed)
    }
}

fn load_parsed(cache: Option<&Cache>, parsed: ParsedGroup) -> CliResult<Loaded> {
    let cached = cache.and_then(|c| c.lookup(&parsed.group));
    let lattice = match &cached {
        Some(e) => SubgroupLattice::from_dump(parsed.group.clone(), &e.lattice)?,
        None => enumerate_subgroups(parsed.group.clone())?,
    };
    Ok(Loaded {
        name: parsed.text.clone(),
        parsed,
        lattice,
        cached,
    })
}

/// Writes or refreshes the cache entry; a fresh report replaces a missing one.
fn remember(
    cache: Option<&Cache>,
    l: &Loaded,
    report: Option<&DegreeReport>,
    tol: f64,
) -> CliResult<()> {
    let Some(cache) = cache else { return Ok(()) };
    if let Some(e) = &l.cached {
        if e.report.is_some() || report.is_none() {
            return Ok(());
        }
    }
    let graph = build_graph(&l.lattice);
    let spectra = match &l.cached {
        Some(e) => e.spectra.clone(),
        None => {
            let (adj, lap) = graph_spectra(&graph, tol)?;
            Spectra {
                adjacency: adj
                    .values
                    .iter()
                    .map(|&v| format_fixed(v, SPECTRUM_DECIMALS))
                    .collect(),
                laplacian: lap
                    .values
                    .iter()
                    .map(|&v| format_fixed(v, SPECTRUM_DECIMALS))
                    .collect(),
            }
        }
    };
    let entry = CacheEntry {
        version: TOOL_VERSION.to_string(),
        signature: Signature::of(l.lattice.group()),
        lattice: l.lattice.to_dump(),
        graph: graph.to_dump(),
        spectra,
        report: report.cloned(),
    };
    if let Err(e) = cache.store(l.lattice.group(), &entry) {
        log::warn!(
            "could not write cache entry under {}: {e}",
            cache.dir().display()
        );
    }
    Ok(())
}

fn print_json(out: &mut dyn Write, v: &impl Serialize) -> CliResult<()> {
    let s = serde_json::to_string_pretty(v).map_err(io::Error::other)?;
    writeln!(out, "{s}")?;
    Ok(())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Parses `argv` (program name first) and runs the command. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli, out, err) {
        Ok(()) => 0,
        Err(CliError::Failed) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    if !(cli.tol > 0.0 && cli.tol < 1.0) {
        return Err(Error::Input(format!("--tol must lie in (0, 1), got {}", cli.tol)).into());
    }
    let mut ctx = Ctx {
        cache: cli.cache.map(Cache::new),
        tol: cli.tol,
        json: cli.json,
        err,
    };
    match cli.command {
        Command::Info { group } => info(&mut ctx, out, &group),
        Command::Lattice { group } => lattice(&mut ctx, out, &group),
        Command::Graph {
            group,
            dot,
            matrix,
            csv,
        } => graph(&mut ctx, out, &group, dot, matrix, csv),
        Command::Spectrum { group, matrix, csv } => spectrum(&mut ctx, out, &group, matrix, csv),
        Command::Mobius { group, upper } => mobius(&mut ctx, out, &group, upper),
        Command::Sd { group, method } => sd(&mut ctx, out, &group, method),
        Command::F2 { group, method } => f2(&mut ctx, out, &group, method),
        Command::Hughes { group, p } => hughes(&mut ctx, out, &group, p),
        Command::Census { q } => census(&mut ctx, out, q),
        Command::Verify { group, catalog } => verify(&mut ctx, out, group, catalog),
    }
}

fn info(ctx: &mut Ctx, out: &mut dyn Write, spec: &str) -> CliResult<()> {
    let l = ctx.load(spec)?;
    let g = l.lattice.group();
    let v = json!({
        "group": l.name,
        "type": TypeSignature::of_group(g).label(),
        "order": g.order(),
        "degree": g.degree(),
        "generators": latspec_core::format_generators(&g.generator_perms()),
        "abelian": g.is_abelian(),
        "quasihamiltonian": l.lattice.is_quasihamiltonian(),
        "subgroups": l.lattice.len(),
    });
    if ctx.json {
        print_json(out, &v)?;
    } else {
        let rows: Vec<Vec<String>> = v
            .as_object()
            .unwrap()
            .iter()
            .map(|(k, x)| {
                let s = match x {
                    Value::String(s) => s.clone(),
                    Value::Bool(b) => yes_no(*b).to_string(),
                    other => other.to_string(),
                };
                vec![k.clone(), s]
            })
            .collect();
        // serde_json keeps keys sorted; print in a fixed reading order instead
        let order = [
            "group",
            "type",
            "order",
            "degree",
            "generators",
            "abelian",
            "quasihamiltonian",
            "subgroups",
        ];
        for key in order {
            let r = rows.iter().find(|r| r[0] == key).unwrap();
            writeln!(out, "{:<17} {}", r[0], r[1])?;
        }
    }
    remember(ctx.cache.as_ref(), &l, None, ctx.tol)
}

fn lattice(ctx: &mut Ctx, out: &mut dyn Write, spec: &str) -> CliResult<()> {
    let l = ctx.load(spec)?;
    let lat = &l.lattice;
    if ctx.json {
        print_json(out, &lat.to_dump())?;
    } else {
        let core = lat.permuting_core();
        let rows: Vec<Vec<String>> = (0..lat.len())
            .map(|id| {
                vec![
                    id.to_string(),
                    lat.subgroup(id).order.to_string(),
                    TypeSignature::of_subgroup(lat, id).label(),
                    yes_no(lat.is_normal(id)).into(),
                    yes_no(core.contains(id)).into(),
                    lat.label(id),
                ]
            })
            .collect();
        write!(
            out,
            "{}",
            render::table(
                &["id", "order", "type", "normal", "core", "generators"],
                &rows
            )
        )?;
    }
    remember(ctx.cache.as_ref(), &l, None, ctx.tol)
}

fn graph(
    ctx: &mut Ctx,
    out: &mut dyn Write,
    spec: &str,
    dot: Option<String>,
    matrix: Option<MatrixKind>,
    csv: bool,
) -> CliResult<()> {
    let l = ctx.load(spec)?;
    let lat = &l.lattice;
    let g = build_graph(lat);
    if let Some(path) = dot {
        let text = g.dot_export(|v| lat.label(v));
        if path == "-" {
            write!(out, "{text}")?;
            return remember(ctx.cache.as_ref(), &l, None, ctx.tol);
        }
        fs::write(&path, text)?;
    }
    if let Some(kind) = matrix {
        let m = match kind {
            MatrixKind::Adjacency => g.adjacency_matrix(),
            MatrixKind::Laplacian => g.laplacian_matrix(),
        };
        if ctx.json && !csv {
            let rows: Vec<&[i64]> = (0..m.dim()).map(|i| m.row(i)).collect();
            print_json(
                out,
                &json!({"matrix": kind, "vertices": g.vertices(), "rows": rows}),
            )?;
        } else {
            write!(out, "{}", render::matrix_csv(&m))?;
        }
    } else if ctx.json {
        print_json(
            out,
            &json!({
                "vertex_count": g.vertex_count(),
                "edge_count": g.edge_count(),
                "components": g.component_count(),
                "graph": g.to_dump(),
            }),
        )?;
    } else {
        graph_summary(out, lat, &g)?;
    }
    remember(ctx.cache.as_ref(), &l, None, ctx.tol)
}

fn graph_summary(
    out: &mut dyn Write,
    lat: &SubgroupLattice,
    g: &NonPermutabilityGraph,
) -> CliResult<()> {
    writeln!(out, "vertices {}", g.vertex_count())?;
    writeln!(out, "edges {}", g.edge_count())?;
    writeln!(out, "components {}", g.component_count())?;
    if g.lost_pairs() > 0 {
        writeln!(
            out,
            "non-permuting pairs touching the core {}",
            g.lost_pairs()
        )?;
    }
    let rows: Vec<Vec<String>> = g
        .vertices()
        .iter()
        .enumerate()
        .map(|(pos, &id)| vec![id.to_string(), g.degree(pos).to_string(), lat.label(id)])
        .collect();
    if !rows.is_empty() {
        write!(
            out,
            "{}",
            render::table(&["id", "degree", "generators"], &rows)
        )?;
    }
    Ok(())
}

fn spectrum(
    ctx: &mut Ctx,
    out: &mut dyn Write,
    spec: &str,
    kind: MatrixKind,
    csv: bool,
) -> CliResult<()> {
    let l = ctx.load(spec)?;
    let values: Vec<String> = match &l.cached {
        Some(e) => match kind {
            MatrixKind::Adjacency => e.spectra.adjacency.clone(),
            MatrixKind::Laplacian => e.spectra.laplacian.clone(),
        },
        None => {
            let (adj, lap) = graph_spectra(&build_graph(&l.lattice), ctx.tol)?;
            let s = if kind == MatrixKind::Adjacency {
                adj
            } else {
                lap
            };
            s.values
                .iter()
                .map(|&v| format_fixed(v, SPECTRUM_DECIMALS))
                .collect()
        }
    };
    if csv {
        for v in &values {
            writeln!(out, "{v}")?;
        }
    } else if ctx.json {
        print_json(out, &json!({"matrix": kind, "values": values}))?;
    } else {
        let name = if kind == MatrixKind::Adjacency {
            "adjacency"
        } else {
            "Laplacian"
        };
        writeln!(out, "{name} spectrum, {} values", values.len())?;
        for v in &values {
            writeln!(out, "  {v}")?;
        }
    }
    remember(ctx.cache.as_ref(), &l, None, ctx.tol)
}

fn mobius(ctx: &mut Ctx, out: &mut dyn Write, spec: &str, upper: Option<usize>) -> CliResult<()> {
    let l = ctx.load(spec)?;
    let lat = &l.lattice;
    let upper = upper.unwrap_or(lat.top());
    if upper >= lat.len() {
        return Err(Error::Input(format!(
            "no subgroup with id {upper}; ids run 0..{}",
            lat.len() - 1
        ))
        .into());
    }
    let rows: Vec<(usize, i64)> = lat
        .down_set(upper)
        .into_iter()
        .map(|h| Ok((h, lat.mobius(h, upper)?)))
        .collect::<latspec_core::Result<_>>()?;
    if ctx.json {
        let v: Vec<Value> = rows
            .iter()
            .map(|&(h, mu)| json!({"id": h, "order": lat.subgroup(h).order, "generators": lat.label(h), "mu": mu}))
            .collect();
        print_json(out, &json!({"upper": upper, "rows": v}))?;
    } else {
        writeln!(out, "mu(H, {}) for H <= {}", upper, lat.label(upper))?;
        let table: Vec<Vec<String>> = rows
            .iter()
            .map(|&(h, mu)| {
                vec![
                    h.to_string(),
                    lat.subgroup(h).order.to_string(),
                    mu.to_string(),
                    lat.label(h),
                ]
            })
            .collect();
        write!(
            out,
            "{}",
            render::table(&["id", "order", "mu", "generators"], &table)
        )?;
    }
    remember(ctx.cache.as_ref(), &l, None, ctx.tol)
}

fn sd(ctx: &mut Ctx, out: &mut dyn Write, spec: &str, method: SdMethod) -> CliResult<()> {
    let l = ctx.load(spec)?;
    let a = DegreeAnalysis::new(&l.lattice, ctx.tol);
    let mut values: Vec<(&str, String)> = Vec::new();
    if matches!(method, SdMethod::Direct | SdMethod::All) {
        values.push(("direct", a.sd_direct().to_string()));
    }
    if matches!(method, SdMethod::Spectral | SdMethod::All) {
        values.push(("spectral", a.sd_spectral().to_string()));
    }
    if matches!(method, SdMethod::F2 | SdMethod::All) {
        values.push(("f2", a.sd_via_f2()?.to_string()));
    }
    emit_pairs(ctx, out, &values)?;
    remember(ctx.cache.as_ref(), &l, None, ctx.tol)
}

fn emit_pairs(ctx: &Ctx, out: &mut dyn Write, values: &[(&str, String)]) -> CliResult<()> {
    if ctx.json {
        let m: serde_json::Map<String, Value> = values
            .iter()
            .map(|(k, v)| (k.to_string(), Value::String(v.clone())))
            .collect();
        print_json(out, &m)?;
    } else {
        for (k, v) in values {
            writeln!(out, "{k:<12} {v}")?;
        }
    }
    Ok(())
}

/// `F₂` from a closed formula when the group is one of the covered families.
fn closed_form(l: &Loaded) -> CliResult<Option<String>> {
    let lat = &l.lattice;
    let family =
        l.parsed.family.or_else(
            || match TypeSignature::of_group(lat.group()).label().as_str() {
                "S3" => Some(Family::Psl(2)),
                "A4" => Some(Family::Psl(3)),
                "A5" => Some(Family::Psl(5)),
                "PSL(2,7)" => Some(Family::Psl(7)),
                "S4" => Some(Family::Pgl(3)),
                _ => None,
            },
        );
    let value = match family {
        None => return Ok(None),
        Some(Family::Psl(q)) => f2_psl_closed(PrimePower::new(q)?, lat.len() as u64)?,
        Some(Family::Pgl(q)) => {
            let half = lat.group().order() / 2;
            let m = (0..lat.len())
                .find(|&id| lat.subgroup(id).order == half && lat.is_normal(id))
                .ok_or_else(|| Error::Consistency("no normal subgroup of index 2".into()))?;
            let size_m = lat.restrict(m).len() as u64;
            f2_pgl_closed(PrimePower::new(q)?, lat.len() as u64, size_m)?
        }
    };
    Ok(Some(value.to_string()))
}

fn f2(ctx: &mut Ctx, out: &mut dyn Write, spec: &str, method: F2Method) -> CliResult<()> {
    let l = ctx.load(spec)?;
    let a = DegreeAnalysis::new(&l.lattice, ctx.tol);
    let all = method == F2Method::All;
    let mut values: Vec<(&str, String)> = Vec::new();
    if all || method == F2Method::Direct {
        values.push(("direct", a.f2_direct().to_string()));
    }
    if all || method == F2Method::Mobius {
        values.push(("mobius", a.f2_mobius()?.to_string()));
    }
    for (m, name, variant) in [
        (F2Method::Laplacian, "laplacian", SplitVariant::Laplacian),
        (F2Method::Adjacency, "adjacency", SplitVariant::Adjacency),
    ] {
        if all || method == m {
            let v = match a.f2_split(variant) {
                Ok(v) => v.to_string(),
                Err(Error::Domain(_)) => NOT_APPLICABLE.to_string(),
                Err(e) => return Err(e.into()),
            };
            values.push((name, v));
        }
    }
    if all || method == F2Method::ClosedForm {
        let v = closed_form(&l)?
            .unwrap_or_else(|| "not applicable: no closed form for this group".into());
        values.push(("closed-form", v));
    }
    emit_pairs(ctx, out, &values)?;
    remember(ctx.cache.as_ref(), &l, None, ctx.tol)
}

fn hughes(ctx: &mut Ctx, out: &mut dyn Write, spec: &str, p: u64) -> CliResult<()> {
    let parsed = parse_group_spec(spec)?;
    for n in &parsed.notes {
        writeln!(ctx.err, "note: {n}")?;
    }
    let g = &parsed.group;
    let h = g.hughes_subgroup(p)?;
    let members: Vec<String> = h.iter().map(|e| g.element(e).to_cycle_string()).collect();
    if ctx.json {
        print_json(
            out,
            &json!({"p": p, "order": h.len(), "index": g.order() / h.len(), "members": members}),
        )?;
    } else {
        writeln!(
            out,
            "H_{p}: order {}, index {}",
            h.len(),
            g.order() / h.len()
        )?;
        if members.len() <= 64 {
            writeln!(out, "{}", members.join(" "))?;
        }
    }
    Ok(())
}

fn census(ctx: &mut Ctx, out: &mut dyn Write, q: u64) -> CliResult<()> {
    let pp = PrimePower::new(q)?;
    let entries = dickson_census(pp)?;
    let brute = if matches!(q, 4 | 5 | 7) {
        let parsed = parse_group_spec(&format!("PSL(2,{q})"))?;
        let l = load_parsed(ctx.cache.as_ref(), parsed)?;
        let observed = type_census(&l.lattice);
        let checks = compare_census(&entries, &observed);
        remember(ctx.cache.as_ref(), &l, None, ctx.tol)?;
        Some((l.lattice.len(), observed, checks))
    } else {
        None
    };
    if ctx.json {
        let brute_json = brute.as_ref().map(
            |(n, observed, checks)| json!({"lattice_size": n, "types": observed, "checks": checks}),
        );
        print_json(
            out,
            &json!({"q": q, "census": entries, "brute_force": brute_json}),
        )?;
        return Ok(());
    }
    writeln!(out, "subgroups of PSL(2,{q})")?;
    let rows: Vec<Vec<String>> = entries
        .iter()
        .map(|e| {
            vec![
                e.family.clone(),
                e.parameter.map_or("-".into(), |p| p.to_string()),
                e.type_label.clone(),
                e.count
                    .count()
                    .map_or("not stated".into(), |c| c.to_string()),
                e.note.clone().unwrap_or_default(),
            ]
        })
        .collect();
    write!(
        out,
        "{}",
        render::table(&["family", "d/m", "type", "count", "note"], &rows)
    )?;
    match brute {
        Some((n, _, checks)) => {
            writeln!(out, "\nbrute force: {n} subgroups")?;
            let rows: Vec<Vec<String>> = checks
                .iter()
                .map(|c| {
                    vec![
                        c.family.clone(),
                        c.type_label.clone(),
                        c.stated.map_or("-".into(), |s| s.to_string()),
                        c.observed.to_string(),
                        match c.agrees {
                            Some(true) => "agrees".into(),
                            Some(false) => "DIFFERS".into(),
                            None => c.note.clone().unwrap_or_default(),
                        },
                    ]
                })
                .collect();
            write!(
                out,
                "{}",
                render::table(&["family", "type", "stated", "found", "check"], &rows)
            )?;
        }
        None => writeln!(out, "\nno brute-force check (supported for q = 4, 5, 7)")?,
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifyOut<'a> {
    group: &'a str,
    report: &'a DegreeReport,
}

fn verify_one(cache: Option<&Cache>, parsed: ParsedGroup, tol: f64) -> CliResult<DegreeReport> {
    let l = load_parsed(cache, parsed)?;
    if let Some(r) = l.cached.as_ref().and_then(|e| e.report.clone()) {
        return Ok(r);
    }
    let report = DegreeAnalysis::new(&l.lattice, tol).report()?;
    remember(cache, &l, Some(&report), tol)?;
    Ok(report)
}

fn verify(
    ctx: &mut Ctx,
    out: &mut dyn Write,
    group: Option<String>,
    catalog: bool,
) -> CliResult<()> {
    let names: Vec<String> = match (group, catalog) {
        (Some(g), false) => vec![g],
        (None, true) => CATALOG.iter().map(|s| s.to_string()).collect(),
        _ => return Err(Error::Input("verify takes either a group or --catalog".into()).into()),
    };
    let mut parsed = Vec::new();
    for n in &names {
        let p = parse_group_spec(n)?;
        if !catalog {
            for note in &p.notes {
                writeln!(ctx.err, "note: {note}")?;
            }
        }
        parsed.push(p);
    }
    let cache = ctx.cache.as_ref();
    let tol = ctx.tol;
    let reports: Vec<CliResult<DegreeReport>> = parsed
        .into_par_iter()
        .map(|p| verify_one(cache, p, tol))
        .collect();
    let reports: Vec<DegreeReport> = reports.into_iter().collect::<CliResult<_>>()?;
    if ctx.json {
        let v: Vec<VerifyOut> = names
            .iter()
            .zip(&reports)
            .map(|(n, r)| VerifyOut {
                group: n,
                report: r,
            })
            .collect();
        if catalog {
            print_json(out, &v)?;
        } else {
            print_json(out, &v[0])?;
        }
    } else {
        for (n, r) in names.iter().zip(&reports) {
            write!(out, "{}", render::report_table(n, r))?;
        }
        if catalog {
            let failed = reports.iter().filter(|r| !r.passed()).count();
            let differs = reports
                .iter()
                .flat_map(|r| &r.notes)
                .filter(|n| n.starts_with("reference differs"))
                .count();
            writeln!(
                out,
                "\n{} groups, {failed} with failing identities, {differs} reference values differ",
                reports.len()
            )?;
        }
    }
    for (n, r) in names.iter().zip(&reports) {
        for c in r.failures() {
            writeln!(ctx.err, "{n}: {} failed: {} vs {}", c.name, c.lhs, c.rhs)?;
        }
    }
    if reports.iter().all(|r| r.passed()) {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}
