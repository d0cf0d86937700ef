//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Runs without the libtest harness so the lines always reach the terminal.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use latspec::cache::{Cache, TOOL_VERSION};
use latspec::catalog::CATALOG;
use latspec::groupspec::parse_group_spec;
use latspec_core::degrees::graph_spectra;
use latspec_core::{
    build_graph, compare_census, dickson_census, eigenvalues_symmetric, enumerate_subgroups,
    f2_pgl_closed, f2_psl_closed, mobius_hall, mobius_symmetric, type_census, DegreeAnalysis,
    Error, ExactRational, PrimePower, SplitVariant, SubgroupLattice, TypeSignature,
};
use num_bigint::BigInt;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const TOL: f64 = 1e-12;

fn lattice(spec: &str) -> SubgroupLattice {
    enumerate_subgroups(parse_group_spec(spec).unwrap().group).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

fn trace_tol(two_e: u64) -> f64 {
    1e-8 * (two_e as f64).max(1.0)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_latspec"))
}

fn sd_a4() -> Outcome {
    let t = Instant::now();
    let l = lattice("A4");
    let a = DegreeAnalysis::new(&l, TOL);
    let want = ExactRational::new(16.into(), 25.into());
    let got = [
        a.sd_direct(),
        a.sd_spectral(),
        a.sd_via_f2().map_err(|e| e.to_string())?,
    ];
    within(t.elapsed(), Duration::from_secs(1))?;
    ensure(got.iter().all(|v| *v == want), || format!("got {got:?}"))?;
    Ok(format!("16/25 three ways in {:?}", t.elapsed()))
}

fn f2_a4() -> Outcome {
    let l = lattice("A4");
    let a = DegreeAnalysis::new(&l, TOL);
    let e = |r: latspec_core::Result<BigInt>| r.map_err(|e| e.to_string());
    let got = [
        BigInt::from(a.f2_direct()),
        e(a.f2_mobius())?,
        e(a.f2_split(SplitVariant::Laplacian))?,
        e(a.f2_split(SplitVariant::Adjacency))?,
    ];
    ensure(got.iter().all(|v| *v == BigInt::from(27)), || {
        format!("got {got:?}")
    })?;
    Ok("27 four ways".into())
}

fn rounded_laplacian(l: &SubgroupLattice) -> Result<Vec<i64>, String> {
    let g = build_graph(l);
    let m = g.laplacian_matrix().cast::<f64>().unwrap();
    let s = eigenvalues_symmetric(&m, TOL).map_err(|e| e.to_string())?;
    ensure(s.residual < 1e-9, || format!("residual {}", s.residual))?;
    let mut out = Vec::new();
    for &v in &s.values {
        let r = v.round();
        ensure((v - r).abs() < 1e-9, || {
            format!("eigenvalue {v} is not near an integer")
        })?;
        out.push(r as i64);
    }
    Ok(out)
}

fn laplacian_spectra() -> Outcome {
    let s4 = lattice("S4");
    let find = |label: &str| {
        (0..s4.len())
            .find(|&id| TypeSignature::of_subgroup(&s4, id).label() == label)
            .unwrap()
    };
    let cases = [
        ("A4", lattice("A4"), vec![0, 4, 4, 7, 7, 7, 7]),
        ("S3 inside S4", s4.restrict(find("S3")), vec![0, 3, 3]),
        (
            "Dih8 inside S4",
            s4.restrict(find("Dih8")),
            vec![0, 2, 2, 4],
        ),
    ];
    for (name, l, want) in cases {
        let got = rounded_laplacian(&l)?;
        ensure(got == want, || {
            format!("{name}: got {got:?}, want {want:?}")
        })?;
    }
    Ok("A4 {0,4,4,7,7,7,7}, triangle {0,3,3}, 4-cycle {0,2,2,4}".into())
}

fn s4_numbers() -> Outcome {
    let l = lattice("S4");
    let f2 = DegreeAnalysis::new(&l, TOL).f2_direct();
    ensure(f2 == 177, || format!("F2 direct {f2}"))?;
    let half = (0..l.len()).find(|&id| l.subgroup(id).order == 12).unwrap();
    let closed = f2_pgl_closed(
        PrimePower::new(3).unwrap(),
        l.len() as u64,
        l.restrict(half).len() as u64,
    )
    .map_err(|e| e.to_string())?;
    ensure(closed == BigInt::from(177), || {
        format!("closed form {closed}")
    })?;
    ensure(l.len() == 30, || format!("|L| = {}", l.len()))?;
    let v = build_graph(&l).vertex_count();
    ensure(v == 26, || format!("|V| = {v}"))?;

    let top = l.top();
    for id in 1..top {
        let label = TypeSignature::of_subgroup(&l, id).label();
        let mu = l.mobius(id, top).map_err(|e| e.to_string())?;
        let want = match label.as_str() {
            "C2" if l
                .subgroup(id)
                .members
                .iter()
                .any(|e| l.group().element(e).cycles().len() == 1) =>
            {
                2
            }
            "C2" => continue,
            "C3" => 1,
            "C4" => 0,
            "V4" if l.is_normal(id) => 3,
            "V4" => 0,
            "S3" | "Dih8" | "A4" => -1,
            other => return Err(format!("unexpected subgroup type {other}")),
        };
        ensure(mu == want, || {
            format!("mu({}, S4) = {mu}, want {want}", l.label(id))
        })?;
    }
    Ok("F2 177 direct and closed, |L| 30, |V| 26, proper mu table".into())
}

fn s4_discrepancies() -> Outcome {
    let out = bin().args(["verify", "S4", "--json"]).output().unwrap();
    ensure(out.status.success(), || {
        format!("exit {:?}", out.status.code())
    })?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let r = &v["report"];
    let checks = r["checks"].as_array().unwrap();
    ensure(checks.iter().all(|c| c["passed"] == true), || {
        "an identity failed".into()
    })?;
    ensure(
        r["f2"]["direct"] == "177" && r["f2"]["split_laplacian"] == "177",
        || format!("F2 values {}", r["f2"]),
    )?;

    // independent values: the dual sum of mu(1, Z) over the lattice, and an exhaustive pair test
    let l = lattice("S4");
    let row = l.mobius_row(l.bottom());
    ensure(row.iter().sum::<i64>() == 0, || {
        "mu(1, Z) does not sum to 0".into()
    })?;
    let mu = row[l.top()];
    let mut two_e = 0;
    for a in 0..l.len() {
        for b in 0..l.len() {
            let g = l.group();
            let prod = g.product_set(&l.subgroup(a).members, &l.subgroup(b).members);
            if !g.is_subgroup(&prod) {
                two_e += 1;
            }
        }
    }
    ensure(mu == -12 && two_e == 390, || {
        format!("mu {mu}, 2|E| {two_e}")
    })?;

    let notes: Vec<&str> = r["notes"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|n| n.as_str())
        .collect();
    let has = |needle: &str| notes.iter().any(|n| n.contains(needle));
    ensure(has("published mu(1,G) = -24, computed -12"), || {
        format!("notes {notes:?}")
    })?;
    ensure(
        has("published Laplacian eigenvalue sum = 378, computed 390"),
        || format!("notes {notes:?}"),
    )?;
    Ok("exit 0, notes mu -24 vs -12 and sum 378 vs 390".into())
}

fn psl25() -> Outcome {
    let t = Instant::now();
    let l = lattice("PSL(2,5)");
    ensure(l.len() == 59, || format!("|L| = {}", l.len()))?;
    let census = type_census(&l);
    let want: BTreeMap<String, u64> = [
        ("1", 1),
        ("C2", 15),
        ("C3", 10),
        ("C5", 6),
        ("V4", 5),
        ("S3", 10),
        ("Dih10", 6),
        ("A4", 5),
        ("A5", 1),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    ensure(census == want, || format!("census {census:?}"))?;
    let f2 = DegreeAnalysis::new(&l, TOL).f2_direct();
    let closed = f2_psl_closed(PrimePower::new(5).unwrap(), 59).map_err(|e| e.to_string())?;
    ensure(f2 == 237 && closed == BigInt::from(237), || {
        format!("F2 {f2}, table {closed}")
    })?;
    let checks = compare_census(
        &dickson_census(PrimePower::new(5).unwrap()).unwrap(),
        &census,
    );
    let early: Vec<_> = checks
        .iter()
        .filter(|c| ["i", "ii", "iii"].contains(&c.family.as_str()))
        .collect();
    ensure(
        !early.is_empty() && early.iter().all(|c| c.agrees == Some(true)),
        || format!("families i-iii: {early:?}"),
    )?;
    within(t.elapsed(), Duration::from_secs(30))?;
    Ok(format!(
        "|L| 59, census and F2 237 agree, {:?}",
        t.elapsed()
    ))
}

fn identity_suite() -> Outcome {
    let t = Instant::now();
    for name in CATALOG {
        let l = lattice(name);
        if l.group().order() > 60 {
            continue;
        }
        let a = DegreeAnalysis::new(&l, TOL);
        let fail = |what: &str| format!("{name}: {what}");
        let n = l.len() as u64;
        let two_e = 2 * a.graph().edge_count();
        let sd = a.sd_direct();
        let lhs = ExactRational::from_integer(BigInt::from(n * n))
            * (ExactRational::from_integer(1.into()) - &sd);
        ensure(lhs == ExactRational::from_integer(two_e.into()), || {
            fail("2|E| vs sd")
        })?;
        let local = a.local().map_err(|e| fail(&e.to_string()))?;
        let f2_sum: u64 = local.iter().map(|x| x.f2).sum();
        ensure(n * n - f2_sum == two_e, || fail("2|E| vs sum of F2(H)"))?;
        let (adj, lap) = graph_spectra(a.graph(), TOL).map_err(|e| fail(&e.to_string()))?;
        let tol = trace_tol(two_e);
        let s1: f64 = adj.values.iter().sum();
        let s2: f64 = adj.values.iter().map(|x| x * x).sum();
        let sl: f64 = lap.values.iter().sum();
        ensure(s1.abs() <= tol, || fail(&format!("adjacency sum {s1}")))?;
        ensure((s2 - two_e as f64).abs() <= tol, || {
            fail(&format!("square sum {s2}"))
        })?;
        ensure((sl - two_e as f64).abs() <= tol, || {
            fail(&format!("Laplacian sum {sl}"))
        })?;
        let via = a.sd_via_f2().map_err(|e| fail(&e.to_string()))?;
        ensure(a.sd_spectral() == sd && via == sd, || {
            fail("sd methods differ")
        })?;
        let direct = BigInt::from(a.f2_direct());
        ensure(
            a.f2_mobius().map_err(|e| fail(&e.to_string()))? == direct,
            || fail("mobius F2"),
        )?;
        if !l.is_quasihamiltonian() {
            for v in [SplitVariant::Laplacian, SplitVariant::Adjacency] {
                let s = a.f2_split(v).map_err(|e| fail(&e.to_string()))?;
                ensure(s == direct, || fail(&format!("{v:?} split F2 {s}")))?;
            }
        }
        ensure(
            a.report().map_err(|e| fail(&e.to_string()))?.passed(),
            || fail("report"),
        )?;
    }
    within(t.elapsed(), Duration::from_secs(120))?;
    Ok(format!("{} groups in {:?}", CATALOG.len(), t.elapsed()))
}

fn quasihamiltonian() -> Outcome {
    let mut names: Vec<&str> = CATALOG
        .iter()
        .copied()
        .filter(|n| parse_group_spec(n).unwrap().group.is_abelian())
        .collect();
    names.push("Q8");
    let one = ExactRational::from_integer(1.into());
    for name in &names {
        let l = lattice(name);
        let a = DegreeAnalysis::new(&l, TOL);
        let sds = [
            a.sd_direct(),
            a.sd_spectral(),
            a.sd_via_f2().map_err(|e| e.to_string())?,
        ];
        ensure(sds.iter().all(|s| *s == one), || {
            format!("{name}: sd {sds:?}")
        })?;
        ensure(a.graph().is_null(), || {
            format!("{name}: graph has vertices")
        })?;
        for v in [SplitVariant::Laplacian, SplitVariant::Adjacency] {
            ensure(matches!(a.f2_split(v), Err(Error::Domain(_))), || {
                format!("{name}: split applied")
            })?;
        }
        let out = bin()
            .args(["f2", name, "--method", "laplacian"])
            .output()
            .unwrap();
        let text = String::from_utf8_lossy(&out.stdout);
        ensure(
            out.status.success() && text.contains("not applicable"),
            || format!("{name}: {text}"),
        )?;
    }
    Ok(format!(
        "{} groups: sd 1, null graph, split not applicable",
        names.len()
    ))
}

fn mobius_cross_checks() -> Outcome {
    let elementary = [
        ("C2", 2, 1),
        ("E4", 2, 2),
        ("E8", 2, 3),
        ("C3", 3, 1),
        ("E9", 3, 2),
        ("E27", 3, 3),
    ];
    for (name, p, n) in elementary {
        let l = lattice(name);
        let mu = BigInt::from(l.mobius(l.bottom(), l.top()).unwrap());
        let want = mobius_hall(p, n, true).unwrap();
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let direct = BigInt::from(sign * (p as i64).pow(n * (n - 1) / 2));
        ensure(mu == want && mu == direct, || {
            format!("{name}: mu {mu}, formula {want}")
        })?;
    }
    let others = [
        "C4", "C8", "C16", "C9", "D4", "Q8", "C4xC2", "Dih16", "C4xC4", "C8xC2", "C4xC2xC2", "M16",
    ];
    for name in others {
        let l = lattice(name);
        let mu = l.mobius(l.bottom(), l.top()).unwrap();
        ensure(l.group().order() <= 16 && mu == 0, || {
            format!("{name}: mu {mu}")
        })?;
    }
    let s3 = lattice("S3");
    let mu = BigInt::from(s3.mobius(s3.bottom(), s3.top()).unwrap());
    let branch = mobius_symmetric(3).unwrap();
    ensure(
        mu == BigInt::from(3) && branch.value == mu && branch.branch == "i",
        || format!("mu(1,S3) {mu}, formula {}", branch.value),
    )?;
    Ok("elementary abelian p^C(n,2) signs, 0 otherwise, mu(1,S3) = 3".into())
}

fn determinism() -> Outcome {
    let run = |cache: Option<&std::path::Path>| {
        let mut c = bin();
        c.args(["verify", "--catalog", "--json"])
            .env_remove("LATSPEC_CACHE");
        if let Some(dir) = cache {
            c.env("LATSPEC_CACHE", dir);
        }
        let out = c.output().unwrap();
        ensure(out.status.success(), || {
            format!("exit {:?}", out.status.code())
        })?;
        Ok::<_, String>(out.stdout)
    };
    let first = run(None)?;
    let second = run(None)?;
    ensure(first == second, || "two runs differ".into())?;

    let dir = tempfile::tempdir().unwrap();
    let cold = run(Some(dir.path()))?;
    let warm = run(Some(dir.path()))?;
    ensure(cold == first && warm == first, || {
        "cached run differs from uncached".into()
    })?;

    // re-storing a looked-up entry leaves the file byte-identical
    let cache = Cache::new(dir.path());
    for name in CATALOG {
        let g = parse_group_spec(name).unwrap().group;
        let entry = cache
            .lookup(&g)
            .ok_or_else(|| format!("{name}: not cached"))?;
        ensure(
            entry.version == TOOL_VERSION && entry.report.is_some(),
            || format!("{name}: stale entry"),
        )?;
        let path = cache.store(&g, &entry).map_err(|e| e.to_string())?;
        let before = std::fs::read(&path).unwrap();
        let path2 = cache
            .store(&g, &cache.lookup(&g).unwrap())
            .map_err(|e| e.to_string())?;
        ensure(
            path == path2 && before == std::fs::read(&path2).unwrap(),
            || format!("{name}: cache file changed on round trip"),
        )?;
        let back =
            SubgroupLattice::from_dump(g.clone(), &entry.lattice).map_err(|e| e.to_string())?;
        ensure(back.to_dump() == entry.lattice, || {
            format!("{name}: lattice dump changed")
        })?;
    }
    Ok(format!(
        "{} bytes identical across 4 runs, cache round trips exact",
        first.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("sd(A4) = 16/25 by three methods under 1 s", sd_a4),
        ("F2(A4) = 27 by four methods", f2_a4),
        (
            "Laplacian spectra round to the expected integers",
            laplacian_spectra,
        ),
        ("S4: F2, lattice, graph and mu table", s4_numbers),
        (
            "verify S4 reports the published discrepancies",
            s4_discrepancies,
        ),
        (
            "PSL(2,5) brute force against census and table under 30 s",
            psl25,
        ),
        (
            "identity suite over the catalog under 120 s",
            identity_suite,
        ),
        ("quasihamiltonian groups", quasihamiltonian),
        ("Mobius values of p-groups and S3", mobius_cross_checks),
        ("determinism and cache round trips", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
