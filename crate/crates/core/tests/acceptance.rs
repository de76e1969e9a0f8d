//! End-to-end acceptance run. Prints one line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use seghyper::constructions::*;
use seghyper::geometry::{bratio_solve, meet, MeetKind};
use seghyper::hypergraph::{zk_hypergraph, GenericHypergraph, Instance, SegmentHypergraph};
use seghyper::io::document::{parse, serialize, Metadata};
use seghyper::lp::{chain_report, solve_fractional, verify_slackness};
use seghyper::rational::{int, rat};
use seghyper::search::{
    enumerate_intersecting, generate_intersecting, generate_random, ratio_enumeration, RatioTuple,
};
use seghyper::solvers::{
    chromatic_number, covering_number, is_proper, k_colorable, matching_number,
};

use common::{brute_chi, brute_nu, brute_tau, lp_vertex_oracle, random_generic};

/// Seeded instances per r for the batch criteria.
const BATCH: u64 = 200;
/// Box for the r = 4 example search.
const R4_BOX: i64 = 3;
/// Enumeration boxes (r, box) for the intersecting suite.
const ENUMERATION_BOXES: [(i64, i64); 3] = [(3, 5), (4, 6), (5, 8)];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn nu(g: &GenericHypergraph) -> usize {
    matching_number(g).size()
}

fn tau(g: &GenericHypergraph) -> usize {
    covering_number(g).size()
}

fn chi(g: &GenericHypergraph) -> usize {
    chromatic_number(g).unwrap().num_colors
}

fn timed(limit: Duration, label: &str, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = f()?;
    let took = start.elapsed();
    ensure(
        took <= limit,
        format!("{label} took {took:?}, limit {limit:?}"),
    )?;
    Ok(format!("{out} [{label} {took:.2?} <= {limit:?}]"))
}

fn criterion_1() -> Outcome {
    let fast = timed(Duration::from_secs(1), "small", || {
        let k4 = k4_example();
        ensure(chi(k4.as_generic()) == 4, "K4 chi != 4")?;
        let r = triangle_r();
        ensure(
            (nu(r.as_generic()), tau(r.as_generic())) == (1, 2),
            "triangle (nu, tau) != (1, 2)",
        )?;
        let s = nonfano_s();
        ensure((nu(&s), tau(&s)) == (1, 3), "nonfano (nu, tau) != (1, 3)")?;
        Ok("K4 chi=4, triangle (1,2), nonfano (1,3)".into())
    })?;
    let cube = timed(Duration::from_secs(60), "cube", || {
        let c = cube_c();
        ensure(
            c.num_edges() == 40,
            format!("cube has {} edges", c.num_edges()),
        )?;
        ensure(k_colorable(&c, 2).is_none(), "cube is 2-colorable")?;
        let p = cube_projected().map_err(|e| e.to_string())?;
        ensure(
            p.r() == 3 && p.num_edges() == 40,
            "projected cube is not a 40-edge 3-segment instance",
        )?;
        ensure(chi(p.as_generic()) == 3, "projected cube chi != 3")?;
        Ok("cube 40 edges, not 2-colorable; projection valid with chi=3".into())
    })?;
    Ok(format!("{fast}; {cube}"))
}

fn criterion_2() -> Outcome {
    timed(Duration::from_secs(1), "zk", || {
        let colorings = zk_colorings().map_err(|e| e.to_string())?;
        for (c, (k, colors)) in colorings.iter().zip([(2, 4), (3, 3), (4, 2)]) {
            let z = zk_hypergraph(k).unwrap().to_generic();
            ensure(
                c.k == k && c.coloring.num_colors == colors,
                format!("Z_{k} coloring uses {} colors", c.coloring.num_colors),
            )?;
            ensure(
                is_proper(&z, &c.coloring).unwrap(),
                format!("Z_{k} coloring is not proper"),
            )?;
        }
        let z2 = zk_hypergraph(2).unwrap().to_generic();
        ensure(
            z2.num_vertices() == 4 && z2.num_edges() == 6,
            "Z_2 is not K4",
        )?;
        ensure(k_colorable(&z2, 3).is_none(), "Z_2 is 3-colorable")?;
        Ok("Z_2/Z_3/Z_4 properly colored with 4/3/2 colors; Z_2 = K4 not 3-colorable".into())
    })
}

fn criterion_3() -> Outcome {
    let mut parts = Vec::new();
    for r in 5..=8 {
        parts.push(timed(Duration::from_secs(5), &format!("r={r}"), || {
            let h = lowerbound_family(r).map_err(|e| e.to_string())?;
            ensure(h.num_edges() as i64 == r, "wrong edge count")?;
            ensure(h.is_intersecting(), "not intersecting")?;
            ensure(!h.has_concurrent_triple(), "three edges concurrent")?;
            for i in 1..=r - 2 {
                let e = lowerbound_rung(r, i).unwrap();
                ensure(h.edges().contains(&e), format!("rung {i} missing"))?;
                ensure(
                    e.dir().components() == (1, 2 * i - r + 1),
                    format!("rung {i} slope"),
                )?;
                for j in (i + 1)..=r - 2 {
                    let f = lowerbound_rung(r, j).unwrap();
                    match meet(&e, &f) {
                        MeetKind::LatticeMeet(p) if p.x == i + j + 1 - r => {}
                        other => return Err(format!("rungs {i},{j} meet as {other:?}")),
                    }
                }
            }
            let t = tau(h.as_generic());
            ensure(
                t as i64 == (r + 1) / 2,
                format!("tau = {t}, expected {}", (r + 1) / 2),
            )?;
            Ok(format!("tau={t}"))
        })?);
    }
    Ok(parts.join("; "))
}

fn criterion_4() -> Outcome {
    timed(Duration::from_secs(1), "ratios", || {
        let (b3, b4) = bratio_solve(&int(2), &int(2)).unwrap();
        ensure(
            (b3.clone(), b4.clone()) == (int(3), int(3)),
            format!("bratio_solve(2,2) = ({b3}, {b4})"),
        )?;
        let (_, b4) = bratio_solve(&int(1), &int(2)).unwrap();
        ensure(b4 == int(4), format!("bratio_solve(1,2) gives b4 = {b4}"))?;
        let e = ratio_enumeration(5);
        let t = |v: [(i64, i64); 4]| RatioTuple(v.map(|(n, d)| rat(n, d)));
        let expected = vec![
            t([(1, 3), (1, 2), (1, 1), (2, 1)]),
            t([(1, 2), (1, 1), (1, 1), (3, 1)]),
            t([(1, 1), (1, 1), (2, 1), (2, 1)]),
            t([(2, 1), (2, 1), (3, 1), (3, 1)]),
        ];
        ensure(e.raw.len() == 6, format!("{} raw tuples", e.raw.len()))?;
        ensure(
            e.orbits == expected,
            format!(
                "orbits {:?}",
                e.orbits.iter().map(|o| o.to_string()).collect::<Vec<_>>()
            ),
        )?;
        Ok("(2,2)->(3,3), (1,2)->b4=4, 6 raw tuples in 4 orbits".into())
    })
}

fn fractional_checks(h: &Instance) -> Result<(), String> {
    let g = h.generic();
    let c = chain_report(g).map_err(|e| e.to_string())?;
    let pair = &c.fractional;
    ensure(
        pair.matching.objective == pair.cover.objective,
        "nu* != tau*",
    )?;
    pair.matching.check_feasible(g).map_err(|e| e.to_string())?;
    pair.cover.check_feasible(g).map_err(|e| e.to_string())?;
    let slack = verify_slackness(g, &pair.matching, &pair.cover).map_err(|e| e.to_string())?;
    ensure(slack.holds(), "complementary slackness fails")?;
    ensure(
        int(c.nu() as i64) <= *c.nu_star() && *c.tau_star() <= int(c.tau() as i64),
        "chain fails",
    )?;
    if let Some(s) = h.as_segment() {
        if s.r() >= 3 {
            let rm1 = int(s.r() - 1);
            ensure(
                *c.tau_star() <= &rm1 * int(c.nu() as i64),
                "tau* > (r-1) nu",
            )?;
            ensure(int(c.tau() as i64) <= &rm1 * c.nu_star(), "tau > (r-1) nu*")?;
        }
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    timed(Duration::from_secs(300), "batch", || {
        let mut count = 0;
        for (name, inst) in catalog().map_err(|e| e.to_string())? {
            fractional_checks(&inst).map_err(|e| format!("{name}: {e}"))?;
            count += 1;
        }
        for r in 3..=5 {
            for seed in 0..BATCH {
                let g = generate_random(r, 8, 3 * r, seed).unwrap();
                fractional_checks(&g.hypergraph.into())
                    .map_err(|e| format!("random r={r} seed={seed}: {e}"))?;
                count += 1;
            }
        }
        Ok(format!(
            "{count} instances: nu* = tau* exactly, chain, fractional bounds, slackness"
        ))
    })
}

fn intersecting_checks(h: &SegmentHypergraph) -> Result<(), String> {
    let r = h.r();
    let g = h.as_generic();
    ensure(h.is_intersecting(), "not intersecting")?;
    ensure(!h.isolated_vertices().is_empty(), "no isolated vertex")?;
    let t = tau(g) as i64;
    ensure(t <= r - 1, format!("tau = {t} > r - 1"))?;
    if r == 5 {
        ensure(t <= 3, format!("r = 5 with tau = {t}"))?;
        if h.find_triangle().is_some() {
            ensure(
                h.num_edges() <= 6,
                format!("triangle with {} edges", h.num_edges()),
            )?;
            ensure(
                h.max_degree() <= 5,
                format!("triangle with max degree {}", h.max_degree()),
            )?;
        }
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    timed(Duration::from_secs(600), "suite", || {
        let mut generated = 0;
        for r in 3..=5 {
            for seed in 0..BATCH {
                let g = generate_intersecting(r, r as usize + 2, 3 * r, seed).unwrap();
                intersecting_checks(&g.hypergraph)
                    .map_err(|e| format!("r={r} seed={seed}: {e}"))?;
                generated += 1;
            }
        }
        let mut enumerated = 0;
        for (r, b) in ENUMERATION_BOXES {
            let e = enumerate_intersecting(r, b);
            ensure(
                e.stats.quad_ratio_violations == 0,
                format!("r={r} box={b}: infeasible quad ratios"),
            )?;
            for h in &e.instances {
                intersecting_checks(h).map_err(|err| format!("enumerated r={r} box={b}: {err}"))?;
            }
            enumerated += e.instances.len();
        }
        Ok(format!(
            "{generated} generated + {enumerated} enumerated instances, zero failures"
        ))
    })
}

fn criterion_7() -> Outcome {
    timed(Duration::from_secs(300), "oracles", || {
        let mut instances: Vec<GenericHypergraph> =
            (0..50).map(|s| random_generic(s, 12, 8)).collect();
        let mut seed = 0;
        while instances.len() < 100 {
            let r = 2 + (seed % 2) as i64;
            let g = generate_random(r, 1 + (seed % 4) as usize, 3, seed)
                .unwrap()
                .hypergraph;
            if g.vertices().len() <= 12 && g.num_edges() <= 8 {
                instances.push(g.to_generic());
            }
            seed += 1;
        }
        let mut lp_checked = 0;
        for (i, g) in instances.iter().enumerate() {
            ensure(tau(g) == brute_tau(g), format!("instance {i}: tau"))?;
            ensure(nu(g) == brute_nu(g), format!("instance {i}: nu"))?;
            ensure(chi(g) == brute_chi(g), format!("instance {i}: chi"))?;
            if g.num_edges() <= 6 {
                let pair = solve_fractional(g);
                let oracle = lp_vertex_oracle(g);
                ensure(
                    pair.matching.objective == oracle,
                    format!("instance {i}: nu* vs oracle"),
                )?;
                ensure(
                    pair.cover.objective == oracle,
                    format!("instance {i}: tau* vs oracle"),
                )?;
                lp_checked += 1;
            }
        }
        Ok(format!(
            "100 instances agree on tau, nu, chi; {lp_checked} LP optima match vertex enumeration"
        ))
    })
}

fn criterion_8() -> Outcome {
    timed(Duration::from_secs(300), "audit", cover_fraction_audit)
}

fn cover_fraction_audit() -> Outcome {
    let mut count = 0;
    let mut check = |h: &SegmentHypergraph, what: &str| -> Result<(), String> {
        let k = match h.r() {
            2 => 4,
            3 => 3,
            _ => 2,
        };
        let t = tau(h.as_generic());
        let n = h.vertices().len();
        count += 1;
        ensure(
            t * k <= (k - 1) * n,
            format!("{what}: tau = {t}, |V| = {n}"),
        )
    };
    for r in 2..=5 {
        for seed in 0..BATCH {
            check(
                &generate_random(r, 8, 3 * r, seed).unwrap().hypergraph,
                &format!("random r={r} seed={seed}"),
            )?;
            if r >= 3 {
                let g = generate_intersecting(r, r as usize + 2, 3 * r, seed).unwrap();
                check(&g.hypergraph, &format!("intersecting r={r} seed={seed}"))?;
            }
        }
    }
    for (r, b) in ENUMERATION_BOXES {
        for h in &enumerate_intersecting(r, b).instances {
            check(h, &format!("enumerated r={r} box={b}"))?;
        }
    }
    for (name, inst) in catalog().map_err(|e| e.to_string())? {
        if let Some(h) = inst.as_segment() {
            check(h, &name)?;
        }
    }
    Ok(format!("tau <= (k-1)/k |V| on {count} instances"))
}

fn criterion_9() -> Outcome {
    timed(Duration::from_secs(600), "search", || {
        let Some(h) = search_r4_example(R4_BOX) else {
            return Err(format!(
                "INCONCLUSIVE: no instance within box {R4_BOX} (box too small)"
            ));
        };
        let g = h.as_generic();
        ensure(
            h.r() == 4 && h.num_edges() == 6,
            "not a 6-edge 4-segment instance",
        )?;
        ensure(
            nu(g) == 1 && tau(g) == 3,
            format!("(nu, tau) = ({}, {})", nu(g), tau(g)),
        )?;
        ensure(
            g.edges()
                .iter()
                .all(|e| e.iter().any(|&v| g.incident_edges(v).len() == 1)),
            "an edge without an isolated vertex",
        )?;
        let deg3: Vec<usize> = (0..g.num_vertices())
            .filter(|&v| g.incident_edges(v).len() == 3)
            .collect();
        for (i, &a) in deg3.iter().enumerate() {
            for &b in &deg3[i + 1..] {
                ensure(
                    g.edges().iter().any(|e| e.contains(&a) && e.contains(&b)),
                    "two degree-3 vertices share no edge",
                )?;
            }
        }
        Ok(format!(
            "box {R4_BOX}: 6 edges, nu=1, tau=3, isolated vertex on every edge"
        ))
    })
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_seghyper"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(
        out.status.success(),
        format!("seghyper {args:?} exited with {}", out.status),
    )?;
    Ok(out.stdout)
}

fn criterion_10() -> Outcome {
    timed(Duration::from_secs(120), "determinism", determinism)
}

fn determinism() -> Outcome {
    let mut round_trips = 0;
    let mut all: Vec<(String, Instance)> = catalog().map_err(|e| e.to_string())?;
    all.push((
        "r4".into(),
        search_r4_example(R4_BOX).ok_or("r4 search failed")?.into(),
    ));
    all.push((
        "six-edge-r5".into(),
        search_six_edge_r5(6)
            .ok_or("six-edge search failed")?
            .into(),
    ));
    for (name, inst) in &all {
        let meta = Metadata {
            name: Some(name.clone()),
            ..Default::default()
        };
        let text = serialize(inst, Some(meta.clone()));
        let back = parse(&text).map_err(|e| format!("{name}: {e}"))?;
        ensure(
            back.instance == *inst,
            format!("{name}: parse(serialize) differs"),
        )?;
        ensure(
            serialize(&back.instance, Some(meta)) == text,
            format!("{name}: serialization not stable"),
        )?;
        round_trips += 1;
    }

    let dir = std::env::temp_dir().join(format!("seghyper-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let doc = dir.join("intersecting.json");
    let doc_s = doc.to_str().unwrap();
    let mut outputs: Vec<Vec<Vec<u8>>> = Vec::new();
    for threads in ["1", "4"] {
        let mut run = Vec::new();
        for name in ["random", "intersecting"] {
            run.push(run_cli(&[
                "--threads",
                threads,
                "construct",
                name,
                "--r",
                "4",
                "--seed",
                "17",
            ])?);
        }
        run_cli(&[
            "--threads",
            threads,
            "construct",
            "intersecting",
            "--r",
            "5",
            "--seed",
            "3",
            "-o",
            doc_s,
        ])?;
        run.push(std::fs::read(&doc).map_err(|e| e.to_string())?);
        run.push(run_cli(&[
            "--threads",
            threads,
            "render",
            doc_s,
            "--overlay",
            "cover,matching,meets,quad",
        ])?);
        run.push(run_cli(&[
            "--threads",
            threads,
            "search",
            "enumerate",
            "--r",
            "4",
            "--box",
            "5",
        ])?);
        run.push(run_cli(&[
            "--threads",
            threads,
            "--json",
            "analyze",
            doc_s,
            "--fractional",
        ])?);
        outputs.push(run);
    }
    let _ = std::fs::remove_dir_all(&dir);
    ensure(
        outputs[0] == outputs[1],
        "outputs differ between runs with 1 and 4 threads",
    )?;
    ensure(outputs[0].iter().all(|o| !o.is_empty()), "empty output")?;
    Ok(format!("{round_trips} catalog round trips; JSON, SVG and enumeration bytes identical across runs and thread counts"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("constructions match their stated invariants", criterion_1),
        ("Z_k colorings", criterion_2),
        ("lower-bound family r = 5..8", criterion_3),
        ("ratio engine", criterion_4),
        ("fractional suite", criterion_5),
        ("intersecting-instance suite", criterion_6),
        ("oracle equivalence", criterion_7),
        ("cover fraction bound", criterion_8),
        ("r = 4 example search", criterion_9),
        ("determinism and round trip", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
