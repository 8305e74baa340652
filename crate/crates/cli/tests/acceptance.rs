//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use hyperricci::forman::{forman_cell_curvature, forman_graph_curvature, hyperedge_forman, unweighted_hyperedge_curvature};
use hyperricci::io::HypergraphFile;
use hyperricci::ollivier::{neighbor_measure, ollivier_curvature, wasserstein_w1, DualEdge};
use hyperricci::weights::{assign_weights, cayley_menger_det, heron_area, simplex_volume};
use hyperricci::embedding::{embed, verify_embedding};
use hyperricci::{CellComplex64, CellId, DualEdgeWeightRule, DualGraph64, FillPolicy, Geometry, Hyperedge, Hypergraph64, WeightScheme};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed <= limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn angle_defect_hyperbolic(a: f64, b: f64, c: f64) -> f64 {
    let angle = |opp: f64, x: f64, y: f64| ((x.cosh() * y.cosh() - opp.cosh()) / (x.sinh() * y.sinh())).acos();
    std::f64::consts::PI - angle(a, b, c) - angle(b, a, c) - angle(c, a, b)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let e = heron_area(3.0_f64, 4.0, 5.0, Geometry::Euclidean).map_err(|e| e.to_string())?;
    check((e - 6.0).abs() <= 1e-12, || format!("3-4-5 area {e}"))?;
    let h = heron_area(1.0_f64, 1.0, 1.0, Geometry::Hyperbolic).map_err(|e| e.to_string())?;
    let oracle = angle_defect_hyperbolic(1.0, 1.0, 1.0);
    check((h - oracle).abs() <= 1e-3 && (h - 0.3852).abs() <= 1e-3, || format!("hyperbolic {h} vs defect {oracle}"))?;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let s = heron_area(half_pi, half_pi, half_pi, Geometry::Spherical).map_err(|e| e.to_string())?;
    check((s - half_pi).abs() <= 1e-9, || format!("octant {s}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let scale: f64 = rng.gen_range(1e-6..1e-3);
        let a = rng.gen_range(0.5..1.0) * scale;
        let b = rng.gen_range(0.5..1.0) * scale;
        let c = rng.gen_range((a - b).abs() + 0.2 * scale..a + b - 0.2 * scale);
        let flat: f64 = heron_area(a, b, c, Geometry::Euclidean).unwrap();
        for g in [Geometry::Hyperbolic, Geometry::Spherical] {
            worst = worst.max((heron_area(a, b, c, g).unwrap() - flat).abs() / flat);
        }
    }
    check(worst < 1e-4, || format!("small-triangle relative error {worst:e}"))?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("3-4-5 = {e}, hyperbolic {h:.6} (defect {oracle:.6}), octant {s:.12}, small-limit error {worst:.1e}, {elapsed:?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let unit: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|j| if i == j { 0.0 } else { 1.0 }).collect()).collect();
    let d = cayley_menger_det(&unit, Geometry::Euclidean).map_err(|e| e.to_string())?;
    let v = simplex_volume(&unit, Geometry::Euclidean).map_err(|e| e.to_string())?;
    check((d - 4.0).abs() <= 1e-9, || format!("D = {d}"))?;
    check((v - 2f64.sqrt() / 12.0).abs() <= 1e-9, || format!("Vol = {v}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let p: Vec<[f64; 2]> = (0..3).map(|_| [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)]).collect();
        let dist = |i: usize, j: usize| ((p[i][0] - p[j][0]).powi(2) + (p[i][1] - p[j][1]).powi(2)).sqrt();
        let m: Vec<Vec<f64>> = (0..3).map(|i| (0..3).map(|j| dist(i, j)).collect()).collect();
        let shoelace = 0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1])).abs();
        if shoelace < 1e-2 {
            continue;
        }
        let heron = heron_area(m[0][1], m[1][2], m[0][2], Geometry::Euclidean).unwrap();
        let cm = simplex_volume(&m, Geometry::Euclidean).unwrap();
        worst = worst.max((cm - heron).abs() / heron);
    }
    check(worst <= 1e-9, || format!("Cayley-Menger vs Heron relative gap {worst:e}"))?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(5))?;
    Ok(format!("D = {d}, Vol = {v:.12}, CM vs Heron max gap {worst:.1e} over 1000 triangles, {elapsed:?}"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for _ in 0..100 {
        let n = rng.gen_range(2..=50);
        let p = rng.gen_range(0.02..0.4);
        let edges = common::random_graph(&mut rng, n, p);
        let tops: Vec<Vec<usize>> = edges.iter().map(|&(a, b)| vec![a, b]).collect();
        let k = common::closure(n, &tops, |_| 1.0);
        let mut deg = vec![0i64; n];
        for &(a, b) in &edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        for &(a, b) in &edges {
            let f = forman_graph_curvature(&k, k.edge(a, b).unwrap()).map_err(|e| e.to_string())?;
            check(f == (4 - deg[a] - deg[b]) as f64, || format!("edge ({a},{b}): {f}"))?;
            checked += 1;
        }
    }
    for n in 3..=12 {
        let tops: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        let k = common::closure(n, &tops, |_| 1.0);
        for e in k.cells_of_dim(1) {
            check(forman_graph_curvature(&k, e).unwrap() == 0.0, || format!("C_{n} edge not flat"))?;
        }
    }
    let k4: Vec<Vec<usize>> = (0..4).flat_map(|i| (i + 1..4).map(move |j| vec![i, j])).collect();
    let k = common::closure(4, &k4, |_| 1.0);
    for e in k.cells_of_dim(1) {
        check(forman_graph_curvature(&k, e).unwrap() == -2.0, || "K4 edge not -2".into())?;
    }
    Ok(format!("{checked} random edges exact, C_3..C_12 flat, K4 = -2"))
}

fn criterion_4() -> Outcome {
    let tri = common::closure(3, &[vec![0, 1, 2]], |_| 1.0);
    for e in tri.cells_of_dim(1) {
        let f = forman_cell_curvature(&tri, e).map_err(|e| e.to_string())?;
        check(f == 3.0, || format!("triangle edge {f}"))?;
    }
    let mixed = common::closure(5, &[vec![0, 1, 2], vec![2, 3], vec![3, 4]], |vs| 1.0 + vs.len() as f64);
    for (a, b) in [(2, 3), (3, 4)] {
        let e = mixed.edge(a, b).unwrap();
        let (cell, graph) = (forman_cell_curvature(&mixed, e).unwrap(), forman_graph_curvature(&mixed, e).unwrap());
        check(cell == graph, || format!("bare edge cell {cell} vs graph {graph}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        worst = worst.max(common::relabeling_gap(&mut rng, 10, 3));
    }
    check(worst <= 1e-12, || format!("relabeling changed a curvature by {worst:e}"))?;
    Ok(format!("triangle edges = 3, bare edges match graph curvature, 50 relabelings max gap {worst:.1e}"))
}

fn criterion_5() -> Outcome {
    let mut worst: f64 = 0.0;
    for size in 1..=3 {
        let tail: Vec<String> = (0..size).map(|i| format!("t{i}")).collect();
        let head: Vec<String> = (0..size).map(|i| format!("h{i}")).collect();
        for scheme in [WeightScheme::Combinatorial, WeightScheme::EdgeSum, WeightScheme::GeometricArea(Geometry::Euclidean)] {
            let hg = Hypergraph64::from_hyperedges(vec![Hyperedge::new("s", tail.clone(), head.clone())]);
            let k = CellComplex64::from_hypergraph(&hg, FillPolicy::FillAll).unwrap();
            let k = assign_weights(&k, scheme).map_err(|e| e.to_string())?;
            worst = worst.max(hyperedge_forman(&k, "s").unwrap().abs());
        }
    }
    check(worst <= 1e-12, || format!("symmetric hyperedge curvature {worst:e}"))?;

    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../samples/languages.json");
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let raw: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let hg: Hypergraph64 = HypergraphFile::parse(&text).and_then(|f| f.to_hypergraph()).map_err(|e| e.to_string())?;
    let mut count = 0;
    for h in raw["hyperedges"].as_array().unwrap() {
        let expect = h["tail"].as_array().unwrap().len() as i64 - h["head"].as_array().unwrap().len() as i64;
        let id = h["id"].as_str().unwrap();
        let got = unweighted_hyperedge_curvature(&hg, id).unwrap();
        check(got == expect, || format!("{id}: {got} vs {expect}"))?;
        count += 1;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..30 {
        let size = rng.gen_range(2..=6usize);
        let cut = rng.gen_range(1..size);
        let names: Vec<String> = (0..size).map(|v| format!("x{v}")).collect();
        let h = Hyperedge::new(format!("r{i}"), names[..cut].to_vec(), names[cut..].to_vec()).with_weight(rng.gen_range(0.5..2.0));
        let value = |h: Hyperedge<f64>| {
            let hg = Hypergraph64::from_hyperedges(vec![h.clone()]);
            let k = CellComplex64::from_hypergraph(&hg, FillPolicy::FillAll).unwrap();
            let k = assign_weights(&k, WeightScheme::EdgeSum).unwrap();
            (hyperedge_forman(&k, &h.id).unwrap(), unweighted_hyperedge_curvature(&hg, &h.id).unwrap())
        };
        let (f, u) = value(h.clone());
        let (fr, ur) = value(h.reversed());
        check(f == -fr && u == -ur, || format!("swap of {}: {f} vs {fr}", h.id))?;
    }
    Ok(format!("symmetric max |Ric| {worst:.1e}, {count} sample hyperedges exact, 30 swaps antisymmetric"))
}

fn dual(n: usize, edges: &[(usize, usize, f64)], weights: Vec<f64>) -> DualGraph64 {
    DualGraph64::from_parts(
        2,
        DualEdgeWeightRule::SharedFace,
        (0..n).map(CellId).collect(),
        (0..n).map(|i| format!("n{i}")).collect(),
        weights,
        edges.iter().map(|&(a, b, w)| DualEdge { a, b, shared_face: CellId(0), weight: w }).collect(),
    )
    .unwrap()
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut cases, mut worst, mut worst_marginal) = (0, 0.0f64, 0.0f64);
    while cases < 240 {
        let n = rng.gen_range(2..=6);
        let mut edges: Vec<(usize, usize, f64)> = (1..n).map(|i| (i - 1, i, rng.gen_range(0.2..2.0))).collect();
        for (a, b) in common::random_graph(&mut rng, n, 0.5) {
            if b != a + 1 {
                edges.push((a, b, rng.gen_range(0.2..2.0)));
            }
        }
        let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..5.0)).collect();
        let alpha = if n < 6 { [0.0, 0.25, 0.5][rng.gen_range(0..3)] } else { 0.0 };
        let g = dual(n, &edges, weights);
        for e in g.edges() {
            let mu_a = neighbor_measure(&g, e.a, alpha).map_err(|e| e.to_string())?;
            let mu_b = neighbor_measure(&g, e.b, alpha).map_err(|e| e.to_string())?;
            let (w, plan) = wasserstein_w1(&mu_a, &mu_b, g.metric()).map_err(|e| e.to_string())?;
            let (sa, sb): (Vec<_>, Vec<_>) = (mu_a.iter().collect(), mu_b.iter().collect());
            let cost: Vec<Vec<f64>> = sa.iter().map(|&(x, _)| sb.iter().map(|&(y, _)| g.metric().get(x, y)).collect()).collect();
            let expect = common::transport_oracle(
                &sa.iter().map(|p| p.1).collect::<Vec<_>>(),
                &sb.iter().map(|p| p.1).collect::<Vec<_>>(),
                &cost,
            );
            worst = worst.max((w - expect).abs());
            worst_marginal = worst_marginal.max(plan.marginal_error(&mu_a, &mu_b));
            cases += 1;
        }
    }
    check(worst <= 1e-9, || format!("solver vs enumeration gap {worst:e}"))?;
    check(worst_marginal <= 1e-9, || format!("marginal error {worst_marginal:e}"))?;

    let two = dual(2, &[(0, 1, 1.0)], vec![1.0, 1.0]);
    let k2 = ollivier_curvature(&two, 0, 0.0).map_err(|e| e.to_string())?;
    check(k2 == 0.0, || format!("two-node curvature {k2}"))?;
    let tri = dual(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)], vec![1.0; 3]);
    let k3 = ollivier_curvature(&tri, 0, 0.0).map_err(|e| e.to_string())?;
    check((k3 - 0.5).abs() <= 1e-9, || format!("triangle curvature {k3}"))?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!(
        "{cases} transport solves vs enumeration max gap {worst:.1e}, marginals {worst_marginal:.1e}, kappa(2-node) = {k2}, kappa(triangle) = {k3}, {elapsed:?}"
    ))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cells = 0;
    for round in 0..50 {
        let (n, tops) = common::random_tops(&mut rng, 12, 3);
        let k = common::closure(n, &tops, |_| 1.0);
        let emb = embed(&k, true).map_err(|e| e.to_string())?;
        let v = verify_embedding(&k, &emb).map_err(|e| e.to_string())?;
        check(v.is_empty(), || format!("complex {round}: {} violating pairs", v.len()))?;

        // second route: unions of two top cells are affinely independent on the curve
        let d = emb.dimension();
        let tops: BTreeSet<Vec<usize>> = tops.into_iter().collect();
        for a in &tops {
            for b in &tops {
                let union: BTreeSet<usize> = a.iter().chain(b).copied().collect();
                check(union.len() <= d + 1, || format!("union of {a:?} and {b:?} exceeds R^{d}"))?;
                let ts: Vec<i128> = union.iter().map(|&v| v as i128 + 1).collect();
                let det = common::det_mod_p(common::moment_rows(&ts, ts.len() - 1));
                check(det != 0, || format!("moment points of {union:?} dependent"))?;
            }
        }
        cells += k.len();
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!("50 random complexes ({cells} cells) certified, {elapsed:?}"))
}

fn pipeline(threads: &str, dir: &Path) -> Result<(Vec<u8>, Vec<u8>, Vec<u8>), String> {
    let sample = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../samples/languages.json");
    let complex = dir.join(format!("complex-{threads}.json"));
    let report = dir.join(format!("report-{threads}.json"));
    let run = |args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_hyperricci"))
            .env("HYPERRICCI_THREADS", threads)
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        if out.status.success() {
            Ok(out.stdout)
        } else {
            Err(String::from_utf8_lossy(&out.stderr).into_owned())
        }
    };
    run(&["build", sample.to_str().unwrap(), "--fill-policy", "all", "--weights", "area", "-o", complex.to_str().unwrap()])?;
    run(&["forman", complex.to_str().unwrap(), "--level", "cell", "-o", report.to_str().unwrap()])?;
    let bounds = run(&["bounds", report.to_str().unwrap()])?;
    let read = |p: &Path| std::fs::read(p).map_err(|e| e.to_string());
    Ok((read(&complex)?, read(&report)?, bounds))
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let first = pipeline("1", dir.path())?;
    let again = pipeline("1", dir.path())?;
    let wide = pipeline("8", dir.path())?;
    check(first == again, || "two single-thread runs differ".into())?;
    check(first == wide, || "1 and 8 threads differ".into())?;
    let bounds = String::from_utf8_lossy(&first.2).trim().to_owned();
    Ok(format!("complex {} B, report {} B identical across runs and threads; {bounds}", first.0.len(), first.1.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("weight formulas", criterion_1),
        ("Cayley-Menger volumes", criterion_2),
        ("Forman graph curvature", criterion_3),
        ("Forman cell curvature", criterion_4),
        ("hyperedge curvature", criterion_5),
        ("Ollivier transport", criterion_6),
        ("moment-curve embedding", criterion_7),
        ("pipeline determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match std::panic::catch_unwind(run) {
            Ok(Ok(detail)) => println!("criterion {} ({name}): PASS: {detail}", i + 1),
            Ok(Err(why)) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL: {why}", i + 1);
            }
            Err(_) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL: panicked", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
