//! Independent oracles and random instance generators shared by the
//! integration tests and the acceptance suite.
#![allow(dead_code)]

use std::collections::BTreeSet;

use hyperricci::complex::{Cell, SourceRole};
use hyperricci::{CellComplex64, NodeId};
use rand::Rng;

/// Simplicial complex generated by `tops` (downward closed), every cell
/// weighted by `weight(vertices)`. Vertices are named `v00`, `v01`, ...
pub fn closure(n: usize, tops: &[Vec<usize>], weight: impl Fn(&[usize]) -> f64) -> CellComplex64 {
    closure_named(&(0..n).map(|i| format!("v{i:02}")).collect::<Vec<_>>(), tops, weight)
}

pub fn closure_named(names: &[String], tops: &[Vec<usize>], weight: impl Fn(&[usize]) -> f64) -> CellComplex64 {
    let mut keys = BTreeSet::new();
    for top in tops {
        for mask in 1u32..(1 << top.len()) {
            let mut face: Vec<usize> = (0..top.len()).filter(|i| mask & (1 << i) != 0).map(|i| top[i]).collect();
            face.sort_unstable();
            keys.insert(face);
        }
    }
    for v in 0..names.len() {
        keys.insert(vec![v]);
    }
    let cells = keys
        .into_iter()
        .map(|vs| {
            let w = weight(&vs);
            Cell::simplex(vs, SourceRole::HyperedgeBody).with_weight(w)
        })
        .collect();
    let ids = names.iter().map(|s| NodeId::from(s.as_str())).collect();
    CellComplex64::from_parts(ids, vec!["node".into(); names.len()], cells, Vec::new()).expect("closed complex")
}

/// Random top simplices on at most `max_vertices` vertices with dimension at most `max_dim`.
pub fn random_tops(rng: &mut impl Rng, max_vertices: usize, max_dim: usize) -> (usize, Vec<Vec<usize>>) {
    let n = rng.gen_range(2..=max_vertices);
    let count = rng.gen_range(1..=2 * n);
    let mut tops = Vec::with_capacity(count);
    for _ in 0..count {
        let size = rng.gen_range(2..=(max_dim + 1).min(n));
        let mut vs: Vec<usize> = rand::seq::index::sample(rng, n, size).into_vec();
        vs.sort_unstable();
        tops.push(vs);
    }
    (n, tops)
}

/// Random simple graph on `n` vertices with edge probability `p`.
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// Minimum-cost transport by enumerating every vertex of the transportation
/// polytope. Vertices correspond to spanning trees of the complete bipartite
/// supply/demand graph carrying a non-negative flow; the flow on a tree is
/// forced and found by peeling leaves.
pub fn transport_oracle(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> f64 {
    let (m, n) = (supply.len(), demand.len());
    let cells: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let need = m + n - 1;
    let mut best = f64::INFINITY;
    let mut chosen = Vec::with_capacity(need);
    let parent: Vec<usize> = (0..m + n).collect();
    search(&cells, m, 0, need, &mut chosen, parent, &mut |tree| {
        if let Some(c) = tree_flow_cost(tree, supply, demand, cost) {
            best = best.min(c);
        }
    });
    best
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

fn search(
    cells: &[(usize, usize)],
    m: usize,
    from: usize,
    need: usize,
    chosen: &mut Vec<(usize, usize)>,
    parent: Vec<usize>,
    visit: &mut impl FnMut(&[(usize, usize)]),
) {
    if chosen.len() == need {
        visit(chosen);
        return;
    }
    for k in from..cells.len() {
        if cells.len() - k < need - chosen.len() {
            break;
        }
        let (i, j) = cells[k];
        let mut p = parent.clone();
        let (a, b) = (find(&mut p, i), find(&mut p, m + j));
        if a == b {
            continue;
        }
        p[a] = b;
        chosen.push(cells[k]);
        search(cells, m, k + 1, need, chosen, p, visit);
        chosen.pop();
    }
}

fn tree_flow_cost(tree: &[(usize, usize)], supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> Option<f64> {
    let (m, n) = (supply.len(), demand.len());
    let mut left_s = supply.to_vec();
    let mut left_d = demand.to_vec();
    let mut open: Vec<bool> = vec![true; tree.len()];
    let mut total = 0.0;
    for _ in 0..tree.len() {
        let degree = |node: usize, open: &[bool]| {
            tree.iter()
                .enumerate()
                .filter(|(k, &(i, j))| open[*k] && if node < m { i == node } else { j == node - m })
                .count()
        };
        let leaf = (0..m + n).find(|&v| degree(v, &open) == 1)?;
        let k = (0..tree.len())
            .find(|&k| open[k] && if leaf < m { tree[k].0 == leaf } else { tree[k].1 == leaf - m })?;
        let (i, j) = tree[k];
        let f = if leaf < m { left_s[i] } else { left_d[j] };
        if f < -1e-12 {
            return None;
        }
        left_s[i] -= f;
        left_d[j] -= f;
        total += f * cost[i][j];
        open[k] = false;
    }
    Some(total)
}

const P: i128 = 1_000_000_007;

/// Determinant modulo `1e9 + 7` by Gaussian elimination with Fermat inverses.
pub fn det_mod_p(mut rows: Vec<Vec<i128>>) -> i128 {
    let n = rows.len();
    for r in rows.iter_mut() {
        for x in r.iter_mut() {
            *x = x.rem_euclid(P);
        }
    }
    let inv = |mut a: i128| {
        let (mut e, mut acc) = (P - 2, 1i128);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * a % P;
            }
            a = a * a % P;
            e >>= 1;
        }
        acc
    };
    let mut det = 1i128;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| rows[r][c] != 0) else { return 0 };
        if p != c {
            rows.swap(p, c);
            det = (P - det) % P;
        }
        det = det * rows[c][c] % P;
        let iv = inv(rows[c][c]);
        for r in c + 1..n {
            let f = rows[r][c] * iv % P;
            for k in c..n {
                rows[r][k] = (rows[r][k] - f * rows[c][k]).rem_euclid(P);
            }
        }
    }
    det
}

/// Homogeneous moment-curve rows `(1, t, ..., t^d)` for parameters `ts`.
pub fn moment_rows(ts: &[i128], d: usize) -> Vec<Vec<i128>> {
    ts.iter()
        .map(|&t| {
            let mut row = vec![1i128];
            for k in 0..d {
                row.push(row[k] * t % P);
            }
            row
        })
        .collect()
}

/// The complex generated by `tops` with old vertex `i` moved to position
/// `perm[i]`; `weight` is evaluated on old vertex sets so each cell keeps its
/// weight. Returns the complex and the map from new to old vertex index.
pub fn relabeled(
    n: usize,
    tops: &[Vec<usize>],
    weight: impl Fn(&[usize]) -> f64,
    perm: &[usize],
) -> (CellComplex64, Vec<usize>) {
    let mut back = vec![0; n];
    for (old, &new) in perm.iter().enumerate() {
        back[new] = old;
    }
    let moved: Vec<Vec<usize>> = tops.iter().map(|t| t.iter().map(|&v| perm[v]).collect()).collect();
    let k = closure(n, &moved, |vs| {
        let mut old: Vec<usize> = vs.iter().map(|&v| back[v]).collect();
        old.sort_unstable();
        weight(&old)
    });
    (k, back)
}

/// Largest curvature difference between corresponding cells of a random
/// weighted complex and a randomly relabeled copy.
pub fn relabeling_gap(rng: &mut impl Rng, max_vertices: usize, max_dim: usize) -> f64 {
    use std::collections::HashMap;
    let (n, tops) = random_tops(rng, max_vertices, max_dim);
    let shape = closure(n, &tops, |_| 1.0);
    let weights: HashMap<Vec<usize>, f64> =
        shape.cells().iter().map(|c| (c.vertices.clone(), rng.gen_range(0.5..3.0))).collect();
    let base = closure(n, &tops, |vs| weights[vs]);
    let perm = rand::seq::index::sample(rng, n, n).into_vec();
    let (moved, back) = relabeled(n, &tops, |vs| weights[vs], &perm);

    let moved_values: HashMap<Vec<usize>, f64> = hyperricci::forman::cell_curvatures(&moved)
        .unwrap()
        .into_iter()
        .map(|(id, v)| {
            let mut old: Vec<usize> = moved.cells()[id.0].vertices.iter().map(|&x| back[x]).collect();
            old.sort_unstable();
            (old, v)
        })
        .collect();
    hyperricci::forman::cell_curvatures(&base)
        .unwrap()
        .into_iter()
        .map(|(id, v)| (v - moved_values[&base.cells()[id.0].vertices]).abs() / (1.0 + v.abs()))
        .fold(0.0, f64::max)
}
