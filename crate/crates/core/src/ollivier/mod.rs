//! Ollivier–Ricci curvature on the dual graph of a complex.
//!
//! Every `k`-cell becomes a dual node carrying the cell's weight; two nodes are
//! joined when their cells share a `(k-1)`-face. For a dual edge `(a, b)`
//!
//! ```text
//! kappa(a, b) = 1 - W1(mu_a, mu_b) / d(a, b)
//! ```
//!
//! where `d` is the shortest-path metric over dual edge weights and `mu_n`
//! keeps mass `alpha` at `n` and spreads the rest over its neighbors in
//! proportion to their node weights.

mod transport;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use transport::{wasserstein_w1, TransportPlan};

use crate::complex::{CellComplex, CellId};
use crate::embedding::{barycenters, Embedding};
use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::scalar::Scalar;

/// How dual edges are weighted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DualEdgeWeightRule {
    #[default]
    Unit,
    /// Weight of the shared `(k-1)`-face.
    SharedFace,
    /// Euclidean distance between cell barycenters in an embedding.
    BarycenterDistance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualEdge<T> {
    pub a: usize,
    pub b: usize,
    /// Lowest-id `(k-1)`-face shared by the two cells.
    pub shared_face: CellId,
    pub weight: T,
}

#[derive(Debug, Clone)]
pub struct DualGraph<T> {
    k: usize,
    rule: DualEdgeWeightRule,
    cells: Vec<CellId>,
    labels: Vec<String>,
    node_weights: Vec<T>,
    edges: Vec<DualEdge<T>>,
    neighbors: Vec<Vec<usize>>,
    metric: Metric<T>,
}

impl<T: Scalar> DualGraph<T> {
    /// Assemble a dual graph from explicit nodes and edges. Edges are stored
    /// with `a < b`, deduplicated and sorted.
    pub fn from_parts(
        k: usize,
        rule: DualEdgeWeightRule,
        cells: Vec<CellId>,
        labels: Vec<String>,
        node_weights: Vec<T>,
        edges: Vec<DualEdge<T>>,
    ) -> Result<Self> {
        let n = cells.len();
        if labels.len() != n || node_weights.len() != n {
            return Err(Error::Format("dual node arrays differ in length".into()));
        }
        for &w in &node_weights {
            if !(w > T::zero()) || !w.is_finite() {
                return Err(Error::NonpositiveWeight(w.to_f64_lossy()));
            }
        }
        let mut unique: BTreeMap<(usize, usize), DualEdge<T>> = BTreeMap::new();
        for mut e in edges {
            if e.a >= n || e.b >= n || e.a == e.b {
                return Err(Error::Format(format!("dual edge ({}, {}) is out of range", e.a, e.b)));
            }
            if !(e.weight > T::zero()) || !e.weight.is_finite() {
                return Err(Error::NonpositiveWeight(e.weight.to_f64_lossy()));
            }
            if e.a > e.b {
                std::mem::swap(&mut e.a, &mut e.b);
            }
            unique.entry((e.a, e.b)).or_insert(e);
        }
        let edges: Vec<DualEdge<T>> = unique.into_values().collect();
        let mut neighbors = vec![Vec::new(); n];
        for e in &edges {
            neighbors[e.a].push(e.b);
            neighbors[e.b].push(e.a);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        let metric = Metric::shortest_paths(n, edges.iter().map(|e| (e.a, e.b, e.weight)));
        Ok(DualGraph { k, rule, cells, labels, node_weights, edges, neighbors, metric })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rule(&self) -> DualEdgeWeightRule {
        self.rule
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Primal cell behind each dual node.
    pub fn cells(&self) -> &[CellId] {
        &self.cells
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_weights(&self) -> &[T] {
        &self.node_weights
    }

    pub fn edges(&self) -> &[DualEdge<T>] {
        &self.edges
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[node]
    }

    pub fn metric(&self) -> &Metric<T> {
        &self.metric
    }

    /// Index of the edge joining `a` and `b`, if any.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search_by(|e| (e.a, e.b).cmp(&key)).ok()
    }

    /// Node with every weight multiplied by `factor`; the metric is unchanged.
    pub fn with_scaled_node_weights(&self, factor: T) -> Result<Self> {
        Self::from_parts(
            self.k,
            self.rule,
            self.cells.clone(),
            self.labels.clone(),
            self.node_weights.iter().map(|&w| w * factor).collect(),
            self.edges.clone(),
        )
    }
}

/// Dual graph of the `k`-cells of a weighted complex.
pub fn dualize<T: Scalar>(
    complex: &CellComplex<T>,
    k: usize,
    rule: DualEdgeWeightRule,
    embedding: Option<&Embedding>,
) -> Result<DualGraph<T>> {
    if k == 0 {
        return Err(Error::InvalidDualDimension(k));
    }
    let cells: Vec<CellId> = complex.cells_of_dim(k).collect();
    if cells.is_empty() {
        return Err(Error::NoCellsAtDimension(k));
    }
    let centers = match (rule, embedding) {
        (DualEdgeWeightRule::BarycenterDistance, None) => return Err(Error::MissingEmbedding),
        (DualEdgeWeightRule::BarycenterDistance, Some(emb)) => Some(barycenters(complex, emb)?),
        _ => None,
    };

    let mut node_weights = Vec::with_capacity(cells.len());
    for &c in &cells {
        let w = complex.weight(c);
        if !(w > T::zero()) || !w.is_finite() {
            return Err(Error::UnweightedComplex(complex.label(c)));
        }
        node_weights.push(w);
    }
    let position: BTreeMap<CellId, usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();

    // Faces are visited in id order, so the first face recorded for a pair is the lowest.
    let mut shared: BTreeMap<(usize, usize), CellId> = BTreeMap::new();
    for face in complex.cells_of_dim(k - 1) {
        let cofaces: Vec<usize> = complex.children(face).iter().filter_map(|c| position.get(c).copied()).collect();
        for (x, &a) in cofaces.iter().enumerate() {
            for &b in &cofaces[x + 1..] {
                shared.entry((a.min(b), a.max(b))).or_insert(face);
            }
        }
    }

    let mut edges = Vec::with_capacity(shared.len());
    for ((a, b), face) in shared {
        let weight = match rule {
            DualEdgeWeightRule::Unit => T::one(),
            DualEdgeWeightRule::SharedFace => complex.weight(face),
            DualEdgeWeightRule::BarycenterDistance => {
                let centers = centers.as_ref().expect("barycenters computed above");
                let (p, q) = (&centers[cells[a].0], &centers[cells[b].0]);
                let d: f64 = p.iter().zip(q).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
                T::lit(d)
            }
        };
        edges.push(DualEdge { a, b, shared_face: face, weight });
    }

    let labels = cells.iter().map(|&c| complex.label(c)).collect();
    DualGraph::from_parts(k, rule, cells, labels, node_weights, edges)
}

/// Finitely supported probability measure over dual nodes, sorted by node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityMeasure<T> {
    support: Vec<(usize, T)>,
}

impl<T: Scalar> ProbabilityMeasure<T> {
    /// Masses must be non-negative and sum to one within `1e-12` (relative to
    /// the scalar's precision for `f32`). Zero masses and repeated nodes are folded.
    pub fn new(masses: Vec<(usize, T)>) -> Result<Self> {
        let mut folded: BTreeMap<usize, T> = BTreeMap::new();
        for (node, m) in masses {
            if !(m >= T::zero()) || !m.is_finite() {
                return Err(Error::InvalidMeasure(m.to_f64_lossy()));
            }
            let slot = folded.entry(node).or_insert(T::zero());
            *slot = *slot + m;
        }
        let total: T = folded.values().copied().sum();
        let tol = T::lit(1e-12).max(T::mass_epsilon());
        if (total - T::one()).abs() > tol {
            return Err(Error::InvalidMeasure(total.to_f64_lossy()));
        }
        Ok(ProbabilityMeasure { support: folded.into_iter().filter(|&(_, m)| m > T::zero()).collect() })
    }

    pub fn dirac(node: usize) -> Self {
        ProbabilityMeasure { support: vec![(node, T::one())] }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, T)> + '_ {
        self.support.iter().copied()
    }

    pub fn mass(&self, node: usize) -> T {
        match self.support.binary_search_by_key(&node, |p| p.0) {
            Ok(i) => self.support[i].1,
            Err(_) => T::zero(),
        }
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }
}

/// Random-walk measure at `node`: `alpha` stays put, `1 - alpha` is split
/// over the neighbors in proportion to their node weights.
pub fn neighbor_measure<T: Scalar>(graph: &DualGraph<T>, node: usize, alpha: T) -> Result<ProbabilityMeasure<T>> {
    if !(alpha >= T::zero() && alpha < T::one()) {
        return Err(Error::InvalidIdleness(alpha.to_f64_lossy()));
    }
    if node >= graph.len() {
        return Err(Error::UnknownCell(format!("dual node {node}")));
    }
    let around = graph.neighbors(node);
    if around.is_empty() {
        if alpha == T::zero() {
            return Err(Error::IsolatedNode(graph.labels[node].clone()));
        }
        return Ok(ProbabilityMeasure::dirac(node));
    }
    let total: T = around.iter().map(|&m| graph.node_weights[m]).sum();
    let spread = T::one() - alpha;
    let mut masses: Vec<(usize, T)> = around.iter().map(|&m| (m, spread * graph.node_weights[m] / total)).collect();
    if alpha > T::zero() {
        masses.push((node, alpha));
    }
    ProbabilityMeasure::new(masses)
}

/// Curvature of dual edge `edge` (an index into [`DualGraph::edges`]).
pub fn ollivier_curvature<T: Scalar>(graph: &DualGraph<T>, edge: usize, alpha: T) -> Result<T> {
    let e = graph.edges.get(edge).ok_or(Error::UnknownDualEdge(edge))?;
    let mu_a = neighbor_measure(graph, e.a, alpha)?;
    let mu_b = neighbor_measure(graph, e.b, alpha)?;
    let (w1, _) = wasserstein_w1(&mu_a, &mu_b, &graph.metric)?;
    Ok(T::one() - w1 / graph.metric.get(e.a, e.b))
}

/// Curvature of every dual edge, in edge order.
pub fn ollivier_curvatures<T: Scalar>(graph: &DualGraph<T>, alpha: T) -> Result<Vec<T>> {
    (0..graph.edges.len())
        .into_par_iter()
        .map(|e| ollivier_curvature(graph, e, alpha))
        .collect()
}
