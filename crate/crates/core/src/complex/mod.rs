//! Weighted, directed polyhedral complexes built from hypergraphs.
//!
//! Cells are identified by their vertex set. A cell of dimension `p` is a
//! `p`-simplex on `p + 1` vertices, except for polygonal 2-cells which carry an
//! explicit boundary cycle. Incidence follows the genealogy convention used by
//! the curvature code: the `(p-1)`-faces of a cell are its *parents*, the
//! `(p+1)`-cells containing it are its *children*.

mod build;
mod orientation;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::NodeId;
use crate::scalar::Scalar;

pub use build::{FillPolicy, MAX_HYPEREDGE_SIZE};
pub use orientation::{classify_orientation, OrientationClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CellId(pub usize);

/// Where a cell came from when the complex was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceRole {
    HyperedgeBody,
    SideFace,
    Edge,
    Vertex,
    FilledFace,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Simplex,
    /// 2-cell with the given cyclic boundary order (vertex indices).
    Polygon(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell<T> {
    pub dim: usize,
    /// Sorted vertex indices into [`CellComplex::vertex_ids`].
    pub vertices: Vec<usize>,
    pub shape: Shape,
    pub weight: T,
    pub orientation: OrientationClass<usize>,
    /// Direction `(from, to)` of a 1-cell, `None` if undirected.
    pub arrow: Option<(usize, usize)>,
    pub role: SourceRole,
}

impl<T: Scalar> Cell<T> {
    pub fn simplex(mut vertices: Vec<usize>, role: SourceRole) -> Self {
        vertices.sort_unstable();
        Cell {
            dim: vertices.len().saturating_sub(1),
            vertices,
            shape: Shape::Simplex,
            weight: T::one(),
            orientation: OrientationClass::Undirected,
            arrow: None,
            role,
        }
    }

    pub fn polygon(boundary: Vec<usize>, role: SourceRole) -> Self {
        let mut vertices = boundary.clone();
        vertices.sort_unstable();
        Cell {
            dim: 2,
            vertices,
            shape: Shape::Polygon(boundary),
            weight: T::one(),
            orientation: OrientationClass::Undirected,
            arrow: None,
            role,
        }
    }

    pub fn with_weight(mut self, weight: T) -> Self {
        self.weight = weight;
        self
    }

    pub fn is_simplex(&self) -> bool {
        matches!(self.shape, Shape::Simplex)
    }

    /// Boundary cycle of a 2-cell, in traversal order.
    pub fn boundary_cycle(&self) -> Option<Vec<usize>> {
        match (&self.shape, self.dim) {
            (Shape::Polygon(b), _) => Some(b.clone()),
            (Shape::Simplex, 2) => Some(self.vertices.clone()),
            _ => None,
        }
    }
}

/// A hyperedge of the source hypergraph, in vertex indices of the complex.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperedgeCells<T> {
    pub id: String,
    pub tail: Vec<usize>,
    pub head: Vec<usize>,
    pub weight: T,
}

#[derive(Debug, Clone)]
pub struct CellComplex<T> {
    vertex_ids: Vec<NodeId>,
    vertex_types: Vec<String>,
    cells: Vec<Cell<T>>,
    index: HashMap<(usize, Vec<usize>), CellId>,
    parents: Vec<Vec<CellId>>,
    children: Vec<Vec<CellId>>,
    hyperedges: Vec<HyperedgeCells<T>>,
}

impl<T: Scalar> CellComplex<T> {
    /// Assembles a complex and derives its incidence.
    ///
    /// Cells are reordered by `(dim, vertices)`. Fails with
    /// [`Error::MissingCell`] when a facet or boundary edge of some cell is
    /// absent, and with [`Error::UnknownCell`] on duplicate or malformed cells.
    pub fn from_parts(
        vertex_ids: Vec<NodeId>,
        vertex_types: Vec<String>,
        mut cells: Vec<Cell<T>>,
        hyperedges: Vec<HyperedgeCells<T>>,
    ) -> Result<Self> {
        let n = vertex_ids.len();
        for c in &cells {
            let malformed = c.vertices.iter().any(|&v| v >= n)
                || c.vertices.windows(2).any(|w| w[0] >= w[1])
                || match &c.shape {
                    Shape::Simplex => c.dim + 1 != c.vertices.len(),
                    Shape::Polygon(b) => c.dim != 2 || b.len() < 3 || b.len() != c.vertices.len(),
                };
            if malformed {
                return Err(Error::UnknownCell(format!("malformed cell {:?}", c.vertices)));
            }
        }
        cells.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));

        let mut index = HashMap::with_capacity(cells.len());
        for (i, c) in cells.iter().enumerate() {
            if index.insert((c.dim, c.vertices.clone()), CellId(i)).is_some() {
                return Err(Error::UnknownCell(format!("duplicate cell {:?}", c.vertices)));
            }
        }
        for v in 0..n {
            if !index.contains_key(&(0, vec![v])) {
                return Err(Error::MissingCell(format!("[{}]", vertex_ids[v])));
            }
        }

        let mut parents = vec![Vec::new(); cells.len()];
        let mut children = vec![Vec::new(); cells.len()];
        for (i, c) in cells.iter().enumerate() {
            if c.dim == 0 {
                continue;
            }
            let facets: Vec<Vec<usize>> = match &c.shape {
                Shape::Simplex => (0..c.vertices.len())
                    .map(|skip| {
                        c.vertices
                            .iter()
                            .enumerate()
                            .filter(|&(j, _)| j != skip)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect(),
                Shape::Polygon(b) => (0..b.len())
                    .map(|j| {
                        let (x, y) = (b[j], b[(j + 1) % b.len()]);
                        vec![x.min(y), x.max(y)]
                    })
                    .collect(),
            };
            for f in facets {
                let id = *index.get(&(c.dim - 1, f.clone())).ok_or_else(|| {
                    Error::MissingCell(label_of(&vertex_ids, &Shape::Simplex, &f))
                })?;
                parents[i].push(id);
                children[id.0].push(CellId(i));
            }
            parents[i].sort_unstable();
        }
        for c in &mut children {
            c.sort_unstable();
        }

        Ok(CellComplex {
            vertex_ids,
            vertex_types,
            cells,
            index,
            parents,
            children,
            hyperedges,
        })
    }

    pub fn vertex_ids(&self) -> &[NodeId] {
        &self.vertex_ids
    }

    pub fn vertex_types(&self) -> &[String] {
        &self.vertex_types
    }

    pub fn vertex_index(&self, id: &NodeId) -> Option<usize> {
        self.vertex_ids.iter().position(|v| v == id)
    }

    pub fn cells(&self) -> &[Cell<T>] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, id: CellId) -> Result<&Cell<T>> {
        self.cells
            .get(id.0)
            .ok_or_else(|| Error::UnknownCell(format!("#{}", id.0)))
    }

    pub fn ids(&self) -> impl Iterator<Item = CellId> + '_ {
        (0..self.cells.len()).map(CellId)
    }

    pub fn hyperedges(&self) -> &[HyperedgeCells<T>] {
        &self.hyperedges
    }

    pub fn hyperedge(&self, id: &str) -> Result<&HyperedgeCells<T>> {
        self.hyperedges
            .iter()
            .find(|h| h.id == id)
            .ok_or_else(|| Error::UnknownHyperedge(id.to_owned()))
    }

    /// Highest cell dimension (0 for an empty complex).
    pub fn dimension(&self) -> usize {
        self.cells.iter().map(|c| c.dim).max().unwrap_or(0)
    }

    pub fn cells_of_dim(&self, dim: usize) -> impl Iterator<Item = CellId> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(move |(_, c)| c.dim == dim)
            .map(|(i, _)| CellId(i))
    }

    /// The simplex spanned by `vertices` (any order), if present.
    pub fn simplex(&self, vertices: &[usize]) -> Option<CellId> {
        let mut key = vertices.to_vec();
        key.sort_unstable();
        key.dedup();
        if key.is_empty() {
            return None;
        }
        let id = *self.index.get(&(key.len() - 1, key))?;
        self.cells[id.0].is_simplex().then_some(id)
    }

    pub fn simplex_by_ids(&self, ids: &[&str]) -> Option<CellId> {
        let vs: Option<Vec<usize>> = ids
            .iter()
            .map(|s| self.vertex_index(&NodeId::from(*s)))
            .collect();
        self.simplex(&vs?)
    }

    pub fn vertex_cell(&self, v: usize) -> CellId {
        self.index[&(0, vec![v])]
    }

    pub fn edge(&self, u: usize, v: usize) -> Option<CellId> {
        self.simplex(&[u, v])
    }

    /// `(p-1)`-faces of the cell.
    pub fn parents(&self, id: CellId) -> &[CellId] {
        &self.parents[id.0]
    }

    /// `(p+1)`-cells having this cell as a face.
    pub fn children(&self, id: CellId) -> &[CellId] {
        &self.children[id.0]
    }

    /// Cells of the same dimension sharing a common parent or a common child, but not both.
    pub fn parallel_cells(&self, id: CellId) -> Result<Vec<CellId>> {
        self.cell(id)?;
        Ok(self.parallel_capped(id, usize::MAX))
    }

    /// Parallel cells computed as if every cell above `max_dim` were absent.
    pub(crate) fn parallel_capped(&self, id: CellId, max_dim: usize) -> Vec<CellId> {
        let dim = self.cells[id.0].dim;
        let own_children: Vec<CellId> = if dim < max_dim {
            self.children[id.0].clone()
        } else {
            Vec::new()
        };
        let via_parent: BTreeSet<CellId> = self.parents[id.0]
            .iter()
            .flat_map(|&p| self.children[p.0].iter().copied())
            .filter(|&c| c != id)
            .collect();
        let via_child: BTreeSet<CellId> = own_children
            .iter()
            .flat_map(|&c| self.parents[c.0].iter().copied())
            .filter(|&c| c != id)
            .collect();
        via_parent.symmetric_difference(&via_child).copied().collect()
    }

    /// Human-readable cell key: `[A,B,C]` for simplices, `<A,B,C,D>` for polygons.
    pub fn label(&self, id: CellId) -> String {
        let c = &self.cells[id.0];
        label_of(&self.vertex_ids, &c.shape, &c.vertices)
    }

    pub fn weight(&self, id: CellId) -> T {
        self.cells[id.0].weight
    }

    /// Replaces every cell weight; `weights` is indexed by [`CellId`].
    pub fn with_weights(mut self, weights: Vec<T>) -> Self {
        assert_eq!(weights.len(), self.cells.len(), "one weight per cell");
        for (c, w) in self.cells.iter_mut().zip(weights) {
            c.weight = w;
        }
        self
    }

    pub fn set_weight(&mut self, id: CellId, weight: T) {
        self.cells[id.0].weight = weight;
    }

    /// Faces implied by incidence that are missing. Empty for every complex
    /// returned by [`CellComplex::from_parts`].
    pub fn closure_violations(&self) -> Vec<String> {
        let mut missing = Vec::new();
        for c in &self.cells {
            if c.is_simplex() && c.dim > 0 {
                for skip in 0..c.vertices.len() {
                    let f: Vec<usize> = c
                        .vertices
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    if self.simplex(&f).is_none() {
                        missing.push(label_of(&self.vertex_ids, &Shape::Simplex, &f));
                    }
                }
            }
        }
        missing
    }

    /// The same complex restricted to the cells accepted by `keep`; faces of
    /// kept cells must also be kept.
    pub(crate) fn restrict(&self, keep: &[bool]) -> Result<Self> {
        let cells = self
            .cells
            .iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|(c, _)| c.clone())
            .collect();
        CellComplex::from_parts(
            self.vertex_ids.clone(),
            self.vertex_types.clone(),
            cells,
            self.hyperedges.clone(),
        )
    }
}

fn label_of(ids: &[NodeId], shape: &Shape, vertices: &[usize]) -> String {
    let join = |vs: &[usize]| {
        vs.iter()
            .map(|&v| ids[v].as_str())
            .collect::<Vec<_>>()
            .join(",")
    };
    match shape {
        Shape::Simplex => format!("[{}]", join(vertices)),
        Shape::Polygon(b) => format!("<{}>", join(b)),
    }
}
