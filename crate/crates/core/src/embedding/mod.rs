//! Linear embeddings of complexes on the moment curve, with exact verification.
//!
//! Vertex `i` (in vertex order of the complex) is placed at
//! `(t, t^2, ..., t^(2n+1))` with `t = i + 1`, where `n` is the dimension of
//! the complex. Any `2n + 2` such points are affinely independent, so two
//! cells never meet outside their common face.

mod exact;

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::complex::{CellComplex, CellId, Shape};
use crate::error::{Error, Result};
use crate::hypergraph::NodeId;
use crate::scalar::Scalar;
use crate::weights::fan_triangles;

/// Exact vertex coordinates in `R^dimension`.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    dimension: usize,
    ids: Vec<NodeId>,
    points: Vec<Vec<BigRational>>,
    index: HashMap<NodeId, usize>,
    parameters: Option<Vec<u64>>,
}

impl Embedding {
    /// Arbitrary exact coordinates; every point must have `dimension` entries.
    pub fn from_points(dimension: usize, points: Vec<(NodeId, Vec<BigRational>)>) -> Result<Self> {
        let mut ids = Vec::with_capacity(points.len());
        let mut coords = Vec::with_capacity(points.len());
        let mut index = HashMap::with_capacity(points.len());
        for (id, p) in points {
            if p.len() != dimension {
                return Err(Error::CoordinateDimension(id.to_string(), p.len(), dimension));
            }
            if index.insert(id.clone(), ids.len()).is_some() {
                return Err(Error::Format(format!("vertex `{id}` has two positions")));
            }
            ids.push(id);
            coords.push(p);
        }
        Ok(Embedding { dimension, ids, points: coords, index, parameters: None })
    }

    /// Integer coordinates, convenient for hand-built embeddings.
    pub fn from_integer_points(dimension: usize, points: Vec<(NodeId, Vec<i64>)>) -> Result<Self> {
        Self::from_points(
            dimension,
            points
                .into_iter()
                .map(|(id, p)| (id, p.into_iter().map(|x| BigRational::from_integer(x.into())).collect()))
                .collect(),
        )
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn point(&self, id: &NodeId) -> Option<&[BigRational]> {
        self.index.get(id).map(|&i| self.points[i].as_slice())
    }

    pub fn points(&self) -> impl Iterator<Item = (&NodeId, &[BigRational])> {
        self.ids.iter().zip(self.points.iter().map(Vec::as_slice))
    }

    /// Moment-curve parameters `t`, when the embedding came from [`embed`].
    pub fn parameters(&self) -> Option<&[u64]> {
        self.parameters.as_deref()
    }

    /// Coordinates rounded to `f64`.
    pub fn approximate(&self, id: &NodeId) -> Option<Vec<f64>> {
        self.point(id).map(|p| p.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
    }

    /// Moment-curve points with `t` rescaled into `(0, 1]`, for plotting only.
    pub fn rescaled(&self) -> Option<Vec<Vec<f64>>> {
        let ts = self.parameters.as_ref()?;
        let top = ts.iter().copied().max().unwrap_or(1) as f64;
        Some(
            ts.iter()
                .map(|&t| {
                    let s = t as f64 / top;
                    (1..=self.dimension as i32).map(|k| s.powi(k)).collect()
                })
                .collect(),
        )
    }
}

/// Moment-curve embedding of `complex` in `R^(2n+1)`.
///
/// Polygonal cells are realized by their fan triangulation when `triangulate`
/// is set and rejected otherwise.
pub fn embed<T: Scalar>(complex: &CellComplex<T>, triangulate: bool) -> Result<Embedding> {
    if !triangulate {
        if let Some(c) = complex.ids().find(|&c| !complex.cells()[c.0].is_simplex()) {
            return Err(Error::NonSimplicialCell(complex.label(c)));
        }
    }
    let dimension = 2 * complex.dimension() + 1;
    let mut points = Vec::with_capacity(complex.vertex_ids().len());
    let mut parameters = Vec::with_capacity(points.capacity());
    for (i, id) in complex.vertex_ids().iter().enumerate() {
        let t = i as u64 + 1;
        let base = BigInt::from(t);
        let mut power = BigInt::one();
        let coords = (0..dimension)
            .map(|_| {
                power *= &base;
                BigRational::from_integer(power.clone())
            })
            .collect();
        points.push((id.clone(), coords));
        parameters.push(t);
    }
    let mut emb = Embedding::from_points(dimension, points)?;
    emb.parameters = Some(parameters);
    Ok(emb)
}

/// Geometric simplices realizing the cells, each tagged with its owning cell.
fn geometric_simplices<T: Scalar>(complex: &CellComplex<T>) -> Vec<(CellId, Vec<usize>)> {
    let mut out = Vec::new();
    for id in complex.ids() {
        let cell = &complex.cells()[id.0];
        match &cell.shape {
            Shape::Simplex => out.push((id, cell.vertices.clone())),
            Shape::Polygon(boundary) => {
                let mut pieces = BTreeSet::new();
                for tri in fan_triangles(complex, boundary) {
                    let mut t = tri.to_vec();
                    t.sort_unstable();
                    for mask in 1u8..8 {
                        let face: Vec<usize> = (0..3).filter(|k| mask & (1 << k) != 0).map(|k| t[k]).collect();
                        pieces.insert(face);
                    }
                }
                // Boundary edges and vertices are cells of their own.
                pieces.retain(|f| f.len() == 3 || (f.len() == 2 && complex.edge(f[0], f[1]).is_none()));
                out.extend(pieces.into_iter().map(|f| (id, f)));
            }
        }
    }
    out
}

/// Cell pairs whose realizations meet outside their common face, plus
/// `(c, c)` for every cell whose realization is degenerate. Empty means the
/// embedding is a geometric realization of the complex.
///
/// Relies on the fact that a simplexwise-injective linear map is an embedding
/// exactly when vertex-disjoint faces have disjoint images; such a pair can
/// only exist when the union of the two vertex sets is affinely dependent.
pub fn verify_embedding<T: Scalar>(complex: &CellComplex<T>, emb: &Embedding) -> Result<Vec<(CellId, CellId)>> {
    let mut coords = Vec::with_capacity(complex.vertex_ids().len());
    for id in complex.vertex_ids() {
        let p = emb.point(id).ok_or_else(|| Error::UnmappedVertex(id.to_string()))?;
        coords.push(p);
    }
    let fast: Option<Vec<Vec<u64>>> = coords.iter().map(|p| exact::residues(p)).collect();

    let pieces = geometric_simplices(complex);
    let independent = |vs: &[usize]| {
        let pts: Vec<&[BigRational]> = vs.iter().map(|&v| coords[v]).collect();
        let res: Option<Vec<&[u64]>> = fast.as_ref().map(|f| vs.iter().map(|&v| f[v].as_slice()).collect());
        exact::affinely_independent(&pts, res.as_deref())
    };

    let mut found: BTreeSet<(CellId, CellId)> = pieces
        .par_iter()
        .filter(|(_, vs)| !independent(vs))
        .map(|(c, _)| (*c, *c))
        .collect();

    let pairs: Vec<(usize, usize)> = (0..pieces.len())
        .flat_map(|i| (i + 1..pieces.len()).map(move |j| (i, j)))
        .collect();
    let crossing: BTreeSet<(CellId, CellId)> = pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            let ((ci, a), (cj, b)) = (&pieces[i], &pieces[j]);
            let union: Vec<usize> = a.iter().chain(b).copied().collect::<BTreeSet<_>>().into_iter().collect();
            if independent(&union) || !disjoint_faces_meet(a, b, &coords) {
                return None;
            }
            Some((*ci.min(cj), *ci.max(cj)))
        })
        .collect();
    found.extend(crossing);
    Ok(found.into_iter().collect())
}

/// Whether some vertex-disjoint faces of `a` and `b` have intersecting hulls.
/// Intersection is monotone in the vertex sets, so only the maximal splits of
/// the shared vertices need testing.
fn disjoint_faces_meet(a: &[usize], b: &[usize], coords: &[&[BigRational]]) -> bool {
    let shared: Vec<usize> = a.iter().filter(|v| b.contains(v)).copied().collect();
    let only_a: Vec<usize> = a.iter().filter(|v| !b.contains(v)).copied().collect();
    let only_b: Vec<usize> = b.iter().filter(|v| !a.contains(v)).copied().collect();
    for mask in 0u32..(1 << shared.len()) {
        let mut p = only_a.clone();
        let mut q = only_b.clone();
        for (k, &v) in shared.iter().enumerate() {
            if mask & (1 << k) != 0 {
                p.push(v);
            } else {
                q.push(v);
            }
        }
        if p.is_empty() || q.is_empty() {
            continue;
        }
        let pp: Vec<&[BigRational]> = p.iter().map(|&v| coords[v]).collect();
        let qq: Vec<&[BigRational]> = q.iter().map(|&v| coords[v]).collect();
        if exact::hulls_intersect(&pp, &qq) {
            return true;
        }
    }
    false
}

/// Barycenter of every cell (indexed by [`CellId`]), in `f64`.
pub fn barycenters<T: Scalar>(complex: &CellComplex<T>, emb: &Embedding) -> Result<Vec<Vec<f64>>> {
    let mut approx = Vec::with_capacity(complex.vertex_ids().len());
    for id in complex.vertex_ids() {
        approx.push(emb.approximate(id).ok_or_else(|| Error::UnmappedVertex(id.to_string()))?);
    }
    Ok(complex
        .cells()
        .iter()
        .map(|c| {
            let mut mean = vec![0.0; emb.dimension];
            for &v in &c.vertices {
                for (m, x) in mean.iter_mut().zip(&approx[v]) {
                    *m += x;
                }
            }
            let n = c.vertices.len() as f64;
            mean.iter_mut().for_each(|m| *m /= n);
            mean
        })
        .collect())
}
