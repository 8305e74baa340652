//! Forman–Ricci curvature.
//!
//! For a `p`-cell `α` with weight `ω(α)`:
//!
//! ```text
//! F(α) = ω(α) [ Σ_{β > α} ω(α)/ω(β) + Σ_{γ < α} ω(γ)/ω(α)
//!             - Σ_{α' ∥ α} | Σ_{β > α, α'} √(ω(α)ω(α'))/ω(β) - Σ_{γ < α, α'} ω(γ)/√(ω(α)ω(α')) | ]
//! ```
//!
//! where `β` ranges over children (`(p+1)`-cofaces), `γ` over parents
//! (`(p-1)`-faces) and `α'` over parallel cells.

use rayon::prelude::*;

use crate::complex::{CellComplex, CellId, HyperedgeCells};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Side};
use crate::scalar::Scalar;

fn checked_weight<T: Scalar>(complex: &CellComplex<T>, id: CellId) -> Result<T> {
    let w = complex.weight(id);
    if w > T::zero() && w.is_finite() {
        Ok(w)
    } else {
        Err(Error::UnweightedComplex(complex.label(id)))
    }
}

fn sorted_intersection(a: &[CellId], b: &[CellId]) -> Vec<CellId> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Forman curvature of `id`, ignoring every cell of dimension above `max_dim`.
fn forman_capped<T: Scalar>(complex: &CellComplex<T>, id: CellId, max_dim: usize) -> Result<T> {
    let cell = complex.cell(id)?;
    let w = checked_weight(complex, id)?;
    let children: &[CellId] = if cell.dim < max_dim {
        complex.children(id)
    } else {
        &[]
    };
    let parents = complex.parents(id);

    let mut positive = T::zero();
    for &b in children {
        positive = positive + w / checked_weight(complex, b)?;
    }
    for &g in parents {
        positive = positive + checked_weight(complex, g)? / w;
    }

    let mut negative = T::zero();
    for other in complex.parallel_capped(id, max_dim) {
        let wo = checked_weight(complex, other)?;
        let geo = (w * wo).sqrt();
        let other_children: &[CellId] = if cell.dim < max_dim {
            complex.children(other)
        } else {
            &[]
        };
        let mut shared_child = T::zero();
        for b in sorted_intersection(children, other_children) {
            shared_child = shared_child + geo / checked_weight(complex, b)?;
        }
        let mut shared_parent = T::zero();
        for g in sorted_intersection(parents, complex.parents(other)) {
            shared_parent = shared_parent + checked_weight(complex, g)? / geo;
        }
        negative = negative + (shared_child - shared_parent).abs();
    }
    Ok(w * (positive - negative))
}

pub fn forman_cell_curvature<T: Scalar>(complex: &CellComplex<T>, cell: CellId) -> Result<T> {
    forman_capped(complex, cell, usize::MAX)
}

/// Edge curvature on the 1-skeleton alone. With unit weights this is
/// `4 - deg(u) - deg(v)`.
pub fn forman_graph_curvature<T: Scalar>(complex: &CellComplex<T>, edge: CellId) -> Result<T> {
    if complex.cell(edge)?.dim != 1 {
        return Err(Error::UnknownCell(format!("{} is not an edge", complex.label(edge))));
    }
    forman_capped(complex, edge, 1)
}

/// Curvature of every cell, in cell order.
pub fn cell_curvatures<T: Scalar>(complex: &CellComplex<T>) -> Result<Vec<(CellId, T)>> {
    let ids: Vec<CellId> = complex.ids().collect();
    ids.into_par_iter()
        .map(|id| forman_cell_curvature(complex, id).map(|v| (id, v)))
        .collect()
}

/// Graph curvature of every edge, in cell order.
pub fn graph_curvatures<T: Scalar>(complex: &CellComplex<T>) -> Result<Vec<(CellId, T)>> {
    let ids: Vec<CellId> = complex.cells_of_dim(1).collect();
    ids.into_par_iter()
        .map(|id| forman_graph_curvature(complex, id).map(|v| (id, v)))
        .collect()
}

/// Directional curvature of a hyperedge over one of its sides.
///
/// With `F` the face spanned by the side, `S` the simplex spanned by the whole
/// hyperedge and, for each pair `u ~ v` of the side joined by an edge `e`,
/// `Δ` the cell spanned by `u`, `v` and the opposite side:
///
/// ```text
/// ω(F) ( ω(F)/ω(S) + Σ ω(e)/ω(F) - Σ √(ω(Δ)ω(F))/ω(S) + Σ ω(e)/√(ω(Δ)ω(F)) )
/// ```
pub fn directional_forman<T: Scalar>(complex: &CellComplex<T>, hyperedge: &HyperedgeCells<T>, side: Side) -> Result<T> {
    let (near, far) = match side {
        Side::Tail => (&hyperedge.tail, &hyperedge.head),
        Side::Head => (&hyperedge.head, &hyperedge.tail),
    };
    let ids = complex.vertex_ids();
    let label = |vs: &[usize]| {
        let mut vs = vs.to_vec();
        vs.sort_unstable();
        format!(
            "[{}]",
            vs.iter().map(|&v| ids[v].as_str()).collect::<Vec<_>>().join(",")
        )
    };
    let need = |vs: &[usize]| -> Result<T> {
        let id = complex.simplex(vs).ok_or_else(|| Error::MissingCell(label(vs)))?;
        checked_weight(complex, id)
    };

    let whole: Vec<usize> = near.iter().chain(far.iter()).copied().collect();
    let w_face = need(near)?;
    let w_whole = need(&whole)?;

    let mut sum = w_face / w_whole;
    for (i, &u) in near.iter().enumerate() {
        for &v in &near[i + 1..] {
            let Some(e) = complex.edge(u, v) else { continue };
            let w_edge = checked_weight(complex, e)?;
            let tri: Vec<usize> = [u, v].into_iter().chain(far.iter().copied()).collect();
            let geo = (need(&tri)? * w_face).sqrt();
            sum = sum + w_edge / w_face - geo / w_whole + w_edge / geo;
        }
    }
    Ok(w_face * sum)
}

/// Forman curvature of a hyperedge: incoming minus outgoing directional curvature.
pub fn hyperedge_forman<T: Scalar>(complex: &CellComplex<T>, hyperedge: &str) -> Result<T> {
    let h = complex.hyperedge(hyperedge)?;
    Ok(directional_forman(complex, h, Side::Tail)? - directional_forman(complex, h, Side::Head)?)
}

pub fn hyperedge_curvatures<T: Scalar>(complex: &CellComplex<T>) -> Result<Vec<(String, T)>> {
    complex
        .hyperedges()
        .par_iter()
        .map(|h| hyperedge_forman(complex, &h.id).map(|v| (h.id.clone(), v)))
        .collect()
}

/// `deg_in - deg_out` of a hyperedge.
pub fn unweighted_hyperedge_curvature<T: Scalar>(hg: &Hypergraph<T>, hyperedge: &str) -> Result<i64> {
    let (deg_in, deg_out) = hg.degrees(hyperedge)?;
    Ok(deg_in as i64 - deg_out as i64)
}

/// `(min, max)` of a family of curvature values.
pub fn curvature_bounds<T: Scalar>(values: &[T]) -> Result<(T, T)> {
    let first = *values.first().ok_or(Error::EmptyInput)?;
    Ok(values
        .iter()
        .fold((first, first), |(lo, hi), &v| (lo.min(v), hi.max(v))))
}
