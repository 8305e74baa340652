//! Hypergraph parametrization and face-filling policies.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{classify_orientation, Cell, CellComplex, HyperedgeCells, OrientationClass, SourceRole};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, NodeId};
use crate::scalar::Scalar;

/// Largest hyperedge (tail plus head) whose full simplex is materialized.
pub const MAX_HYPEREDGE_SIZE: usize = 16;

/// Which oriented faces are filled in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FillPolicy {
    /// Directed-cycle 2-faces only.
    CyclicOnly,
    /// Faces with a unique source and sink, plus every higher cell whose facets all survive.
    AcyclicSourceSink,
    /// Every 2-face that carries flow along its edges (all non-cyclic ones); no higher cells.
    FlowBAndC,
    #[default]
    FillAll,
}

impl FillPolicy {
    fn accepts(self, class: &OrientationClass<usize>) -> bool {
        match self {
            FillPolicy::CyclicOnly => class.is_cyclic(),
            FillPolicy::AcyclicSourceSink => class.is_source_sink(),
            FillPolicy::FlowBAndC => !class.is_cyclic(),
            FillPolicy::FillAll => true,
        }
    }

    fn fills_above_two(self) -> bool {
        // A directed cycle runs along each of its edges, so two cyclic faces
        // sharing an edge traverse it the same way and can never be oppositely
        // oriented: under `CyclicOnly` no 3-cell is ever admissible.
        matches!(self, FillPolicy::AcyclicSourceSink | FillPolicy::FillAll)
    }
}

#[derive(Default)]
struct EdgeFlow<T> {
    forward: bool,
    backward: bool,
    weight: Option<T>,
}

impl<T: Scalar> CellComplex<T> {
    /// Parametrizes `hg` as a directed complex and fills faces per `policy`.
    ///
    /// Each hyperedge contributes the simplex on `tail ∪ head` together with
    /// all of its faces; cells with equal vertex sets are merged across
    /// hyperedges. Edges between the two sides point from tail to head; edges
    /// inside one side are undirected. An edge used in both directions by
    /// different hyperedges is undirected. Vertex weights are node weights and
    /// an edge weighs the least weight among the hyperedges spanning it.
    pub fn from_hypergraph(hg: &Hypergraph<T>, policy: FillPolicy) -> Result<Self> {
        let violations = hg.validate();
        if !violations.is_empty() {
            return Err(Error::InvalidHypergraph(violations));
        }
        if hg.nodes().is_empty() {
            return Err(Error::EmptyHypergraph);
        }

        let mut order: Vec<usize> = (0..hg.nodes().len()).collect();
        order.sort_by(|&a, &b| hg.nodes()[a].id.cmp(&hg.nodes()[b].id));
        let vertex_ids: Vec<NodeId> = order.iter().map(|&i| hg.nodes()[i].id.clone()).collect();
        let vertex_types: Vec<String> = order.iter().map(|&i| hg.nodes()[i].type_label.clone()).collect();
        let position: HashMap<&NodeId, usize> = vertex_ids.iter().enumerate().map(|(i, id)| (id, i)).collect();

        let mut cells: Vec<Cell<T>> = order
            .iter()
            .enumerate()
            .map(|(v, &i)| Cell::simplex(vec![v], SourceRole::Vertex).with_weight(hg.nodes()[i].weight))
            .collect();

        let mut edges: BTreeMap<(usize, usize), EdgeFlow<T>> = BTreeMap::new();
        let mut higher: BTreeMap<Vec<usize>, SourceRole> = BTreeMap::new();
        let mut hyperedges = Vec::with_capacity(hg.hyperedges().len());

        for h in hg.hyperedges() {
            let mut tail: Vec<usize> = h.tail.iter().map(|id| position[id]).collect();
            let mut head: Vec<usize> = h.head.iter().map(|id| position[id]).collect();
            tail.sort_unstable();
            head.sort_unstable();
            let mut members: Vec<usize> = tail.iter().chain(&head).copied().collect();
            members.sort_unstable();
            if members.len() > MAX_HYPEREDGE_SIZE {
                return Err(Error::HyperedgeTooLarge {
                    id: h.id.clone(),
                    size: members.len(),
                    max: MAX_HYPEREDGE_SIZE,
                });
            }
            let in_tail: HashSet<usize> = tail.iter().copied().collect();

            for (i, &a) in members.iter().enumerate() {
                for &b in &members[i + 1..] {
                    let flow = edges.entry((a, b)).or_default();
                    match (in_tail.contains(&a), in_tail.contains(&b)) {
                        (true, false) => flow.forward = true,
                        (false, true) => flow.backward = true,
                        _ => {}
                    }
                    flow.weight = Some(match flow.weight {
                        Some(w) if w <= h.weight => w,
                        _ => h.weight,
                    });
                }
            }

            let n = members.len();
            for mask in 1u32..(1u32 << n) {
                if mask.count_ones() < 3 {
                    continue;
                }
                let subset: Vec<usize> = (0..n).filter(|&j| mask & (1 << j) != 0).map(|j| members[j]).collect();
                let role = if subset == members {
                    SourceRole::HyperedgeBody
                } else if subset == tail || subset == head {
                    SourceRole::SideFace
                } else {
                    SourceRole::FilledFace
                };
                higher
                    .entry(subset)
                    .and_modify(|r| *r = (*r).min(role))
                    .or_insert(role);
            }

            hyperedges.push(HyperedgeCells {
                id: h.id.clone(),
                tail,
                head,
                weight: h.weight,
            });
        }

        for ((a, b), flow) in &edges {
            let mut cell = Cell::simplex(vec![*a, *b], SourceRole::Edge).with_weight(flow.weight.unwrap_or(T::one()));
            cell.arrow = match (flow.forward, flow.backward) {
                (true, false) => Some((*a, *b)),
                (false, true) => Some((*b, *a)),
                _ => None,
            };
            cells.push(cell);
        }
        cells.extend(higher.into_iter().map(|(vs, role)| Cell::simplex(vs, role)));

        let mut full = CellComplex::from_parts(vertex_ids, vertex_types, cells, hyperedges)?;
        full.classify_faces();
        full.fill_faces(policy)
    }

    /// Records the orientation class of every 2-cell whose boundary is fully directed.
    fn classify_faces(&mut self) {
        for i in 0..self.cells.len() {
            if self.cells[i].dim != 2 {
                continue;
            }
            let arrows = self.boundary_arrows(i);
            self.cells[i].orientation = match arrows.into_iter().collect::<Option<Vec<_>>>() {
                Some(directed) => classify_orientation(&directed)
                    .unwrap_or(OrientationClass::Undirected),
                None => OrientationClass::Undirected,
            };
        }
    }

    fn boundary_arrows(&self, cell: usize) -> Vec<Option<(usize, usize)>> {
        let cycle = self.cells[cell].boundary_cycle().unwrap_or_default();
        (0..cycle.len())
            .map(|j| {
                let (a, b) = (cycle[j], cycle[(j + 1) % cycle.len()]);
                self.edge(a, b).and_then(|e| self.cells[e.0].arrow)
            })
            .collect()
    }

    /// Orientation classes reachable by directing the undirected boundary edges of a 2-cell.
    fn reachable_classes(&self, cell: usize) -> Vec<OrientationClass<usize>> {
        let cycle = self.cells[cell].boundary_cycle().unwrap_or_default();
        let arrows = self.boundary_arrows(cell);
        let free: Vec<usize> = (0..arrows.len()).filter(|&j| arrows[j].is_none()).collect();
        let mut classes = Vec::new();
        for mask in 0u32..(1u32 << free.len()) {
            let directed: Vec<(usize, usize)> = (0..cycle.len())
                .map(|j| {
                    arrows[j].unwrap_or_else(|| {
                        let (a, b) = (cycle[j], cycle[(j + 1) % cycle.len()]);
                        let k = free.iter().position(|&f| f == j).unwrap_or(0);
                        if mask & (1 << k) != 0 {
                            (b, a)
                        } else {
                            (a, b)
                        }
                    })
                })
                .collect();
            if let Ok(class) = classify_orientation(&directed) {
                if !classes.contains(&class) {
                    classes.push(class);
                }
            }
        }
        classes
    }

    /// Keeps the faces admitted by `policy`.
    ///
    /// Vertices and edges are always kept. A 2-cell is kept when some
    /// direction of its undirected boundary edges yields an accepted
    /// orientation class. A cell of dimension 3 or more is kept when all of
    /// its facets are kept and the policy fills higher cells at all.
    pub fn fill_faces(&self, policy: FillPolicy) -> Result<Self> {
        let mut keep = vec![false; self.cells.len()];
        // cells are sorted by dimension, so facets are decided first
        for i in 0..self.cells.len() {
            let c = &self.cells[i];
            keep[i] = match c.dim {
                0 | 1 => true,
                2 => self.reachable_classes(i).iter().any(|k| policy.accepts(k)),
                _ => policy.fills_above_two() && self.parents[i].iter().all(|p| keep[p.0]),
            } && self.parents[i].iter().all(|p| keep[p.0]);
        }
        self.restrict(&keep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hyperedge;

    fn four_to_one() -> Hypergraph<f64> {
        Hypergraph::from_hyperedges(vec![Hyperedge::new("h", ["A", "B", "C", "D"], ["E"])])
    }

    fn count_by_dim(k: &CellComplex<f64>) -> Vec<usize> {
        let mut out = vec![0; k.dimension() + 1];
        for c in k.cells() {
            out[c.dim] += 1;
        }
        out
    }

    #[test]
    fn four_to_one_full_parametrization() {
        let k = CellComplex::from_hypergraph(&four_to_one(), FillPolicy::FillAll).unwrap();
        assert_eq!(count_by_dim(&k), vec![5, 10, 10, 5, 1]);
        let top = k.simplex_by_ids(&["A", "B", "C", "D", "E"]).unwrap();
        assert_eq!(k.cell(top).unwrap().role, SourceRole::HyperedgeBody);
        let side = k.simplex_by_ids(&["A", "B", "C", "D"]).unwrap();
        assert_eq!(k.cell(side).unwrap().role, SourceRole::SideFace);
        let ae = k.simplex_by_ids(&["A", "E"]).unwrap();
        let (a, e) = (k.vertex_index(&"A".into()).unwrap(), k.vertex_index(&"E".into()).unwrap());
        assert_eq!(k.cell(ae).unwrap().arrow, Some((a, e)));
        let ab = k.simplex_by_ids(&["A", "B"]).unwrap();
        assert_eq!(k.cell(ab).unwrap().arrow, None);
        assert!(k.closure_violations().is_empty());
    }

    #[test]
    fn classical_edge_has_no_higher_cells() {
        let hg = Hypergraph::<f64>::from_hyperedges(vec![Hyperedge::new("e", ["X"], ["Y"])]);
        for policy in [FillPolicy::FillAll, FillPolicy::CyclicOnly] {
            let k = CellComplex::from_hypergraph(&hg, policy).unwrap();
            assert_eq!(count_by_dim(&k), vec![2, 1]);
            let e = k.cells_of_dim(1).next().unwrap();
            assert_eq!(k.cell(e).unwrap().arrow, Some((0, 1)));
        }
    }

    #[test]
    fn shared_nodes_are_merged() {
        let hg = Hypergraph::<f64>::from_hyperedges(vec![
            Hyperedge::new("h1", ["A", "B"], ["E"]),
            Hyperedge::new("h2", ["C"], ["D", "E"]),
        ]);
        let k = CellComplex::from_hypergraph(&hg, FillPolicy::FillAll).unwrap();
        // independent enumeration: union of the power sets of {A,B,E} and {C,D,E}
        let mut expected: HashSet<Vec<&str>> = HashSet::new();
        for members in [vec!["A", "B", "E"], vec!["C", "D", "E"]] {
            for mask in 1..8u32 {
                let s: Vec<&str> = (0..3).filter(|j| mask & (1 << j) != 0).map(|j| members[j]).collect();
                expected.insert(s);
            }
        }
        assert_eq!(k.len(), expected.len());
        let e = k.simplex_by_ids(&["E"]).unwrap();
        assert_eq!(k.children(e).len(), 4);
    }

    fn cyclic_triangle() -> CellComplex<f64> {
        let hg = Hypergraph::<f64>::from_hyperedges(vec![
            Hyperedge::new("ab", ["A"], ["B"]),
            Hyperedge::new("bc", ["B"], ["C"]),
            Hyperedge::new("ca", ["C"], ["A"]),
        ]);
        let base = CellComplex::from_hypergraph(&hg, FillPolicy::FillAll).unwrap();
        let (a, b, c) = (0, 1, 2);
        let mut cells: Vec<Cell<f64>> = base.cells().to_vec();
        cells.push(Cell::simplex(vec![a, b, c], SourceRole::FilledFace));
        let mut k = CellComplex::from_parts(
            base.vertex_ids().to_vec(),
            base.vertex_types().to_vec(),
            cells,
            vec![],
        )
        .unwrap();
        k.classify_faces();
        k
    }

    #[test]
    fn cyclic_triangle_under_policies() {
        let k = cyclic_triangle();
        let t = k.cells_of_dim(2).next().unwrap();
        assert_eq!(k.cell(t).unwrap().orientation, OrientationClass::Cyclic);
        assert_eq!(k.fill_faces(FillPolicy::CyclicOnly).unwrap().cells_of_dim(2).count(), 1);
        assert_eq!(k.fill_faces(FillPolicy::AcyclicSourceSink).unwrap().cells_of_dim(2).count(), 0);
        assert_eq!(k.fill_faces(FillPolicy::FlowBAndC).unwrap().cells_of_dim(2).count(), 0);
        assert_eq!(k.fill_faces(FillPolicy::FillAll).unwrap().cells_of_dim(2).count(), 1);
    }

    #[test]
    fn flow_policy_keeps_types_b_and_c_around_an_edge() {
        // edge e = s -> t with three apexes: x (s->x->t, type B), y (y->s, y->t, type C)
        // and z (t->z->s, cyclic, type A)
        let hg = Hypergraph::<f64>::from_hyperedges(vec![
            Hyperedge::new("e", ["s"], ["t"]),
            Hyperedge::new("sx", ["s"], ["x"]),
            Hyperedge::new("xt", ["x"], ["t"]),
            Hyperedge::new("ys", ["y"], ["s"]),
            Hyperedge::new("yt", ["y"], ["t"]),
            Hyperedge::new("tz", ["t"], ["z"]),
            Hyperedge::new("zs", ["z"], ["s"]),
        ]);
        let base = CellComplex::from_hypergraph(&hg, FillPolicy::FillAll).unwrap();
        let mut cells = base.cells().to_vec();
        for apex in ["x", "y", "z"] {
            let vs: Vec<usize> = ["s", "t", apex]
                .iter()
                .map(|id| base.vertex_index(&NodeId::from(*id)).unwrap())
                .collect();
            cells.push(Cell::simplex(vs, SourceRole::FilledFace));
        }
        let mut k =
            CellComplex::from_parts(base.vertex_ids().to_vec(), base.vertex_types().to_vec(), cells, vec![]).unwrap();
        k.classify_faces();

        let flow = k.fill_faces(FillPolicy::FlowBAndC).unwrap();
        assert!(flow.simplex_by_ids(&["s", "t", "x"]).is_some());
        assert!(flow.simplex_by_ids(&["s", "t", "y"]).is_some());
        assert!(flow.simplex_by_ids(&["s", "t", "z"]).is_none());
    }

    #[test]
    fn policies_are_contained_in_fill_all() {
        let hg = Hypergraph::<f64>::from_hyperedges(vec![
            Hyperedge::new("h1", ["A", "B", "C"], ["D"]),
            Hyperedge::new("h2", ["D"], ["A", "E"]),
            Hyperedge::new("h3", ["E", "F"], ["G", "B"]),
        ]);
        let all = CellComplex::from_hypergraph(&hg, FillPolicy::FillAll).unwrap();
        let labels = |k: &CellComplex<f64>| k.ids().map(|i| k.label(i)).collect::<HashSet<_>>();
        let all_labels = labels(&all);
        for policy in [FillPolicy::CyclicOnly, FillPolicy::AcyclicSourceSink, FillPolicy::FlowBAndC] {
            let k = CellComplex::from_hypergraph(&hg, policy).unwrap();
            assert!(labels(&k).is_subset(&all_labels), "{policy:?}");
            assert!(k.closure_violations().is_empty());
        }
        let cyclic = CellComplex::from_hypergraph(&hg, FillPolicy::CyclicOnly).unwrap();
        assert!(cyclic.dimension() <= 2);
        let flow = CellComplex::from_hypergraph(&hg, FillPolicy::FlowBAndC).unwrap();
        assert!(flow.dimension() <= 2);
    }

    #[test]
    fn four_to_one_under_cyclic_only_keeps_co_parent_triangles() {
        let k = CellComplex::from_hypergraph(&four_to_one(), FillPolicy::CyclicOnly).unwrap();
        // [A,B,C]-type triangles have free edges; triangles through E are never cyclic
        assert_eq!(k.cells_of_dim(2).count(), 4);
        assert!(k.simplex_by_ids(&["A", "B", "E"]).is_none());
        let ss = CellComplex::from_hypergraph(&four_to_one(), FillPolicy::AcyclicSourceSink).unwrap();
        assert_eq!(ss.len(), 31);
    }

    #[test]
    fn oversized_hyperedge_is_rejected() {
        let tail: Vec<String> = (0..MAX_HYPEREDGE_SIZE).map(|i| format!("t{i}")).collect();
        let hg = Hypergraph::<f64>::from_hyperedges(vec![Hyperedge::new("big", tail, ["h"])]);
        assert!(matches!(
            CellComplex::from_hypergraph(&hg, FillPolicy::FillAll),
            Err(Error::HyperedgeTooLarge { .. })
        ));
    }
}
