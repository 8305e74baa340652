use hyperricci::forman::hyperedge_forman;
use hyperricci::ollivier::{dualize, ollivier_curvatures};
use hyperricci::weights::{assign_weights, heron_area};
use hyperricci::{CellComplex32, DualEdgeWeightRule, FillPolicy, Geometry, Hyperedge, Hypergraph32, WeightScheme};

#[test]
fn single_precision_pipeline() {
    let hg = Hypergraph32::from_hyperedges(vec![Hyperedge::new("h", ["A", "B", "C", "D"], ["E"])]);
    let k = CellComplex32::from_hypergraph(&hg, FillPolicy::FillAll).unwrap();
    let k = assign_weights(&k, WeightScheme::Combinatorial).unwrap();
    assert_eq!(hyperedge_forman(&k, "h").unwrap(), 6.0f32);
    assert!((heron_area(3.0f32, 4.0, 5.0, Geometry::Euclidean).unwrap() - 6.0).abs() < 1e-5);

    // boundary of a tetrahedron: dual is K4, every dual edge has curvature 1 - W1
    let tet = Hypergraph32::from_hyperedges(vec![Hyperedge::new("t", ["a", "b", "c"], ["d"])]);
    let k = CellComplex32::from_hypergraph(&tet, FillPolicy::FillAll).unwrap();
    let k = assign_weights(&k, WeightScheme::Combinatorial).unwrap();
    let g = dualize(&k, 2, DualEdgeWeightRule::Unit, None).unwrap();
    assert_eq!(g.edges().len(), 6);
    for kappa in ollivier_curvatures(&g, 0.0).unwrap() {
        // neighbors of a and b overlap in two of three nodes; one third moves one step
        assert!((kappa - 2.0 / 3.0).abs() < 1e-5);
    }
}
