//! Face and higher-cell weights derived from edge weights.
//!
//! Geometric schemes read edge weights as lengths in a Euclidean, spherical
//! (unit curvature) or hyperbolic (curvature -1) model and assign areas or
//! Cayley–Menger volumes. Combinatorial schemes combine edge weights directly.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{Cell, CellComplex, CellId, Shape};
use crate::error::{Error, Result};
use crate::linalg::determinant;
use crate::metric::Metric;
use crate::scalar::Scalar;

/// Squared volumes in `[-VOLUME_CLAMP, 0)` are rounded to zero.
pub const VOLUME_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    #[default]
    Euclidean,
    Spherical,
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(tag = "scheme", content = "geometry", rename_all = "snake_case")]
pub enum WeightScheme {
    /// Every cell of dimension 2 or more weighs one.
    #[default]
    Combinatorial,
    /// Triangle area (fan-triangulated for polygons); Cayley–Menger volume above dimension 2.
    GeometricArea(Geometry),
    /// Cayley–Menger volume in every dimension (the determinant itself off the Euclidean plane).
    CayleyMengerVolume(Geometry),
    /// Absolute value of the Cayley–Menger determinant.
    CayleyMengerDeterminant(Geometry),
    EdgeSum,
    EdgeProduct,
    ScaledEdgeSum,
    ScaledEdgeProduct,
}

impl WeightScheme {
    pub fn is_edge_combination(self) -> bool {
        matches!(
            self,
            WeightScheme::EdgeSum | WeightScheme::EdgeProduct | WeightScheme::ScaledEdgeSum | WeightScheme::ScaledEdgeProduct
        )
    }
}

/// Area of a triangle with side lengths `w1, w2, w3`.
///
/// Euclidean uses Heron's formula. The spherical and hyperbolic variants use
/// the half-angle-defect form `2 asin(√(f(p) f(p-w1) f(p-w2) f(p-w3)) / (2 Πg(wi/2)))`
/// with `(f, g) = (sin, cos)` resp. `(sinh, cosh)`.
pub fn heron_area<T: Scalar>(w1: T, w2: T, w3: T, geom: Geometry) -> Result<T> {
    let zero = T::zero();
    let bad = || Error::TriangleInequalityViolated(w1.to_f64_lossy(), w2.to_f64_lossy(), w3.to_f64_lossy());
    if !(w1.is_finite() && w2.is_finite() && w3.is_finite()) || w1 < zero || w2 < zero || w3 < zero {
        return Err(bad());
    }
    let sum = w1 + w2 + w3;
    let slack = T::epsilon() * T::lit(16.0) * sum;
    if w1 > w2 + w3 + slack || w2 > w1 + w3 + slack || w3 > w1 + w2 + slack {
        return Err(bad());
    }
    let half = T::lit(0.5);
    let p = sum * half;
    let clamp = |x: T| if x < zero { zero } else { x };
    let (a, b, c) = (clamp(p - w1), clamp(p - w2), clamp(p - w3));

    let area = match geom {
        Geometry::Euclidean => (p * a * b * c).sqrt(),
        Geometry::Hyperbolic => {
            let num = (p.sinh() * a.sinh() * b.sinh() * c.sinh()).sqrt();
            let den = (w1 * half).cosh() * (w2 * half).cosh() * (w3 * half).cosh();
            let s = (half * num / den).min(T::one());
            T::lit(2.0) * s.asin()
        }
        Geometry::Spherical => {
            let pi = T::pi();
            if w1 >= pi || w2 >= pi || w3 >= pi || sum >= T::lit(2.0) * pi {
                return Err(Error::SphericalRangeExceeded(
                    w1.to_f64_lossy(),
                    w2.to_f64_lossy(),
                    w3.to_f64_lossy(),
                ));
            }
            let num = (p.sin() * a.sin() * b.sin() * c.sin()).sqrt();
            let den = (w1 * half).cos() * (w2 * half).cos() * (w3 * half).cos();
            let sin_half = half * num / den;
            // cos of the half excess picks the branch once the area exceeds π
            let cos_half = (T::one() + w1.cos() + w2.cos() + w3.cos()) / (T::lit(4.0) * den);
            T::lit(2.0) * sin_half.atan2(cos_half)
        }
    };
    Ok(clamp(area))
}

fn check_distances<T: Scalar>(d: &[Vec<T>]) -> Result<()> {
    let n = d.len();
    if d.iter().any(|row| row.len() != n) {
        return Err(Error::NotSquare);
    }
    for i in 0..n {
        if d[i][i] != T::zero() {
            return Err(Error::NonzeroDiagonal(i));
        }
        for j in i + 1..n {
            let tol = T::lit(1e-12) * T::one().max(d[i][j].abs());
            if !((d[i][j] - d[j][i]).abs() <= tol) {
                return Err(Error::AsymmetricInput(i, j));
            }
        }
    }
    Ok(())
}

/// Cayley–Menger determinant of an `m`-simplex from its `(m+1)×(m+1)` distance matrix.
///
/// Euclidean: the bordered determinant of squared distances. Spherical:
/// `det(cos d_ij)`. Hyperbolic: `det(cosh d_ij)`.
pub fn cayley_menger_det<T: Scalar>(distances: &[Vec<T>], geom: Geometry) -> Result<T> {
    check_distances(distances)?;
    let n = distances.len();
    let matrix: Vec<Vec<T>> = match geom {
        Geometry::Euclidean => (0..=n)
            .map(|i| {
                (0..=n)
                    .map(|j| match (i, j) {
                        (0, 0) => T::zero(),
                        (0, _) | (_, 0) => T::one(),
                        _ => distances[i - 1][j - 1] * distances[i - 1][j - 1],
                    })
                    .collect()
            })
            .collect(),
        Geometry::Spherical => distances.iter().map(|r| r.iter().map(|x| x.cos()).collect()).collect(),
        Geometry::Hyperbolic => distances.iter().map(|r| r.iter().map(|x| x.cosh()).collect()).collect(),
    };
    Ok(determinant(&matrix))
}

/// Volume of the simplex with the given pairwise distances.
///
/// Euclidean: `Vol² = (-1)^(k+1) / (2^k (k!)²) · D` for a `k`-simplex.
/// Spherical and hyperbolic simplices return the determinant itself as a
/// volume surrogate.
pub fn simplex_volume<T: Scalar>(distances: &[Vec<T>], geom: Geometry) -> Result<T> {
    let det = cayley_menger_det(distances, geom)?;
    if geom != Geometry::Euclidean {
        return Ok(det);
    }
    let k = distances.len().saturating_sub(1);
    let mut coef = T::one();
    for i in 1..=k {
        let i = T::from_usize_lossy(i);
        coef = coef * T::lit(2.0) * i * i;
    }
    let sign = if k % 2 == 1 { T::one() } else { -T::one() };
    let vol2 = sign * det / coef;
    if vol2 < -T::lit(VOLUME_CLAMP) || vol2.is_nan() {
        return Err(Error::NonRealizableSimplex(vol2.to_f64_lossy()));
    }
    Ok(vol2.max(T::zero()).sqrt())
}

/// Edge-combination weight of a face bounded (or spanned) by edges of the given weights.
///
/// `EdgeSum` → `Σw`, `EdgeProduct` → `Πw`, `ScaledEdgeSum` → `(Σw)²`,
/// `ScaledEdgeProduct` → `(Πw)^(2/3)` regardless of the number of edges.
pub fn combinatorial_face_weight<T: Scalar>(edge_weights: &[T], scheme: WeightScheme) -> Result<T> {
    if let Some(&w) = edge_weights.iter().find(|w| !(**w > T::zero()) || !w.is_finite()) {
        return Err(Error::NonpositiveWeight(w.to_f64_lossy()));
    }
    let sum = || edge_weights.iter().copied().sum::<T>();
    let product = || edge_weights.iter().fold(T::one(), |acc, &w| acc * w);
    Ok(match scheme {
        WeightScheme::Combinatorial => T::one(),
        WeightScheme::EdgeSum => sum(),
        WeightScheme::EdgeProduct => product(),
        WeightScheme::ScaledEdgeSum => sum().powi(2),
        WeightScheme::ScaledEdgeProduct => product().powf(T::lit(2.0 / 3.0)),
        other => return Err(Error::UnsupportedScheme(format!("{other:?}"))),
    })
}

/// Weighted shortest-path metric on the vertices of `complex`, reading edge weights as lengths.
pub fn metrize<T: Scalar>(complex: &CellComplex<T>) -> Metric<T> {
    let edges = complex.cells_of_dim(1).map(|e| {
        let c = &complex.cells()[e.0];
        (c.vertices[0], c.vertices[1], c.weight)
    });
    Metric::shortest_paths(complex.vertex_ids().len(), edges.collect::<Vec<_>>())
}

/// Replaces every edge weight with the shortest-path distance between its endpoints.
pub fn metrized<T: Scalar>(complex: &CellComplex<T>) -> CellComplex<T> {
    let metric = metrize(complex);
    let mut out = complex.clone();
    for e in complex.cells_of_dim(1) {
        let c = &complex.cells()[e.0];
        out.set_weight(e, metric.get(c.vertices[0], c.vertices[1]));
    }
    out
}

struct Lengths<'a, T> {
    complex: &'a CellComplex<T>,
    metric: OnceLock<Metric<T>>,
}

impl<T: Scalar> Lengths<'_, T> {
    fn get(&self, u: usize, v: usize) -> Result<T> {
        if u == v {
            return Ok(T::zero());
        }
        if let Some(e) = self.complex.edge(u, v) {
            return Ok(self.complex.weight(e));
        }
        let d = self.metric.get_or_init(|| metrize(self.complex)).get(u, v);
        if d.is_finite() {
            Ok(d)
        } else {
            let ids = self.complex.vertex_ids();
            Err(Error::MissingMetric(ids[u].to_string(), ids[v].to_string()))
        }
    }

    fn matrix(&self, vertices: &[usize]) -> Result<Vec<Vec<T>>> {
        vertices
            .iter()
            .map(|&u| vertices.iter().map(|&v| self.get(u, v)).collect())
            .collect()
    }
}

/// Fan triangulation of a boundary cycle from its vertex with the smallest id.
pub fn fan_triangles<T: Scalar>(complex: &CellComplex<T>, boundary: &[usize]) -> Vec<[usize; 3]> {
    let ids = complex.vertex_ids();
    let anchor = (0..boundary.len()).min_by(|&a, &b| ids[boundary[a]].cmp(&ids[boundary[b]])).unwrap_or(0);
    let mut cycle = boundary.to_vec();
    cycle.rotate_left(anchor);
    (1..cycle.len().saturating_sub(1))
        .map(|i| [cycle[0], cycle[i], cycle[i + 1]])
        .collect()
}

fn cell_weight<T: Scalar>(lengths: &Lengths<'_, T>, cell: &Cell<T>, scheme: WeightScheme) -> Result<T> {
    let complex = lengths.complex;
    let simplex_value = |vs: &[usize]| -> Result<T> {
        let d = lengths.matrix(vs)?;
        match scheme {
            WeightScheme::GeometricArea(g) if vs.len() == 3 => heron_area(d[0][1], d[1][2], d[0][2], g),
            WeightScheme::GeometricArea(g) | WeightScheme::CayleyMengerVolume(g) => simplex_volume(&d, g),
            WeightScheme::CayleyMengerDeterminant(g) => Ok(cayley_menger_det(&d, g)?.abs()),
            _ => unreachable!("geometric scheme"),
        }
    };
    match scheme {
        WeightScheme::Combinatorial => Ok(T::one()),
        s if s.is_edge_combination() => {
            let pairs: Vec<(usize, usize)> = match &cell.shape {
                Shape::Polygon(b) => (0..b.len()).map(|j| (b[j], b[(j + 1) % b.len()])).collect(),
                Shape::Simplex => {
                    let vs = &cell.vertices;
                    (0..vs.len())
                        .flat_map(|i| (i + 1..vs.len()).map(move |j| (vs[i], vs[j])))
                        .collect()
                }
            };
            let ws = pairs
                .into_iter()
                .map(|(u, v)| lengths.get(u, v))
                .collect::<Result<Vec<_>>>()?;
            combinatorial_face_weight(&ws, s)
        }
        _ => match &cell.shape {
            Shape::Simplex => simplex_value(&cell.vertices),
            Shape::Polygon(b) => fan_triangles(complex, b)
                .iter()
                .map(|t| simplex_value(t))
                .sum::<Result<T>>(),
        },
    }
}

/// Assigns a weight to every cell of dimension 2 or more; vertex and edge weights are kept.
///
/// Geometric schemes take lengths from edge weights, falling back to the
/// shortest-path metric for vertex pairs without an edge (fan diagonals).
pub fn assign_weights<T: Scalar>(complex: &CellComplex<T>, scheme: WeightScheme) -> Result<CellComplex<T>> {
    let lengths = Lengths {
        complex,
        metric: OnceLock::new(),
    };
    let weights: Vec<T> = complex
        .cells()
        .par_iter()
        .enumerate()
        .map(|(i, cell)| {
            if cell.dim < 2 {
                return Ok(cell.weight);
            }
            let w = cell_weight(&lengths, cell, scheme)?;
            if w > T::zero() && w.is_finite() {
                Ok(w)
            } else {
                Err(Error::DegenerateCell(complex.label(CellId(i)), w.to_f64_lossy()))
            }
        })
        .collect::<Result<_>>()?;
    Ok(complex.clone().with_weights(weights))
}
