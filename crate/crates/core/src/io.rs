//! File formats: hypergraph input, complexes, dual graphs, curvature reports
//! and coordinates.
//!
//! Every format is JSON with unknown fields rejected. Canonical output is
//! pretty-printed with a trailing newline, so `parse` followed by
//! `to_canonical` is the identity on canonical files. Complexes and dual
//! graphs keep full `f64` precision; reports and exported coordinates are
//! rounded to [`SIGNIFICANT_DIGITS`].

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::complex::{Cell, CellComplex, CellId, FillPolicy, HyperedgeCells, OrientationClass, Shape, SourceRole};
use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::hypergraph::{Hyperedge, Hypergraph, Node, NodeId};
use crate::ollivier::{DualEdge, DualEdgeWeightRule, DualGraph};
use crate::scalar::Scalar;
use crate::weights::WeightScheme;

pub const SIGNIFICANT_DIGITS: usize = 9;

pub const FAMILY_FORMAN_CELL: &str = "forman_cell";
pub const FAMILY_FORMAN_GRAPH: &str = "forman_graph";
pub const FAMILY_FORMAN_HYPEREDGE: &str = "forman_hyperedge";
pub const FAMILY_FORMAN_UNWEIGHTED: &str = "forman_unweighted";
pub const FAMILY_OLLIVIER: &str = "ollivier";

/// Rounds to [`SIGNIFICANT_DIGITS`] significant decimal digits. Zero is
/// normalized to `+0.0`.
pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float");
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

pub fn to_canonical_json<S: Serialize>(value: &S) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<D: DeserializeOwned>(text: &str) -> Result<D> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_text(path: impl AsRef<Path>) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

/// Which document a JSON file holds, judged by its top-level keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Hypergraph,
    Complex,
    Dual,
    Report,
    Coordinates,
}

pub fn detect_kind(text: &str) -> Result<FileKind> {
    let value: serde_json::Value = from_json(text)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Format("top-level JSON value must be an object".into()))?;
    let kind = if obj.contains_key("cells") {
        FileKind::Complex
    } else if obj.contains_key("types") || obj.contains_key("nodes") && obj.contains_key("hyperedges") {
        FileKind::Hypergraph
    } else if obj.contains_key("edges") && obj.contains_key("k") {
        FileKind::Dual
    } else if obj.contains_key("records") {
        FileKind::Report
    } else if obj.contains_key("dimension") && obj.contains_key("vertices") {
        FileKind::Coordinates
    } else {
        return Err(Error::Format("unrecognized document".into()));
    };
    Ok(kind)
}

// ---------------------------------------------------------------------------
// Hypergraphs

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeRecord {
    pub id: String,
    #[serde(rename = "type")]
    pub type_label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperedgeRecord {
    pub id: String,
    pub tail: Vec<String>,
    pub head: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypergraphFile {
    pub types: Vec<String>,
    pub nodes: Vec<NodeRecord>,
    pub hyperedges: Vec<HyperedgeRecord>,
}

impl HypergraphFile {
    pub fn parse(text: &str) -> Result<Self> {
        from_json(text)
    }

    pub fn to_canonical(&self) -> Result<String> {
        to_canonical_json(self)
    }

    /// The hypergraph as written; absent weights default to 1. Invalid
    /// hypergraphs are rejected with every violation listed.
    pub fn to_hypergraph<T: Scalar>(&self) -> Result<Hypergraph<T>> {
        let hg = self.to_hypergraph_unchecked();
        let violations = hg.validate();
        if violations.is_empty() {
            Ok(hg)
        } else {
            Err(Error::InvalidHypergraph(violations))
        }
    }

    pub fn to_hypergraph_unchecked<T: Scalar>(&self) -> Hypergraph<T> {
        let weight = |w: Option<f64>| w.map_or(T::one(), T::lit);
        let nodes = self
            .nodes
            .iter()
            .map(|n| Node::new(n.id.as_str(), n.type_label.as_str()).with_weight(weight(n.weight)))
            .collect();
        let hyperedges = self
            .hyperedges
            .iter()
            .map(|h| {
                Hyperedge::new(h.id.as_str(), h.tail.iter().map(String::as_str), h.head.iter().map(String::as_str))
                    .with_weight(weight(h.weight))
            })
            .collect();
        Hypergraph::new(self.types.clone(), nodes, hyperedges)
    }

    /// Writes every weight explicitly.
    pub fn from_hypergraph<T: Scalar>(hg: &Hypergraph<T>) -> Self {
        HypergraphFile {
            types: hg.types().to_vec(),
            nodes: hg
                .nodes()
                .iter()
                .map(|n| NodeRecord {
                    id: n.id.to_string(),
                    type_label: n.type_label.clone(),
                    weight: Some(n.weight.to_f64_lossy()),
                })
                .collect(),
            hyperedges: hg
                .hyperedges()
                .iter()
                .map(|h| HyperedgeRecord {
                    id: h.id.clone(),
                    tail: h.tail.iter().map(ToString::to_string).collect(),
                    head: h.head.iter().map(ToString::to_string).collect(),
                    weight: Some(h.weight.to_f64_lossy()),
                })
                .collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Complexes

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexRecord {
    pub id: String,
    #[serde(rename = "type")]
    pub type_label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellRecord {
    pub dim: usize,
    pub vertices: Vec<String>,
    /// Cyclic boundary order, for polygonal cells only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Vec<String>>,
    pub weight: f64,
    pub orientation: OrientationClass<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrow: Option<(String, String)>,
    pub role: SourceRole,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fill_policy: Option<FillPolicy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_scheme: Option<WeightScheme>,
    pub vertices: Vec<VertexRecord>,
    pub cells: Vec<CellRecord>,
    pub hyperedges: Vec<HyperedgeRecord>,
}

impl ComplexFile {
    pub fn parse(text: &str) -> Result<Self> {
        from_json(text)
    }

    pub fn to_canonical(&self) -> Result<String> {
        to_canonical_json(self)
    }

    pub fn from_complex<T: Scalar>(
        complex: &CellComplex<T>,
        fill_policy: Option<FillPolicy>,
        weight_scheme: Option<WeightScheme>,
    ) -> Self {
        let ids = complex.vertex_ids();
        let name = |v: usize| ids[v].to_string();
        let names = |vs: &[usize]| vs.iter().map(|&v| name(v)).collect::<Vec<_>>();
        ComplexFile {
            fill_policy,
            weight_scheme,
            vertices: ids
                .iter()
                .zip(complex.vertex_types())
                .map(|(id, t)| VertexRecord { id: id.to_string(), type_label: t.clone() })
                .collect(),
            cells: complex
                .cells()
                .iter()
                .map(|c| CellRecord {
                    dim: c.dim,
                    vertices: names(&c.vertices),
                    boundary: match &c.shape {
                        Shape::Simplex => None,
                        Shape::Polygon(b) => Some(names(b)),
                    },
                    weight: c.weight.to_f64_lossy(),
                    orientation: c.orientation.map(name),
                    arrow: c.arrow.map(|(a, b)| (name(a), name(b))),
                    role: c.role,
                })
                .collect(),
            hyperedges: complex
                .hyperedges()
                .iter()
                .map(|h| HyperedgeRecord {
                    id: h.id.clone(),
                    tail: names(&h.tail),
                    head: names(&h.head),
                    weight: Some(h.weight.to_f64_lossy()),
                })
                .collect(),
        }
    }

    pub fn to_complex<T: Scalar>(&self) -> Result<CellComplex<T>> {
        let mut index = HashMap::with_capacity(self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            if index.insert(v.id.as_str(), i).is_some() {
                return Err(Error::Format(format!("duplicate vertex `{}`", v.id)));
            }
        }
        let look = |id: &str| -> Result<usize> {
            index.get(id).copied().ok_or_else(|| Error::Format(format!("unknown vertex `{id}`")))
        };
        let looks = |ids: &[String]| ids.iter().map(|s| look(s)).collect::<Result<Vec<_>>>();

        let mut cells = Vec::with_capacity(self.cells.len());
        for rec in &self.cells {
            let mut vertices = looks(&rec.vertices)?;
            vertices.sort_unstable();
            let shape = match &rec.boundary {
                None => Shape::Simplex,
                Some(b) => Shape::Polygon(looks(b)?),
            };
            let orientation = match &rec.orientation {
                OrientationClass::SourceSink { source, sink } => {
                    OrientationClass::SourceSink { source: look(source)?, sink: look(sink)? }
                }
                OrientationClass::Cyclic => OrientationClass::Cyclic,
                OrientationClass::Other => OrientationClass::Other,
                OrientationClass::Undirected => OrientationClass::Undirected,
            };
            let arrow = match &rec.arrow {
                Some((a, b)) => Some((look(a)?, look(b)?)),
                None => None,
            };
            cells.push(Cell {
                dim: rec.dim,
                vertices,
                shape,
                weight: T::lit(rec.weight),
                orientation,
                arrow,
                role: rec.role,
            });
        }
        let hyperedges = self
            .hyperedges
            .iter()
            .map(|h| {
                Ok(HyperedgeCells {
                    id: h.id.clone(),
                    tail: looks(&h.tail)?,
                    head: looks(&h.head)?,
                    weight: h.weight.map_or(T::one(), T::lit),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        CellComplex::from_parts(
            self.vertices.iter().map(|v| NodeId::from(v.id.as_str())).collect(),
            self.vertices.iter().map(|v| v.type_label.clone()).collect(),
            cells,
            hyperedges,
        )
    }
}

// ---------------------------------------------------------------------------
// Dual graphs

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualNodeRecord {
    pub cell: usize,
    pub label: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualEdgeRecord {
    pub a: usize,
    pub b: usize,
    pub shared_face: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualFile {
    pub k: usize,
    pub rule: DualEdgeWeightRule,
    pub nodes: Vec<DualNodeRecord>,
    pub edges: Vec<DualEdgeRecord>,
}

impl DualFile {
    pub fn parse(text: &str) -> Result<Self> {
        from_json(text)
    }

    pub fn to_canonical(&self) -> Result<String> {
        to_canonical_json(self)
    }

    pub fn from_dual<T: Scalar>(g: &DualGraph<T>) -> Self {
        DualFile {
            k: g.k(),
            rule: g.rule(),
            nodes: (0..g.len())
                .map(|i| DualNodeRecord {
                    cell: g.cells()[i].0,
                    label: g.labels()[i].clone(),
                    weight: g.node_weights()[i].to_f64_lossy(),
                })
                .collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| DualEdgeRecord { a: e.a, b: e.b, shared_face: e.shared_face.0, weight: e.weight.to_f64_lossy() })
                .collect(),
        }
    }

    pub fn to_dual<T: Scalar>(&self) -> Result<DualGraph<T>> {
        DualGraph::from_parts(
            self.k,
            self.rule,
            self.nodes.iter().map(|n| CellId(n.cell)).collect(),
            self.nodes.iter().map(|n| n.label.clone()).collect(),
            self.nodes.iter().map(|n| T::lit(n.weight)).collect(),
            self.edges
                .iter()
                .map(|e| DualEdge { a: e.a, b: e.b, shared_face: CellId(e.shared_face), weight: T::lit(e.weight) })
                .collect(),
        )
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering of a dual graph; nodes are labelled by cell vertex sets.
pub fn dual_to_dot<T: Scalar>(g: &DualGraph<T>) -> String {
    let mut out = String::from("graph dual {\n");
    for (i, label) in g.labels().iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"{}\"];", dot_escape(label));
    }
    for e in g.edges() {
        let _ = writeln!(out, "  n{} -- n{} [weight=\"{}\"];", e.a, e.b, round_significant(e.weight.to_f64_lossy()));
    }
    out.push_str("}\n");
    out
}

// ---------------------------------------------------------------------------
// Curvature reports

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityKind {
    Cell,
    Edge,
    Hyperedge,
    DualEdge,
}

impl EntityKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EntityKind::Cell => "cell",
            EntityKind::Edge => "edge",
            EntityKind::Hyperedge => "hyperedge",
            EntityKind::DualEdge => "dual_edge",
        }
    }
}

impl FromStr for EntityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cell" => EntityKind::Cell,
            "edge" => EntityKind::Edge,
            "hyperedge" => EntityKind::Hyperedge,
            "dual_edge" => EntityKind::DualEdge,
            other => return Err(Error::Format(format!("unknown entity kind `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvatureRecord {
    pub entity_id: String,
    pub kind: EntityKind,
    pub family: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySummary {
    pub family: String,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvatureReport {
    pub records: Vec<CurvatureRecord>,
    pub summary: Vec<FamilySummary>,
}

impl CurvatureReport {
    /// Rounds values, orders records by `(family, entity_id)` and computes the
    /// per-family bounds.
    pub fn new(mut records: Vec<CurvatureRecord>) -> Result<Self> {
        for r in &mut records {
            if !r.value.is_finite() {
                return Err(Error::Format(format!("non-finite curvature for {}", r.entity_id)));
            }
            r.value = round_significant(r.value);
        }
        records.sort_by(|a, b| (&a.family, &a.entity_id).cmp(&(&b.family, &b.entity_id)));
        let summary = Self::summarize(&records);
        Ok(CurvatureReport { records, summary })
    }

    fn summarize(records: &[CurvatureRecord]) -> Vec<FamilySummary> {
        let mut bounds: BTreeMap<&str, (f64, f64)> = BTreeMap::new();
        for r in records {
            bounds
                .entry(r.family.as_str())
                .and_modify(|b| *b = (b.0.min(r.value), b.1.max(r.value)))
                .or_insert((r.value, r.value));
        }
        bounds
            .into_iter()
            .map(|(family, (min, max))| FamilySummary { family: family.to_owned(), min, max })
            .collect()
    }

    /// Whether the stored summary matches a recomputation from the records.
    pub fn summary_consistent(&self) -> bool {
        Self::summarize(&self.records) == self.summary
    }

    pub fn parse(text: &str) -> Result<Self> {
        from_json(text)
    }

    pub fn to_canonical(&self) -> Result<String> {
        to_canonical_json(self)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| Error::Format(e.to_string());
        w.write_record(["entity_id", "kind", "family", "value"]).map_err(fail)?;
        for r in &self.records {
            w.write_record([r.entity_id.as_str(), r.kind.as_str(), r.family.as_str(), &r.value.to_string()])
                .map_err(fail)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let fail = |e: csv::Error| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::MalformedInput { line, column: 0, message: e.to_string() }
        };
        let header = r.headers().map_err(fail)?.clone();
        if header.iter().collect::<Vec<_>>() != ["entity_id", "kind", "family", "value"] {
            return Err(Error::MalformedInput { line: 1, column: 1, message: "unexpected CSV header".into() });
        }
        let mut records = Vec::new();
        for row in r.records() {
            let row = row.map_err(fail)?;
            let line = row.position().map_or(0, |p| p.line() as usize);
            let bad = |message: String| Error::MalformedInput { line, column: 1, message };
            records.push(CurvatureRecord {
                entity_id: row[0].to_owned(),
                kind: row[1].parse().map_err(|e: Error| bad(e.to_string()))?,
                family: row[2].to_owned(),
                value: row[3].parse().map_err(|_| bad(format!("not a number: `{}`", &row[3])))?,
            });
        }
        Self::new(records)
    }
}

// ---------------------------------------------------------------------------
// Coordinates

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexCoordinates {
    pub id: String,
    /// Moment-curve parameter, when the embedding lies on the curve.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u64>,
    /// Plot-ready point: the curve with `t` rescaled into `(0, 1]`, or the
    /// exact point rounded when no parameter is known.
    pub point: Vec<f64>,
    /// Exact coordinates as rationals (`"p"` or `"p/q"`).
    pub exact: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoordinatesFile {
    pub dimension: usize,
    pub vertices: Vec<VertexCoordinates>,
}

impl CoordinatesFile {
    pub fn parse(text: &str) -> Result<Self> {
        from_json(text)
    }

    pub fn to_canonical(&self) -> Result<String> {
        to_canonical_json(self)
    }

    pub fn from_embedding(emb: &Embedding) -> Self {
        let rescaled = emb.rescaled();
        let params = emb.parameters();
        CoordinatesFile {
            dimension: emb.dimension(),
            vertices: emb
                .points()
                .enumerate()
                .map(|(i, (id, p))| VertexCoordinates {
                    id: id.to_string(),
                    t: params.map(|ts| ts[i]),
                    point: match &rescaled {
                        Some(r) => r[i].iter().map(|&x| round_significant(x)).collect(),
                        None => emb.approximate(id).unwrap_or_default().into_iter().map(round_significant).collect(),
                    },
                    exact: p.iter().map(ToString::to_string).collect(),
                })
                .collect(),
        }
    }

    pub fn to_embedding(&self) -> Result<Embedding> {
        let points = self
            .vertices
            .iter()
            .map(|v| {
                let coords = v
                    .exact
                    .iter()
                    .map(|s| BigRational::from_str(s).map_err(|e| Error::Format(format!("bad coordinate `{s}`: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                Ok((NodeId::from(v.id.as_str()), coords))
            })
            .collect::<Result<Vec<_>>>()?;
        Embedding::from_points(self.dimension, points)
    }
}
