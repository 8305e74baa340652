use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Orientation class of a polygonal 2-cell whose boundary edges carry directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum OrientationClass<V> {
    /// The boundary edges form a directed cycle.
    Cyclic,
    /// One boundary source, one boundary sink, both arcs running source to sink.
    SourceSink { source: V, sink: V },
    /// Several sources and sinks (only possible with four or more sides).
    Other,
    /// At least one boundary edge has no direction, or the cell is not a 2-cell.
    Undirected,
}

impl<V> OrientationClass<V> {
    pub fn is_cyclic(&self) -> bool {
        matches!(self, OrientationClass::Cyclic)
    }

    pub fn is_source_sink(&self) -> bool {
        matches!(self, OrientationClass::SourceSink { .. })
    }

    pub fn map<W>(self, f: impl Fn(V) -> W) -> OrientationClass<W> {
        match self {
            OrientationClass::Cyclic => OrientationClass::Cyclic,
            OrientationClass::SourceSink { source, sink } => OrientationClass::SourceSink {
                source: f(source),
                sink: f(sink),
            },
            OrientationClass::Other => OrientationClass::Other,
            OrientationClass::Undirected => OrientationClass::Undirected,
        }
    }
}

/// Classifies the directed boundary of a polygon given as `(from, to)` edges in any order.
pub fn classify_orientation<V>(edges: &[(V, V)]) -> Result<OrientationClass<V>>
where
    V: Clone + Eq + Hash + Debug,
{
    if edges.len() < 3 {
        return Err(Error::NotAPolygon(format!("{} edges, need at least 3", edges.len())));
    }
    let mut incident: HashMap<&V, Vec<usize>> = HashMap::new();
    for (i, (a, b)) in edges.iter().enumerate() {
        if a == b {
            return Err(Error::NotAPolygon(format!("loop at {a:?}")));
        }
        incident.entry(a).or_default().push(i);
        incident.entry(b).or_default().push(i);
    }
    if incident.len() != edges.len() {
        return Err(Error::NotAPolygon("vertex count differs from edge count".into()));
    }
    if let Some((v, _)) = incident.iter().find(|(_, es)| es.len() != 2) {
        return Err(Error::NotAPolygon(format!("vertex {v:?} is not on exactly two sides")));
    }

    // Walk the boundary once; a single cycle must visit every edge.
    let mut visited = vec![false; edges.len()];
    let start = &edges[0].0;
    let mut at = start;
    let mut via = 0usize;
    let mut steps = 0usize;
    loop {
        visited[via] = true;
        steps += 1;
        let (a, b) = &edges[via];
        let next = if a == at { b } else { a };
        if next == start {
            break;
        }
        let es = &incident[next];
        via = if es[0] == via { es[1] } else { es[0] };
        at = next;
        if steps > edges.len() {
            break;
        }
    }
    if steps != edges.len() || visited.iter().any(|v| !v) {
        return Err(Error::NotAPolygon("boundary is not a single closed cycle".into()));
    }

    let mut out_degree: HashMap<&V, usize> = HashMap::new();
    for (a, _) in edges {
        *out_degree.entry(a).or_default() += 1;
    }
    let mut sources = Vec::new();
    let mut sinks = Vec::new();
    for v in incident.keys() {
        match out_degree.get(v).copied().unwrap_or(0) {
            2 => sources.push(*v),
            0 => sinks.push(*v),
            _ => {}
        }
    }
    Ok(match (sources.as_slice(), sinks.as_slice()) {
        ([], []) => OrientationClass::Cyclic,
        ([source], [sink]) => OrientationClass::SourceSink {
            source: (*source).clone(),
            sink: (*sink).clone(),
        },
        _ => OrientationClass::Other,
    })
}
