//! Typed, directed, weighted hypergraphs.
//!
//! A hyperedge joins a nonempty *tail* (incoming side) to a nonempty, disjoint
//! *head* (outgoing side). Nodes carry a type label drawn from the hypergraph's
//! declared type set and a nonnegative weight.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub String);

impl NodeId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_owned())
    }
}

impl From<String> for NodeId {
    fn from(s: String) -> Self {
        NodeId(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node<T> {
    pub id: NodeId,
    pub type_label: String,
    pub weight: T,
}

impl<T: Scalar> Node<T> {
    pub fn new(id: impl Into<NodeId>, type_label: impl Into<String>) -> Self {
        Node {
            id: id.into(),
            type_label: type_label.into(),
            weight: T::one(),
        }
    }

    pub fn with_weight(mut self, weight: T) -> Self {
        self.weight = weight;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hyperedge<T> {
    pub id: String,
    pub tail: Vec<NodeId>,
    pub head: Vec<NodeId>,
    pub weight: T,
}

impl<T: Scalar> Hyperedge<T> {
    pub fn new<I, J>(id: impl Into<String>, tail: I, head: J) -> Self
    where
        I: IntoIterator,
        I::Item: Into<NodeId>,
        J: IntoIterator,
        J::Item: Into<NodeId>,
    {
        Hyperedge {
            id: id.into(),
            tail: tail.into_iter().map(Into::into).collect(),
            head: head.into_iter().map(Into::into).collect(),
            weight: T::one(),
        }
    }

    pub fn with_weight(mut self, weight: T) -> Self {
        self.weight = weight;
        self
    }

    /// The same hyperedge with incoming and outgoing sides exchanged.
    pub fn reversed(&self) -> Self {
        Hyperedge {
            id: self.id.clone(),
            tail: self.head.clone(),
            head: self.tail.clone(),
            weight: self.weight,
        }
    }

    /// Members of both sides.
    pub fn members(&self) -> impl Iterator<Item = &NodeId> {
        self.tail.iter().chain(self.head.iter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Tail,
    Head,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Tail => f.write_str("tail"),
            Side::Head => f.write_str("head"),
        }
    }
}

/// One broken invariant of a [`Hypergraph`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "code", rename_all = "snake_case")]
pub enum Violation {
    DanglingNode { hyperedge: String, node: String },
    NegativeWeight { entity: String },
    NonFiniteWeight { entity: String },
    EmptySide { hyperedge: String, side: Side },
    OverlappingSides { hyperedge: String, node: String },
    RepeatedMember { hyperedge: String, node: String },
    DuplicateNodeId { node: String },
    DuplicateHyperedgeId { hyperedge: String },
    UnknownType { node: String, type_label: String },
}

impl Violation {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Violation::DanglingNode { .. } => "dangling_node",
            Violation::NegativeWeight { .. } => "negative_weight",
            Violation::NonFiniteWeight { .. } => "non_finite_weight",
            Violation::EmptySide { .. } => "empty_side",
            Violation::OverlappingSides { .. } => "overlapping_sides",
            Violation::RepeatedMember { .. } => "repeated_member",
            Violation::DuplicateNodeId { .. } => "duplicate_node_id",
            Violation::DuplicateHyperedgeId { .. } => "duplicate_hyperedge_id",
            Violation::UnknownType { .. } => "unknown_type",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DanglingNode { hyperedge, node } => {
                write!(f, "{}: hyperedge `{hyperedge}` references undeclared node `{node}`", self.code())
            }
            Violation::NegativeWeight { entity } | Violation::NonFiniteWeight { entity } => {
                write!(f, "{}: `{entity}`", self.code())
            }
            Violation::EmptySide { hyperedge, side } => {
                write!(f, "{}: hyperedge `{hyperedge}` has an empty {side}", self.code())
            }
            Violation::OverlappingSides { hyperedge, node } | Violation::RepeatedMember { hyperedge, node } => {
                write!(f, "{}: hyperedge `{hyperedge}`, node `{node}`", self.code())
            }
            Violation::DuplicateNodeId { node } => write!(f, "{}: `{node}`", self.code()),
            Violation::DuplicateHyperedgeId { hyperedge } => write!(f, "{}: `{hyperedge}`", self.code()),
            Violation::UnknownType { node, type_label } => {
                write!(f, "{}: node `{node}` has undeclared type `{type_label}`", self.code())
            }
        }
    }
}

/// A hypergraph `H = (V, E)` with typed nodes.
///
/// Construction never fails; call [`Hypergraph::validate`] to list broken
/// invariants. Node and hyperedge order is preserved as given.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypergraph<T> {
    types: Vec<String>,
    nodes: Vec<Node<T>>,
    hyperedges: Vec<Hyperedge<T>>,
    node_index: HashMap<NodeId, usize>,
}

impl<T: Scalar> Hypergraph<T> {
    pub fn new(types: Vec<String>, nodes: Vec<Node<T>>, hyperedges: Vec<Hyperedge<T>>) -> Self {
        let mut node_index = HashMap::with_capacity(nodes.len());
        for (i, node) in nodes.iter().enumerate() {
            node_index.entry(node.id.clone()).or_insert(i);
        }
        Hypergraph {
            types,
            nodes,
            hyperedges,
            node_index,
        }
    }

    /// Builds a hypergraph whose single type is `"node"` and whose nodes are
    /// every id mentioned by `hyperedges`, with unit weights.
    pub fn from_hyperedges(hyperedges: Vec<Hyperedge<T>>) -> Self {
        let mut seen = HashSet::new();
        let mut nodes = Vec::new();
        for h in &hyperedges {
            for id in h.members() {
                if seen.insert(id.clone()) {
                    nodes.push(Node::new(id.clone(), "node"));
                }
            }
        }
        Hypergraph::new(vec!["node".to_owned()], nodes, hyperedges)
    }

    pub fn types(&self) -> &[String] {
        &self.types
    }

    pub fn nodes(&self) -> &[Node<T>] {
        &self.nodes
    }

    pub fn hyperedges(&self) -> &[Hyperedge<T>] {
        &self.hyperedges
    }

    pub fn node(&self, id: &NodeId) -> Option<&Node<T>> {
        self.node_index.get(id).map(|&i| &self.nodes[i])
    }

    pub fn hyperedge(&self, id: &str) -> Result<&Hyperedge<T>> {
        self.hyperedges
            .iter()
            .find(|h| h.id == id)
            .ok_or_else(|| Error::UnknownHyperedge(id.to_owned()))
    }

    /// Every invariant violation, in a deterministic order. Empty iff valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let types: HashSet<&str> = self.types.iter().map(String::as_str).collect();

        let mut seen_nodes = HashSet::new();
        for node in &self.nodes {
            if !seen_nodes.insert(&node.id) {
                out.push(Violation::DuplicateNodeId {
                    node: node.id.0.clone(),
                });
            }
            if !types.contains(node.type_label.as_str()) {
                out.push(Violation::UnknownType {
                    node: node.id.0.clone(),
                    type_label: node.type_label.clone(),
                });
            }
            check_weight(node.weight, &node.id.0, &mut out);
        }

        let mut seen_edges = HashSet::new();
        for h in &self.hyperedges {
            if !seen_edges.insert(h.id.as_str()) {
                out.push(Violation::DuplicateHyperedgeId {
                    hyperedge: h.id.clone(),
                });
            }
            for (side, members) in [(Side::Tail, &h.tail), (Side::Head, &h.head)] {
                if members.is_empty() {
                    out.push(Violation::EmptySide {
                        hyperedge: h.id.clone(),
                        side,
                    });
                }
                let mut seen = HashSet::new();
                for id in members {
                    if !seen.insert(id) {
                        out.push(Violation::RepeatedMember {
                            hyperedge: h.id.clone(),
                            node: id.0.clone(),
                        });
                    }
                }
            }
            let tail: HashSet<&NodeId> = h.tail.iter().collect();
            for id in &h.head {
                if tail.contains(id) {
                    out.push(Violation::OverlappingSides {
                        hyperedge: h.id.clone(),
                        node: id.0.clone(),
                    });
                }
            }
            let mut reported = HashSet::new();
            for id in h.members() {
                if !self.node_index.contains_key(id) && reported.insert(id) {
                    out.push(Violation::DanglingNode {
                        hyperedge: h.id.clone(),
                        node: id.0.clone(),
                    });
                }
            }
            check_weight(h.weight, &h.id, &mut out);
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// `(deg_in, deg_out) = (|tail|, |head|)` of the named hyperedge.
    pub fn degrees(&self, hyperedge: &str) -> Result<(usize, usize)> {
        let h = self.hyperedge(hyperedge)?;
        Ok((h.tail.len(), h.head.len()))
    }

    /// Largest dimension of a hyperedge cell: `max |tail| + |head| - 1`.
    pub fn dimension(&self) -> Result<usize> {
        self.hyperedges
            .iter()
            .map(|h| (h.tail.len() + h.head.len()).saturating_sub(1))
            .max()
            .ok_or(Error::EmptyHypergraph)
    }
}

fn check_weight<T: Scalar>(w: T, entity: &str, out: &mut Vec<Violation>) {
    if !w.is_finite() {
        out.push(Violation::NonFiniteWeight {
            entity: entity.to_owned(),
        });
    } else if w < T::zero() {
        out.push(Violation::NegativeWeight {
            entity: entity.to_owned(),
        });
    }
}
