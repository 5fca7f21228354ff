//! Finite multigraphs, their oriented edges and directed edge matrices.
//!
//! Oriented edges are indexed by ascending edge id, with the forward
//! orientation (src to dst) before the backward one. Loops yield two
//! distinct orientations.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub id: u32,
    pub src: u32,
    pub dst: u32,
}

/// A connected undirected multigraph. Loops and parallel edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct FiniteGraph {
    vertices: Vec<u32>,
    edges: Vec<Edge>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    vertices: Vec<u32>,
    edges: Vec<Edge>,
}

impl TryFrom<RawGraph> for FiniteGraph {
    type Error = Error;
    fn try_from(r: RawGraph) -> Result<Self> {
        FiniteGraph::new(r.vertices, r.edges)
    }
}

impl From<FiniteGraph> for RawGraph {
    fn from(g: FiniteGraph) -> Self {
        RawGraph { vertices: g.vertices, edges: g.edges }
    }
}

impl FiniteGraph {
    /// Validates ids and connectivity. Edges are kept sorted by id.
    pub fn new(vertices: Vec<u32>, mut edges: Vec<Edge>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        let vset: BTreeSet<u32> = vertices.iter().copied().collect();
        if vset.len() != vertices.len() {
            return Err(Error::InvalidGraph("duplicate vertex id".into()));
        }
        edges.sort_by_key(|e| e.id);
        for w in edges.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::InvalidGraph(format!("duplicate edge id {}", w[0].id)));
            }
        }
        for e in &edges {
            if !vset.contains(&e.src) || !vset.contains(&e.dst) {
                return Err(Error::InvalidGraph(format!(
                    "edge {} references a missing vertex",
                    e.id
                )));
            }
        }
        let g = Self { vertices, edges };
        if !g.is_connected() {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// First Betti number #edges − #vertices + 1 (the graph is connected).
    pub fn betti_number(&self) -> i64 {
        self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: u32) -> usize {
        self.edges
            .iter()
            .map(|e| (e.src == v) as usize + (e.dst == v) as usize)
            .sum()
    }

    fn is_connected(&self) -> bool {
        let mut adj: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for e in &self.edges {
            adj.entry(e.src).or_default().push(e.dst);
            adj.entry(e.dst).or_default().push(e.src);
        }
        let mut seen = BTreeSet::from([self.vertices[0]]);
        let mut stack = vec![self.vertices[0]];
        while let Some(v) = stack.pop() {
            for &w in adj.get(&v).into_iter().flatten() {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// Oriented edges in index order.
    pub fn oriented_edges(&self) -> Vec<OrientedEdge> {
        self.edges
            .iter()
            .flat_map(|e| {
                [
                    OrientedEdge { edge: e.id, forward: true, source: e.src, target: e.dst },
                    OrientedEdge { edge: e.id, forward: false, source: e.dst, target: e.src },
                ]
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrientedEdge {
    pub edge: u32,
    pub forward: bool,
    pub source: u32,
    pub target: u32,
}

impl OrientedEdge {
    pub fn reversed(&self) -> Self {
        Self { edge: self.edge, forward: !self.forward, source: self.target, target: self.source }
    }
}

/// A 0/1 matrix indexed by oriented edges, together with its labeling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeMatrix {
    pub labels: Vec<OrientedEdge>,
    pub matrix: BinaryMatrix,
}

impl EdgeMatrix {
    pub fn size(&self) -> usize {
        self.matrix.size()
    }

    /// Index of the reversed orientation of index i.
    pub fn reversal(&self, i: usize) -> usize {
        let l = self.labels[i];
        self.labels
            .iter()
            .position(|m| m.edge == l.edge && m.forward != l.forward)
            .expect("every oriented edge has a reversal")
    }

    /// The reversal involution as a permutation of indices.
    pub fn reversal_map(&self) -> Vec<usize> {
        (0..self.size()).map(|i| self.reversal(i)).collect()
    }
}

impl std::ops::Deref for EdgeMatrix {
    type Target = BinaryMatrix;
    fn deref(&self) -> &BinaryMatrix {
        &self.matrix
    }
}

/// The non-backtracking transition matrix on oriented edges.
pub fn directed_edge_matrix(g: &FiniteGraph) -> Result<EdgeMatrix> {
    if g.edges.is_empty() {
        return Err(Error::InvalidGraph("graph has no edges".into()));
    }
    let labels = g.oriented_edges();
    // Index 2k and 2k+1 are the two orientations of the k-th edge.
    let matrix = BinaryMatrix::from_fn(labels.len(), |i, j| {
        labels[i].target == labels[j].source && j != (i ^ 1)
    });
    Ok(EdgeMatrix { labels, matrix })
}

/// The transition matrix of the free group on g generators, indexed
/// γ_1..γ_g, γ_1^{-1}..γ_g^{-1}: A_ij = 1 iff |i − j| ≠ g.
pub fn cayley_schottky_matrix(g: usize) -> Result<EdgeMatrix> {
    if g == 0 {
        return Err(Error::InvalidRank("rank must be at least 1".into()));
    }
    let labels = (0..2 * g)
        .map(|i| OrientedEdge { edge: (i % g) as u32, forward: i < g, source: 0, target: 0 })
        .collect();
    let matrix = BinaryMatrix::from_fn(2 * g, |i, j| i.abs_diff(j) != g);
    Ok(EdgeMatrix { labels, matrix })
}

fn edges_from(pairs: &[(u32, u32)]) -> Vec<Edge> {
    pairs
        .iter()
        .enumerate()
        .map(|(i, &(src, dst))| Edge { id: i as u32, src, dst })
        .collect()
}

/// One vertex carrying `g` loops.
pub fn rose(g: usize) -> FiniteGraph {
    FiniteGraph::new(vec![0], edges_from(&vec![(0, 0); g])).expect("rose is valid")
}

pub fn theta_graph() -> FiniteGraph {
    FiniteGraph::new(vec![0, 1], edges_from(&[(0, 1), (0, 1), (0, 1)])).expect("theta is valid")
}

/// Two loops joined by a bridge.
pub fn dumbbell_graph() -> FiniteGraph {
    FiniteGraph::new(vec![0, 1], edges_from(&[(0, 0), (0, 1), (1, 1)])).expect("dumbbell is valid")
}

/// The three combinatorial types of genus-2 dual graphs: rose, theta, dumbbell.
pub fn genus2_catalog() -> Vec<FiniteGraph> {
    vec![rose(2), theta_graph(), dumbbell_graph()]
}

/// Theta graph with 2r+1 vertices inserted on each of its three edges.
/// `r = 0` returns the plain theta graph.
pub fn kato_graph(r: u32) -> FiniteGraph {
    if r == 0 {
        return theta_graph();
    }
    let inner = 2 * r + 1;
    let mut vertices = vec![0, 1];
    let mut pairs = Vec::new();
    let mut next = 2;
    for _ in 0..3 {
        let mut prev = 0;
        for _ in 0..inner {
            vertices.push(next);
            pairs.push((prev, next));
            prev = next;
            next += 1;
        }
        pairs.push((prev, 1));
    }
    FiniteGraph::new(vertices, edges_from(&pairs)).expect("kato graph is valid")
}
