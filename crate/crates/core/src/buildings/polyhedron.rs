use serde::{Deserialize, Serialize};

use super::bipartite::{BipartiteGraph, LinkGraph};
use super::presentation::PolygonalPresentation;
use crate::error::{Error, Result};

/// Square (or k-gonal) complex assembled from a presentation: one k-gon per
/// rotation orbit, sides with equal labels identified preserving
/// orientation. Each letter is one edge, running from its tail to its head.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polyhedron {
    k: usize,
    letters: Vec<String>,
    white: Vec<String>,
    faces: Vec<Vec<usize>>,
    /// Vertex of each edge end: 2x is the tail of x, 2x + 1 its head.
    end_vertex: Vec<usize>,
    vertices: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyhedronCounts {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub fn polyhedron_from_presentation(p: &PolygonalPresentation) -> Result<Polyhedron> {
    if !p.is_rotation_closed() {
        return Err(Error::PresentationInvalid("tuple set is not closed under rotation".into()));
    }
    if let Some(t) = p.uniqueness_violations().first() {
        return Err(Error::PresentationInvalid(format!(
            "third letter is not determined by the first two in {:?}",
            p.labels(t)
        )));
    }
    if !p.lambda_is_injective() {
        return Err(Error::PresentationInvalid("λ is not injective".into()));
    }
    let n = p.alphabet().len();
    let k = p.k();
    let faces = p.words();
    let mut parent: Vec<usize> = (0..2 * n).collect();
    for w in &faces {
        for j in 0..k {
            // The corner after side w[j]: head of w[j] meets tail of w[j+1].
            let (a, b) = (find(&mut parent, 2 * w[j] + 1), find(&mut parent, 2 * w[(j + 1) % k]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut label = vec![usize::MAX; 2 * n];
    let mut end_vertex = vec![0; 2 * n];
    let mut vertices = 0;
    for e in 0..2 * n {
        let r = find(&mut parent, e);
        if label[r] == usize::MAX {
            label[r] = vertices;
            vertices += 1;
        }
        end_vertex[e] = label[r];
    }
    Ok(Polyhedron {
        k,
        letters: p.alphabet().to_vec(),
        white: (0..n).map(|i| p.lambda(i).to_string()).collect(),
        faces,
        end_vertex,
        vertices,
    })
}

impl Polyhedron {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn counts(&self) -> PolyhedronCounts {
        PolyhedronCounts { vertices: self.vertices, edges: self.letters.len(), faces: self.faces.len() }
    }

    pub fn faces(&self) -> Vec<Vec<String>> {
        self.faces
            .iter()
            .map(|f| f.iter().map(|&i| self.letters[i].clone()).collect())
            .collect()
    }

    /// (tail vertex, head vertex) of the edge labelled by letter i.
    pub fn endpoints(&self, i: usize) -> (usize, usize) {
        (self.end_vertex[2 * i], self.end_vertex[2 * i + 1])
    }
}

/// Links by corner walking: the corner of a face between sides x and x'
/// lies at the head of x and contributes the link edge {x', λ(x)}.
pub fn vertex_links(x: &Polyhedron) -> Vec<LinkGraph> {
    let n = x.letters.len();
    let mut black: Vec<Vec<usize>> = vec![Vec::new(); x.vertices];
    let mut white: Vec<Vec<usize>> = vec![Vec::new(); x.vertices];
    for i in 0..n {
        black[x.end_vertex[2 * i]].push(i);
        white[x.end_vertex[2 * i + 1]].push(i);
    }
    let position = |list: &[usize], i: usize| list.iter().position(|&j| j == i).expect("end at vertex");
    let mut edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); x.vertices];
    for w in &x.faces {
        for j in 0..x.k {
            let (a, b) = (w[j], w[(j + 1) % x.k]);
            let v = x.end_vertex[2 * a + 1];
            edges[v].push((position(&black[v], b), position(&white[v], a)));
        }
    }
    (0..x.vertices)
        .map(|v| {
            BipartiteGraph::new(
                black[v].iter().map(|&i| x.letters[i].clone()).collect(),
                white[v].iter().map(|&i| x.white[i].clone()).collect(),
                std::mem::take(&mut edges[v]),
            )
            .expect("link indices are in range")
        })
        .collect()
}
