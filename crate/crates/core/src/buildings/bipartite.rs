use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite bipartite multigraph with labelled black and white vertices.
///
/// Vertex links of polyhedra are values of this type; the black vertices
/// are the outgoing edge ends and the white vertices the incoming ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawBipartite", into = "RawBipartite")]
pub struct BipartiteGraph {
    black: Vec<String>,
    white: Vec<String>,
    /// (black index, white index), sorted; repeats encode multiple edges.
    edges: Vec<(usize, usize)>,
}

pub type LinkGraph = BipartiteGraph;

#[derive(Serialize, Deserialize)]
struct RawBipartite {
    black: Vec<String>,
    white: Vec<String>,
    edges: Vec<(String, String)>,
}

impl TryFrom<RawBipartite> for BipartiteGraph {
    type Error = Error;

    fn try_from(raw: RawBipartite) -> Result<Self> {
        BipartiteGraph::from_labels(raw.black, raw.white, &raw.edges)
    }
}

impl From<BipartiteGraph> for RawBipartite {
    fn from(g: BipartiteGraph) -> Self {
        let edges = g.edge_labels();
        RawBipartite { black: g.black, white: g.white, edges }
    }
}

fn index_labels(labels: &[String], colour: &str) -> Result<HashMap<String, usize>> {
    let mut map = HashMap::new();
    for (i, l) in labels.iter().enumerate() {
        if map.insert(l.clone(), i).is_some() {
            return Err(Error::InvalidGraph(format!("duplicate {colour} vertex {l}")));
        }
    }
    Ok(map)
}

impl BipartiteGraph {
    pub fn new(black: Vec<String>, white: Vec<String>, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        index_labels(&black, "black")?;
        index_labels(&white, "white")?;
        if let Some(&(b, w)) = edges.iter().find(|&&(b, w)| b >= black.len() || w >= white.len()) {
            return Err(Error::InvalidGraph(format!("edge ({b}, {w}) references a missing vertex")));
        }
        edges.sort_unstable();
        Ok(Self { black, white, edges })
    }

    pub fn from_labels(black: Vec<String>, white: Vec<String>, edges: &[(String, String)]) -> Result<Self> {
        let bi = index_labels(&black, "black")?;
        let wi = index_labels(&white, "white")?;
        let idx = edges
            .iter()
            .map(|(b, w)| match (bi.get(b), wi.get(w)) {
                (Some(&b), Some(&w)) => Ok((b, w)),
                _ => Err(Error::InvalidGraph(format!("edge ({b}, {w}) references a missing vertex"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(black, white, idx)
    }

    /// K_{m,n} on the given labels.
    pub fn complete(black: Vec<String>, white: Vec<String>) -> Result<Self> {
        let edges = (0..black.len())
            .flat_map(|b| (0..white.len()).map(move |w| (b, w)))
            .collect();
        Self::new(black, white, edges)
    }

    pub fn black(&self) -> &[String] {
        &self.black
    }

    pub fn white(&self) -> &[String] {
        &self.white
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_labels(&self) -> Vec<(String, String)> {
        self.edges
            .iter()
            .map(|&(b, w)| (self.black[b].clone(), self.white[w].clone()))
            .collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.black.len() + self.white.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn multiplicities(&self) -> BTreeMap<(usize, usize), usize> {
        let mut m = BTreeMap::new();
        for &e in &self.edges {
            *m.entry(e).or_insert(0) += 1;
        }
        m
    }

    /// Every black–white pair joined by exactly one edge.
    pub fn is_complete_bipartite(&self) -> bool {
        let m = self.multiplicities();
        m.len() == self.black.len() * self.white.len() && m.values().all(|&c| c == 1)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let nb = self.black.len();
        let mut adj = vec![Vec::new(); n];
        for &(b, w) in &self.edges {
            adj[b].push(nb + w);
            adj[nb + w].push(b);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Colour-preserving isomorphism respecting edge multiplicities, as
    /// (black map, white map), found by backtracking.
    pub fn isomorphism(&self, other: &Self) -> Option<(Vec<usize>, Vec<usize>)> {
        let (nb, nw) = (self.black.len(), self.white.len());
        if nb != other.black.len() || nw != other.white.len() || self.edges.len() != other.edges.len() {
            return None;
        }
        let mut a = vec![vec![0usize; nw]; nb];
        let mut b = vec![vec![0usize; nw]; nb];
        for &(x, y) in &self.edges {
            a[x][y] += 1;
        }
        for &(x, y) in &other.edges {
            b[x][y] += 1;
        }
        let degrees = |m: &Vec<Vec<usize>>| -> (Vec<usize>, Vec<usize>) {
            let bd = m.iter().map(|r| r.iter().sum()).collect();
            let wd = (0..nw).map(|j| m.iter().map(|r| r[j]).sum()).collect();
            (bd, wd)
        };
        let (abd, awd) = degrees(&a);
        let (bbd, bwd) = degrees(&b);
        let mut sb = abd.clone();
        let mut tb = bbd.clone();
        sb.sort_unstable();
        tb.sort_unstable();
        let mut sw = awd.clone();
        let mut tw = bwd.clone();
        sw.sort_unstable();
        tw.sort_unstable();
        if sb != tb || sw != tw {
            return None;
        }

        struct Search<'a> {
            a: &'a [Vec<usize>],
            b: &'a [Vec<usize>],
            abd: &'a [usize],
            bbd: &'a [usize],
            awd: &'a [usize],
            bwd: &'a [usize],
            pb: Vec<Option<usize>>,
            pw: Vec<Option<usize>>,
            used_b: Vec<bool>,
            used_w: Vec<bool>,
        }

        impl Search<'_> {
            // Vertices are assigned blacks first, then whites.
            fn go(&mut self, pos: usize) -> bool {
                let nb = self.pb.len();
                if pos == nb + self.pw.len() {
                    return true;
                }
                if pos < nb {
                    for t in 0..nb {
                        if self.used_b[t] || self.abd[pos] != self.bbd[t] {
                            continue;
                        }
                        self.pb[pos] = Some(t);
                        self.used_b[t] = true;
                        if self.go(pos + 1) {
                            return true;
                        }
                        self.used_b[t] = false;
                        self.pb[pos] = None;
                    }
                    false
                } else {
                    let w = pos - nb;
                    for t in 0..self.pw.len() {
                        if self.used_w[t] || self.awd[w] != self.bwd[t] {
                            continue;
                        }
                        let ok = (0..nb).all(|x| self.a[x][w] == self.b[self.pb[x].unwrap()][t]);
                        if !ok {
                            continue;
                        }
                        self.pw[w] = Some(t);
                        self.used_w[t] = true;
                        if self.go(pos + 1) {
                            return true;
                        }
                        self.used_w[t] = false;
                        self.pw[w] = None;
                    }
                    false
                }
            }
        }

        let mut s = Search {
            a: &a,
            b: &b,
            abd: &abd,
            bbd: &bbd,
            awd: &awd,
            bwd: &bwd,
            pb: vec![None; nb],
            pw: vec![None; nw],
            used_b: vec![false; nb],
            used_w: vec![false; nw],
        };
        if s.go(0) {
            Some((
                s.pb.into_iter().map(Option::unwrap).collect(),
                s.pw.into_iter().map(Option::unwrap).collect(),
            ))
        } else {
            None
        }
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.isomorphism(other).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(prefix: &str, n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }

    #[test]
    fn complete_graphs() {
        let k = BipartiteGraph::complete(labels("x", 3), labels("y", 2)).unwrap();
        assert!(k.is_complete_bipartite() && k.is_connected());
        assert_eq!(k.edge_count(), 6);
        let path = BipartiteGraph::new(labels("x", 2), labels("y", 2), vec![(0, 0), (0, 1), (1, 0)]).unwrap();
        assert!(!path.is_complete_bipartite() && path.is_connected());
        let doubled = BipartiteGraph::new(labels("x", 1), labels("y", 1), vec![(0, 0), (0, 0)]).unwrap();
        assert!(!doubled.is_complete_bipartite());
    }

    #[test]
    fn isomorphism_search() {
        // Paths x1-y1-x2-y2 and x2-y2-x1-y1 with different labelling.
        let p = BipartiteGraph::new(labels("x", 2), labels("y", 2), vec![(0, 0), (1, 0), (1, 1)]).unwrap();
        let q = BipartiteGraph::new(labels("u", 2), labels("v", 2), vec![(1, 1), (0, 1), (0, 0)]).unwrap();
        let (pb, pw) = p.isomorphism(&q).unwrap();
        for &(b, w) in p.edges() {
            assert!(q.edges().contains(&(pb[b], pw[w])));
        }
        let star = BipartiteGraph::new(labels("x", 2), labels("y", 2), vec![(0, 0), (0, 1), (1, 1)]).unwrap();
        let other = BipartiteGraph::new(labels("x", 2), labels("y", 2), vec![(0, 0), (0, 1), (1, 0)]).unwrap();
        assert!(star.is_isomorphic(&other));
        let k22 = BipartiteGraph::complete(labels("x", 2), labels("y", 2)).unwrap();
        assert!(!k22.is_isomorphic(&star));
    }

    #[test]
    fn serde_uses_labels() {
        let g = BipartiteGraph::new(labels("x", 2), labels("y", 1), vec![(1, 0)]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert!(s.contains(r#"["x2","y1"]"#));
        let back: BipartiteGraph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<BipartiteGraph>(r#"{"black":["a"],"white":["b"],"edges":[["a","c"]]}"#).is_err());
    }
}
