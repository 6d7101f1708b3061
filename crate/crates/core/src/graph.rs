//! Graph and multigraph representations plus the line-graph construction.
//!
//! Vertices are dense integer indices; labels are cosmetic metadata.
//! Graphs are immutable after construction and safe to share across
//! workers.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Simple undirected graph: sorted adjacency lists, no loops, no parallel
/// edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    labels: Option<Vec<String>>,
    bipartition: Option<[Vec<u32>; 2]>,
}

impl Graph {
    /// Build from an explicit edge list; rejects loops, duplicate edges and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) out of range for n = {n}"
                )));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!(
                    "parallel edges at vertex {v}"
                )));
            }
        }
        Ok(Graph {
            adj,
            labels: None,
            bipartition: None,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            labels: None,
            bipartition: None,
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(|l| l.len()).sum::<usize>() / 2
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|l| l.len()).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// All edges as (u, v) with u < v, in lexicographic order.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.m());
        for u in 0..self.adj.len() as u32 {
            for &v in &self.adj[u as usize] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::InvalidGraph(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn bipartition(&self) -> Option<&[Vec<u32>; 2]> {
        self.bipartition.as_ref()
    }

    pub fn with_bipartition(mut self, left: Vec<u32>, right: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; self.n()];
        for &v in left.iter().chain(&right) {
            if v as usize >= self.n() || seen[v as usize] {
                return Err(Error::InvalidGraph("bad bipartition".into()));
            }
            seen[v as usize] = true;
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::InvalidGraph("bipartition does not cover V".into()));
        }
        for (u, v) in self.edges() {
            let lu = left.contains(&u);
            let lv = left.contains(&v);
            if lu == lv {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) lies within one side of the claimed bipartition"
                )));
            }
        }
        self.bipartition = Some([left, right]);
        Ok(self)
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n()
    }

    /// Per-vertex adjacency bitmasks; only for graphs with at most 64
    /// vertices (used by the exhaustive subset searches).
    pub fn adjacency_masks(&self) -> Result<Vec<u64>> {
        if self.n() > 64 {
            return Err(Error::StateSpaceCap {
                what: "adjacency bitmasks",
                n: self.n(),
                cap: 64,
            });
        }
        Ok(self
            .adj
            .iter()
            .map(|l| l.iter().fold(0u64, |m, &w| m | (1u64 << w)))
            .collect())
    }

    /// Content hash of the structure (vertex count + sorted edge list +
    /// bipartition), stable across runs.
    pub fn stable_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.n().to_le_bytes());
        for (u, v) in self.edges() {
            h.update(u.to_le_bytes());
            h.update(v.to_le_bytes());
        }
        if let Some([l, r]) = &self.bipartition {
            for &v in l {
                h.update(v.to_le_bytes());
            }
            h.update([0xffu8]);
            for &v in r {
                h.update(v.to_le_bytes());
            }
        }
        let digest = h.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    // --- named constructors used throughout the tests and experiments ---

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n as u32).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves as u32).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges).unwrap()
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..a as u32 {
            for v in 0..b as u32 {
                edges.push((u, a as u32 + v));
            }
        }
        Graph::from_edges(a + b, &edges)
            .unwrap()
            .with_bipartition((0..a as u32).collect(), (a as u32..(a + b) as u32).collect())
            .unwrap()
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            edges.push((i, (i + 1) % 5)); // outer cycle
            edges.push((i, i + 5)); // spokes
            edges.push((5 + i, 5 + (i + 2) % 5)); // inner pentagram
        }
        Graph::from_edges(10, &edges).unwrap()
    }

    /// Disjoint union with vertex indices of `other` shifted up.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let offset = self.n() as u32;
        let mut edges = self.edges();
        edges.extend(other.edges().iter().map(|&(u, v)| (u + offset, v + offset)));
        Graph::from_edges(self.n() + other.n(), &edges).unwrap()
    }

    /// Subgraph keeping only the listed edges (vertex set unchanged).
    pub fn edge_subgraph(&self, keep: &[(u32, u32)]) -> Result<Graph> {
        for &(u, v) in keep {
            if !self.has_edge(u, v) {
                return Err(Error::InvalidGraph(format!("({u},{v}) is not an edge")));
            }
        }
        Graph::from_edges(self.n(), keep)
    }
}

/// Multigraph: parallel edges allowed, loops are not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(u32, u32)>,
}

impl Multigraph {
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        for &(u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) out of range for n = {n}"
                )));
            }
        }
        Ok(Multigraph {
            n,
            edges: edges.to_vec(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn degree(&self, v: u32) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }
}

impl From<&Graph> for Multigraph {
    fn from(g: &Graph) -> Self {
        Multigraph {
            n: g.n(),
            edges: g.edges(),
        }
    }
}

/// Line graph of a multigraph: one vertex per edge of `h`; two vertices are
/// adjacent iff the corresponding distinct edges share an endpoint.
/// Parallel edges of `h` share both endpoints and still generate a single
/// edge, so the result is always simple.
pub fn line_graph(h: &Multigraph) -> Graph {
    let m = h.m();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); m];
    for i in 0..m {
        let (a, b) = h.edges()[i];
        for j in (i + 1)..m {
            let (c, d) = h.edges()[j];
            if a == c || a == d || b == c || b == d {
                adj[i].push(j as u32);
                adj[j].push(i as u32);
            }
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    Graph {
        adj,
        labels: None,
        bipartition: None,
    }
}

// --- JSON schema shared by graphs and multigraphs ---

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    n: usize,
    edges: Vec<(u32, u32)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bipartition: Option<[Vec<u32>; 2]>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    multigraph: bool,
}

impl Graph {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GraphDoc {
            n: self.n(),
            edges: self.edges(),
            labels: self.labels.clone(),
            bipartition: self.bipartition.clone(),
            multigraph: false,
        })
        .expect("graph serialization cannot fail")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let doc: GraphDoc = serde_json::from_value(value.clone())?;
        if doc.multigraph {
            return Err(Error::InvalidGraph(
                "file declares a multigraph; a simple graph is required here".into(),
            ));
        }
        let mut g = Graph::from_edges(doc.n, &doc.edges)?;
        if let Some(labels) = doc.labels {
            g = g.with_labels(labels)?;
        }
        if let Some([l, r]) = doc.bipartition {
            g = g.with_bipartition(l, r)?;
        }
        Ok(g)
    }
}

impl Multigraph {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GraphDoc {
            n: self.n,
            edges: self.edges.clone(),
            labels: None,
            bipartition: None,
            multigraph: true,
        })
        .expect("multigraph serialization cannot fail")
    }

    /// Accepts both simple-graph and multigraph documents.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let doc: GraphDoc = serde_json::from_value(value.clone())?;
        Multigraph::from_edges(doc.n, &doc.edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_parallels() {
        assert!(matches!(
            Graph::from_edges(2, &[(0, 0)]),
            Err(Error::SelfLoop(0))
        ));
        assert!(Graph::from_edges(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Multigraph::from_edges(2, &[(0, 1), (1, 0)]).is_ok());
        assert!(Multigraph::from_edges(2, &[(1, 1)]).is_err());
    }

    #[test]
    fn line_graph_of_path_is_k2() {
        // a-b-c: two edges sharing b
        let h = Multigraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let g = line_graph(&h);
        assert_eq!(g.n(), 2);
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn line_graph_of_claw_is_triangle() {
        let h = Multigraph::from(&Graph::star(3));
        let g = line_graph(&h);
        assert_eq!((g.n(), g.m()), (3, 3));
    }

    #[test]
    fn parallel_edges_generate_a_single_line_edge() {
        let h = Multigraph::from_edges(2, &[(0, 1), (0, 1)]).unwrap();
        let g = line_graph(&h);
        assert_eq!((g.n(), g.m()), (2, 1));
    }

    #[test]
    fn named_graphs_have_expected_counts() {
        assert_eq!(Graph::complete(4).m(), 6);
        assert_eq!(Graph::petersen().m(), 15);
        assert!(Graph::petersen().neighbors(0).len() == 3);
        let k33 = Graph::complete_bipartite(3, 3);
        assert_eq!((k33.n(), k33.m()), (6, 9));
        assert!(k33.bipartition().is_some());
    }

    #[test]
    fn json_roundtrip_preserves_structure() {
        let g = Graph::complete_bipartite(3, 3);
        let v = g.to_json();
        let back = Graph::from_json(&v).unwrap();
        assert_eq!(g, back);
        assert_eq!(g.stable_hash(), back.stable_hash());
    }

    #[test]
    fn bipartition_must_be_proper() {
        let k3 = Graph::complete(3);
        assert!(k3
            .clone()
            .with_bipartition(vec![0], vec![1, 2])
            .is_err());
    }
}
