//! Finite simple graphs viewed as geodesic metric spaces (all edges length 1).
//!
//! [`SimpleGraph`] is the mutable-while-building adjacency structure and may be
//! disconnected. [`MetricGraph`] freezes a connected graph together with its
//! full distance table; every metric computation in the crate runs on it.

mod bottleneck;
mod ends;
mod geodesics;
mod hyperbolicity;

pub use bottleneck::{bottleneck_constant, is_quasitree, BottleneckReport, BottleneckWitness, QuasitreeVerdict};
pub use ends::{ends_profile, ends_series, EndsProfile};
pub use geodesics::{enumerate_geodesics, Geodesics};
pub use hyperbolicity::{hyperbolicity_delta, HyperbolicityReport, Quadruple};

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

/// Vertices are addressed by their position in the id list.
pub type Vertex = usize;

/// Distance marker for "not reached" during breadth-first search.
pub(crate) const UNREACHED: u32 = u32::MAX;

/// Default vertex cap for the O(n⁴) four-point scan.
pub const DEFAULT_DELTA_CAP: usize = 200;
/// Default vertex cap for the exhaustive bottleneck search.
pub const DEFAULT_BOTTLENECK_CAP: usize = 500;
/// Environment variable overriding every size cap.
pub const MAX_VERTICES_ENV: &str = "QTLAB_MAX_VERTICES";

/// Vertex caps for the exhaustive scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeCaps {
    pub delta: usize,
    pub bottleneck: usize,
}

impl Default for SizeCaps {
    fn default() -> Self {
        SizeCaps {
            delta: DEFAULT_DELTA_CAP,
            bottleneck: DEFAULT_BOTTLENECK_CAP,
        }
    }
}

impl SizeCaps {
    /// Same cap for every scan.
    pub fn uniform(cap: usize) -> Self {
        SizeCaps {
            delta: cap,
            bottleneck: cap,
        }
    }

    /// Defaults, overridden by `QTLAB_MAX_VERTICES` when it parses.
    pub fn from_env() -> Self {
        match std::env::var(MAX_VERTICES_ENV).ok().and_then(|s| s.trim().parse().ok()) {
            Some(cap) => SizeCaps::uniform(cap),
            None => SizeCaps::default(),
        }
    }
}

/// Undirected simple graph with opaque string vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    ids: Vec<String>,
    index: HashMap<String, Vertex>,
    adj: Vec<Vec<Vertex>>,
}

impl SimpleGraph {
    pub fn new<I, S>(ids: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(id.clone()));
            }
        }
        let adj = vec![Vec::new(); ids.len()];
        Ok(SimpleGraph { ids, index, adj })
    }

    pub fn from_edges<I, S, E>(ids: I, edges: E) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
        E: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = SimpleGraph::new(ids)?;
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds `{u, v}`; loops and repeated edges are rejected.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        let n = self.len();
        if u >= n {
            return Err(Error::VertexNotFound(format!("#{u}")));
        }
        if v >= n {
            return Err(Error::VertexNotFound(format!("#{v}")));
        }
        if u == v {
            return Err(Error::SelfLoop(self.ids[u].clone()));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Err(Error::DuplicateEdge(self.ids[u].clone(), self.ids[v].clone())),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                Ok(())
            }
        }
    }

    /// Adds `{u, v}` unless it is already present. Returns whether it was new.
    pub fn ensure_edge(&mut self, u: Vertex, v: Vertex) -> Result<bool> {
        if u != v && u < self.len() && v < self.len() && self.has_edge(u, v) {
            return Ok(false);
        }
        self.add_edge(u, v).map(|_| true)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, v: Vertex) -> &str {
        &self.ids[v]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<Vertex> {
        self.index.get(id).copied()
    }

    /// Index of `id`, or `VertexNotFound`.
    pub fn vertex(&self, id: &str) -> Result<Vertex> {
        self.index_of(id).ok_or_else(|| Error::VertexNotFound(id.to_string()))
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nbrs) in self.adj.iter().enumerate() {
            for &v in nbrs {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Breadth-first distances from `source`; `UNREACHED` marks other components.
    pub(crate) fn bfs(&self, source: Vertex) -> Vec<u32> {
        self.bfs_within(source, |_| true)
    }

    /// Breadth-first distances using only vertices accepted by `allowed`.
    pub(crate) fn bfs_within(&self, source: Vertex, allowed: impl Fn(Vertex) -> bool) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.len()];
        if !allowed(source) {
            return dist;
        }
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let next = dist[u] + 1;
            for &v in &self.adj[u] {
                if dist[v] == UNREACHED && allowed(v) {
                    dist[v] = next;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Component label per vertex, labels assigned in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.len()];
        let mut next = 0;
        for s in 0..self.len() {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in &self.adj[u] {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Induced subgraph on `keep` (in the given order).
    pub fn induced(&self, keep: &[Vertex]) -> SimpleGraph {
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let mut adj = vec![Vec::new(); keep.len()];
        for (i, &v) in keep.iter().enumerate() {
            adj[i] = self.adj[v]
                .iter()
                .filter_map(|&w| (pos[w] != usize::MAX).then_some(pos[w]))
                .collect();
            adj[i].sort_unstable();
        }
        let ids: Vec<String> = keep.iter().map(|&v| self.ids[v].clone()).collect();
        let index = ids.iter().cloned().enumerate().map(|(i, id)| (id, i)).collect();
        SimpleGraph { ids, index, adj }
    }
}

/// A connected simple graph with its complete path-metric table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricGraph {
    graph: SimpleGraph,
    dist: Vec<u32>,
    boundary: Vec<Vertex>,
}

/// Fills the distance table by breadth-first search from every vertex.
pub fn all_pairs_distances(graph: SimpleGraph) -> Result<MetricGraph> {
    MetricGraph::new(graph)
}

impl MetricGraph {
    pub fn new(graph: SimpleGraph) -> Result<Self> {
        let n = graph.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut dist = vec![0u32; n * n];
        for s in 0..n {
            let row = graph.bfs(s);
            if let Some(t) = row.iter().position(|&d| d == UNREACHED) {
                return Err(Error::DisconnectedGraph(graph.id(s).to_string(), graph.id(t).to_string()));
            }
            dist[s * n..(s + 1) * n].copy_from_slice(&row);
        }
        Ok(MetricGraph {
            graph,
            dist,
            boundary: Vec::new(),
        })
    }

    pub fn from_edges<I, S, E>(ids: I, edges: E) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
        E: IntoIterator<Item = (Vertex, Vertex)>,
    {
        MetricGraph::new(SimpleGraph::from_edges(ids, edges)?)
    }

    /// Marks truncation-frontier vertices. Duplicates are dropped; order is sorted.
    pub fn with_boundary(mut self, mut boundary: Vec<Vertex>) -> Self {
        boundary.retain(|&v| v < self.len());
        boundary.sort_unstable();
        boundary.dedup();
        self.boundary = boundary;
        self
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn into_graph(self) -> SimpleGraph {
        self.graph
    }

    pub fn boundary(&self) -> &[Vertex] {
        &self.boundary
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn id(&self, v: Vertex) -> &str {
        self.graph.id(v)
    }

    pub fn index_of(&self, id: &str) -> Option<Vertex> {
        self.graph.index_of(id)
    }

    pub fn vertex(&self, id: &str) -> Result<Vertex> {
        self.graph.vertex(id)
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        self.graph.neighbors(v)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.graph.has_edge(u, v)
    }

    #[inline]
    pub fn dist(&self, u: Vertex, v: Vertex) -> u32 {
        self.dist[u * self.len() + v]
    }

    /// Distances from `u` to every vertex.
    #[inline]
    pub fn row(&self, u: Vertex) -> &[u32] {
        let n = self.len();
        &self.dist[u * n..(u + 1) * n]
    }

    /// A connected graph with n − 1 edges.
    pub fn is_tree(&self) -> bool {
        self.graph.edge_count() + 1 == self.len()
    }

    pub fn eccentricity(&self, v: Vertex) -> u32 {
        self.row(v).iter().copied().max().unwrap_or(0)
    }

    pub fn diameter(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    /// Membership mask of the closed ball `B(center, radius)`.
    pub fn ball(&self, center: Vertex, radius: u32) -> Vec<bool> {
        self.row(center).iter().map(|&d| d <= radius).collect()
    }

    /// Whether `z` lies on some geodesic from `x` to `y`.
    #[inline]
    pub fn on_geodesic(&self, x: Vertex, z: Vertex, y: Vertex) -> bool {
        self.dist(x, z) + self.dist(z, y) == self.dist(x, y)
    }

    /// Gromov product `(x·y)_w` doubled, so it stays an integer.
    #[inline]
    pub fn twice_gromov_product(&self, x: Vertex, y: Vertex, w: Vertex) -> i64 {
        self.dist(x, w) as i64 + self.dist(y, w) as i64 - self.dist(x, y) as i64
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn path_distances() {
        let g = path(3);
        assert_eq!(g.dist(0, 2), 2);
        assert_eq!(g.dist(2, 0), 2);
        assert_eq!(g.dist(1, 1), 0);
    }

    #[test]
    fn cycle_antipodal_distance() {
        let g = cycle(4);
        assert_eq!(g.dist(0, 2), 2);
        assert_eq!(g.dist(1, 3), 2);
    }

    #[test]
    fn star_leaf_distances() {
        let g = star(3);
        for (a, b) in [(1, 2), (1, 3), (2, 3)] {
            assert_eq!(g.dist(a, b), 2);
        }
    }

    #[test]
    fn disconnected_graph_names_two_vertices() {
        let err = MetricGraph::from_edges(["a", "b", "c"], [(0, 1)]).unwrap_err();
        assert_eq!(err, Error::DisconnectedGraph("a".into(), "c".into()));
    }

    #[test]
    fn empty_graph_rejected() {
        let err = MetricGraph::from_edges(Vec::<String>::new(), []).unwrap_err();
        assert_eq!(err, Error::EmptyGraph);
    }

    #[test]
    fn loops_and_duplicates_rejected() {
        let mut g = SimpleGraph::new(["a", "b"]).unwrap();
        assert_eq!(g.add_edge(0, 0), Err(Error::SelfLoop("a".into())));
        g.add_edge(0, 1).unwrap();
        assert_eq!(g.add_edge(1, 0), Err(Error::DuplicateEdge("b".into(), "a".into())));
        assert!(matches!(SimpleGraph::new(["a", "a"]), Err(Error::DuplicateVertex(_))));
    }

    #[test]
    fn distance_one_iff_edge() {
        let g = grid(4, 5);
        for u in 0..g.len() {
            for v in 0..g.len() {
                assert_eq!(g.dist(u, v) == 1, g.has_edge(u, v));
            }
        }
    }

    #[test]
    fn triangle_inequality_on_fixtures() {
        for g in [grid(5, 5), cycle(17), star(9), path(30)] {
            let n = g.len();
            for u in 0..n {
                for v in 0..n {
                    for w in 0..n {
                        assert!(g.dist(u, w) <= g.dist(u, v) + g.dist(v, w));
                    }
                }
            }
        }
    }

    #[test]
    fn induced_subgraph_keeps_order_and_edges() {
        let g = cycle(6);
        let h = g.graph().induced(&[4, 5, 0]);
        assert_eq!(h.ids(), &["4".to_string(), "5".into(), "0".into()]);
        assert_eq!(h.edges(), vec![(0, 1), (1, 2)]);
    }
}
