//! Bottleneck constant, quantified over every point on every geodesic.
//!
//! For a pair `(x, y)` and a point `z` with `d(x,z) + d(z,y) = d(x,y)`, the
//! least `c` such that every `x`–`y` path meets `B(z, c)` equals the widest-path
//! value `max over paths P of min over v ∈ P of d(z, v)`. For a fixed `z` all
//! pairs are resolved at once by adding vertices in decreasing order of
//! `d(z, ·)` to a union–find: two vertices first become connected exactly at
//! their widest-path level.
//!
//! The criterion is usually phrased with `z` the midpoint of `[x, y]`;
//! quantifying over every `z` on the geodesic gives a constant at least as large.

use std::collections::VecDeque;

use serde::Serialize;

use super::{MetricGraph, SizeCaps, Vertex};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BottleneckWitness {
    pub x: Vertex,
    pub y: Vertex,
    pub z: Vertex,
    /// An `x`–`y` path missing `B(z, constant − 1)`.
    pub avoiding_path: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BottleneckReport {
    pub constant: u32,
    pub witness: Option<BottleneckWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasitreeVerdict {
    pub pass: bool,
    pub c_max: u32,
    pub report: BottleneckReport,
}

struct UnionFind {
    parent: Vec<usize>,
    members: Vec<Vec<Vertex>>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            members: vec![Vec::new(); n],
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Merges the sets rooted at `a` and `b` (both roots); small into large.
    fn union(&mut self, a: usize, b: usize) {
        let (big, small) = if self.members[a].len() >= self.members[b].len() { (a, b) } else { (b, a) };
        self.parent[small] = big;
        let moved = std::mem::take(&mut self.members[small]);
        self.members[big].extend(moved);
    }
}

pub fn bottleneck_constant(g: &MetricGraph, caps: SizeCaps) -> Result<BottleneckReport> {
    let n = g.len();
    if n > caps.bottleneck {
        return Err(Error::SizeLimitExceeded {
            operation: "bottleneck_constant",
            vertices: n,
            cap: caps.bottleneck,
        });
    }
    let mut best = 0u32;
    let mut found: Option<(Vertex, Vertex, Vertex)> = None;
    let mut by_level: Vec<Vec<Vertex>> = Vec::new();
    for z in 0..n {
        let dz = g.row(z);
        let ecc = dz.iter().copied().max().unwrap_or(0);
        if ecc <= best {
            continue;
        }
        by_level.clear();
        by_level.resize(ecc as usize + 1, Vec::new());
        for (v, &d) in dz.iter().enumerate() {
            by_level[d as usize].push(v);
        }
        let mut uf = UnionFind::new(n);
        let mut active = vec![false; n];
        'levels: for c in (best + 1..=ecc).rev() {
            for &v in &by_level[c as usize] {
                active[v] = true;
                uf.members[v].push(v);
            }
            for &v in &by_level[c as usize] {
                for &u in g.neighbors(v) {
                    if !active[u] {
                        continue;
                    }
                    let (rv, ru) = (uf.find(v), uf.find(u));
                    if rv == ru {
                        continue;
                    }
                    if let Some((x, y)) = geodesic_pair_through(g, z, &uf.members[rv], &uf.members[ru]) {
                        best = c;
                        found = Some((x, y, z));
                        break 'levels;
                    }
                    uf.union(rv, ru);
                }
            }
        }
    }
    let witness = found.map(|(x, y, z)| BottleneckWitness {
        x,
        y,
        z,
        avoiding_path: avoiding_path(g, x, y, z, best),
    });
    Ok(BottleneckReport { constant: best, witness })
}

fn geodesic_pair_through(g: &MetricGraph, z: Vertex, a: &[Vertex], b: &[Vertex]) -> Option<(Vertex, Vertex)> {
    let dz = g.row(z);
    for &x in a {
        let dx = g.row(x);
        for &y in b {
            if dz[x] + dz[y] == dx[y] {
                return Some((x.min(y), x.max(y)));
            }
        }
    }
    None
}

/// Shortest `x`–`y` path using only vertices at distance ≥ `c` from `z`.
fn avoiding_path(g: &MetricGraph, x: Vertex, y: Vertex, z: Vertex, c: u32) -> Vec<Vertex> {
    let dz = g.row(z);
    let mut parent = vec![usize::MAX; g.len()];
    parent[x] = x;
    let mut queue = VecDeque::from([x]);
    while let Some(u) = queue.pop_front() {
        if u == y {
            break;
        }
        for &v in g.neighbors(u) {
            if parent[v] == usize::MAX && dz[v] >= c {
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    let mut path = vec![y];
    let mut cur = y;
    while cur != x {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

/// Bottleneck test against `c_max`; a failing verdict carries the witness.
pub fn is_quasitree(g: &MetricGraph, c_max: u32, caps: SizeCaps) -> Result<QuasitreeVerdict> {
    let report = bottleneck_constant(g, caps)?;
    Ok(QuasitreeVerdict {
        pass: report.constant <= c_max,
        c_max,
        report,
    })
}

#[cfg(test)]
pub(crate) mod oracle {
    use crate::graph::MetricGraph;

    /// Least `c` such that deleting `B(z, c)` separates or swallows `x`/`y`,
    /// found by trying `c = 0, 1, …` with a fresh search each time.
    pub fn least_cut(g: &MetricGraph, x: usize, y: usize, z: usize) -> u32 {
        let mut c = 0;
        loop {
            let dz = g.row(z);
            if dz[x] <= c || dz[y] <= c {
                return c;
            }
            let reach = g.graph().bfs_within(x, |v| dz[v] > c);
            if reach[y] == super::super::UNREACHED {
                return c;
            }
            c += 1;
        }
    }

    pub fn bottleneck(g: &MetricGraph) -> u32 {
        let n = g.len();
        let mut best = 0;
        for x in 0..n {
            for y in x + 1..n {
                for z in 0..n {
                    if g.on_geodesic(x, z, y) {
                        best = best.max(least_cut(g, x, y, z));
                    }
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn caps() -> SizeCaps {
        SizeCaps::default()
    }

    #[test]
    fn paths_have_constant_zero() {
        for n in 1..8 {
            let g = path(n);
            let r = bottleneck_constant(&g, caps()).unwrap();
            assert_eq!(r.constant, 0);
            assert!(r.witness.is_none());
        }
    }

    #[test]
    fn ladder_p6_p2_is_one() {
        let g = grid(2, 6);
        assert_eq!(oracle::bottleneck(&g), 1);
        assert_eq!(bottleneck_constant(&g, caps()).unwrap().constant, 1);
    }

    #[test]
    fn cycle12_is_three() {
        let g = cycle(12);
        assert_eq!(oracle::bottleneck(&g), 3);
        assert_eq!(bottleneck_constant(&g, caps()).unwrap().constant, 3);
    }

    #[test]
    fn agrees_with_oracle_on_assorted_graphs() {
        let mut graphs = vec![cycle(5), cycle(8), grid(3, 3), grid(3, 5), star(4)];
        // theta graph: two vertices joined by three paths of length 3
        graphs.push(
            MetricGraph::from_edges(
                (0..8).map(|i| i.to_string()),
                [(0, 2), (2, 3), (3, 1), (0, 4), (4, 5), (5, 1), (0, 6), (6, 7), (7, 1)],
            )
            .unwrap(),
        );
        for g in graphs {
            assert_eq!(bottleneck_constant(&g, caps()).unwrap().constant, oracle::bottleneck(&g));
        }
    }

    #[test]
    fn witness_is_tight() {
        let g = cycle(12);
        let r = bottleneck_constant(&g, caps()).unwrap();
        let w = r.witness.unwrap();
        assert!(g.on_geodesic(w.x, w.z, w.y));
        assert_eq!(oracle::least_cut(&g, w.x, w.y, w.z), r.constant);
        let path = &w.avoiding_path;
        assert_eq!((path[0], *path.last().unwrap()), (w.x, w.y));
        for pair in path.windows(2) {
            assert!(g.has_edge(pair[0], pair[1]));
        }
        // the path misses B(z, C − 1)
        assert!(path.iter().all(|&v| g.dist(w.z, v) >= r.constant));
    }

    #[test]
    fn quasitree_verdicts() {
        assert!(is_quasitree(&star(5), 0, caps()).unwrap().pass);
        assert!(is_quasitree(&grid(2, 6), 1, caps()).unwrap().pass);
        let grid8 = grid(8, 8);
        let v = is_quasitree(&grid8, 1, caps()).unwrap();
        assert!(!v.pass);
        assert!(v.report.witness.is_some());
        assert_eq!(v.report.constant, oracle::bottleneck(&grid8));
    }

    #[test]
    fn grid_family_is_monotone() {
        let constants: Vec<u32> = (3..=8)
            .map(|n| bottleneck_constant(&grid(n, n), caps()).unwrap().constant)
            .collect();
        assert!(constants.windows(2).all(|w| w[0] <= w[1]), "{constants:?}");
    }

    #[test]
    fn cap_refuses() {
        assert!(bottleneck_constant(&path(12), SizeCaps::uniform(11)).unwrap_err().is_size_refusal());
    }
}
