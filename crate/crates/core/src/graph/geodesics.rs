use serde::Serialize;

use super::{MetricGraph, Vertex};
use crate::error::{Error, Result};

/// Geodesic vertex sequences in lexicographic (vertex index) order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Geodesics {
    pub paths: Vec<Vec<Vertex>>,
    /// More geodesics exist than `cap`.
    pub overflow: bool,
}

/// All geodesics from `u` to `v`, at most `cap` of them.
pub fn enumerate_geodesics(g: &MetricGraph, u: Vertex, v: Vertex, cap: usize) -> Result<Geodesics> {
    for w in [u, v] {
        if w >= g.len() {
            return Err(Error::VertexNotFound(format!("#{w}")));
        }
    }
    let cap = cap.max(1);
    let dv = g.row(v);
    let mut paths = Vec::new();
    let mut overflow = false;
    let mut current = vec![u];
    // Iterative DFS: each frame remembers which neighbor to try next.
    let mut next_child = vec![0usize];
    while let Some(&cur) = current.last() {
        if cur == v {
            if paths.len() == cap {
                overflow = true;
                break;
            }
            paths.push(current.clone());
            current.pop();
            next_child.pop();
            continue;
        }
        let depth = current.len() - 1;
        let nbrs = g.neighbors(cur);
        let mut i = next_child[depth];
        while i < nbrs.len() && dv[nbrs[i]] + 1 != dv[cur] {
            i += 1;
        }
        if i < nbrs.len() {
            next_child[depth] = i + 1;
            current.push(nbrs[i]);
            next_child.push(0);
        } else {
            current.pop();
            next_child.pop();
        }
    }
    Ok(Geodesics { paths, overflow })
}
