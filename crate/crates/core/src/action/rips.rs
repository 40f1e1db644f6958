use num_rational::Rational64;
use num_traits::ToPrimitive;

use super::orbit::orbit;
use super::{ActionMode, GeneratorMap, GroupAction};
use crate::error::{Error, Result};
use crate::graph::{MetricGraph, SimpleGraph, Vertex};

/// Graph on an orbit with an edge between distinct points at distance ≤ `r`.
#[derive(Debug, Clone)]
pub struct RipsOrbitGraph {
    pub base_point: Vertex,
    pub r: Rational64,
    /// Ambient vertex of each Rips vertex, in orbit BFS order.
    pub orbit: Vec<Vertex>,
    /// Ids are the ambient ids; may be disconnected.
    pub graph: SimpleGraph,
    /// Generators restricted to orbit points, on Rips indices.
    pub generators: Vec<GeneratorMap>,
}

impl RipsOrbitGraph {
    pub fn is_connected(&self) -> bool {
        self.graph.is_connected()
    }

    pub fn metric(&self) -> Result<MetricGraph> {
        MetricGraph::new(self.graph.clone())
    }

    /// The induced action, checked as an automorphism action on the Rips graph.
    pub fn induced_action(&self) -> Result<GroupAction> {
        GroupAction::new(self.metric()?, self.generators.clone(), ActionMode::Automorphism)
    }
}

pub fn rips_orbit_graph(a: &GroupAction, x0: Vertex, r: Rational64, horizon: usize) -> Result<RipsOrbitGraph> {
    if r < Rational64::from_integer(0) {
        return Err(Error::Format(format!("negative Rips parameter {r}")));
    }
    let o = orbit(a, x0, horizon)?;
    let pts: Vec<Vertex> = o.vertices().collect();
    let space = a.space();
    let ids: Vec<String> = pts.iter().map(|&v| space.id(v).to_string()).collect();
    let mut graph = SimpleGraph::new(ids.iter().cloned())?;
    let bound = r.floor().to_integer().to_u32().unwrap_or(u32::MAX);
    for i in 0..pts.len() {
        let row = space.row(pts[i]);
        for j in i + 1..pts.len() {
            if row[pts[j]] <= bound {
                graph.add_edge(i, j)?;
            }
        }
    }
    let generators = a
        .generators()
        .iter()
        .map(|g| {
            GeneratorMap::new(
                g.name(),
                pts.iter().map(|&v| g.forward(v).and_then(|w| o.position(w))).collect(),
                &ids,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RipsOrbitGraph {
        base_point: x0,
        r,
        orbit: pts,
        graph,
        generators,
    })
}

/// `max_s d(s(x0), x0)` over the generators.
pub fn connectivity_radius(a: &GroupAction, x0: Vertex) -> Result<Rational64> {
    let space = a.space();
    if x0 >= space.len() {
        return Err(Error::VertexNotFound(format!("#{x0}")));
    }
    let mut m = 0u32;
    for g in a.generators() {
        let w = g.forward(x0).ok_or_else(|| Error::OutOfTruncation {
            letter: 1,
            vertex: space.id(x0).to_string(),
        })?;
        m = m.max(space.dist(x0, w));
    }
    Ok(Rational64::from_integer(m as i64))
}
