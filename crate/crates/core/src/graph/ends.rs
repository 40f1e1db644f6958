use serde::Serialize;

use super::{MetricGraph, Vertex, UNREACHED};
use crate::error::{Error, Result};

/// Number of frontier-touching components left after deleting a ball.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndsProfile {
    pub center: Vertex,
    pub radius: u32,
    pub component_count: usize,
    pub boundary_vertices: usize,
}

/// Components of `g − B(center, b)` that contain at least one `boundary` vertex.
///
/// The boundary must come from whoever built the truncation; it is the only
/// record of which vertices were cut artificially.
pub fn ends_profile(g: &MetricGraph, center: Vertex, b: u32, boundary: &[Vertex]) -> Result<EndsProfile> {
    if center >= g.len() {
        return Err(Error::CenterNotFound(format!("#{center}")));
    }
    let dc = g.row(center);
    let outside: Vec<Vertex> = boundary.iter().copied().filter(|&v| v < g.len() && dc[v] > b).collect();
    if !boundary.is_empty() && outside.is_empty() {
        return Err(Error::RadiusTooLarge { radius: b });
    }
    let mut seen = vec![false; g.len()];
    let mut count = 0;
    for &s in &outside {
        if seen[s] {
            continue;
        }
        count += 1;
        let reach = g.graph().bfs_within(s, |v| dc[v] > b);
        for (v, &d) in reach.iter().enumerate() {
            if d != UNREACHED {
                seen[v] = true;
            }
        }
    }
    Ok(EndsProfile {
        center,
        radius: b,
        component_count: count,
        boundary_vertices: boundary.len(),
    })
}

/// Profiles for radii `0..=b_max`, stopping at the first radius that swallows
/// the whole boundary.
pub fn ends_series(g: &MetricGraph, center: Vertex, b_max: u32, boundary: &[Vertex]) -> Result<Vec<EndsProfile>> {
    let mut out = Vec::new();
    for b in 0..=b_max {
        match ends_profile(g, center, b, boundary) {
            Ok(p) => out.push(p),
            Err(Error::RadiusTooLarge { .. }) if !out.is_empty() => break,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
