use serde::Serialize;

use super::orbit::orbit;
use super::rips::connectivity_radius;
use super::GroupAction;
use crate::error::{Error, Result};
use crate::graph::{bottleneck_constant, SizeCaps, Vertex, UNREACHED};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasiconvexViolation {
    pub p: Vertex,
    pub q: Vertex,
    /// On a `p`–`q` geodesic but farther than `K` from the orbit.
    pub z: Vertex,
    pub distance_to_orbit: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasiconvexityReport {
    pub k: u32,
    pub c: u32,
    pub m: u32,
    pub orbit_size: usize,
    /// Vertices farther than `K` from the orbit (each one checked against every orbit pair).
    pub far_vertices: usize,
    pub pass: bool,
    /// A failure on a truncation is an artifact of the cut-off, not a counterexample.
    pub violation: Option<QuasiconvexViolation>,
    pub notes: Vec<String>,
}

/// Checks that every geodesic between orbit points stays within `K` of the
/// orbit, where `K` is the least integer with `2K − 2C ≥ M`.
pub fn orbit_quasiconvexity(a: &GroupAction, x0: Vertex, c: u32, horizon: usize, caps: SizeCaps) -> Result<QuasiconvexityReport> {
    let space = a.space();
    let n = space.len();
    let mut notes = Vec::new();
    if n <= caps.bottleneck {
        let constant = bottleneck_constant(space, caps)?.constant;
        if constant > c {
            return Err(Error::NotAQuasitree { constant, c_max: c });
        }
    } else {
        notes.push(format!("bottleneck constant {c} taken on trust: {n} vertices exceed the cap {}", caps.bottleneck));
    }
    let m = connectivity_radius(a, x0)?.to_integer() as u32;
    let k = c + m.div_ceil(2);
    let o = orbit(a, x0, horizon)?;
    let pts: Vec<Vertex> = o.vertices().collect();

    let mut to_orbit = vec![UNREACHED; n];
    for &p in &pts {
        for (z, &d) in space.row(p).iter().enumerate() {
            to_orbit[z] = to_orbit[z].min(d);
        }
    }
    let far: Vec<Vertex> = (0..n).filter(|&z| to_orbit[z] > k).collect();
    let mut violation = None;
    'far: for &z in &far {
        let dz = space.row(z);
        for (i, &p) in pts.iter().enumerate() {
            let dp = space.row(p);
            for &q in &pts[i + 1..] {
                if dz[p] + dz[q] == dp[q] {
                    violation = Some(QuasiconvexViolation {
                        p,
                        q,
                        z,
                        distance_to_orbit: to_orbit[z],
                    });
                    break 'far;
                }
            }
        }
    }
    if violation.is_some() {
        notes.push("violation found on the truncation; it may be a cut-off artifact".into());
    }
    Ok(QuasiconvexityReport {
        k,
        c,
        m,
        orbit_size: pts.len(),
        far_vertices: far.len(),
        pass: violation.is_none(),
        violation,
        notes,
    })
}
