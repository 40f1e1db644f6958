use serde::Serialize;

use super::transform::realized_transformations;
use super::GroupAction;
use crate::graph::Vertex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropernessParams {
    pub epsilons: Vec<u32>,
    /// Separation thresholds `R` for the acylindricity table.
    pub separations: Vec<u32>,
    /// Radii `r` for the uniform-properness table.
    pub radii: Vec<u32>,
    pub horizon: usize,
    /// Vertex used to bucket transformations during enumeration.
    pub probe: Vertex,
    /// Cap on the number of realized transformations.
    pub limit: usize,
}

impl Default for PropernessParams {
    fn default() -> Self {
        PropernessParams {
            epsilons: vec![0, 1, 2],
            separations: vec![1, 2, 4],
            radii: vec![0, 1, 2],
            horizon: 4,
            probe: 0,
            limit: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AcylindricityEntry {
    pub epsilon: u32,
    pub separation: u32,
    /// `None` when no vertex pair is that far apart.
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UniformEntry {
    pub r: u32,
    pub n_r: usize,
    /// First vertex attaining the maximum.
    pub vertex: Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizerSummary {
    /// `(h, max stabilizer count using words of length ≤ h)` for `h = 0..=L`.
    pub per_horizon: Vec<(usize, usize)>,
    pub vertex: Vertex,
    /// The bound still grows at the final horizon.
    pub growing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropernessProfile {
    pub horizon: usize,
    pub transformations: usize,
    pub capped: bool,
    pub acylindricity: Vec<AcylindricityEntry>,
    pub uniform: Vec<UniformEntry>,
    pub stabilizers: StabilizerSummary,
    pub warnings: Vec<String>,
}

/// Horizon-relative lower bounds for the acylindricity and uniform
/// properness constants, counted over distinct realized transformations.
pub fn properness_profiles(a: &GroupAction, params: &PropernessParams) -> PropernessProfile {
    let space = a.space();
    let n = space.len();
    let set = realized_transformations(a, params.probe.min(n.saturating_sub(1)), params.horizon, params.limit);
    // disp[t][v] = d(t v, v), or u32::MAX where undefined
    let disp: Vec<Vec<u32>> = set
        .items
        .iter()
        .map(|t| (0..n).map(|v| t.apply(v).map_or(u32::MAX, |w| space.dist(v, w))).collect())
        .collect();

    let mut eps = params.epsilons.clone();
    eps.sort_unstable();
    eps.dedup();
    let mut seps = params.separations.clone();
    seps.sort_unstable();
    seps.dedup();
    let min_sep = seps.first().copied().unwrap_or(0);
    // best[e][s]
    let mut best: Vec<Vec<Option<usize>>> = vec![vec![None; seps.len()]; eps.len()];
    let mut counts = vec![0usize; eps.len()];
    for x in 0..n {
        for y in x..n {
            let d = space.dist(x, y);
            if d < min_sep {
                continue;
            }
            counts.iter_mut().for_each(|c| *c = 0);
            for row in &disp {
                let m = row[x].max(row[y]);
                for (k, &e) in eps.iter().enumerate() {
                    if m <= e {
                        counts[k] += 1;
                    }
                }
            }
            for (k, c) in counts.iter().enumerate() {
                for (j, &s) in seps.iter().enumerate() {
                    if d >= s {
                        let slot = &mut best[k][j];
                        *slot = Some(slot.map_or(*c, |b| b.max(*c)));
                    }
                }
            }
        }
    }
    let mut acylindricity = Vec::new();
    for (k, &epsilon) in eps.iter().enumerate() {
        for (j, &separation) in seps.iter().enumerate() {
            acylindricity.push(AcylindricityEntry {
                epsilon,
                separation,
                n: best[k][j],
            });
        }
    }

    let mut radii = params.radii.clone();
    radii.sort_unstable();
    radii.dedup();
    let uniform = radii
        .iter()
        .map(|&r| {
            let (vertex, n_r) = (0..n)
                .map(|v| (v, disp.iter().filter(|row| row[v] <= r).count()))
                .fold((0, 0), |acc, (v, c)| if c > acc.1 { (v, c) } else { acc });
            UniformEntry { r, n_r, vertex }
        })
        .collect();

    let per_horizon: Vec<(usize, usize, Vertex)> = (0..=params.horizon)
        .map(|h| {
            let (v, c) = (0..n)
                .map(|v| {
                    let c = set
                        .items
                        .iter()
                        .zip(&disp)
                        .filter(|(t, row)| t.word.len() <= h && row[v] == 0)
                        .count();
                    (v, c)
                })
                .fold((0, 0), |acc, (v, c)| if c > acc.1 { (v, c) } else { acc });
            (h, c, v)
        })
        .collect();
    let last = per_horizon.last().copied().unwrap_or((0, 0, 0));
    let growing = per_horizon.len() >= 2 && last.1 > per_horizon[per_horizon.len() - 2].1;
    let mut warnings = Vec::new();
    if growing {
        warnings.push(format!(
            "stabilizer of {} still growing at horizon {}: {} elements",
            space.id(last.2),
            last.0,
            last.1
        ));
    }
    if set.capped {
        warnings.push(format!("transformation enumeration capped at {}", params.limit));
    }
    PropernessProfile {
        horizon: params.horizon,
        transformations: set.len(),
        capped: set.capped,
        acylindricity,
        uniform,
        stabilizers: StabilizerSummary {
            per_horizon: per_horizon.iter().map(|&(h, c, _)| (h, c)).collect(),
            vertex: last.2,
            growing,
        },
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{ActionMode, GeneratorMap};
    use super::*;

    #[test]
    fn free_shift_has_trivial_stabilizers() {
        let a = line_action(12, &[("s", 1)]);
        let p = properness_profiles(&a, &PropernessParams { probe: 12, horizon: 6, ..Default::default() });
        assert_eq!(p.uniform[0], UniformEntry { r: 0, n_r: 1, vertex: 0 });
        assert!(!p.stabilizers.growing);
        // r = 1: identity and s^{±1}
        assert_eq!(p.uniform[1].n_r, 3);
    }

    #[test]
    fn flip_of_p3_fixes_the_center_twice() {
        let g = crate::graph::fixtures::path(3);
        let ids = g.graph().ids().to_vec();
        let f = GeneratorMap::from_fn("f", &ids, |v| Some(2 - v)).unwrap();
        let a = GroupAction::new(g, vec![f], ActionMode::Automorphism).unwrap();
        let p = properness_profiles(&a, &PropernessParams::default());
        assert_eq!(p.uniform[0], UniformEntry { r: 0, n_r: 2, vertex: 1 });
    }

    #[test]
    fn tables_are_monotone() {
        let a = line_action(10, &[("s", 1), ("u", 3)]);
        let params = PropernessParams {
            epsilons: vec![0, 1, 2, 3],
            separations: vec![1, 3],
            radii: vec![0, 1, 2, 3, 4],
            horizon: 3,
            probe: 10,
            limit: 10_000,
        };
        let p = properness_profiles(&a, &params);
        assert!(p.uniform.windows(2).all(|w| w[0].n_r <= w[1].n_r));
        for sep in [1, 3] {
            let col: Vec<usize> = p
                .acylindricity
                .iter()
                .filter(|e| e.separation == sep)
                .map(|e| e.n.unwrap())
                .collect();
            assert!(col.windows(2).all(|w| w[0] <= w[1]), "{col:?}");
        }
    }
}
