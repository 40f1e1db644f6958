use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::{GeneratorMap, GroupAction, Letter, Word};
use crate::error::{Error, Result};
use crate::graph::Vertex;

/// Orbit points in BFS order, each with a shortest witness word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    base: Vertex,
    horizon: usize,
    points: Vec<(Vertex, Word)>,
    index: HashMap<Vertex, usize>,
    closed: bool,
}

impl Orbit {
    pub fn base(&self) -> Vertex {
        self.base
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.points.iter().map(|(v, _)| *v)
    }

    pub fn points(&self) -> &[(Vertex, Word)] {
        &self.points
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.index.contains_key(&v)
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn witness(&self, v: Vertex) -> Option<&Word> {
        self.position(v).map(|i| &self.points[i].1)
    }

    /// True when every letter maps every orbit point to a defined orbit point:
    /// the full orbit is finite and lies inside the truncation.
    pub fn is_closed(&self) -> bool {
        self.closed
    }
}

/// Orbit of `x0` under words of length ≤ `horizon` that stay in the truncation.
pub fn orbit(a: &GroupAction, x0: Vertex, horizon: usize) -> Result<Orbit> {
    if x0 >= a.space().len() {
        return Err(Error::VertexNotFound(format!("#{x0}")));
    }
    Ok(orbit_of(a.generators(), x0, horizon))
}

/// Orbit BFS over bare generator maps; letters are tried in generator order,
/// `+` before `−`, so witnesses are shortlex-least.
pub fn orbit_of(gens: &[GeneratorMap], x0: Vertex, horizon: usize) -> Orbit {
    let letters = Letter::all(gens.len());
    let mut points = vec![(x0, Word::identity())];
    let mut index = HashMap::from([(x0, 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (v, word) = points[i].clone();
        if word.len() >= horizon {
            continue;
        }
        for &l in &letters {
            let Some(w) = gens[l.generator].apply(v, l.inverse) else { continue };
            if index.contains_key(&w) {
                continue;
            }
            let mut next = word.clone();
            next.0.push(l);
            index.insert(w, points.len());
            queue.push_back(points.len());
            points.push((w, next));
        }
    }
    let closed = points.iter().all(|&(v, _)| {
        letters
            .iter()
            .all(|l| gens[l.generator].apply(v, l.inverse).is_some_and(|w| index.contains_key(&w)))
    });
    Orbit {
        base: x0,
        horizon,
        points,
        index,
        closed,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum LocalFinitenessVerdict {
    LocallyFiniteAtHorizon,
    /// Some ball count still grows between half the horizon and the full horizon.
    GrowthWarning { radius: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocallyFiniteReport {
    pub horizon: usize,
    /// `counts[ρ]` = orbit points within `ρ` of `x0` at the full horizon.
    pub counts: Vec<usize>,
    /// Same counts at horizon `⌈L/2⌉`.
    pub half_horizon_counts: Vec<usize>,
    /// Largest `ρ` compared; beyond it growth is expected even for proper actions.
    pub compared_up_to: Option<u32>,
    pub verdict: LocalFinitenessVerdict,
}

/// Counts orbit points in balls about `x0` at horizons `L` and `⌈L/2⌉`.
///
/// With `M` the largest generator displacement at `x0`, only radii
/// `ρ ≤ ⌊L/(4M)⌋` are compared, where balls of a proper action have long
/// saturated. Growth there triggers the warning.
pub fn check_locally_finite_orbit(a: &GroupAction, x0: Vertex, radius: u32, horizon: usize) -> Result<LocallyFiniteReport> {
    let full = orbit(a, x0, horizon)?;
    let half = orbit(a, x0, horizon.div_ceil(2))?;
    let row = a.space().row(x0);
    let counts_of = |o: &Orbit| -> Vec<usize> {
        let mut c = vec![0usize; radius as usize + 1];
        for v in o.vertices() {
            let d = row[v];
            if d <= radius {
                c[d as usize] += 1;
            }
        }
        for i in 1..c.len() {
            c[i] += c[i - 1];
        }
        c
    };
    let counts = counts_of(&full);
    let half_horizon_counts = counts_of(&half);
    let m = a
        .generators()
        .iter()
        .filter_map(|g| g.forward(x0).map(|w| row[w]))
        .chain(a.generators().iter().filter_map(|g| g.backward(x0).map(|w| row[w])))
        .max()
        .unwrap_or(0)
        .max(1) as usize;
    let limit = (horizon / (4 * m)).min(radius as usize);
    let compared_up_to = (horizon >= 4 * m).then_some(limit as u32);
    let mut verdict = LocalFinitenessVerdict::LocallyFiniteAtHorizon;
    if full.is_closed() {
        // finite orbit: nothing can grow
    } else if let Some(limit) = compared_up_to {
        if let Some(rho) = (0..=limit as usize).find(|&r| counts[r] > half_horizon_counts[r]) {
            verdict = LocalFinitenessVerdict::GrowthWarning { radius: rho as u32 };
        }
    }
    Ok(LocallyFiniteReport {
        horizon,
        counts,
        half_horizon_counts,
        compared_up_to,
        verdict,
    })
}
