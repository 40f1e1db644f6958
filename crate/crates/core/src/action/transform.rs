use std::collections::HashMap;

use super::{GroupAction, Letter, Word};
use crate::graph::Vertex;

const NONE: u32 = u32::MAX;

/// A partial vertex map realized by some word, with the shortest such word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transformation {
    pub word: Word,
    map: Vec<u32>,
}

impl Transformation {
    #[inline]
    pub fn apply(&self, v: Vertex) -> Option<Vertex> {
        match self.map[v] {
            NONE => None,
            w => Some(w as Vertex),
        }
    }

    pub fn domain_size(&self) -> usize {
        self.map.iter().filter(|&&w| w != NONE).count()
    }

    /// Agree wherever both are defined, on a non-empty common domain.
    fn identified_with(&self, other: &[u32]) -> bool {
        let mut common = false;
        for (&a, &b) in self.map.iter().zip(other) {
            if a != NONE && b != NONE {
                if a != b {
                    return false;
                }
                common = true;
            }
        }
        common
    }
}

/// Distinct realized transformations of words up to a length bound.
#[derive(Debug, Clone)]
pub struct TransformationSet {
    pub horizon: usize,
    pub items: Vec<Transformation>,
    /// True when the `limit` on the number of transformations stopped the search.
    pub capped: bool,
}

impl TransformationSet {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Transformations whose shortest word has length ≤ `h`.
    pub fn within(&self, h: usize) -> impl Iterator<Item = &Transformation> + '_ {
        self.items.iter().filter(move |t| t.word.len() <= h)
    }
}

/// Breadth-first enumeration of transformations realized by words of length
/// ≤ `horizon`. Two words count as one transformation when they agree on every
/// vertex where both are defined; maps with empty domain are dropped.
///
/// Candidates are bucketed by the image of `probe` so most comparisons are
/// against maps that already agree there.
pub fn realized_transformations(a: &GroupAction, probe: Vertex, horizon: usize, limit: usize) -> TransformationSet {
    let n = a.space().len();
    let gens = a.generators();
    let identity = Transformation {
        word: Word::identity(),
        map: (0..n as u32).collect(),
    };
    let mut items = vec![identity];
    let mut by_probe: HashMap<u32, Vec<usize>> = HashMap::from([(probe as u32, vec![0])]);
    let mut probe_undefined: Vec<usize> = Vec::new();
    let mut frontier = vec![0usize];
    let mut capped = false;
    'outer: for _ in 0..horizon {
        let mut next = Vec::new();
        for &i in &frontier {
            for l in Letter::all(gens.len()) {
                if items[i].word.0.last() == Some(&l.inv()) {
                    continue;
                }
                let g = &gens[l.generator];
                let map: Vec<u32> = items[i]
                    .map
                    .iter()
                    .map(|&v| match v {
                        NONE => NONE,
                        v => g.apply(v as Vertex, l.inverse).map_or(NONE, |w| w as u32),
                    })
                    .collect();
                if map.iter().all(|&w| w == NONE) {
                    continue;
                }
                let pimg = map[probe];
                let seen = if pimg == NONE {
                    items.iter().any(|t| t.identified_with(&map))
                } else {
                    by_probe
                        .get(&pimg)
                        .into_iter()
                        .flatten()
                        .chain(&probe_undefined)
                        .any(|&j| items[j].identified_with(&map))
                };
                if seen {
                    continue;
                }
                if items.len() >= limit {
                    capped = true;
                    break 'outer;
                }
                let mut word = items[i].word.clone();
                word.0.push(l);
                let idx = items.len();
                items.push(Transformation { word, map });
                if pimg == NONE {
                    probe_undefined.push(idx);
                } else {
                    by_probe.entry(pimg).or_default().push(idx);
                }
                next.push(idx);
            }
        }
        frontier = next;
    }
    TransformationSet { horizon, items, capped }
}
