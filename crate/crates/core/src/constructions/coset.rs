use std::collections::HashMap;

use super::groups::FiniteGroupTable;
use crate::action::{ActionMode, GeneratorMap, GroupAction, Word};
use crate::error::Result;
use crate::graph::{MetricGraph, SimpleGraph, Vertex};

/// Tree of cosets of a subgroup chain, with the top group acting by left
/// multiplication.
///
/// A `stub` vertex above the apex stands in for the rest of an infinite
/// increasing union, so the apex has valence `[Gₙ:Gₙ₋₁] + 1` like every other
/// interior level.
#[derive(Debug, Clone)]
pub struct CosetTree {
    pub action: GroupAction,
    pub table: FiniteGroupTable,
    /// `levels[i]` lists the vertices for cosets of `Gᵢ`.
    pub levels: Vec<Vec<Vertex>>,
    pub apex: Vertex,
    pub stub: Vertex,
    /// A shortest word for each group element.
    pub element_words: Vec<Word>,
}

impl CosetTree {
    /// Elements `g` with `g·c = c` for the coset vertex `v`.
    pub fn stabilizer_size(&self, v: Vertex) -> usize {
        self.element_words
            .iter()
            .filter(|w| self.action.try_evaluate(w, v) == Some(v))
            .count()
    }
}

pub fn coset_tree(table: &FiniteGroupTable) -> Result<CosetTree> {
    table.validate()?;
    let top = table.chain.len() - 1;
    let elems: Vec<usize> = table.top().to_vec();
    // coset key: least element of gH
    let key = |g: usize, h: &[usize]| h.iter().map(|&x| table.mult[g][x]).min().unwrap();

    let mut ids = Vec::new();
    let mut index: HashMap<(usize, usize), Vertex> = HashMap::new();
    let mut levels = vec![Vec::new(); top + 1];
    for i in (0..=top).rev() {
        let mut keys: Vec<usize> = elems.iter().map(|&g| key(g, &table.chain[i])).collect();
        keys.sort_unstable();
        keys.dedup();
        for k in keys {
            index.insert((i, k), ids.len());
            levels[i].push(ids.len());
            ids.push(format!("L{i}:{}", table.elements[k]));
        }
    }
    let stub = ids.len();
    ids.push("stub".into());
    let apex = levels[top][0];

    let mut graph = SimpleGraph::new(ids.iter().cloned())?;
    for i in 1..=top {
        for &g in &elems {
            let lower = index[&(i - 1, key(g, &table.chain[i - 1]))];
            let upper = index[&(i, key(g, &table.chain[i]))];
            graph.ensure_edge(lower, upper)?;
        }
    }
    graph.add_edge(apex, stub)?;
    let space = MetricGraph::new(graph)?.with_boundary(vec![stub]);

    let mut coset_of = vec![(0, 0); ids.len()];
    for (&(i, k), &v) in &index {
        coset_of[v] = (i, k);
    }
    let generators = table
        .generators
        .iter()
        .zip(&table.generator_names)
        .map(|(&s, name)| {
            GeneratorMap::from_fn(name.clone(), &ids, |v| {
                if v == stub {
                    return Some(stub);
                }
                let (i, k) = coset_of[v];
                Some(index[&(i, key(table.mult[s][k], &table.chain[i]))])
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let action = GroupAction::new(space, generators, ActionMode::Automorphism)?;
    let element_words = table.element_words().into_iter().flatten().collect();
    Ok(CosetTree {
        action,
        table: table.clone(),
        levels,
        apex,
        stub,
        element_words,
    })
}
