use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use super::groups::FiniteGroupTable;
use super::Construction;
use crate::action::{ActionMode, GeneratorMap, GroupAction};
use crate::error::{Error, Result};
use crate::graph::{MetricGraph, SimpleGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CayleyFamily {
    /// `ℤ` with the given generating translations.
    Z(Vec<i64>),
    /// `ℤ²` with the unit vectors.
    Z2,
    /// Free group on `x`, `y`.
    F2,
    Finite(FiniteGroupTable),
}

impl CayleyFamily {
    /// `Z`, `Z:2,3`, `Z2`, `F2`, or a finite chain such as `C6` / `C2xC3`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        match t {
            "Z" => return Ok(CayleyFamily::Z(vec![1])),
            "Z2" => return Ok(CayleyFamily::Z2),
            "F2" => return Ok(CayleyFamily::F2),
            _ => {}
        }
        if let Some(gens) = t.strip_prefix("Z:") {
            let gens: Vec<i64> = gens
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| Error::UnknownFamily(text.into())))
                .collect::<Result<_>>()?;
            if gens.is_empty() || gens.contains(&0) {
                return Err(Error::UnknownFamily(text.into()));
            }
            return Ok(CayleyFamily::Z(gens));
        }
        if t.starts_with('C') {
            return FiniteGroupTable::parse_chain(t)
                .map(CayleyFamily::Finite)
                .map_err(|_| Error::UnknownFamily(text.into()));
        }
        Err(Error::UnknownFamily(text.into()))
    }
}

/// Ball of radius `r` about the identity in a Cayley graph; each generator
/// acts by left multiplication, partially near the sphere.
pub fn cayley_graph(family: &CayleyFamily, radius: u32) -> Result<Construction> {
    match family {
        CayleyFamily::Z(gens) => {
            let names: Vec<String> = gens.iter().map(|g| if *g == 1 { "s".into() } else { format!("s{g}") }).collect();
            ball(0i64, radius, gens.len(), |&x, i| x + gens[i], |&x, i| x - gens[i], |x| x.to_string(), names)
        }
        CayleyFamily::Z2 => {
            let unit = [(1i64, 0i64), (0, 1)];
            ball(
                (0i64, 0i64),
                radius,
                2,
                |&(x, y), i| (x + unit[i].0, y + unit[i].1),
                |&(x, y), i| (x - unit[i].0, y - unit[i].1),
                |(x, y)| format!("{x},{y}"),
                vec!["a".into(), "b".into()],
            )
        }
        CayleyFamily::F2 => {
            // letters 1 = x, 2 = y, negative = inverse
            let right = |w: &Vec<i8>, l: i8| {
                let mut w = w.clone();
                if w.last() == Some(&-l) {
                    w.pop();
                } else {
                    w.push(l);
                }
                w
            };
            let left = |w: &Vec<i8>, l: i8| {
                let mut w = w.clone();
                if w.first() == Some(&-l) {
                    w.remove(0);
                } else {
                    w.insert(0, l);
                }
                w
            };
            let render = |w: &Vec<i8>| {
                if w.is_empty() {
                    return "e".to_string();
                }
                w.iter()
                    .map(|&l| match l {
                        1 => 'x',
                        -1 => 'X',
                        2 => 'y',
                        _ => 'Y',
                    })
                    .collect()
            };
            let gl = [1i8, 2];
            ball_with_left(
                Vec::new(),
                radius,
                2,
                |w, i| right(w, gl[i]),
                |w, i| right(w, -gl[i]),
                |w, i| left(w, gl[i]),
                render,
                vec!["x".into(), "y".into()],
            )
        }
        CayleyFamily::Finite(t) => {
            let gens = t.generators.clone();
            ball_with_left(
                t.identity,
                radius,
                gens.len(),
                |&g, i| t.mult[g][gens[i]],
                |&g, i| t.mult[g][t.inverse[gens[i]]],
                |&g, i| t.mult[gens[i]][g],
                |&g| t.elements[g].clone(),
                t.generator_names.clone(),
            )
        }
    }
}

/// Abelian case: left and right multiplication agree.
fn ball<T: Clone + Eq + Hash>(
    e: T,
    radius: u32,
    k: usize,
    right: impl Fn(&T, usize) -> T,
    right_inv: impl Fn(&T, usize) -> T,
    render: impl Fn(&T) -> String,
    names: Vec<String>,
) -> Result<Construction> {
    ball_with_left(e, radius, k, &right, right_inv, &right, render, names)
}

#[allow(clippy::too_many_arguments)]
fn ball_with_left<T: Clone + Eq + Hash>(
    e: T,
    radius: u32,
    k: usize,
    right: impl Fn(&T, usize) -> T,
    right_inv: impl Fn(&T, usize) -> T,
    left: impl Fn(&T, usize) -> T,
    render: impl Fn(&T) -> String,
    names: Vec<String>,
) -> Result<Construction> {
    let mut elems = vec![e.clone()];
    let mut depth = vec![0u32];
    let mut index: HashMap<T, usize> = HashMap::from([(e, 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if depth[i] == radius {
            continue;
        }
        for s in 0..k {
            for h in [right(&elems[i], s), right_inv(&elems[i], s)] {
                if !index.contains_key(&h) {
                    index.insert(h.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(h);
                    depth.push(depth[i] + 1);
                }
            }
        }
    }
    let ids: Vec<String> = elems.iter().map(&render).collect();
    let mut graph = SimpleGraph::new(ids.iter().cloned())?;
    let mut frontier = Vec::new();
    for (i, g) in elems.iter().enumerate() {
        let mut outside = false;
        for s in 0..k {
            match index.get(&right(g, s)) {
                Some(&j) if j != i => {
                    graph.ensure_edge(i, j)?;
                }
                Some(_) => {}
                None => outside = true,
            }
            if !index.contains_key(&right_inv(g, s)) {
                outside = true;
            }
        }
        if outside {
            frontier.push(i);
        }
    }
    let space = MetricGraph::new(graph)?.with_boundary(frontier);
    let generators = names
        .into_iter()
        .enumerate()
        .map(|(s, name)| GeneratorMap::from_fn(name, &ids, |i| index.get(&left(&elems[i], s)).copied()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Construction {
        action: GroupAction::new(space, generators, ActionMode::Automorphism)?,
        base_point: 0,
        ray: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_radius_three_is_p7() {
        let c = cayley_graph(&CayleyFamily::parse("Z").unwrap(), 3).unwrap();
        let g = c.action.space();
        assert_eq!(g.len(), 7);
        assert!(g.is_tree());
        assert_eq!(g.diameter(), 6);
        assert_eq!(g.boundary().len(), 2);
    }

    #[test]
    fn f2_radius_two_has_17_vertices() {
        let c = cayley_graph(&CayleyFamily::F2, 2).unwrap();
        let g = c.action.space();
        assert_eq!(g.len(), 17);
        assert!(g.is_tree());
        assert_eq!(g.graph().degree(0), 4);
        assert_eq!(g.boundary().len(), 12);
        // left multiplication by x sends y to xy
        let y = g.vertex("y").unwrap();
        let xy = g.vertex("xy").unwrap();
        assert_eq!(c.action.generators()[0].forward(y), Some(xy));
    }

    #[test]
    fn finite_c6_is_a_cycle() {
        let c = cayley_graph(&CayleyFamily::parse("C6").unwrap(), 6).unwrap();
        let g = c.action.space();
        assert_eq!((g.len(), g.graph().edge_count()), (6, 6));
        assert!(g.graph().ids().iter().all(|v| g.graph().degree(g.vertex(v).unwrap()) == 2));
        assert!(g.boundary().is_empty());
    }

    #[test]
    fn z2_is_a_diamond() {
        let c = cayley_graph(&CayleyFamily::Z2, 2).unwrap();
        assert_eq!(c.action.space().len(), 13);
    }

    #[test]
    fn unknown_family() {
        assert!(matches!(CayleyFamily::parse("SL3Z"), Err(Error::UnknownFamily(_))));
        assert!(matches!(CayleyFamily::parse("Z:0"), Err(Error::UnknownFamily(_))));
    }
}
