use super::Construction;
use crate::action::{ActionMode, GeneratorMap, GroupAction};
use crate::error::{Error, Result};
use crate::graph::{MetricGraph, SimpleGraph, Vertex};

/// Two interleaved copies of the line on `−n..=n`: vertices `(k, i)` for
/// `i ∈ {1, 2}`, with `(k, i)—(k+1, i)` and `(k, 1)—(k±1, 2)`. Generators are
/// the swaps `σ_k` of `(k, 1)` and `(k, 2)` and the shift `k ↦ k + 1`.
pub fn double_line_graph(n: i64) -> Result<Construction> {
    if n < 1 {
        return Err(Error::Format(format!("double line needs n ≥ 1, got {n}")));
    }
    let width = 2 * n + 1;
    let idx = |k: i64, i: i64| ((k + n) * 2 + (i - 1)) as usize;
    let ids: Vec<String> = (-n..=n).flat_map(|k| [format!("{k},1"), format!("{k},2")]).collect();
    let mut graph = SimpleGraph::new(ids.iter().cloned())?;
    for k in -n..n {
        graph.ensure_edge(idx(k, 1), idx(k + 1, 1))?;
        graph.ensure_edge(idx(k, 2), idx(k + 1, 2))?;
        graph.ensure_edge(idx(k, 1), idx(k + 1, 2))?;
        graph.ensure_edge(idx(k + 1, 1), idx(k, 2))?;
    }
    let space = MetricGraph::new(graph)?.with_boundary(vec![idx(-n, 1), idx(-n, 2), idx(n, 1), idx(n, 2)]);
    let mut gens = Vec::new();
    for k in -n..=n {
        gens.push(GeneratorMap::from_fn(format!("sigma{k}"), &ids, |v| {
            Some(if v / 2 == (k + n) as usize { v ^ 1 } else { v })
        })?);
    }
    gens.push(GeneratorMap::from_fn("shift", &ids, |v| {
        (v / 2 + 1 < width as usize).then_some(v + 2)
    })?);
    Ok(Construction {
        action: GroupAction::new(space, gens, ActionMode::Automorphism)?,
        base_point: idx(0, 1),
        ray: None,
    })
}

/// Adds an apex joined to every vertex; generators extend by fixing it.
pub fn cone_graph(base: &GroupAction) -> Result<Construction> {
    if base.mode() != ActionMode::Automorphism {
        return Err(Error::Format("cone needs an automorphism action".into()));
    }
    let g = base.space();
    let n = g.len();
    let mut ids = g.graph().ids().to_vec();
    let apex_id = if ids.iter().any(|s| s == "apex") { "apex*".to_string() } else { "apex".to_string() };
    ids.push(apex_id);
    let mut graph = SimpleGraph::new(ids.iter().cloned())?;
    for (u, v) in g.graph().edges() {
        graph.add_edge(u, v)?;
    }
    for v in 0..n {
        graph.add_edge(v, n)?;
    }
    let space = MetricGraph::new(graph)?;
    let gens = base
        .generators()
        .iter()
        .map(|s| GeneratorMap::from_fn(s.name(), &ids, |v| if v == n { Some(n) } else { s.forward(v) }))
        .collect::<Result<Vec<_>>>()?;
    Ok(Construction {
        action: GroupAction::new(space, gens, ActionMode::Automorphism)?,
        base_point: 0,
        ray: None,
    })
}

/// Combinatorial horoball of depth `D`: vertices `(v, m)` for `0 ≤ m ≤ D`,
/// vertical edges `(v, m)—(v, m+1)` and horizontal edges `(v, m)—(w, m)` when
/// `0 < d(v, w) ≤ 2^m`. The action is extended level by level.
pub fn horoball(base: &GroupAction, depth: u32) -> Result<Construction> {
    if !(1..=30).contains(&depth) {
        return Err(Error::Format(format!("horoball depth must be in 1..=30, got {depth}")));
    }
    if base.mode() != ActionMode::Automorphism {
        return Err(Error::Format("horoball needs an automorphism action".into()));
    }
    let g = base.space();
    let n = g.len();
    let levels = depth as usize + 1;
    let idx = |v: Vertex, m: usize| m * n + v;
    let ids: Vec<String> = (0..levels)
        .flat_map(|m| g.graph().ids().iter().map(move |id| format!("{id}@{m}")))
        .collect();
    let mut graph = SimpleGraph::new(ids.iter().cloned())?;
    for m in 0..levels {
        let reach = 1u64 << m;
        for v in 0..n {
            if m + 1 < levels {
                graph.add_edge(idx(v, m), idx(v, m + 1))?;
            }
            for w in v + 1..n {
                if (g.dist(v, w) as u64) <= reach {
                    graph.add_edge(idx(v, m), idx(w, m))?;
                }
            }
        }
    }
    let boundary = g.boundary().iter().flat_map(|&v| (0..levels).map(move |m| idx(v, m))).collect();
    let space = MetricGraph::new(graph)?.with_boundary(boundary);
    let gens = base
        .generators()
        .iter()
        .map(|s| GeneratorMap::from_fn(s.name(), &ids, |x| s.forward(x % n).map(|w| idx(w, x / n))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Construction {
        action: GroupAction::new(space, gens, ActionMode::Automorphism)?,
        base_point: idx(base_index(base), 0),
        ray: None,
    })
}

/// Vertex named `0` or `e` when present, else the first vertex.
fn base_index(a: &GroupAction) -> Vertex {
    ["0", "e", "0,0"]
        .iter()
        .find_map(|s| a.space().index_of(s))
        .unwrap_or(0)
}

/// Same vertices, edge iff `0 < d(x, y) ≤ r`.
pub fn rips_graph(g: &MetricGraph, r: u32) -> Result<MetricGraph> {
    let n = g.len();
    let mut graph = SimpleGraph::new(g.graph().ids().iter().cloned())?;
    for u in 0..n {
        let row = g.row(u);
        for (v, &d) in row.iter().enumerate().skip(u + 1) {
            if d <= r {
                graph.add_edge(u, v)?;
            }
        }
    }
    Ok(MetricGraph::new(graph)?.with_boundary(g.boundary().to_vec()))
}

/// Ladder `P_n × P_2` with the shift along its length.
pub fn ladder(n: usize) -> Result<Construction> {
    if n < 2 {
        return Err(Error::Format(format!("ladder needs n ≥ 2, got {n}")));
    }
    let ids: Vec<String> = (0..2).flat_map(|r| (0..n).map(move |c| format!("{r},{c}"))).collect();
    let mut edges = Vec::new();
    for c in 0..n {
        edges.push((c, n + c));
        if c + 1 < n {
            edges.push((c, c + 1));
            edges.push((n + c, n + c + 1));
        }
    }
    let space = MetricGraph::from_edges(ids.iter().cloned(), edges)?.with_boundary(vec![0, n - 1, n, 2 * n - 1]);
    let shift = GeneratorMap::from_fn("s", &ids, |v| (v % n + 1 < n).then_some(v + 1))?;
    Ok(Construction {
        action: GroupAction::new(space, vec![shift], ActionMode::Automorphism)?,
        base_point: n / 2,
        ray: None,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{cayley_graph, CayleyFamily};
    use super::*;
    use crate::action::{stable_translation_length, Word};
    use crate::graph::{bottleneck_constant, SizeCaps};

    #[test]
    fn double_line_swaps_commute_and_preserve() {
        let c = double_line_graph(5).unwrap();
        let a = &c.action;
        let s0 = a.generator_index("sigma0").unwrap();
        let s3 = a.generator_index("sigma3").unwrap();
        let g = a.space();
        let (u, v) = (g.vertex("0,1").unwrap(), g.vertex("0,2").unwrap());
        assert_eq!(g.neighbors(u), g.neighbors(v));
        let w1 = Word(vec![crate::action::Letter::new(s0, false), crate::action::Letter::new(s3, false)]);
        let w2 = Word(vec![crate::action::Letter::new(s3, false), crate::action::Letter::new(s0, false)]);
        for x in 0..g.len() {
            assert_eq!(a.try_evaluate(&w1, x), a.try_evaluate(&w2, x));
        }
        let b = bottleneck_constant(g, SizeCaps::default()).unwrap();
        assert!(b.constant <= 2, "{}", b.constant);
    }

    #[test]
    fn cone_has_diameter_two() {
        let z = cayley_graph(&CayleyFamily::parse("Z").unwrap(), 5).unwrap();
        let c = cone_graph(&z.action).unwrap();
        assert_eq!(c.action.space().diameter(), 2);
        let apex = c.action.space().vertex("apex").unwrap();
        assert_eq!(c.action.generators()[0].forward(apex), Some(apex));
        let one = cone_graph(&cayley_graph(&CayleyFamily::parse("Z").unwrap(), 0).unwrap().action).unwrap();
        assert_eq!(one.action.space().graph().edge_count(), 1);
    }

    #[test]
    fn horoball_over_a_point_is_an_edge() {
        let z = cayley_graph(&CayleyFamily::parse("Z").unwrap(), 0).unwrap();
        let h = horoball(&z.action, 1).unwrap();
        assert_eq!(h.action.space().len(), 2);
        assert_eq!(h.action.space().graph().edge_count(), 1);
    }

    #[test]
    fn horoball_shortcuts_and_decay() {
        let z = cayley_graph(&CayleyFamily::parse("Z").unwrap(), 64).unwrap();
        let h = horoball(&z.action, 7).unwrap();
        let g = h.action.space();
        let d = g.dist(g.vertex("0@0").unwrap(), g.vertex("64@0").unwrap());
        assert!(d <= 16, "{d}");
        let t = stable_translation_length(&h.action, &Word::letter(0, false), h.base_point, 64).unwrap();
        let tau = |n: usize| t.tau_sequence[n - 1];
        assert!(tau(8) > tau(16) && tau(16) > tau(32) && tau(32) > tau(64));
        assert!(tau(64) <= num_rational::Rational64::new(1, 2));
    }

    #[test]
    fn rips_graph_examples() {
        let p5 = crate::graph::fixtures::path(5);
        assert_eq!(rips_graph(&p5, 1).unwrap().graph().edges(), p5.graph().edges());
        assert_eq!(rips_graph(&p5, 2).unwrap().graph().edge_count(), 4 + 3);
        assert_eq!(rips_graph(&p5, 4).unwrap().graph().edge_count(), 10);
    }

    #[test]
    fn ladder_shape() {
        let c = ladder(6).unwrap();
        assert_eq!(bottleneck_constant(c.action.space(), SizeCaps::default()).unwrap().constant, 1);
    }
}
