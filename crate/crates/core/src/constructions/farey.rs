use std::collections::HashMap;

use num_integer::Integer;

use super::Construction;
use crate::action::{ActionMode, GeneratorMap, GroupAction};
use crate::error::{Error, Result};
use crate::graph::{MetricGraph, SimpleGraph};

/// `p/q` in lowest terms with `q > 0`; `∞ = 1/0`.
type Frac = (i64, i64);

const INF: Frac = (1, 0);

fn render((p, q): Frac) -> String {
    match q {
        0 => "inf".into(),
        1 => p.to_string(),
        _ => format!("{p}/{q}"),
    }
}

fn normalize(p: i64, q: i64) -> Frac {
    if q == 0 {
        return INF;
    }
    let g = p.gcd(&q);
    let (p, q) = (p / g, q / g);
    if q < 0 {
        (-p, -q)
    } else {
        (p, q)
    }
}

/// Farey graph on `∞` and reduced `p/q` with `1 ≤ q ≤ Q`, `|p| ≤ P`, with
/// PSL(2,ℤ) generators `S: z ↦ −1/z` and `T: z ↦ z + 1`.
///
/// The numerator cap keeps the truncation finite. Boundary: `q ≥ Q − 1` or
/// `|p| ≥ P − q`.
pub fn farey_graph(q_max: i64, p_max: Option<i64>) -> Result<Construction> {
    if q_max < 1 {
        return Err(Error::Format(format!("denominator bound must be ≥ 1, got {q_max}")));
    }
    let p_max = p_max.unwrap_or(3 * q_max);
    let mut verts = vec![INF];
    for q in 1..=q_max {
        for p in -p_max..=p_max {
            if p.gcd(&q) == 1 {
                verts.push((p, q));
            }
        }
    }
    let index: HashMap<Frac, usize> = verts.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let ids: Vec<String> = verts.iter().map(|&f| render(f)).collect();
    let mut graph = SimpleGraph::new(ids.iter().cloned())?;
    for i in 0..verts.len() {
        let (p, q) = verts[i];
        for (j, &(r, s)) in verts.iter().enumerate().skip(i + 1) {
            if (p * s - q * r).abs() == 1 {
                graph.add_edge(i, j)?;
            }
        }
    }
    let boundary = (0..verts.len())
        .filter(|&i| {
            let (p, q) = verts[i];
            q != 0 && (q >= q_max - 1 || p.abs() >= p_max - q)
        })
        .collect();
    let space = MetricGraph::new(graph)?.with_boundary(boundary);
    let lookup = |f: Frac| index.get(&f).copied();
    let s = GeneratorMap::from_fn("S", &ids, |i| {
        let (p, q) = verts[i];
        lookup(if p == 0 { INF } else { normalize(-q, p) })
    })?;
    let t = GeneratorMap::from_fn("T", &ids, |i| {
        let (p, q) = verts[i];
        lookup(if q == 0 { INF } else { (p + q, q) })
    })?;
    Ok(Construction {
        action: GroupAction::new(space, vec![s, t], ActionMode::Automorphism)?,
        base_point: 0,
        ray: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{classify_isometry, connectivity_radius, orbit, IsometryVerdict, SpaceFacts, Word};
    use crate::graph::SizeCaps;
    use num_rational::Rational64;

    #[test]
    fn basic_edges() {
        let c = farey_graph(3, None).unwrap();
        let g = c.action.space();
        let v = |s: &str| g.vertex(s).unwrap();
        assert!(g.has_edge(v("inf"), v("0")));
        assert!(g.has_edge(v("0"), v("1")));
        assert!(g.has_edge(v("1/2"), v("1")));
        assert!(!g.has_edge(v("1/3"), v("1")));
    }

    #[test]
    fn s_swaps_inf_and_zero() {
        let c = farey_graph(5, None).unwrap();
        let a = &c.action;
        let g = a.space();
        let (inf, zero) = (g.vertex("inf").unwrap(), g.vertex("0").unwrap());
        assert_eq!(a.generators()[0].forward(inf), Some(zero));
        assert_eq!(a.generators()[0].forward(zero), Some(inf));
        assert_eq!(orbit(&a.restrict(&[0]), inf, 10).unwrap().len(), 2);
        assert_eq!(connectivity_radius(a, inf).unwrap(), Rational64::from_integer(1));
    }

    #[test]
    fn t_is_elliptic_fixing_inf() {
        let c = farey_graph(6, None).unwrap();
        let facts = SpaceFacts::compute(c.action.space(), SizeCaps::default());
        let r = classify_isometry(&c.action, &Word::letter(1, false), 0, 8, &facts).unwrap();
        assert_eq!(r.verdict, IsometryVerdict::Elliptic);
    }
}
