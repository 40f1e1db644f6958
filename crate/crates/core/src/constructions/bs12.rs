use std::collections::{HashMap, VecDeque};

use num_rational::Rational64;

use super::Construction;
use crate::action::{ActionMode, GeneratorMap, GroupAction};
use crate::error::{Error, Result};
use crate::graph::{MetricGraph, SimpleGraph};

/// Ball of radius `R` in the Bass–Serre tree of BS(1,2) = ⟨a, t | t a t⁻¹ = a²⟩,
/// modelled on ℤ[1/2] with `a: x ↦ x + 1` and `t: x ↦ x/2`.
///
/// Vertices are cosets `b + 2ᵏℤ`, stored as `(k, n)` with `b = n / 2^R` and
/// `0 ≤ n < 2^{k+R}`. The parent of `(k, n)` is `(k−1, n mod 2^{k−1+R})`; its
/// two children split it modulo `2^{k+1}`. `t` moves every vertex one step
/// toward the fixed end at `k → −∞`, and the emitted ray runs down that end
/// from the base vertex `ℤ = (0, 0)`.
pub fn bass_serre_tree_bs12(radius: u32) -> Result<Construction> {
    if !(1..=20).contains(&radius) {
        return Err(Error::Format(format!("BS(1,2) radius must be in 1..=20, got {radius}")));
    }
    let r = radius as i64;
    let modulus = |k: i64| 1i64 << (k + r);
    let parent = |(k, n): (i64, i64)| (k > -r).then(|| (k - 1, n % modulus(k - 1)));
    let children = |(k, n): (i64, i64)| [(k + 1, n), (k + 1, n + modulus(k))];

    let base = (0i64, 0i64);
    let mut verts = vec![base];
    let mut depth = vec![0u32];
    let mut index = HashMap::from([(base, 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if depth[i] == radius {
            continue;
        }
        let v = verts[i];
        for w in parent(v).into_iter().chain(children(v)) {
            if let std::collections::hash_map::Entry::Vacant(e) = index.entry(w) {
                e.insert(verts.len());
                queue.push_back(verts.len());
                verts.push(w);
                depth.push(depth[i] + 1);
            }
        }
    }
    let ids: Vec<String> = verts
        .iter()
        .map(|&(k, n)| format!("{k}:{}", Rational64::new(n, 1 << r)))
        .collect();
    let mut graph = SimpleGraph::new(ids.iter().cloned())?;
    for (i, &v) in verts.iter().enumerate() {
        if let Some(p) = parent(v).and_then(|p| index.get(&p)) {
            graph.add_edge(*p, i)?;
        }
    }
    let boundary = (0..verts.len()).filter(|&i| depth[i] == radius).collect();
    let space = MetricGraph::new(graph)?.with_boundary(boundary);

    let a = GeneratorMap::from_fn("a", &ids, |i| {
        let (k, n) = verts[i];
        index.get(&(k, (n + (1 << r)) % modulus(k))).copied()
    })?;
    let t = GeneratorMap::from_fn("t", &ids, |i| {
        let (k, n) = verts[i];
        if n % 2 != 0 || k <= -r {
            return None;
        }
        index.get(&(k - 1, (n / 2) % modulus(k - 1))).copied()
    })?;
    let ray = (0..=r).map(|j| index[&(-j, 0)]).collect();
    Ok(Construction {
        action: GroupAction::new(space, vec![a, t], ActionMode::Automorphism)?,
        base_point: 0,
        ray: Some(ray),
    })
}
