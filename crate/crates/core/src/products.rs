//! Finite products of graphs under the ℓ1, ℓ2 and ℓ∞ norms.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::Serialize;

use crate::action::{realized_transformations, ActionMode, GeneratorMap, GroupAction};
use crate::error::{Error, Result};
use crate::graph::{enumerate_geodesics, MetricGraph, SimpleGraph, Vertex};
use crate::ratio::ser_ratio;

/// Largest product the builders will materialize.
pub const MAX_PRODUCT_VERTICES: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L1,
    L2,
    Linf,
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l1" => Ok(Norm::L1),
            "l2" => Ok(Norm::L2),
            "linf" => Ok(Norm::Linf),
            _ => Err(Error::Format(format!("unknown norm {s:?} (expected l1, l2 or linf)"))),
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::L1 => "l1",
            Norm::L2 => "l2",
            Norm::Linf => "linf",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProductDistance {
    Exact { value: u64 },
    /// ℓ2: the exact square and its root rounded to `f64`.
    Squared { squared: u64, rounded: f64 },
}

impl ProductDistance {
    pub fn as_f64(&self) -> f64 {
        match *self {
            ProductDistance::Exact { value } => value as f64,
            ProductDistance::Squared { rounded, .. } => rounded,
        }
    }
}

/// Vertices are coordinate tuples, indexed row-major (last factor fastest).
#[derive(Debug, Clone)]
pub struct ProductSpace {
    factors: Vec<MetricGraph>,
    norm: Norm,
    strides: Vec<usize>,
    len: usize,
}

impl ProductSpace {
    pub fn new(factors: Vec<MetricGraph>, norm: Norm) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut len = 1usize;
        let mut strides = vec![0; factors.len()];
        for (i, f) in factors.iter().enumerate().rev() {
            strides[i] = len;
            len = len
                .checked_mul(f.len())
                .filter(|&l| l <= MAX_PRODUCT_VERTICES)
                .ok_or(Error::SizeLimitExceeded {
                    operation: "product",
                    vertices: usize::MAX,
                    cap: MAX_PRODUCT_VERTICES,
                })?;
        }
        Ok(ProductSpace {
            factors,
            norm,
            strides,
            len,
        })
    }

    pub fn factors(&self) -> &[MetricGraph] {
        &self.factors
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn coords(&self, v: Vertex) -> Vec<Vertex> {
        self.factors
            .iter()
            .zip(&self.strides)
            .map(|(f, &s)| (v / s) % f.len())
            .collect()
    }

    pub fn index(&self, coords: &[Vertex]) -> Result<Vertex> {
        if coords.len() != self.factors.len() {
            return Err(Error::DimensionMismatch {
                expected: self.factors.len(),
                got: coords.len(),
            });
        }
        let mut v = 0;
        for ((&c, f), &s) in coords.iter().zip(&self.factors).zip(&self.strides) {
            if c >= f.len() {
                return Err(Error::VertexNotFound(format!("#{c}")));
            }
            v += c * s;
        }
        Ok(v)
    }

    /// Parses `(a,b,…)` or `a,b,…` using the factor ids.
    pub fn parse_point(&self, text: &str) -> Result<Vec<Vertex>> {
        let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != self.factors.len() {
            return Err(Error::DimensionMismatch {
                expected: self.factors.len(),
                got: parts.len(),
            });
        }
        parts.iter().zip(&self.factors).map(|(p, f)| f.vertex(p)).collect()
    }

    pub fn id(&self, v: Vertex) -> String {
        let c = self.coords(v);
        let parts: Vec<&str> = c.iter().zip(&self.factors).map(|(&x, f)| f.id(x)).collect();
        format!("({})", parts.join(","))
    }

    pub fn factor_distances(&self, x: &[Vertex], y: &[Vertex]) -> Result<Vec<u32>> {
        if x.len() != self.factors.len() || y.len() != self.factors.len() {
            return Err(Error::DimensionMismatch {
                expected: self.factors.len(),
                got: x.len().min(y.len()),
            });
        }
        for ((&a, &b), f) in x.iter().zip(y).zip(&self.factors) {
            if a >= f.len() || b >= f.len() {
                return Err(Error::VertexNotFound(format!("#{}", a.max(b))));
            }
        }
        Ok(x.iter().zip(y).zip(&self.factors).map(|((&a, &b), f)| f.dist(a, b)).collect())
    }

    pub fn distance(&self, x: &[Vertex], y: &[Vertex]) -> Result<ProductDistance> {
        Ok(norm_of(self.norm, &self.factor_distances(x, y)?))
    }

    /// Squared ℓ2 distance or plain ℓ1/ℓ∞ distance between product indices,
    /// as one integer that two isometries must preserve.
    fn raw_distance(&self, u: Vertex, v: Vertex) -> u64 {
        let d = self.factor_distances(&self.coords(u), &self.coords(v)).unwrap();
        match norm_of(self.norm, &d) {
            ProductDistance::Exact { value } => value,
            ProductDistance::Squared { squared, .. } => squared,
        }
    }

    /// Graph whose path metric is the product metric: the box product for
    /// ℓ1 (and, as an ℓ1 skeleton, for ℓ2) and the strong product for ℓ∞.
    pub fn skeleton(&self) -> Result<MetricGraph> {
        let ids: Vec<String> = (0..self.len).map(|v| self.id(v)).collect();
        let mut g = SimpleGraph::new(ids)?;
        for u in 0..self.len {
            let cu = self.coords(u);
            for v in u + 1..self.len {
                let d = self.factor_distances(&cu, &self.coords(v))?;
                let adjacent = match self.norm {
                    Norm::L1 | Norm::L2 => d.iter().sum::<u32>() == 1,
                    Norm::Linf => d.iter().all(|&x| x <= 1),
                };
                if adjacent {
                    g.add_edge(u, v)?;
                }
            }
        }
        MetricGraph::new(g)
    }
}

pub fn norm_of(norm: Norm, d: &[u32]) -> ProductDistance {
    match norm {
        Norm::L1 => ProductDistance::Exact {
            value: d.iter().map(|&x| x as u64).sum(),
        },
        Norm::Linf => ProductDistance::Exact {
            value: d.iter().copied().max().unwrap_or(0) as u64,
        },
        Norm::L2 => {
            let squared: u64 = d.iter().map(|&x| (x as u64) * (x as u64)).sum();
            ProductDistance::Squared {
                squared,
                rounded: (squared as f64).sqrt(),
            }
        }
    }
}

pub fn product_distance(p: &ProductSpace, x: &[Vertex], y: &[Vertex]) -> Result<ProductDistance> {
    p.distance(x, y)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeodesicUniquenessReport {
    pub differing: Vec<usize>,
    pub distance: u32,
    pub geodesic_count: usize,
    pub overflow: bool,
    /// Every geodesic changes only the one differing coordinate.
    pub single_coordinate_only: bool,
    /// Up to two geodesics, as product indices.
    pub witnesses: Vec<Vec<Vertex>>,
    /// The expected dichotomy holds for this pair.
    pub holds: bool,
}

/// Enumerates geodesics in the ℓ1 skeleton (up to `cap`) and checks the
/// one-coordinate / several-coordinates dichotomy.
pub fn l1_geodesic_uniqueness(
    p: &ProductSpace,
    skeleton: &MetricGraph,
    x: &[Vertex],
    y: &[Vertex],
    cap: usize,
) -> Result<GeodesicUniquenessReport> {
    if p.norm() != Norm::L1 {
        return Err(Error::NormMismatch { expected: "l1" });
    }
    let (u, v) = (p.index(x)?, p.index(y)?);
    let differing: Vec<usize> = (0..x.len()).filter(|&i| x[i] != y[i]).collect();
    let geos = enumerate_geodesics(skeleton, u, v, cap)?;
    let single_coordinate_only = differing.len() == 1
        && geos.paths.iter().all(|path| {
            path.iter().all(|&w| {
                let c = p.coords(w);
                (0..c.len()).all(|i| i == differing[0] || c[i] == x[i])
            })
        });
    let holds = match differing.len() {
        0 => geos.paths.len() == 1,
        1 => single_coordinate_only,
        _ => geos.paths.len() >= 2,
    };
    Ok(GeodesicUniquenessReport {
        distance: skeleton.dist(u, v),
        geodesic_count: geos.paths.len(),
        overflow: geos.overflow,
        single_coordinate_only,
        witnesses: geos.paths.iter().take(2).cloned().collect(),
        differing,
        holds,
    })
}

/// A vertex bijection of a product, verified to preserve the product distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductIsometry {
    map: Vec<Vertex>,
}

impl ProductIsometry {
    pub fn new(p: &ProductSpace, map: Vec<Vertex>) -> Result<Self> {
        let n = p.len();
        if map.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: map.len() });
        }
        let mut seen = vec![false; n];
        for &w in &map {
            if w >= n || std::mem::replace(&mut seen[w], true) {
                return Err(Error::NotAProductIsometry("not a bijection of product vertices".into()));
            }
        }
        for u in 0..n {
            for v in u + 1..n {
                if p.raw_distance(u, v) != p.raw_distance(map[u], map[v]) {
                    return Err(Error::NotAProductIsometry(format!(
                        "distance between {} and {} not preserved",
                        p.id(u),
                        p.id(v)
                    )));
                }
            }
        }
        Ok(ProductIsometry { map })
    }

    /// Builds from a map on coordinate tuples.
    pub fn from_coords(p: &ProductSpace, f: impl Fn(&[Vertex]) -> Vec<Vertex>) -> Result<Self> {
        let map = (0..p.len()).map(|v| p.index(&f(&p.coords(v)))).collect::<Result<Vec<_>>>()?;
        ProductIsometry::new(p, map)
    }

    pub fn apply(&self, v: Vertex) -> Vertex {
        self.map[v]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ProductIsometry) -> ProductIsometry {
        ProductIsometry {
            map: other.map.iter().map(|&v| self.map[v]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorPreservation {
    pub preserves: bool,
    /// `permutation[i] = j`: moves in factor `i` become moves in factor `j`.
    pub permutation: Option<Vec<usize>>,
    /// One-based cycle notation, e.g. `(1 2)`; `()` for the identity.
    pub cycles: Option<String>,
    /// Induced map factor `i` → factor `permutation[i]`, read off through the
    /// image of the first product vertex.
    pub factor_maps: Option<Vec<Vec<Vertex>>>,
    /// Product indices `(x, y, f x, f y)` of a one-coordinate edge whose image is not one.
    pub witness: Option<[Vertex; 4]>,
}

pub fn cycle_notation(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            continue;
        }
        let mut cyc = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cyc.push((i + 1).to_string());
            i = perm[i];
        }
        out.push_str(&format!("({})", cyc.join(" ")));
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

/// Checks that every edge moving one coordinate maps to an edge moving one
/// coordinate, consistently per factor.
pub fn factor_preservation_check(p: &ProductSpace, f: &ProductIsometry) -> FactorPreservation {
    let k = p.factors().len();
    let mut perm: Vec<Option<usize>> = vec![None; k];
    let fail = |x, y| FactorPreservation {
        preserves: false,
        permutation: None,
        cycles: None,
        factor_maps: None,
        witness: Some([x, y, f.apply(x), f.apply(y)]),
    };
    for x in 0..p.len() {
        let cx = p.coords(x);
        for (i, fac) in p.factors().iter().enumerate() {
            for &nb in fac.neighbors(cx[i]) {
                let mut cy = cx.clone();
                cy[i] = nb;
                let y = p.index(&cy).unwrap();
                let (fx, fy) = (p.coords(f.apply(x)), p.coords(f.apply(y)));
                let moved: Vec<usize> = (0..k).filter(|&j| fx[j] != fy[j]).collect();
                if moved.len() != 1 || perm[i].is_some_and(|j| j != moved[0]) {
                    return fail(x, y);
                }
                perm[i] = Some(moved[0]);
            }
        }
    }
    // factors with a single vertex have no edges: they can only go to what is left
    let mut used = vec![false; k];
    for j in perm.iter().flatten() {
        used[*j] = true;
    }
    for slot in perm.iter_mut() {
        if slot.is_none() {
            let j = (0..k).find(|&j| !used[j]).unwrap_or(0);
            used[j] = true;
            *slot = Some(j);
        }
    }
    let perm: Vec<usize> = perm.into_iter().map(|j| j.unwrap()).collect();
    let mut sorted = perm.clone();
    sorted.sort_unstable();
    if sorted != (0..k).collect::<Vec<_>>() {
        return fail(0, 0);
    }
    let origin = vec![0; k];
    let factor_maps = (0..k)
        .map(|i| {
            (0..p.factors()[i].len())
                .map(|v| {
                    let mut c = origin.clone();
                    c[i] = v;
                    p.coords(f.apply(p.index(&c).unwrap()))[perm[i]]
                })
                .collect()
        })
        .collect();
    FactorPreservation {
        preserves: true,
        cycles: Some(cycle_notation(&perm)),
        permutation: Some(perm),
        factor_maps: Some(factor_maps),
        witness: None,
    }
}

/// A componentwise action on a product, acting on its skeleton.
#[derive(Debug, Clone)]
pub struct ProductAction {
    pub space: ProductSpace,
    pub action: GroupAction,
}

/// Lifts every factor generator to the product (as `name_i`, one-based) and,
/// if `perm` is given, adds a `swap` generator permuting coordinates.
pub fn product_action(actions: &[GroupAction], perm: Option<&[usize]>, norm: Norm) -> Result<ProductAction> {
    let space = ProductSpace::new(actions.iter().map(|a| a.space().clone()).collect(), norm)?;
    let k = actions.len();
    let skeleton = space.skeleton()?;
    let ids = skeleton.graph().ids().to_vec();
    let mut gens = Vec::new();
    for (i, a) in actions.iter().enumerate() {
        for g in a.generators() {
            gens.push(GeneratorMap::from_fn(format!("{}_{}", g.name(), i + 1), &ids, |v| {
                let mut c = space.coords(v);
                c[i] = g.forward(c[i])?;
                space.index(&c).ok()
            })?);
        }
    }
    if let Some(perm) = perm {
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if perm.len() != k || sorted != (0..k).collect::<Vec<_>>() {
            return Err(Error::FactorMismatch(format!("{perm:?} is not a permutation of {k} factors")));
        }
        for (i, &j) in perm.iter().enumerate() {
            let (a, b) = (actions[i].space(), actions[j].space());
            if a.graph().ids() != b.graph().ids() || a.graph().edges() != b.graph().edges() {
                return Err(Error::FactorMismatch(format!("factors {} and {} differ", i + 1, j + 1)));
            }
        }
        gens.push(GeneratorMap::from_fn("swap", &ids, |v| {
            let c = space.coords(v);
            let mut out = vec![0; k];
            for i in 0..k {
                out[perm[i]] = c[i];
            }
            space.index(&out).ok()
        })?);
    }
    if norm == Norm::L2 {
        for g in &gens {
            for u in 0..space.len() {
                let Some(fu) = g.forward(u) else { continue };
                for v in u + 1..space.len() {
                    if let Some(fv) = g.forward(v) {
                        if space.raw_distance(u, v) != space.raw_distance(fu, fv) {
                            return Err(Error::NotAnIsometry {
                                name: g.name().to_string(),
                                what: "l2 distance",
                                u: space.id(u),
                                v: space.id(v),
                            });
                        }
                    }
                }
            }
        }
    }
    let action = GroupAction::new(skeleton, gens, ActionMode::Isometry)?;
    Ok(ProductAction { space, action })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistortionEntry {
    pub n: usize,
    /// Least `d(w x₀, x₀)/n` over transformations whose shortest word has length `n`.
    #[serde(serialize_with = "ser_opt")]
    pub raw: Option<Rational64>,
    #[serde(serialize_with = "ser_opt")]
    pub envelope: Option<Rational64>,
    pub witness: Option<String>,
}

fn ser_opt<S: serde::Serializer>(r: &Option<Rational64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => ser_ratio(r, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistortionProfile {
    pub entries: Vec<DistortionEntry>,
    pub capped: bool,
    /// Only the identity is realized: every word acts trivially.
    pub trivial: bool,
}

impl DistortionProfile {
    pub fn envelope_at(&self, n: usize) -> Option<Rational64> {
        self.entries.iter().find(|e| e.n == n).and_then(|e| e.envelope)
    }
}

/// Orbit-map distortion over realized transformations up to word length `N`.
pub fn distortion_profile(a: &GroupAction, x0: Vertex, horizon: usize, limit: usize) -> Result<DistortionProfile> {
    if x0 >= a.space().len() {
        return Err(Error::VertexNotFound(format!("#{x0}")));
    }
    let set = realized_transformations(a, x0, horizon, limit);
    let trivial = set.len() == 1;
    let mut entries = Vec::with_capacity(horizon);
    let mut envelope: Option<Rational64> = None;
    for n in 1..=horizon {
        let mut raw: Option<(Rational64, String)> = None;
        if trivial {
            raw = Some((Rational64::from_integer(0), "e".into()));
        }
        for t in set.items.iter().filter(|t| t.word.len() == n) {
            let Some(img) = t.apply(x0) else { continue };
            let q = Rational64::new(a.space().dist(x0, img) as i64, n as i64);
            if raw.as_ref().is_none_or(|(r, _)| q < *r) {
                raw = Some((q, a.format_word(&t.word)));
            }
        }
        if let Some((r, _)) = &raw {
            envelope = Some(envelope.map_or(*r, |e| e.min(*r)));
        }
        entries.push(DistortionEntry {
            n,
            raw: raw.as_ref().map(|(r, _)| *r),
            envelope,
            witness: raw.map(|(_, w)| w),
        });
    }
    Ok(DistortionProfile {
        entries,
        capped: set.capped,
        trivial,
    })
}
