//! Group actions on graph truncations, given by generator maps.
//!
//! Generators are partial injective vertex maps: on a finite truncation of an
//! infinite action some images fall outside. Every evaluation that needs a
//! missing image fails with [`Error::OutOfTruncation`] instead of clamping.
//!
//! Words are read left to right: the word `s₁ s₂ … sₖ` sends `v` to
//! `sₖ(…s₂(s₁(v)))`.

mod action_type;
mod orbit;
mod properness;
mod quasiconvex;
mod rips;
mod transform;
mod translation;

pub use action_type::{classify_action_type, ActionTypeOptions, ActionTypeReport, ActionVerdict, Confidence, LoxodromicEvidence, PingPongWitness};
pub use orbit::{check_locally_finite_orbit, orbit, orbit_of, LocalFinitenessVerdict, LocallyFiniteReport, Orbit};
pub use properness::{properness_profiles, AcylindricityEntry, PropernessParams, PropernessProfile, StabilizerSummary};
pub use quasiconvex::{orbit_quasiconvexity, QuasiconvexityReport};
pub use rips::{connectivity_radius, rips_orbit_graph, RipsOrbitGraph};
pub use transform::{realized_transformations, Transformation, TransformationSet};
pub use translation::{
    busemann_homomorphism, classify_isometry, serre_elliptic_test, stable_translation_length, tree_translation_length,
    BusemannValue, Certificate, IsometryReport, IsometryVerdict, SerreOutcome, SpaceFacts, TauSequence, TreeTranslation,
    TreeTranslationKind,
};

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{MetricGraph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionMode {
    /// Generators preserve adjacency and non-adjacency.
    Automorphism,
    /// Generators preserve the path metric.
    Isometry,
}

/// A named partial injective vertex map together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMap {
    name: String,
    forward: Vec<Option<Vertex>>,
    backward: Vec<Option<Vertex>>,
}

impl GeneratorMap {
    /// Builds the map and derives its inverse; `ids` label diagnostics.
    pub fn new(name: impl Into<String>, forward: Vec<Option<Vertex>>, ids: &[String]) -> Result<Self> {
        let name = name.into();
        let n = forward.len();
        let mut backward = vec![None; n];
        for (v, img) in forward.iter().enumerate() {
            let Some(w) = *img else { continue };
            if w >= n {
                return Err(Error::VertexNotFound(format!("#{w}")));
            }
            if let Some(prev) = backward[w] {
                let label = |i: usize| ids.get(i).cloned().unwrap_or_else(|| format!("#{i}"));
                return Err(Error::NonInjectiveMap {
                    name,
                    first: label(prev),
                    second: label(v),
                    image: label(w),
                });
            }
            backward[w] = Some(v);
        }
        Ok(GeneratorMap { name, forward, backward })
    }

    pub fn identity(name: impl Into<String>, n: usize) -> Self {
        let forward: Vec<Option<Vertex>> = (0..n).map(Some).collect();
        GeneratorMap {
            name: name.into(),
            backward: forward.clone(),
            forward,
        }
    }

    /// Builds from a total or partial function on vertex indices.
    pub fn from_fn(name: impl Into<String>, ids: &[String], f: impl Fn(Vertex) -> Option<Vertex>) -> Result<Self> {
        GeneratorMap::new(name, (0..ids.len()).map(f).collect(), ids)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    #[inline]
    pub fn forward(&self, v: Vertex) -> Option<Vertex> {
        self.forward.get(v).copied().flatten()
    }

    #[inline]
    pub fn backward(&self, v: Vertex) -> Option<Vertex> {
        self.backward.get(v).copied().flatten()
    }

    #[inline]
    pub fn apply(&self, v: Vertex, inverse: bool) -> Option<Vertex> {
        if inverse {
            self.backward(v)
        } else {
            self.forward(v)
        }
    }

    pub fn forward_table(&self) -> &[Option<Vertex>] {
        &self.forward
    }

    pub fn inverse(&self) -> GeneratorMap {
        GeneratorMap {
            name: format!("{}^-1", self.name),
            forward: self.backward.clone(),
            backward: self.forward.clone(),
        }
    }

    /// Number of vertices where the map is defined.
    pub fn domain_size(&self) -> usize {
        self.forward.iter().filter(|v| v.is_some()).count()
    }

    /// Checks the mode's preservation property on every defined pair.
    pub fn check_preserves(&self, space: &MetricGraph, mode: ActionMode) -> Result<()> {
        let n = space.len();
        let fail = |u: Vertex, v: Vertex, what| Error::NotAnIsometry {
            name: self.name.clone(),
            what,
            u: space.id(u).to_string(),
            v: space.id(v).to_string(),
        };
        match mode {
            ActionMode::Automorphism => {
                // edges forward, and edges backward (= non-edges forward)
                for (u, v) in space.graph().edges() {
                    if let (Some(a), Some(b)) = (self.forward(u), self.forward(v)) {
                        if !space.has_edge(a, b) {
                            return Err(fail(u, v, "adjacency"));
                        }
                    }
                    if let (Some(a), Some(b)) = (self.backward(u), self.backward(v)) {
                        if !space.has_edge(a, b) {
                            return Err(fail(a, b, "non-adjacency"));
                        }
                    }
                }
            }
            ActionMode::Isometry => {
                for u in 0..n {
                    let Some(a) = self.forward(u) else { continue };
                    for v in u + 1..n {
                        if let Some(b) = self.forward(v) {
                            if space.dist(u, v) != space.dist(a, b) {
                                return Err(fail(u, v, "distance"));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// One letter: a generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Letter {
        Letter {
            inverse: !self.inverse,
            ..self
        }
    }

    /// All `2k` letters, ordered by generator index then sign (`+` before `−`).
    pub fn all(generators: usize) -> Vec<Letter> {
        (0..generators)
            .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
            .collect()
    }
}

/// A word in the generators and their inverses.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(generator: usize, inverse: bool) -> Self {
        Word(vec![Letter::new(generator, inverse)])
    }

    /// `generator^exponent`.
    pub fn power_of(generator: usize, exponent: i64) -> Self {
        let letter = Letter::new(generator, exponent < 0);
        Word(vec![letter; exponent.unsigned_abs() as usize])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        Word(base.0.repeat(k.unsigned_abs() as usize))
    }

    /// `h · self · h⁻¹` in reading order.
    pub fn conjugate_by(&self, h: &Word) -> Word {
        h.concat(self).concat(&h.inverse())
    }

    /// Free reduction (cancels adjacent `s s⁻¹`).
    pub fn reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[1] != w[0].inv())
    }

    /// Parses `"t t a^-1"`, `"t^2.a^-1"` or `"t*t*a^-1"` against generator names.
    /// The empty string is the identity.
    pub fn parse(text: &str, names: &[&str]) -> Result<Word> {
        let mut letters = Vec::new();
        for token in text.split(|c: char| c.is_whitespace() || c == '.' || c == '*').filter(|t| !t.is_empty()) {
            let (name, exp) = match token.split_once('^') {
                Some((name, exp)) => {
                    let e: i64 = exp
                        .trim_start_matches('(')
                        .trim_end_matches(')')
                        .parse()
                        .map_err(|_| Error::MalformedWord(format!("bad exponent in {token:?}")))?;
                    (name, e)
                }
                None => (token, 1),
            };
            let generator = names
                .iter()
                .position(|n| *n == name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            letters.extend(Word::power_of(generator, exp).0);
        }
        Ok(Word(letters))
    }

    /// Renders with run-length exponents, e.g. `t^2 a^-1`.
    pub fn display<'a>(&'a self, names: &'a [&'a str]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }

    /// Every reduced word of length `1..=max_len` in shortlex order.
    pub fn reduced_words(generators: usize, max_len: usize) -> Vec<Word> {
        let letters = Letter::all(generators);
        let mut out = Vec::new();
        let mut layer = vec![Word::identity()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for &l in &letters {
                    if w.0.last() != Some(&l.inv()) {
                        let mut v = w.0.clone();
                        v.push(l);
                        next.push(Word(v));
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [&'a str],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "e");
        }
        let mut first = true;
        for run in self.word.0.chunk_by(|a, b| a == b) {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let l = run[0];
            let name = self.names.get(l.generator).copied().unwrap_or("?");
            let exp = run.len() as i64 * if l.inverse { -1 } else { 1 };
            if exp == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{exp}")?;
            }
        }
        Ok(())
    }
}

/// Applies `word` to `v` using `gens`; on failure returns the 1-based letter
/// position and the vertex it was applied to.
pub(crate) fn eval_with(gens: &[GeneratorMap], word: &Word, v: Vertex) -> std::result::Result<Vertex, (usize, Vertex)> {
    let mut cur = v;
    for (i, l) in word.0.iter().enumerate() {
        cur = gens[l.generator].apply(cur, l.inverse).ok_or((i + 1, cur))?;
    }
    Ok(cur)
}

/// A finite truncation of a group action: a space and its generator maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    space: MetricGraph,
    generators: Vec<GeneratorMap>,
    mode: ActionMode,
}

impl GroupAction {
    /// Validates every generator against `mode` on all defined pairs.
    pub fn new(space: MetricGraph, generators: Vec<GeneratorMap>, mode: ActionMode) -> Result<Self> {
        for g in &generators {
            if g.len() != space.len() {
                return Err(Error::DimensionMismatch {
                    expected: space.len(),
                    got: g.len(),
                });
            }
            g.check_preserves(&space, mode)?;
        }
        Ok(GroupAction { space, generators, mode })
    }

    pub fn space(&self) -> &MetricGraph {
        &self.space
    }

    pub fn generators(&self) -> &[GeneratorMap] {
        &self.generators
    }

    pub fn mode(&self) -> ActionMode {
        self.mode
    }

    pub fn generator_names(&self) -> Vec<&str> {
        self.generators.iter().map(GeneratorMap::name).collect()
    }

    pub fn generator_index(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        Word::parse(text, &self.generator_names())
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.display(&self.generator_names()).to_string()
    }

    /// Same space, only the listed generators (in the given order).
    pub fn restrict(&self, keep: &[usize]) -> GroupAction {
        GroupAction {
            space: self.space.clone(),
            generators: keep.iter().map(|&i| self.generators[i].clone()).collect(),
            mode: self.mode,
        }
    }

    /// Applies `w` to `v` in reading order.
    pub fn evaluate_word(&self, w: &Word, v: Vertex) -> Result<Vertex> {
        if v >= self.space.len() {
            return Err(Error::VertexNotFound(format!("#{v}")));
        }
        eval_with(&self.generators, w, v).map_err(|(letter, at)| Error::OutOfTruncation {
            letter,
            vertex: self.space.id(at).to_string(),
        })
    }

    /// `evaluate_word` returning `None` when the word leaves the truncation.
    pub fn try_evaluate(&self, w: &Word, v: Vertex) -> Option<Vertex> {
        eval_with(&self.generators, w, v).ok()
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::graph::MetricGraph;

    /// Path on `-r..=r` with ids `"-r".."r"`; vertex `k` has index `k + r`.
    pub fn line(r: i64) -> MetricGraph {
        let n = (2 * r + 1) as usize;
        MetricGraph::from_edges((-r..=r).map(|k| k.to_string()), (1..n).map(|i| (i - 1, i)))
            .unwrap()
            .with_boundary(vec![0, n - 1])
    }

    /// `ℤ` acting on the line segment by shifts of the given sizes.
    pub fn line_action(r: i64, shifts: &[(&str, i64)]) -> GroupAction {
        let g = line(r);
        let n = g.len() as i64;
        let ids = g.graph().ids().to_vec();
        let gens = shifts
            .iter()
            .map(|&(name, s)| {
                GeneratorMap::from_fn(name, &ids, |v| {
                    let w = v as i64 + s;
                    (0..n).contains(&w).then_some(w as usize)
                })
                .unwrap()
            })
            .collect();
        GroupAction::new(g, gens, ActionMode::Automorphism).unwrap()
    }

    /// `C_n` rotating the `n`-cycle.
    pub fn rotation(n: usize) -> GroupAction {
        let g = crate::graph::fixtures::cycle(n);
        let ids = g.graph().ids().to_vec();
        let rot = GeneratorMap::from_fn("r", &ids, |v| Some((v + 1) % n)).unwrap();
        GroupAction::new(g, vec![rot], ActionMode::Automorphism).unwrap()
    }
}
