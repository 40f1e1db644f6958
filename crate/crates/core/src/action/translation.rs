use num_rational::Rational64;
use serde::Serialize;

use super::{eval_with, GroupAction, Word};
use crate::error::{Error, Result};
use crate::graph::{hyperbolicity_delta, MetricGraph, SizeCaps, Vertex};
use crate::ratio::{ser_ratio, ser_ratio_vec};

/// `d(gⁿx₀, x₀)/n` for `n = 1..=N`, stopping early at the truncation edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TauSequence {
    pub displacements: Vec<u32>,
    #[serde(serialize_with = "ser_ratio_vec")]
    pub tau_sequence: Vec<Rational64>,
    #[serde(serialize_with = "ser_ratio_vec")]
    pub running_min: Vec<Rational64>,
    /// Minimum of the sequence: an upper bound for the stable translation length.
    #[serde(serialize_with = "ser_ratio")]
    pub tau_upper: Rational64,
    pub requested: usize,
    /// True when `gⁿx₀` left the truncation before `n = N`.
    pub truncated: bool,
}

/// Orbit `x₀, g x₀, g² x₀, …` up to `n ≤ N`, or fewer if it leaves the truncation.
fn power_orbit(a: &GroupAction, g: &Word, x0: Vertex, n: usize) -> Result<Vec<Vertex>> {
    if x0 >= a.space().len() {
        return Err(Error::VertexNotFound(format!("#{x0}")));
    }
    let mut pts = vec![x0];
    let mut cur = x0;
    for k in 1..=n {
        match eval_with(a.generators(), g, cur) {
            Ok(next) => {
                cur = next;
                pts.push(cur);
            }
            Err((letter, at)) if k == 1 => {
                return Err(Error::OutOfTruncation {
                    letter,
                    vertex: a.space().id(at).to_string(),
                })
            }
            Err(_) => break,
        }
    }
    Ok(pts)
}

fn tau_from_orbit(space: &MetricGraph, pts: &[Vertex], requested: usize) -> TauSequence {
    let row = space.row(pts[0]);
    let displacements: Vec<u32> = pts[1..].iter().map(|&p| row[p]).collect();
    let tau_sequence: Vec<Rational64> = displacements
        .iter()
        .enumerate()
        .map(|(i, &d)| Rational64::new(d as i64, i as i64 + 1))
        .collect();
    let mut running_min = Vec::with_capacity(tau_sequence.len());
    for &t in &tau_sequence {
        let m = running_min.last().map_or(t, |&m: &Rational64| m.min(t));
        running_min.push(m);
    }
    TauSequence {
        tau_upper: running_min.last().copied().unwrap_or_default(),
        displacements,
        tau_sequence,
        running_min,
        requested,
        truncated: pts.len() <= requested,
    }
}

pub fn stable_translation_length(a: &GroupAction, g: &Word, x0: Vertex, n: usize) -> Result<TauSequence> {
    let pts = power_orbit(a, g, x0, n)?;
    Ok(tau_from_orbit(a.space(), &pts, n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeTranslationKind {
    Fixed { vertex: Vertex },
    Inversion { u: Vertex, v: Vertex },
    Axis { vertex: Vertex },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TreeTranslation {
    /// Exact stable translation length; 0 for fixed vertices and inversions.
    pub tau: u32,
    /// Minimum displacement `min_v d(v, g v)` over the defined vertices.
    pub min_displacement: u32,
    pub kind: TreeTranslationKind,
}

/// Exact translation length on a tree from the minimum vertex displacement.
pub fn tree_translation_length(a: &GroupAction, g: &Word) -> Result<TreeTranslation> {
    let space = a.space();
    if !space.is_tree() {
        return Err(Error::NotATree);
    }
    let mut best: Option<(u32, Vertex)> = None;
    let mut first_err = None;
    for v in 0..space.len() {
        match eval_with(a.generators(), g, v) {
            Ok(w) => {
                let d = space.dist(v, w);
                if best.is_none_or(|(b, _)| d < b) {
                    best = Some((d, v));
                    if d == 0 {
                        break;
                    }
                }
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    let Some((d, v)) = best else {
        let (letter, at) = first_err.unwrap_or((1, 0));
        return Err(Error::OutOfTruncation {
            letter,
            vertex: space.id(at).to_string(),
        });
    };
    let flips = |u: Vertex| {
        eval_with(a.generators(), g, u).is_ok_and(|x| space.dist(u, x) == 1 && eval_with(a.generators(), g, x) == Ok(u))
    };
    let (tau, kind) = match d {
        0 => (0, TreeTranslationKind::Fixed { vertex: v }),
        1 => match (0..space.len()).find(|&u| flips(u)) {
            Some(u) => {
                let x = eval_with(a.generators(), g, u).unwrap();
                (0, TreeTranslationKind::Inversion { u: u.min(x), v: u.max(x) })
            }
            None => (1, TreeTranslationKind::Axis { vertex: v }),
        },
        _ => (d, TreeTranslationKind::Axis { vertex: v }),
    };
    Ok(TreeTranslation {
        tau,
        min_displacement: d,
        kind,
    })
}

/// What is known about the ambient space, used by the classifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpaceFacts {
    pub is_tree: bool,
    pub twice_delta: Option<u32>,
    /// Bottleneck constant of a certified quasitree.
    pub quasitree_constant: Option<u32>,
    /// Doubled slack for the displacement-doubling test; defaults to `8δ`.
    pub twice_slack: Option<u32>,
}

impl SpaceFacts {
    /// Tree check always; δ only when the space is within the cap.
    pub fn compute(space: &MetricGraph, caps: SizeCaps) -> Self {
        let is_tree = space.is_tree();
        let twice_delta = if is_tree {
            Some(0)
        } else {
            hyperbolicity_delta(space, caps).ok().map(|r| r.twice_delta)
        };
        SpaceFacts {
            is_tree,
            twice_delta,
            quasitree_constant: is_tree.then_some(0),
            twice_slack: None,
        }
    }

    pub fn with_quasitree(mut self, constant: u32) -> Self {
        self.quasitree_constant = Some(constant);
        self
    }

    pub fn with_twice_slack(mut self, twice_slack: u32) -> Self {
        self.twice_slack = Some(twice_slack);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum IsometryVerdict {
    Elliptic,
    Loxodromic,
    ParabolicCandidate,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `x₀, g x₀, …, g^{k−1} x₀` with `g^k x₀ = x₀`.
    PeriodicOrbit { cycle: Vec<Vertex> },
    FixedVertex { vertex: Vertex },
    InvertedEdge { u: Vertex, v: Vertex },
    TreeAxis { vertex: Vertex, displacement: u32 },
    /// `2·D₂ₙ ≥ 4·Dₙ − 2s` and `2·Dₙ > 2s + 12δ`, all doubled to stay integral.
    DisplacementDoubling {
        n: usize,
        d_n: u32,
        d_2n: u32,
        twice_slack: u32,
        twice_delta: u32,
    },
    ParabolicDecay {
        tau_upper: f64,
        threshold: f64,
        escape: u32,
        eccentricity: u32,
    },
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsometryReport {
    pub verdict: IsometryVerdict,
    /// `None` when not even `g x₀` is defined.
    #[serde(serialize_with = "ser_opt_ratio")]
    pub tau_upper: Option<Rational64>,
    pub sequence: Option<TauSequence>,
    pub certificate: Certificate,
    pub truncated: bool,
    pub notes: Vec<String>,
}

fn ser_opt_ratio<S: serde::Serializer>(r: &Option<Rational64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// `2(1 + log₂ N)/N`, the decay a horoball-like orbit reaches by step `N`.
pub(crate) fn parabolic_threshold(n: usize) -> f64 {
    let n = n as f64;
    2.0 * (1.0 + n.log2()) / n
}

/// Elliptic / loxodromic / parabolic-candidate classification within a horizon.
pub fn classify_isometry(a: &GroupAction, g: &Word, x0: Vertex, horizon: usize, facts: &SpaceFacts) -> Result<IsometryReport> {
    let space = a.space();
    let mut notes = Vec::new();
    let pts = match power_orbit(a, g, x0, horizon) {
        Ok(p) => p,
        Err(Error::OutOfTruncation { letter, vertex }) => {
            notes.push(format!("g x0 undefined: letter {letter} at {vertex}"));
            vec![x0]
        }
        Err(e) => return Err(e),
    };
    let seq = (pts.len() > 1).then(|| tau_from_orbit(space, &pts, horizon));
    let truncated = seq.as_ref().is_none_or(|s| s.truncated);
    let tau_upper = seq.as_ref().map(|s| s.tau_upper);
    let report = |verdict, certificate, tau_upper, notes| IsometryReport {
        verdict,
        tau_upper,
        sequence: seq.clone(),
        certificate,
        truncated,
        notes,
    };

    if facts.is_tree {
        match tree_translation_length(a, g) {
            Ok(t) => {
                let cert = match t.kind {
                    TreeTranslationKind::Fixed { vertex } => Certificate::FixedVertex { vertex },
                    TreeTranslationKind::Inversion { u, v } => Certificate::InvertedEdge { u, v },
                    TreeTranslationKind::Axis { vertex } => Certificate::TreeAxis {
                        vertex,
                        displacement: t.tau,
                    },
                };
                let verdict = if t.tau == 0 {
                    IsometryVerdict::Elliptic
                } else {
                    IsometryVerdict::Loxodromic
                };
                return Ok(report(verdict, cert, Some(Rational64::from_integer(t.tau as i64)), notes));
            }
            Err(Error::OutOfTruncation { .. }) => notes.push("exact tree method unavailable: word undefined everywhere".into()),
            Err(e) => return Err(e),
        }
    }

    if let Some(s) = &seq {
        if let Some(k) = s.displacements.iter().position(|&d| d == 0) {
            let cycle = pts[..=k].to_vec();
            return Ok(report(IsometryVerdict::Elliptic, Certificate::PeriodicOrbit { cycle }, tau_upper, notes));
        }
    }
    if let Some(v) = (0..space.len()).find(|&v| eval_with(a.generators(), g, v) == Ok(v)) {
        return Ok(report(IsometryVerdict::Elliptic, Certificate::FixedVertex { vertex: v }, tau_upper, notes));
    }

    let Some(s) = &seq else {
        return Ok(report(IsometryVerdict::Unknown, Certificate::None, None, notes));
    };

    if let Some(td) = facts.twice_delta {
        let twice_slack = facts.twice_slack.unwrap_or(4 * td);
        let d = &s.displacements;
        for n in 1..=d.len() / 2 {
            let (dn, d2n) = (d[n - 1] as i64, d[2 * n - 1] as i64);
            if 2 * d2n >= 4 * dn - twice_slack as i64 && 2 * dn > twice_slack as i64 + 6 * td as i64 {
                let cert = Certificate::DisplacementDoubling {
                    n,
                    d_n: dn as u32,
                    d_2n: d2n as u32,
                    twice_slack,
                    twice_delta: td,
                };
                return Ok(report(IsometryVerdict::Loxodromic, cert, tau_upper, notes));
            }
        }
    } else {
        notes.push("δ unavailable (space over the size cap): doubling test skipped".into());
    }

    let n = s.displacements.len();
    let escape = s.displacements.iter().copied().max().unwrap_or(0);
    let eccentricity = space.eccentricity(x0);
    let tau = *s.tau_upper.numer() as f64 / *s.tau_upper.denom() as f64;
    let threshold = parabolic_threshold(n);
    if n >= 8 && tau <= threshold && 4 * escape >= 3 * eccentricity {
        let cert = Certificate::ParabolicDecay {
            tau_upper: tau,
            threshold,
            escape,
            eccentricity,
        };
        if let Some(c) = facts.quasitree_constant {
            notes.push(format!(
                "parabolic-looking decay demoted: the space is a quasitree (bottleneck constant {c}), where isometries are elliptic or loxodromic"
            ));
            return Ok(report(IsometryVerdict::Unknown, cert, tau_upper, notes));
        }
        return Ok(report(IsometryVerdict::ParabolicCandidate, cert, tau_upper, notes));
    }
    Ok(report(IsometryVerdict::Unknown, Certificate::None, tau_upper, notes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SerreOutcome {
    CommonFixedVertex { vertex: Vertex },
    /// Every `gᵢ` and `gᵢgⱼ` is elliptic but no common fixed vertex lies in the truncation.
    NoFixedVertexInTruncation,
    NonElliptic { word: Word, tau: u32 },
}

/// Checks each `gᵢ` and `gᵢgⱼ` for ellipticity, then looks for a common fixed vertex.
pub fn serre_elliptic_test(a: &GroupAction, gens: &[usize]) -> Result<SerreOutcome> {
    if !a.space().is_tree() {
        return Err(Error::NotATree);
    }
    for &i in gens {
        if i >= a.generators().len() {
            return Err(Error::UnknownGenerator(format!("#{i}")));
        }
    }
    let mut words: Vec<Word> = gens.iter().map(|&i| Word::letter(i, false)).collect();
    for (k, &i) in gens.iter().enumerate() {
        for &j in &gens[k + 1..] {
            words.push(Word::letter(i, false).concat(&Word::letter(j, false)));
        }
    }
    for w in words {
        let t = tree_translation_length(a, &w)?;
        if t.tau > 0 {
            return Ok(SerreOutcome::NonElliptic { word: w, tau: t.tau });
        }
    }
    let fixed = (0..a.space().len()).find(|&v| gens.iter().all(|&i| a.generators()[i].forward(v) == Some(v)));
    Ok(match fixed {
        Some(vertex) => SerreOutcome::CommonFixedVertex { vertex },
        None => SerreOutcome::NoFixedVertexInTruncation,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BusemannValue {
    pub theta: i64,
    /// First ray index from which `d(x₀, ray(n)) − d(g x₀, ray(n))` is constant.
    pub stabilized_from: usize,
}

/// `lim d(x₀, ray(n)) − d(g x₀, ray(n))` with `x₀ = ray(0)`, checking on the
/// second half of the ray that `g` shifts it along itself by exactly that amount.
pub fn busemann_homomorphism(a: &GroupAction, ray: &[Vertex], g: &Word) -> Result<BusemannValue> {
    let space = a.space();
    if !space.is_tree() {
        return Err(Error::NotATree);
    }
    if ray.len() < 2 {
        return Err(Error::Format("ray needs at least two vertices".into()));
    }
    for (k, &v) in ray.iter().enumerate() {
        if v >= space.len() {
            return Err(Error::VertexNotFound(format!("#{v}")));
        }
        if space.dist(ray[0], v) as usize != k {
            return Err(Error::Format(format!("ray is not geodesic at index {k}")));
        }
    }
    let gx0 = a.evaluate_word(g, ray[0])?;
    let f: Vec<i64> = ray
        .iter()
        .enumerate()
        .map(|(k, &r)| k as i64 - space.dist(gx0, r) as i64)
        .collect();
    let theta = *f.last().unwrap();
    let stabilized_from = f.iter().rposition(|&x| x != theta).map_or(0, |i| i + 1);

    let mut checked = 0;
    for n in ray.len() / 2..ray.len() {
        let Ok(img) = eval_with(a.generators(), g, ray[n]) else { continue };
        match ray.iter().position(|&r| r == img) {
            Some(m) if m as i64 - n as i64 == theta => checked += 1,
            Some(m) => {
                return Err(Error::EndNotInvariant(format!(
                    "ray({n}) maps to ray({m}), shift {} but the limit is {theta}",
                    m as i64 - n as i64
                )))
            }
            None => {
                return Err(Error::EndNotInvariant(format!(
                    "ray({n}) = {} maps off the ray to {}",
                    space.id(ray[n]),
                    space.id(img)
                )))
            }
        }
    }
    if checked == 0 {
        let last = *ray.last().unwrap();
        return Err(Error::OutOfTruncation {
            letter: 1,
            vertex: space.id(last).to_string(),
        });
    }
    Ok(BusemannValue { theta, stabilized_from })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{ActionMode, GeneratorMap};
    use super::*;

    fn int(k: i64) -> Rational64 {
        Rational64::from_integer(k)
    }

    #[test]
    fn shift_has_constant_sequence() {
        let a = line_action(20, &[("s", 1)]);
        let s = a.parse_word("s").unwrap();
        let t = stable_translation_length(&a, &s, 20, 10).unwrap();
        assert_eq!(t.tau_upper, int(1));
        assert!(t.tau_sequence.iter().all(|&x| x == int(1)));
        assert!(!t.truncated);
    }

    #[test]
    fn sequence_truncates_with_flag() {
        let a = line_action(5, &[("s", 1)]);
        let s = a.parse_word("s").unwrap();
        let t = stable_translation_length(&a, &s, 5, 10).unwrap();
        assert_eq!(t.displacements, vec![1, 2, 3, 4, 5]);
        assert!(t.truncated);
        assert!(matches!(stable_translation_length(&a, &s, 10, 3), Err(Error::OutOfTruncation { .. })));
    }

    #[test]
    fn rotation_returns_to_zero() {
        let a = rotation(6);
        let r = a.parse_word("r").unwrap();
        let t = stable_translation_length(&a, &r, 0, 6).unwrap();
        assert_eq!(t.displacements, vec![1, 2, 3, 2, 1, 0]);
        assert_eq!(t.tau_upper, int(0));
        // running minimum never increases
        assert!(t.running_min.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn tree_translation_on_line() {
        let a = line_action(10, &[("s", 1)]);
        let s3 = a.parse_word("s^3").unwrap();
        assert_eq!(tree_translation_length(&a, &s3).unwrap().tau, 3);
        let e = tree_translation_length(&a, &Word::identity()).unwrap();
        assert_eq!((e.tau, e.kind), (0, TreeTranslationKind::Fixed { vertex: 0 }));
        assert_eq!(tree_translation_length(&rotation(5), &Word::letter(0, false)), Err(Error::NotATree));
    }

    #[test]
    fn reflection_of_even_path_inverts_an_edge() {
        let g = crate::graph::fixtures::path(4);
        let ids = g.graph().ids().to_vec();
        let f = GeneratorMap::from_fn("f", &ids, |v| Some(3 - v)).unwrap();
        let a = GroupAction::new(g, vec![f], ActionMode::Automorphism).unwrap();
        let t = tree_translation_length(&a, &Word::letter(0, false)).unwrap();
        assert_eq!(t.tau, 0);
        assert_eq!(t.kind, TreeTranslationKind::Inversion { u: 1, v: 2 });
    }

    #[test]
    fn classify_shift_and_rotation() {
        let a = line_action(20, &[("s", 1)]);
        let facts = SpaceFacts::compute(a.space(), SizeCaps::default());
        let r = classify_isometry(&a, &a.parse_word("s").unwrap(), 20, 10, &facts).unwrap();
        assert_eq!(r.verdict, IsometryVerdict::Loxodromic);
        assert_eq!(r.tau_upper, Some(int(1)));

        let c = rotation(6);
        let facts = SpaceFacts::compute(c.space(), SizeCaps::default());
        let r = classify_isometry(&c, &Word::letter(0, false), 0, 12, &facts).unwrap();
        assert_eq!(r.verdict, IsometryVerdict::Elliptic);
        assert_eq!(r.certificate, Certificate::PeriodicOrbit { cycle: vec![0, 1, 2, 3, 4, 5] });
    }

    #[test]
    fn doubling_certifies_rotation_free_translation_on_a_thick_line() {
        // ladder (P_n × P_2) with a shift: not a tree, δ = 1
        let cols = 30;
        let g = crate::graph::fixtures::grid(2, cols);
        let ids = g.graph().ids().to_vec();
        let s = GeneratorMap::from_fn("s", &ids, |v| (v % cols + 1 < cols).then_some(v + 1)).unwrap();
        let a = GroupAction::new(g, vec![s], ActionMode::Automorphism).unwrap();
        let facts = SpaceFacts::compute(a.space(), SizeCaps::default());
        assert_eq!(facts.twice_delta, Some(2));
        let r = classify_isometry(&a, &Word::letter(0, false), 0, 28, &facts).unwrap();
        assert_eq!(r.verdict, IsometryVerdict::Loxodromic);
        assert!(matches!(r.certificate, Certificate::DisplacementDoubling { .. }));
    }

    #[test]
    fn undefined_word_is_unknown_with_flag() {
        let a = line_action(5, &[("s", 1)]);
        let facts = SpaceFacts {
            is_tree: false,
            ..SpaceFacts::compute(a.space(), SizeCaps::default())
        };
        let r = classify_isometry(&a, &a.parse_word("s^20").unwrap(), 5, 4, &facts).unwrap();
        assert_eq!(r.verdict, IsometryVerdict::Unknown);
        assert!(r.truncated);
        assert!(r.tau_upper.is_none());
    }

    #[test]
    fn serre_on_star_and_line() {
        let g = crate::graph::fixtures::star(4);
        let ids = g.graph().ids().to_vec();
        // center is vertex 0; two involutions swapping leaves
        let f = GeneratorMap::new("f", vec![Some(0), Some(2), Some(1), Some(3), Some(4)], &ids).unwrap();
        let h = GeneratorMap::new("h", vec![Some(0), Some(1), Some(2), Some(4), Some(3)], &ids).unwrap();
        let a = GroupAction::new(g, vec![f, h], ActionMode::Automorphism).unwrap();
        assert_eq!(serre_elliptic_test(&a, &[0, 1]).unwrap(), SerreOutcome::CommonFixedVertex { vertex: 0 });

        let l = line_action(6, &[("shift", 1)]);
        match serre_elliptic_test(&l, &[0]).unwrap() {
            SerreOutcome::NonElliptic { word, tau } => {
                assert_eq!(l.format_word(&word), "shift");
                assert_eq!(tau, 1);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(serre_elliptic_test(&rotation(4), &[0]), Err(Error::NotATree));
    }

    #[test]
    fn busemann_on_line() {
        let a = line_action(10, &[("s", 1)]);
        // ray from 0 towards −10; s moves points away from that end
        let zero = a.space().vertex("0").unwrap();
        let ray: Vec<Vertex> = (0..=10).map(|k| zero - k).collect();
        let s = a.parse_word("s").unwrap();
        assert_eq!(busemann_homomorphism(&a, &ray, &s).unwrap().theta, -1);
        assert_eq!(busemann_homomorphism(&a, &ray, &s.inverse()).unwrap().theta, 1);
        assert_eq!(busemann_homomorphism(&a, &ray, &Word::identity()).unwrap().theta, 0);
        let bad: Vec<Vertex> = vec![zero, zero + 1, zero];
        assert!(busemann_homomorphism(&a, &bad, &s).is_err());
    }
}
