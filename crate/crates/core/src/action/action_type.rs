use serde::Serialize;

use super::orbit::orbit;
use super::translation::{classify_isometry, IsometryVerdict, SpaceFacts};
use super::{eval_with, GroupAction, Word};
use crate::error::Result;
use crate::graph::Vertex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionTypeOptions {
    /// Word radius for the orbit exhaustion test.
    pub orbit_horizon: usize,
    /// Longest reduced word scanned for loxodromics.
    pub word_cap: usize,
    /// Powers used by the isometry classifier and the fingerprints.
    pub power_horizon: usize,
    /// Two endpoints share a direction when `(p·q)_{x₀}` reaches this value;
    /// by default half the smaller of `d(p, x₀)`, `d(q, x₀)`.
    pub threshold: Option<u32>,
    /// Powers `k` tried for the ping-pong pair `(gᵏ, hᵏ)`.
    pub ping_pong_powers: Vec<u32>,
}

impl Default for ActionTypeOptions {
    fn default() -> Self {
        ActionTypeOptions {
            orbit_horizon: 12,
            word_cap: 3,
            power_horizon: 16,
            threshold: None,
            ping_pong_powers: vec![2, 3, 4],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ActionVerdict {
    Bounded,
    ParabolicCandidate,
    Lineal,
    QuasiParabolic,
    General,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Confidence {
    Heuristic,
    Certified,
}

/// A loxodromic word with the far points reached by its positive and
/// negative powers, grouped into direction classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoxodromicEvidence {
    pub word: String,
    pub forward: Vertex,
    pub backward: Vertex,
    pub forward_class: usize,
    pub backward_class: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PingPongWitness {
    pub g: String,
    pub h: String,
    pub power: u32,
    pub g_region: usize,
    pub h_region: usize,
    /// Images checked to land in the opposite region.
    pub images_checked: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActionTypeReport {
    pub verdict: ActionVerdict,
    pub confidence: Confidence,
    pub orbit_size: usize,
    pub words_scanned: usize,
    pub loxodromics: Vec<LoxodromicEvidence>,
    pub direction_classes: usize,
    pub ping_pong: Option<PingPongWitness>,
    pub notes: Vec<String>,
}

struct Lox {
    word: Word,
    fwd: Vertex,
    bwd: Vertex,
    cf: usize,
    cb: usize,
}

/// Last defined point of `x₀, g x₀, …, gᴺ x₀`.
fn far_point(a: &GroupAction, g: &Word, x0: Vertex, n: usize) -> Vertex {
    let mut cur = x0;
    for _ in 0..n {
        match eval_with(a.generators(), g, cur) {
            Ok(next) => cur = next,
            Err(_) => break,
        }
    }
    cur
}

/// Gromov-classification heuristic: exhaustion, loxodromic scan, direction
/// fingerprints and a ping-pong check.
pub fn classify_action_type(a: &GroupAction, x0: Vertex, opts: &ActionTypeOptions, facts: &SpaceFacts) -> Result<ActionTypeReport> {
    let space = a.space();
    let o = orbit(a, x0, opts.orbit_horizon)?;
    let mut report = ActionTypeReport {
        verdict: ActionVerdict::Undetermined,
        confidence: Confidence::Heuristic,
        orbit_size: o.len(),
        words_scanned: 0,
        loxodromics: Vec::new(),
        direction_classes: 0,
        ping_pong: None,
        notes: Vec::new(),
    };
    if o.is_closed() {
        report.verdict = ActionVerdict::Bounded;
        report.confidence = Confidence::Certified;
        return Ok(report);
    }

    let words = Word::reduced_words(a.generators().len(), opts.word_cap);
    report.words_scanned = words.len();
    let row = space.row(x0);
    let same = |p: Vertex, q: Vertex| {
        let twice = space.twice_gromov_product(p, q, x0);
        match opts.threshold {
            Some(t) => twice >= 2 * t as i64,
            None => twice >= row[p].min(row[q]) as i64,
        }
    };
    let mut reps: Vec<Vertex> = Vec::new();
    let mut class_of = |p: Vertex| match reps.iter().position(|&r| same(r, p)) {
        Some(c) => c,
        None => {
            reps.push(p);
            reps.len() - 1
        }
    };
    let mut loxes: Vec<Lox> = Vec::new();
    for w in words {
        let r = classify_isometry(a, &w, x0, opts.power_horizon, facts)?;
        if r.verdict != IsometryVerdict::Loxodromic {
            continue;
        }
        let fwd = far_point(a, &w, x0, opts.power_horizon);
        let bwd = far_point(a, &w.inverse(), x0, opts.power_horizon);
        let (cf, cb) = (class_of(fwd), class_of(bwd));
        loxes.push(Lox { word: w, fwd, bwd, cf, cb });
    }
    report.direction_classes = reps.len();
    report.loxodromics = loxes
        .iter()
        .map(|l| LoxodromicEvidence {
            word: a.format_word(&l.word),
            forward: l.fwd,
            backward: l.bwd,
            forward_class: l.cf,
            backward_class: l.cb,
        })
        .collect();

    if loxes.is_empty() {
        report.verdict = ActionVerdict::ParabolicCandidate;
        report.notes.push(format!(
            "no loxodromic among reduced words of length ≤ {} and the orbit is unbounded at horizon {}",
            opts.word_cap, opts.orbit_horizon
        ));
        if facts.quasitree_constant.is_some() {
            report.verdict = ActionVerdict::Undetermined;
            report.notes.push("the space is a quasitree, which admits no parabolic actions".into());
        }
        return Ok(report);
    }

    for (i, g) in loxes.iter().enumerate() {
        for h in &loxes[i + 1..] {
            let cls = [g.cf, g.cb, h.cf, h.cb];
            let distinct = (0..4).all(|p| (p + 1..4).all(|q| cls[p] != cls[q]));
            if !distinct {
                continue;
            }
            for &k in &opts.ping_pong_powers {
                if let Some(w) = ping_pong(a, x0, g, h, k) {
                    report.verdict = ActionVerdict::General;
                    report.confidence = Confidence::Certified;
                    report.ping_pong = Some(w);
                    return Ok(report);
                }
            }
        }
    }

    let classes = reps.len();
    let common = (0..classes).find(|&c| loxes.iter().all(|l| l.cf == c || l.cb == c));
    let first = {
        let l = &loxes[0];
        (l.cf.min(l.cb), l.cf.max(l.cb))
    };
    if loxes.iter().all(|l| (l.cf.min(l.cb), l.cf.max(l.cb)) == first) && first.0 != first.1 {
        report.verdict = ActionVerdict::Lineal;
    } else if common.is_some() && classes >= 3 {
        report.verdict = ActionVerdict::QuasiParabolic;
    } else {
        report.notes.push("direction fingerprints fit no pattern at this horizon".into());
    }
    Ok(report)
}

/// Regions `U(p)`: vertices whose Gromov product with `p` strictly beats the
/// other three endpoints. Checks `g^{±k} X_h ⊆ X_g` and `h^{±k} X_g ⊆ X_h`
/// wherever the images are defined.
fn ping_pong(a: &GroupAction, x0: Vertex, g: &Lox, h: &Lox, k: u32) -> Option<PingPongWitness> {
    let space = a.space();
    let ends = [g.fwd, g.bwd, h.fwd, h.bwd];
    let region = |v: Vertex| -> Option<usize> {
        if v == x0 {
            return None;
        }
        let prods: Vec<i64> = ends.iter().map(|&p| space.twice_gromov_product(v, p, x0)).collect();
        let best = *prods.iter().max().unwrap();
        let winners: Vec<usize> = (0..4).filter(|&i| prods[i] == best).collect();
        (best > 0 && winners.len() == 1).then(|| winners[0] / 2)
    };
    let side: Vec<Option<usize>> = (0..space.len()).map(region).collect();
    let sizes = [0, 1].map(|s| side.iter().filter(|&&x| x == Some(s)).count());
    if sizes.contains(&0) {
        return None;
    }
    let gk = g.word.pow(k as i64);
    let hk = h.word.pow(k as i64);
    let moves = [(&gk, 1usize, 0usize), (&hk, 0, 1)];
    let mut checked = 0;
    for (w, from, to) in moves {
        for word in [w.clone(), w.inverse()] {
            for v in (0..space.len()).filter(|&v| side[v] == Some(from)) {
                if let Ok(img) = eval_with(a.generators(), &word, v) {
                    if side[img] != Some(to) {
                        return None;
                    }
                    checked += 1;
                }
            }
        }
    }
    (checked > 0).then(|| PingPongWitness {
        g: a.format_word(&gk),
        h: a.format_word(&hk),
        power: k,
        g_region: sizes[0],
        h_region: sizes[1],
        images_checked: checked,
    })
}
