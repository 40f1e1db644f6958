//! Acceptance suite: one PASS/FAIL line per criterion, each under a minute.
//! Runs without the libtest harness so the lines are always printed.

use std::collections::VecDeque;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qtlab_core::action::*;
use qtlab_core::constructions::*;
use qtlab_core::graph::*;
use qtlab_core::lm::*;
use qtlab_core::products::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const BUDGET: Duration = Duration::from_secs(60);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn path_graph(n: usize) -> MetricGraph {
    MetricGraph::from_edges((0..n).map(|i| i.to_string()), (1..n).map(|i| (i - 1, i))).unwrap()
}

fn cycle_graph(n: usize) -> MetricGraph {
    MetricGraph::from_edges((0..n).map(|i| i.to_string()), (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

fn grid_graph(rows: usize, cols: usize) -> MetricGraph {
    let ids = (0..rows).flat_map(|r| (0..cols).map(move |c| format!("{r},{c}")));
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    MetricGraph::from_edges(ids, edges).unwrap()
}

/// Brute force: for every geodesic triple, the largest `c` such that `x` and
/// `y` stay connected after deleting every vertex closer than `c` to `z`.
fn bottleneck_oracle(g: &MetricGraph) -> u32 {
    let n = g.len();
    let connected_outside = |x: usize, y: usize, z: usize, c: u32| {
        let keep = |v: usize| g.dist(z, v) >= c;
        if !keep(x) || !keep(y) {
            return false;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([x]);
        seen[x] = true;
        while let Some(u) = queue.pop_front() {
            if u == y {
                return true;
            }
            for &w in g.neighbors(u) {
                if !seen[w] && keep(w) {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        false
    };
    let mut best = 0;
    for x in 0..n {
        for y in x + 1..n {
            for z in (0..n).filter(|&z| g.on_geodesic(x, z, y)) {
                let top = g.dist(z, x).min(g.dist(z, y));
                let widest = (0..=top).rev().find(|&c| connected_outside(x, y, z, c)).unwrap_or(0);
                best = best.max(widest);
            }
        }
    }
    best
}

fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> MetricGraph {
    MetricGraph::from_edges((0..n).map(|i| i.to_string()), (1..n).map(|i| (rng.gen_range(0..i), i))).unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, gens: usize, max_len: usize) -> Word {
    let len = rng.gen_range(1..=max_len);
    Word((0..len).map(|_| Letter::new(rng.gen_range(0..gens), rng.gen_bool(0.5))).collect()).reduced()
}

fn c1_trees() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..50 {
        let n = rng.gen_range(2..=40);
        let g = random_tree(&mut rng, n);
        let d = hyperbolicity_delta(&g, SizeCaps::default()).map_err(err)?;
        ensure!(d.twice_delta == 0, "tree {i} ({n} vertices): 2δ = {}", d.twice_delta);
        let b = bottleneck_constant(&g, SizeCaps::default()).map_err(err)?;
        ensure!(b.constant == 0, "tree {i} ({n} vertices): bottleneck {}", b.constant);
    }
    Ok("50 random trees: δ = 0, C = 0".into())
}

fn c2_bottleneck() -> Outcome {
    let caps = SizeCaps::default();
    for (name, g, expected) in [("P6×P2", grid_graph(2, 6), 1), ("C12", cycle_graph(12), 3)] {
        let got = bottleneck_constant(&g, caps).map_err(err)?.constant;
        let oracle = bottleneck_oracle(&g);
        ensure!(got == expected && oracle == expected, "{name}: got {got}, oracle {oracle}, want {expected}");
    }
    let mut values = Vec::new();
    for n in 3..=6 {
        let g = grid_graph(n, n);
        let got = bottleneck_constant(&g, caps).map_err(err)?.constant;
        let oracle = bottleneck_oracle(&g);
        ensure!(got == oracle, "{n}×{n} grid: got {got}, oracle {oracle}");
        values.push(got);
    }
    ensure!(values.windows(2).all(|w| w[0] < w[1]), "grid values not increasing: {values:?}");
    Ok(format!("ladder 1, C12 3, grids {values:?}, all matching the oracle"))
}

fn c3_coset_tree() -> Outcome {
    let t = coset_tree(&FiniteGroupTable::parse_chain("C2xC3xC5").map_err(err)?).map_err(err)?;
    let a = &t.action;
    let g = a.space();
    ensure!(g.is_tree(), "not a tree");
    let valence = [1, 3, 4, 6];
    let order = [1, 2, 6, 30];
    for (i, level) in t.levels.iter().enumerate() {
        for &v in level {
            ensure!(g.neighbors(v).len() == valence[i], "level {i} vertex {} has valence {}", g.id(v), g.neighbors(v).len());
            ensure!(t.stabilizer_size(v) == order[i], "level {i} vertex {} has stabilizer {}", g.id(v), t.stabilizer_size(v));
        }
    }
    ensure!(t.element_words.len() == 30, "{} group elements", t.element_words.len());
    let facts = SpaceFacts::compute(g, SizeCaps::default());
    for w in &t.element_words {
        let r = classify_isometry(a, w, t.levels[0][0], 16, &facts).map_err(err)?;
        ensure!(r.verdict == IsometryVerdict::Elliptic, "{} is {:?}", a.format_word(w), r.verdict);
    }
    let gens: Vec<usize> = (0..a.generators().len()).collect();
    let serre = serre_elliptic_test(a, &gens).map_err(err)?;
    ensure!(
        serre == SerreOutcome::CommonFixedVertex { vertex: t.apex },
        "serre returned {serre:?}, apex is {}",
        t.apex
    );
    Ok("valences 3,4,6; stabilizers 2,6,30; 30 elliptic elements; apex fixed".into())
}

fn c4_rips() -> Outcome {
    let cone = fixture("cone-z-r10").map_err(err)?;
    let x0 = cone.action.space().vertex("0").map_err(err)?;
    let rips = rips_orbit_graph(&cone.action, x0, Rational64::from_integer(1), 12).map_err(err)?;
    let line = cayley_graph(&CayleyFamily::Z(vec![1]), 10).map_err(err)?;
    let z = line.action.space();
    ensure!(rips.graph.len() == z.len(), "{} Rips vertices vs {} in ℤ", rips.graph.len(), z.len());
    ensure!(rips.graph.edge_count() == z.graph().edge_count(), "edge counts differ");
    // the bijection matching ids is an isomorphism
    let to_z = |v: usize| z.vertex(rips.graph.id(v));
    for (u, v) in rips.graph.edges() {
        let (u, v) = (to_z(u).map_err(err)?, to_z(v).map_err(err)?);
        ensure!(z.has_edge(u, v), "Rips edge {}–{} missing in ℤ", z.id(u), z.id(v));
    }
    for name in FIXTURE_NAMES {
        let c = fixture(name).map_err(err)?;
        let r = connectivity_radius(&c.action, c.base_point).map_err(err)?;
        for l in 0..=12 {
            let g = rips_orbit_graph(&c.action, c.base_point, r, l).map_err(err)?;
            ensure!(g.is_connected(), "{name}: Γ_{r} disconnected at L = {l}");
        }
    }
    Ok(format!("Γ₁ on the cone ≅ ℤ truncation; {} fixtures connected for L ≤ 12", FIXTURE_NAMES.len()))
}

fn check_quasiconvex(name: &str, caps: SizeCaps) -> Outcome {
    let c = fixture(name).map_err(err)?;
    let a = &c.action;
    let g = a.space();
    let constant = bottleneck_constant(g, caps).map_err(err)?.constant;
    let rep = orbit_quasiconvexity(a, c.base_point, constant, 12, caps).map_err(err)?;
    ensure!(rep.pass, "{name}: check failed with {:?}", rep.violation);
    ensure!(
        2 * rep.k >= rep.m + 2 * rep.c && (rep.k == 0 || 2 * (rep.k - 1) < rep.m + 2 * rep.c),
        "{name}: K = {} is not least for C = {}, M = {}",
        rep.k,
        rep.c,
        rep.m
    );
    // independent sweep over every orbit pair and every geodesic vertex
    let pts: Vec<usize> = orbit(a, c.base_point, 12).map_err(err)?.vertices().collect();
    let to_orbit: Vec<u32> = (0..g.len()).map(|v| pts.iter().map(|&p| g.dist(v, p)).min().unwrap()).collect();
    for (i, &p) in pts.iter().enumerate() {
        for &q in &pts[i + 1..] {
            for (z, &d) in to_orbit.iter().enumerate() {
                if d > rep.k && g.on_geodesic(p, z, q) {
                    return Err(format!("{name}: {} on a geodesic is {d} from the orbit", g.id(z)));
                }
            }
        }
    }
    Ok(format!("{name} K = {} (C = {}, M = {}, {} orbit points)", rep.k, rep.c, rep.m, pts.len()))
}

fn c5_quasiconvexity() -> Outcome {
    let farey = check_quasiconvex("farey-Q20", SizeCaps::uniform(5000))?;
    let ladder = check_quasiconvex("ladder-n12", SizeCaps::default())?;
    Ok(format!("{farey}; {ladder}"))
}

fn c6_translation() -> Outcome {
    let c = fixture("bs12-r8").map_err(err)?;
    let a = &c.action;
    let t = a.generator_index("t").map_err(err)?;
    let av = a.generator_index("a").map_err(err)?;
    let tau = |w: &Word| tree_translation_length(a, w).map(|r| r.tau).map_err(err);
    ensure!(tau(&Word::letter(t, false))? == 1, "τ(t) ≠ 1");
    ensure!(tau(&Word::letter(av, false))? == 0, "τ(a) ≠ 0");
    for k in 1..=4 {
        let got = tau(&Word::power_of(t, k))?;
        ensure!(got == k as u32, "τ(t^{k}) = {got}");
    }

    let h = fixture("horoball-line-d7").map_err(err)?;
    let seq = stable_translation_length(&h.action, &Word::letter(0, false), h.base_point, 64).map_err(err)?;
    ensure!(seq.tau_sequence.len() == 64, "sequence stopped at {}", seq.tau_sequence.len());
    let at = |n: usize| seq.tau_sequence[n - 1];
    ensure!(at(64) <= Rational64::new(1, 2), "τ_64 = {}", at(64));
    ensure!(at(8) > at(16) && at(16) > at(32) && at(32) > at(64), "no decay at n = 8, 16, 32, 64");
    ensure!(seq.running_min.windows(2).all(|w| w[1] <= w[0]), "running minimum increases");

    let mut quasitrees = Vec::new();
    for name in FIXTURE_NAMES {
        let c = fixture(name).map_err(err)?;
        let g = c.action.space();
        let v = is_quasitree(g, 3, SizeCaps::uniform(5000)).map_err(err)?;
        if !v.pass {
            continue;
        }
        let facts = SpaceFacts::compute(g, SizeCaps::default()).with_quasitree(v.report.constant);
        for i in 0..c.action.generators().len() {
            for inverse in [false, true] {
                let w = Word::letter(i, inverse);
                let r = classify_isometry(&c.action, &w, c.base_point, 16, &facts).map_err(err)?;
                ensure!(
                    r.verdict != IsometryVerdict::ParabolicCandidate,
                    "{name}: {} flagged parabolic",
                    c.action.format_word(&w)
                );
            }
        }
        quasitrees.push(*name);
    }
    ensure!(quasitrees.len() >= 3, "only {quasitrees:?} certified as quasitrees");
    Ok(format!("τ(t^k) = k; horoball τ_64 = {}; no parabolics on {}", at(64), quasitrees.join(", ")))
}

fn c7_busemann() -> Outcome {
    let c = fixture("bs12-r8").map_err(err)?;
    let a = &c.action;
    let ray = c.ray.as_ref().ok_or("bs12 has no ray")?;
    let theta = |w: &Word| busemann_homomorphism(a, ray, w).map(|b| b.theta).map_err(err);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut kernel = 0;
    for _ in 0..100 {
        let g = random_word(&mut rng, 2, 3);
        let h = random_word(&mut rng, 2, 3);
        let (tg, th, tgh) = (theta(&g)?, theta(&h)?, theta(&g.concat(&h))?);
        ensure!(tgh == tg + th, "θ({}) = {tgh} ≠ {tg} + {th}", a.format_word(&g.concat(&h)));
        for w in [&g, &h] {
            let t = tree_translation_length(a, w).map_err(err)?.tau;
            let th = theta(w)?;
            ensure!((th == 0) == (t == 0), "{}: θ = {th} but τ = {t}", a.format_word(w));
            ensure!(t as i64 == th.abs(), "{}: θ = {th} but τ = {t}", a.format_word(w));
            kernel += usize::from(th == 0);
        }
    }
    ensure!(kernel > 0, "no kernel elements sampled");
    Ok(format!("100 pairs additive; {kernel} sampled kernel words, all elliptic"))
}

fn c8_action_types() -> Outcome {
    let opts = ActionTypeOptions::default();
    let classify = |c: &Construction| {
        let facts = SpaceFacts::compute(c.action.space(), SizeCaps::default());
        classify_action_type(&c.action, c.base_point, &opts, &facts).map_err(err)
    };
    let finite = [
        ("coset-c30", fixture("coset-c30").map_err(err)?),
        ("Cayley C2xC3", cayley_graph(&CayleyFamily::parse("C2xC3").map_err(err)?, 6).map_err(err)?),
    ];
    for (name, c) in &finite {
        let r = classify(c)?;
        ensure!(
            r.verdict == ActionVerdict::Bounded && r.confidence == Confidence::Certified,
            "{name}: {:?} ({:?})",
            r.verdict,
            r.confidence
        );
    }
    let r = classify(&fixture("bs12-r8").map_err(err)?)?;
    ensure!(r.verdict == ActionVerdict::QuasiParabolic, "bs12-r8: {:?}", r.verdict);
    let r = classify(&fixture("f2-r5").map_err(err)?)?;
    ensure!(r.verdict == ActionVerdict::General, "f2-r5: {:?}", r.verdict);
    let pp = r.ping_pong.ok_or("f2-r5 has no ping-pong certificate")?;
    Ok(format!("finite groups Bounded (certified); bs12 QuasiParabolic; f2 General via ({}, {})", pp.g, pp.h))
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn c9_product_geodesics() -> Outcome {
    let mut pairs = 0usize;
    for m in 1..=6 {
        for n in 1..=6 {
            let p = ProductSpace::new(vec![path_graph(m), path_graph(n)], Norm::L1).map_err(err)?;
            let skeleton = p.skeleton().map_err(err)?;
            for u in 0..p.len() {
                for v in u + 1..p.len() {
                    let (x, y) = (p.coords(u), p.coords(v));
                    let r = l1_geodesic_uniqueness(&p, &skeleton, &x, &y, 10_000).map_err(err)?;
                    ensure!(r.holds && !r.overflow, "P{m}×P{n} {x:?}→{y:?}: {r:?}");
                    let dx = x[0].abs_diff(y[0]) as u64;
                    let dy = x[1].abs_diff(y[1]) as u64;
                    let expected = binomial(dx + dy, dx) as usize;
                    ensure!(r.geodesic_count == expected, "P{m}×P{n}: {} geodesics, lattice count {expected}", r.geodesic_count);
                    if dx == 0 || dy == 0 {
                        ensure!(r.geodesic_count == 1 && r.single_coordinate_only, "P{m}×P{n} {x:?}→{y:?}");
                    } else {
                        ensure!(r.geodesic_count >= 2, "P{m}×P{n} {x:?}→{y:?}: unique geodesic");
                    }
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} pairs over Pm×Pn, m, n ≤ 6"))
}

fn c10_lm_arithmetic() -> Outcome {
    let e = conjugation_exponents(1);
    let got = [&e.alpha, &e.beta, &e.gamma, &e.delta].map(|x| x.to_string());
    ensure!(got == ["3", "4", "-4", "3"], "exponents {got:?}");
    ensure!(e.cross_check, "exponent cross-check failed");

    let sweep = gaussian_power_sweep(1000);
    ensure!(sweep.len() == 1000, "sweep covered {} powers", sweep.len());
    // residues by plain modular iteration
    let (mut re, mut im) = (1i64, 0i64);
    for check in &sweep {
        (re, im) = ((3 * re - 4 * im).rem_euclid(5), (4 * re + 3 * im).rem_euclid(5));
        ensure!((re, im) == (3, 4), "(3+4i)^{} ≡ ({re},{im}) mod 5", check.k);
        ensure!(check.residues_ok && check.imaginary_nonzero, "K = {} flagged", check.k);
    }
    for k in 1..=60u32 {
        let e = conjugation_exponents(k);
        let lhs = &e.alpha * &e.alpha + &e.beta * &e.beta;
        ensure!(lhs == BigInt::from(25).pow(k), "α² + β² ≠ 25^{k}");
    }
    ensure!(lm_obstruction_check(200).obstructed, "not obstructed up to 200");
    ensure!(!diagonal_control().obstructed, "diagonal control obstructed");
    Ok("exponents (3,4,−4,3); residues for K ≤ 1000; norms for K ≤ 60; obstructed for K ≤ 200; control clear".into())
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `τ(aᵐbⁿ)` read off the ℤ² action on a line where `a`, `b` shift by `x`, `y`.
fn line_samples(x: i64, y: i64, r: i64) -> Result<Vec<Sample>, String> {
    let line = cayley_graph(&CayleyFamily::Z(vec![1]), 64).map_err(err)?;
    let space = line.action.space().clone();
    let ids = space.graph().ids().to_vec();
    let shift = |name: &str, by: i64| {
        GeneratorMap::from_fn(name, &ids, |v| {
            let target = ids[v].parse::<i64>().ok()? + by;
            space.index_of(&target.to_string())
        })
    };
    let gens = vec![shift("a", x).map_err(err)?, shift("b", y).map_err(err)?];
    let a = GroupAction::new(space.clone(), gens, ActionMode::Isometry).map_err(err)?;
    let origin = space.vertex("0").map_err(err)?;
    let mut out = Vec::new();
    for m in -r..=r {
        for n in -r..=r {
            let w = Word::power_of(0, m).concat(&Word::power_of(1, n));
            let seq = stable_translation_length(&a, &w, origin, 1).map_err(err)?;
            out.push(Sample::new(m, n, q(seq.displacements[0] as i64)));
        }
    }
    Ok(out)
}

fn c11_fit() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..20 {
        let (x, y) = loop {
            let v = (rng.gen_range(-6i64..=6), rng.gen_range(-6i64..=6));
            if v != (0, 0) {
                break v;
            }
        };
        let samples = line_samples(x, y, 3)?;
        let fit = fit_translation_homomorphism(&samples).map_err(err)?;
        let (ex, ey) = if x > 0 || (x == 0 && y > 0) { (x, y) } else { (-x, -y) };
        ensure!(fit.residual == q(0), "case {case}: residual {}", fit.residual);
        ensure!(fit.x == q(ex) && fit.y == q(ey), "case {case}: fitted ({}, {}), want ({ex}, {ey})", fit.x, fit.y);
        let audit = seminorm_audit(&samples).map_err(err)?;
        ensure!(audit.violations.is_empty(), "case {case}: {:?}", audit.violations);
    }
    // rational translations through the synthetic generator
    let (x, y) = (BigRational::new(3.into(), 2.into()), BigRational::new((-5).into(), 3.into()));
    let fit = fit_translation_homomorphism(&synthetic_samples(&x, &y, 3)).map_err(err)?;
    ensure!(fit.x == x && fit.y == y && fit.residual == q(0), "rational fit ({}, {})", fit.x, fit.y);

    let mut broken = line_samples(1, 2, 3)?;
    let one = broken.iter_mut().find(|s| s.g == (1, 0)).ok_or("missing (1,0)")?;
    one.tau = q(5);
    let audit = seminorm_audit(&broken).map_err(err)?;
    ensure!(
        audit.violations.iter().any(|v| matches!(v, SeminormViolation::Homogeneity { .. })),
        "homogeneity injection not flagged"
    );
    let mut broken = line_samples(1, 2, 3)?;
    let far = broken.iter_mut().find(|s| s.g == (1, 1)).ok_or("missing (1,1)")?;
    far.tau = q(100);
    let audit = seminorm_audit(&broken).map_err(err)?;
    ensure!(
        audit.violations.iter().any(|v| matches!(v, SeminormViolation::Subadditivity { .. })),
        "subadditivity injection not flagged"
    );
    Ok("20 line actions recovered exactly; injected violations flagged".into())
}

fn c12_distortion() -> Outcome {
    let c = fixture("bs12-r8").map_err(err)?;
    let ai = c.action.generator_index("a").map_err(err)?;
    let a = c.action.restrict(&[ai]);
    let v = a.space().vertex("3:0").map_err(err)?;
    // a^(2^j) moves a level-3 vertex up to level j and back
    for j in 0..=3u32 {
        let w = a.evaluate_word(&Word::power_of(0, 1 << j), v).map_err(err)?;
        let d = a.space().dist(v, w);
        ensure!(d == 2 * (3 - j), "d(a^{}v, v) = {d}", 1 << j);
    }
    let prof = distortion_profile(&a, v, 12, 10_000).map_err(err)?;
    let env = prof.envelope_at(8).ok_or("no envelope at n = 8")?;
    ensure!(env < Rational64::new(1, 2), "envelope at 8 is {env}");
    let envs: Vec<Rational64> = prof.entries.iter().filter_map(|e| e.envelope).collect();
    ensure!(envs.windows(2).all(|w| w[1] <= w[0]), "envelope increases");

    let line = cayley_graph(&CayleyFamily::Z(vec![1]), 6).map_err(err)?;
    let pa = product_action(&[line.action.clone(), line.action], None, Norm::L1).map_err(err)?;
    let origin = pa.space.index(&[6, 6]).map_err(err)?;
    let flat = distortion_profile(&pa.action, origin, 6, 10_000).map_err(err)?;
    ensure!(
        flat.entries.iter().all(|e| e.raw == Some(Rational64::from_integer(1))),
        "ℤ² profile {:?}",
        flat.entries.iter().map(|e| e.raw).collect::<Vec<_>>()
    );
    Ok(format!("⟨a⟩ envelope {env} at n = 8; ℤ² stays at 1"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("tree δ and bottleneck", c1_trees),
        ("bottleneck oracle agreement", c2_bottleneck),
        ("coset tree", c3_coset_tree),
        ("Rips orbit graph", c4_rips),
        ("quasiconvexity", c5_quasiconvexity),
        ("translation lengths", c6_translation),
        ("Busemann homomorphism", c7_busemann),
        ("action types", c8_action_types),
        ("product geodesics", c9_product_geodesics),
        ("exact arithmetic", c10_lm_arithmetic),
        ("homomorphism fitting", c11_fit),
        ("distortion", c12_distortion),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let label = format!("{:>2} {name}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| label.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > BUDGET => Err(format!("over budget ({elapsed:.1?})")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {label} [{:.2}s]: {detail}", elapsed.as_secs_f64()),
            Err(why) => {
                failures += 1;
                println!("FAIL {label} [{:.2}s]: {why}", elapsed.as_secs_f64());
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
