use std::path::Path;

use num_rational::Rational64;
use qtlab_core::action::{
    busemann_homomorphism, check_locally_finite_orbit, classify_action_type, classify_isometry, connectivity_radius,
    orbit, properness_profiles, rips_orbit_graph, tree_translation_length, ActionMode, ActionTypeOptions, Certificate,
    GroupAction, PropernessParams, SpaceFacts,
};
use qtlab_core::constructions::{
    bass_serre_tree_bs12, cayley_graph, cone_graph, coset_tree, double_line_graph, farey_graph, fixture, horoball,
    ladder, rips_graph, CayleyFamily, Construction, FiniteGroupTable, FIXTURE_NAMES,
};
use qtlab_core::format::{action_to_file, construction_to_file, graph_to_file, read_any, ActionFile, GraphRef};
use qtlab_core::graph::{
    bottleneck_constant, ends_series, hyperbolicity_delta, is_quasitree, MetricGraph, SizeCaps, Vertex,
};
use qtlab_core::lm::{
    conjugation_exponents, diagonal_control, fit_translation_homomorphism, gaussian_power_sweep, lm_obstruction_check,
    parse_samples, seminorm_audit,
};
use qtlab_core::products::{
    distortion_profile, factor_preservation_check, l1_geodesic_uniqueness, product_action, product_distance, Norm,
    ProductIsometry, ProductSpace,
};
use qtlab_core::{Error, Result};
use serde_json::{json, Value};

use crate::args::*;

/// Command payload plus an optional flat table for `--format csv`.
pub struct Output {
    pub results: Value,
    pub table: Option<Table>,
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Output {
    fn json(results: Value) -> Self {
        Output { results, table: None }
    }
}

fn caps(c: &Common) -> SizeCaps {
    c.max_vertices.map_or_else(SizeCaps::from_env, SizeCaps::uniform)
}

struct Loaded {
    action: GroupAction,
    base: Vertex,
    ray: Option<Vec<Vertex>>,
}

fn load(input: &Input) -> Result<Loaded> {
    let (action, base, ray) = match (&input.graph, &input.action, &input.fixture) {
        (Some(p), _, _) | (_, Some(p), _) => {
            let l = read_any(p)?;
            (l.action, l.base_point, l.ray)
        }
        (_, _, Some(name)) => {
            let c = fixture(name)?;
            (c.action, Some(c.base_point), c.ray)
        }
        _ => return Err(Error::Format("one of --graph, --action or --fixture is required".into())),
    };
    let base = match &input.basepoint {
        Some(id) => action.space().vertex(id)?,
        None => base.unwrap_or(0),
    };
    Ok(Loaded { action, base, ray })
}

fn id(g: &MetricGraph, v: Vertex) -> String {
    g.id(v).to_string()
}

fn ids(g: &MetricGraph, vs: &[Vertex]) -> Vec<String> {
    vs.iter().map(|&v| id(g, v)).collect()
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn rational(r: Rational64) -> String {
    r.to_string()
}

pub fn analyze(a: &AnalyzeArgs) -> Result<Output> {
    let l = load(&a.input)?;
    let g = l.action.space();
    let caps = caps(&a.common);
    let mut out = json!({
        "vertices": g.len(),
        "edges": g.graph().edge_count(),
        "is_tree": g.is_tree(),
        "diameter": g.diameter(),
        "boundary_vertices": g.boundary().len(),
    });
    // trees need no scan: δ = 0 and every bottleneck constant is 0
    let tree = g.is_tree();
    if a.delta && tree {
        out["delta"] = json!({ "delta": "0", "twice_delta": 0, "method": "tree" });
    } else if a.delta {
        let h = hyperbolicity_delta(g, caps)?;
        let w = h.witness;
        out["delta"] = json!({
            "delta": rational(Rational64::new(h.twice_delta as i64, 2)),
            "twice_delta": h.twice_delta,
            "witness": ids(g, &[w.x, w.y, w.z, w.w]),
            "method": "four-point scan",
        });
    }
    if a.bottleneck && tree {
        out["bottleneck"] = json!({ "constant": 0, "witness": null, "method": "tree" });
    } else if a.bottleneck {
        let b = bottleneck_constant(g, caps)?;
        out["bottleneck"] = json!({
            "constant": b.constant,
            "witness": b.witness.map(|w| json!({
                "x": id(g, w.x), "y": id(g, w.y), "z": id(g, w.z),
                "avoiding_path": ids(g, &w.avoiding_path),
            })),
            "method": "exhaustive",
        });
    }
    if let Some(c) = a.quasitree {
        let v = is_quasitree(g, c, caps)?;
        out["quasitree"] = json!({ "pass": v.pass, "c_max": v.c_max, "constant": v.report.constant });
    }
    if let Some(b) = a.ends {
        let series = ends_series(g, l.base, b, g.boundary())?;
        out["ends"] = json!({
            "center": id(g, l.base),
            "profile": series.iter().map(|e| json!({
                "radius": e.radius, "components": e.component_count, "boundary_vertices": e.boundary_vertices,
            })).collect::<Vec<_>>(),
        });
    }
    Ok(Output::json(out))
}

fn need<T: Copy>(v: Option<T>, flag: &str, builder: &str) -> Result<T> {
    v.ok_or_else(|| Error::Format(format!("{builder} needs --{flag}")))
}

fn build(a: &ConstructArgs) -> Result<Construction> {
    let line = |r: u32| cayley_graph(&CayleyFamily::Z(vec![1]), r);
    match a.builder {
        Builder::Cayley => {
            let family = CayleyFamily::parse(a.family.as_deref().unwrap_or("Z"))?;
            cayley_graph(&family, need(a.radius, "radius", "cayley")?)
        }
        Builder::Farey => farey_graph(need(a.q, "q", "farey")?, a.p),
        Builder::Bs12 => bass_serre_tree_bs12(need(a.radius, "radius", "bs12")?),
        Builder::Coset => {
            let t = coset_tree(&FiniteGroupTable::parse_chain(a.chain.as_deref().unwrap_or("C2xC3xC5"))?)?;
            Ok(Construction {
                base_point: t.levels[0][0],
                action: t.action,
                ray: None,
            })
        }
        Builder::Horoball => horoball(&line(a.radius.unwrap_or(64))?.action, need(a.depth, "depth", "horoball")?),
        Builder::Doubleline => double_line_graph(need(a.n, "n", "doubleline")?),
        Builder::Cone => cone_graph(&line(need(a.radius, "radius", "cone")?)?.action),
        Builder::Ladder => {
            let n = need(a.n, "n", "ladder")?;
            ladder(usize::try_from(n).map_err(|_| Error::Format(format!("ladder needs n ≥ 2, got {n}")))?)
        }
        Builder::Rips => {
            let path = a.graph.as_deref().ok_or_else(|| Error::Format("rips needs --graph".into()))?;
            let src = read_any(path)?;
            let g = rips_graph(src.action.space(), need(a.r, "r", "rips")?)?;
            let gens = if src.action.mode() == ActionMode::Automorphism {
                src.action.generators().to_vec()
            } else {
                Vec::new()
            };
            Ok(Construction {
                action: GroupAction::new(g, gens, ActionMode::Automorphism)?,
                base_point: src.base_point.unwrap_or(0),
                ray: None,
            })
        }
    }
}

fn write_json<T: serde::Serialize>(path: &Path, t: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(t).expect("serializable") + "\n";
    std::fs::write(path, text).map_err(|e| Error::Format(format!("cannot write {}: {e}", path.display())))
}

fn summary(c: &Construction) -> Value {
    let g = c.action.space();
    json!({
        "vertices": g.len(),
        "edges": g.graph().edge_count(),
        "generators": c.action.generator_names(),
        "mode": qtlab_core::format::mode_name(c.action.mode()),
        "base_point": id(g, c.base_point),
        "ray": c.ray.as_ref().map(|r| ids(g, r)),
        "is_tree": g.is_tree(),
    })
}

/// `--out` names the action file; the report always goes to stdout.
pub fn construct(a: &ConstructArgs) -> Result<Output> {
    let c = build(a)?;
    let mut out = summary(&c);
    let file = construction_to_file(&c);
    match &a.common.out {
        Some(path) => {
            write_json(path, &file)?;
            out["written"] = json!(path.display().to_string());
        }
        None => out["action"] = to_value(&file),
    }
    Ok(Output::json(out))
}

pub fn orbit_cmd(a: &OrbitArgs) -> Result<Output> {
    let l = load(&a.input)?;
    let g = l.action.space();
    let o = orbit(&l.action, l.base, a.horizon)?;
    let mut out = json!({
        "base_point": id(g, l.base),
        "horizon": a.horizon,
        "size": o.len(),
        "closed": o.is_closed(),
        "points": o.points().iter().map(|(v, w)| json!([id(g, *v), l.action.format_word(w)])).collect::<Vec<_>>(),
    });
    if let Some(r) = a.radius {
        out["local_finiteness"] = to_value(&check_locally_finite_orbit(&l.action, l.base, r, a.horizon)?);
    }
    Ok(Output::json(out))
}

pub fn rips_orbit(a: &RipsOrbitArgs) -> Result<Output> {
    let l = load(&a.input)?;
    let r = match &a.r {
        Some(s) => s
            .parse::<Rational64>()
            .or_else(|_| s.parse::<i64>().map(Rational64::from_integer))
            .map_err(|_| Error::Format(format!("bad scale {s:?}")))?,
        None => connectivity_radius(&l.action, l.base)?,
    };
    let rg = rips_orbit_graph(&l.action, l.base, r, a.horizon)?;
    let g = &rg.graph;
    Ok(Output::json(json!({
        "base_point": id(l.action.space(), l.base),
        "r": rational(r),
        "horizon": a.horizon,
        "vertices": g.ids(),
        "edges": g.edges().into_iter().map(|(u, v)| [g.id(u), g.id(v)]).collect::<Vec<_>>(),
        "connected": rg.is_connected(),
        "components": g.component_count(),
    })))
}

fn certificate(g: &MetricGraph, c: &Certificate) -> Value {
    let mut v = to_value(c);
    match c {
        Certificate::PeriodicOrbit { cycle } => v["cycle"] = json!(ids(g, cycle)),
        Certificate::FixedVertex { vertex } | Certificate::TreeAxis { vertex, .. } => v["vertex"] = json!(id(g, *vertex)),
        Certificate::InvertedEdge { u, v: w } => {
            v["u"] = json!(id(g, *u));
            v["v"] = json!(id(g, *w));
        }
        _ => {}
    }
    v
}

fn facts(a: &GroupAction, quasitree: Option<u32>, caps: SizeCaps) -> Result<(SpaceFacts, Option<Value>)> {
    let mut facts = SpaceFacts::compute(a.space(), caps);
    let mut note = None;
    if let Some(c) = quasitree {
        let v = is_quasitree(a.space(), c, caps)?;
        if v.pass {
            facts = facts.with_quasitree(v.report.constant);
        }
        note = Some(json!({ "pass": v.pass, "c_max": c, "constant": v.report.constant }));
    }
    Ok((facts, note))
}

pub fn classify(a: &ClassifyArgs) -> Result<Output> {
    let l = load(&a.input)?;
    let g = l.action.space();
    let (facts, qt) = facts(&l.action, a.quasitree, caps(&a.common))?;
    let Some(text) = &a.word else {
        let opts = ActionTypeOptions {
            power_horizon: a.horizon,
            ..ActionTypeOptions::default()
        };
        let r = classify_action_type(&l.action, l.base, &opts, &facts)?;
        let mut out = to_value(&r);
        out["base_point"] = json!(id(g, l.base));
        out["facts"] = to_value(&facts);
        out["quasitree_check"] = json!(qt);
        return Ok(Output::json(out));
    };
    let w = l.action.parse_word(text)?;
    let r = classify_isometry(&l.action, &w, l.base, a.horizon, &facts)?;
    let mut out = to_value(&r);
    out["certificate"] = certificate(g, &r.certificate);
    out["word"] = json!(l.action.format_word(&w));
    out["base_point"] = json!(id(g, l.base));
    out["facts"] = to_value(&facts);
    out["quasitree_check"] = json!(qt);
    if g.is_tree() {
        if let Ok(t) = tree_translation_length(&l.action, &w) {
            out["tree_translation"] = json!({ "tau": t.tau, "min_displacement": t.min_displacement });
        }
    }
    if let Some(ray) = &l.ray {
        out["busemann"] = match busemann_homomorphism(&l.action, ray, &w) {
            Ok(b) => to_value(&b),
            Err(e) => json!({ "error": e.to_string() }),
        };
    }
    let table = r.sequence.as_ref().map(|s| Table {
        header: vec!["n", "displacement", "tau", "running_min"],
        rows: (0..s.tau_sequence.len())
            .map(|i| {
                vec![
                    (i + 1).to_string(),
                    s.displacements[i].to_string(),
                    s.tau_sequence[i].to_string(),
                    s.running_min[i].to_string(),
                ]
            })
            .collect(),
    });
    Ok(Output { results: out, table })
}

pub fn properness(a: &PropernessArgs) -> Result<Output> {
    let l = load(&a.input)?;
    let params = PropernessParams {
        horizon: a.horizon,
        limit: a.limit,
        probe: l.base,
        ..PropernessParams::default()
    };
    let p = properness_profiles(&l.action, &params);
    let table = Table {
        header: vec!["epsilon", "separation", "n"],
        rows: p
            .acylindricity
            .iter()
            .map(|e| vec![e.epsilon.to_string(), e.separation.to_string(), e.n.map_or(String::new(), |n| n.to_string())])
            .collect(),
    };
    Ok(Output {
        results: to_value(&p),
        table: Some(table),
    })
}

fn norm(n: NormArg) -> Norm {
    match n {
        NormArg::L1 => Norm::L1,
        NormArg::L2 => Norm::L2,
        NormArg::Linf => Norm::Linf,
    }
}

fn product_space(f: &Factors) -> Result<(ProductSpace, Vec<qtlab_core::format::LoadedAction>)> {
    let loaded = f.factors.iter().map(|p| read_any(p)).collect::<Result<Vec<_>>>()?;
    let space = ProductSpace::new(loaded.iter().map(|l| l.action.space().clone()).collect(), norm(f.norm))?;
    Ok((space, loaded))
}

pub fn product(cmd: &ProductCommand) -> Result<Output> {
    match cmd {
        ProductCommand::Distance(a) => {
            let (p, _) = product_space(&a.factors)?;
            let (x, y) = (p.parse_point(&a.x)?, p.parse_point(&a.y)?);
            Ok(Output::json(json!({
                "norm": p.norm(),
                "factor_distances": p.factor_distances(&x, &y)?,
                "distance": product_distance(&p, &x, &y)?,
            })))
        }
        ProductCommand::Geodesics(a) => {
            let (p, _) = product_space(&a.factors)?;
            if p.norm() != Norm::L1 {
                return Err(Error::NormMismatch { expected: "l1" });
            }
            let cap = caps(&a.common).bottleneck;
            if p.len() > cap {
                return Err(Error::SizeLimitExceeded {
                    operation: "geodesic audit",
                    vertices: p.len(),
                    cap,
                });
            }
            let s = p.skeleton()?;
            if let (Some(x), Some(y)) = (&a.x, &a.y) {
                let r = l1_geodesic_uniqueness(&p, &s, &p.parse_point(x)?, &p.parse_point(y)?, a.cap)?;
                let mut out = to_value(&r);
                out["witnesses"] = json!(r.witnesses.iter().map(|w| w.iter().map(|&v| p.id(v)).collect::<Vec<_>>()).collect::<Vec<_>>());
                return Ok(Output::json(out));
            }
            let (mut single, mut multi, mut failures) = (0usize, 0usize, Vec::new());
            for u in 0..p.len() {
                for v in u + 1..p.len() {
                    let r = l1_geodesic_uniqueness(&p, &s, &p.coords(u), &p.coords(v), a.cap)?;
                    if r.differing.len() == 1 {
                        single += 1;
                    } else {
                        multi += 1;
                    }
                    if !r.holds && failures.len() < 10 {
                        failures.push(json!([p.id(u), p.id(v)]));
                    }
                }
            }
            Ok(Output::json(json!({
                "single_coordinate_pairs": single,
                "multi_coordinate_pairs": multi,
                "holds": failures.is_empty(),
                "failures": failures,
            })))
        }
        ProductCommand::FactorCheck(a) => {
            let (p, _) = product_space(&a.factors)?;
            let text = std::fs::read_to_string(&a.map)
                .map_err(|e| Error::Format(format!("cannot read {}: {e}", a.map.display())))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| Error::Format(e.to_string()))?;
            let pairs = v
                .get("map")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Format("expected {\"map\": [[x, y], …]}".into()))?;
            let mut map = vec![None; p.len()];
            for pair in pairs {
                let bad = || Error::Format(format!("bad map entry {pair}"));
                let pair = pair.as_array().filter(|q| q.len() == 2).ok_or_else(bad)?;
                let x = p.index(&p.parse_point(pair[0].as_str().ok_or_else(bad)?)?)?;
                let y = p.index(&p.parse_point(pair[1].as_str().ok_or_else(bad)?)?)?;
                map[x] = Some(y);
            }
            let map = map
                .into_iter()
                .enumerate()
                .map(|(i, m)| m.ok_or_else(|| Error::NotAProductIsometry(format!("{} has no image", p.id(i)))))
                .collect::<Result<Vec<_>>>()?;
            let f = ProductIsometry::new(&p, map)?;
            let r = factor_preservation_check(&p, &f);
            let mut out = to_value(&r);
            out["witness"] = json!(r.witness.map(|w| w.map(|v| p.id(v))));
            Ok(Output::json(out))
        }
        ProductCommand::Distortion(a) => {
            let (p, loaded) = product_space(&a.factors)?;
            let actions: Vec<GroupAction> = loaded.iter().map(|l| l.action.clone()).collect();
            let perm = a
                .swap
                .as_ref()
                .map(|s| s.iter().map(|&i| i.checked_sub(1).ok_or_else(|| Error::Format("swap is one-based".into()))).collect::<Result<Vec<_>>>())
                .transpose()?;
            let pa = product_action(&actions, perm.as_deref(), p.norm())?;
            let mut action = pa.action;
            if let Some(names) = &a.generators {
                let keep = names
                    .iter()
                    .map(|n| action.generator_index(n))
                    .collect::<Result<Vec<_>>>()?;
                action = action.restrict(&keep);
            }
            let base = match &a.basepoint {
                Some(s) => p.index(&p.parse_point(s)?)?,
                None => p.index(&loaded.iter().map(|l| l.base_point.unwrap_or(0)).collect::<Vec<_>>())?,
            };
            let prof = distortion_profile(&action, base, a.horizon, a.limit)?;
            let table = Table {
                header: vec!["n", "raw", "envelope", "witness"],
                rows: prof
                    .entries
                    .iter()
                    .map(|e| {
                        vec![
                            e.n.to_string(),
                            e.raw.map_or(String::new(), rational),
                            e.envelope.map_or(String::new(), rational),
                            e.witness.clone().unwrap_or_default(),
                        ]
                    })
                    .collect(),
            };
            let mut out = to_value(&prof);
            out["base_point"] = json!(p.id(base));
            out["generators"] = json!(action.generator_names());
            Ok(Output {
                results: out,
                table: Some(table),
            })
        }
    }
}

pub fn lm(cmd: &LmCommand) -> Result<Output> {
    match cmd {
        LmCommand::Exponents(a) => {
            let rows: Vec<_> = (1..=a.n).map(conjugation_exponents).collect();
            let table = Table {
                header: vec!["n", "alpha", "beta", "gamma", "delta", "cross_check"],
                rows: rows
                    .iter()
                    .map(|c| {
                        vec![
                            c.n.to_string(),
                            c.alpha.to_string(),
                            c.beta.to_string(),
                            c.gamma.to_string(),
                            c.delta.to_string(),
                            c.cross_check.to_string(),
                        ]
                    })
                    .collect(),
            };
            Ok(Output {
                results: json!({ "exponents": rows, "all_cross_checked": rows.iter().all(|c| c.cross_check) }),
                table: Some(table),
            })
        }
        LmCommand::Obstruction(a) => {
            let reports: Vec<_> = (1..=a.k_max).map(lm_obstruction_check).collect();
            let first_unobstructed = reports.iter().find(|r| !r.obstructed).map(|r| r.k);
            let gauss = gaussian_power_sweep(a.k_max as u64);
            let residues = gauss.iter().all(|g| g.residues_ok && g.imaginary_nonzero);
            let control = diagonal_control();
            let verdict = match first_unobstructed {
                None => format!("obstructed for all K ≤ {}", a.k_max),
                Some(k) => format!("not obstructed at K = {k}"),
            };
            Ok(Output::json(json!({
                "verdict": verdict,
                "obstructed_all": first_unobstructed.is_none(),
                "k_max": a.k_max,
                "gaussian_residues_ok": residues,
                "first": reports.first(),
                "diagonal_control": control,
            })))
        }
        LmCommand::Fit(a) => {
            let text = std::fs::read_to_string(&a.samples)
                .map_err(|e| Error::Format(format!("cannot read {}: {e}", a.samples.display())))?;
            let samples = parse_samples(&text)?;
            let fit = fit_translation_homomorphism(&samples)?;
            let audit = seminorm_audit(&samples)?;
            Ok(Output::json(json!({ "samples": samples.len(), "fit": fit, "seminorm_audit": audit })))
        }
    }
}

pub fn fixtures(a: &FixturesArgs) -> Result<Output> {
    if a.name == "list" {
        return Ok(Output::json(json!({ "fixtures": FIXTURE_NAMES })));
    }
    let names: Vec<String> = if a.name == "all" {
        FIXTURE_NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        vec![a.name.clone()]
    };
    std::fs::create_dir_all(&a.dir).map_err(|e| Error::Format(format!("cannot create {}: {e}", a.dir.display())))?;
    let mut manifest = Vec::new();
    for name in &names {
        let c = fixture(name)?;
        let graph_name = format!("{name}.graph.json");
        let action_name = format!("{name}.action.json");
        write_json(&a.dir.join(&graph_name), &graph_to_file(c.action.space()))?;
        let mut file: ActionFile = action_to_file(&c.action, Some(c.base_point), c.ray.as_deref());
        file.graph = GraphRef::Path(graph_name.clone());
        write_json(&a.dir.join(&action_name), &file)?;
        let mut entry = summary(&c);
        entry["name"] = json!(name);
        entry["graph"] = json!(graph_name);
        entry["action"] = json!(action_name);
        manifest.push(entry);
    }
    let manifest = json!({ "format": "qtlab-fixtures-v1", "fixtures": manifest });
    write_json(&a.dir.join("manifest.json"), &manifest)?;
    Ok(Output::json(manifest))
}
