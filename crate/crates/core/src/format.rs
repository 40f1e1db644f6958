//! JSON interchange: `qtlab-graph-v1` and `qtlab-action-v1`.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::action::{ActionMode, GeneratorMap, GroupAction};
use crate::constructions::Construction;
use crate::error::{Error, Result};
use crate::graph::{MetricGraph, SimpleGraph, Vertex};

pub const GRAPH_FORMAT: &str = "qtlab-graph-v1";
pub const ACTION_FORMAT: &str = "qtlab-action-v1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub format: String,
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Vec<String>>,
}

/// Inline graph or a path, resolved against the action file's directory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphRef {
    Inline(GraphFile),
    Path(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorFile {
    pub name: String,
    pub map: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionFile {
    pub format: String,
    pub graph: GraphRef,
    pub mode: String,
    pub generators: Vec<GeneratorFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_point: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray: Option<Vec<String>>,
}

/// An action read from disk, with the optional extras.
#[derive(Debug, Clone)]
pub struct LoadedAction {
    pub action: GroupAction,
    pub base_point: Option<Vertex>,
    pub ray: Option<Vec<Vertex>>,
}

fn check_format(found: &str, expected: &str) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(Error::Format(format!("expected format {expected:?}, found {found:?}")))
    }
}

pub fn graph_to_file(g: &MetricGraph) -> GraphFile {
    let id = |v: Vertex| g.id(v).to_string();
    GraphFile {
        format: GRAPH_FORMAT.into(),
        vertices: g.graph().ids().to_vec(),
        edges: g.graph().edges().into_iter().map(|(u, v)| [id(u), id(v)]).collect(),
        boundary: (!g.boundary().is_empty()).then(|| g.boundary().iter().map(|&v| id(v)).collect()),
    }
}

pub fn graph_from_file(f: &GraphFile) -> Result<MetricGraph> {
    check_format(&f.format, GRAPH_FORMAT)?;
    let mut g = SimpleGraph::new(f.vertices.iter().cloned())?;
    for [u, v] in &f.edges {
        let (u, v) = (g.vertex(u)?, g.vertex(v)?);
        g.add_edge(u, v)?;
    }
    let metric = MetricGraph::new(g)?;
    let boundary = match &f.boundary {
        Some(b) => b.iter().map(|id| metric.vertex(id)).collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    Ok(metric.with_boundary(boundary))
}

pub fn mode_name(mode: ActionMode) -> &'static str {
    match mode {
        ActionMode::Automorphism => "automorphism",
        ActionMode::Isometry => "isometry",
    }
}

pub fn parse_mode(text: &str) -> Result<ActionMode> {
    match text {
        "automorphism" => Ok(ActionMode::Automorphism),
        "isometry" => Ok(ActionMode::Isometry),
        _ => Err(Error::Format(format!("unknown action mode {text:?}"))),
    }
}

pub fn action_to_file(a: &GroupAction, base_point: Option<Vertex>, ray: Option<&[Vertex]>) -> ActionFile {
    let g = a.space();
    let id = |v: Vertex| g.id(v).to_string();
    ActionFile {
        format: ACTION_FORMAT.into(),
        graph: GraphRef::Inline(graph_to_file(g)),
        mode: mode_name(a.mode()).into(),
        generators: a
            .generators()
            .iter()
            .map(|s| GeneratorFile {
                name: s.name().to_string(),
                map: (0..g.len()).filter_map(|v| s.forward(v).map(|w| [id(v), id(w)])).collect(),
            })
            .collect(),
        base_point: base_point.map(id),
        ray: ray.map(|r| r.iter().map(|&v| id(v)).collect()),
    }
}

pub fn construction_to_file(c: &Construction) -> ActionFile {
    action_to_file(&c.action, Some(c.base_point), c.ray.as_deref())
}

/// `base_dir` resolves a graph given by path.
pub fn action_from_file(f: &ActionFile, base_dir: Option<&Path>) -> Result<LoadedAction> {
    check_format(&f.format, ACTION_FORMAT)?;
    let space = match &f.graph {
        GraphRef::Inline(g) => graph_from_file(g)?,
        GraphRef::Path(p) => {
            let path = base_dir.map_or_else(|| PathBuf::from(p), |d| d.join(p));
            read_graph(&path)?
        }
    };
    let ids = space.graph().ids().to_vec();
    let mut gens = Vec::with_capacity(f.generators.len());
    let mut names = HashSet::new();
    for gf in &f.generators {
        if !names.insert(gf.name.as_str()) {
            return Err(Error::Format(format!("generator {:?} listed twice", gf.name)));
        }
        let mut forward = vec![None; ids.len()];
        for [v, w] in &gf.map {
            let (v, w) = (space.vertex(v)?, space.vertex(w)?);
            if forward[v].replace(w).is_some() {
                return Err(Error::Format(format!("generator {:?} maps {:?} twice", gf.name, ids[v])));
            }
        }
        gens.push(GeneratorMap::new(gf.name.clone(), forward, &ids)?);
    }
    let base_point = f.base_point.as_deref().map(|id| space.vertex(id)).transpose()?;
    let ray = f
        .ray
        .as_ref()
        .map(|r| r.iter().map(|id| space.vertex(id)).collect::<Result<Vec<_>>>())
        .transpose()?;
    Ok(LoadedAction {
        action: GroupAction::new(space, gens, parse_mode(&f.mode)?)?,
        base_point,
        ray,
    })
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, path: &Path) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

pub fn read_graph(path: &Path) -> Result<MetricGraph> {
    graph_from_file(&parse_json(&read_text(path)?, path)?)
}

pub fn read_action(path: &Path) -> Result<LoadedAction> {
    let f: ActionFile = parse_json(&read_text(path)?, path)?;
    action_from_file(&f, path.parent())
}

/// Loads either file kind; a bare graph comes back with no generators.
pub fn read_any(path: &Path) -> Result<LoadedAction> {
    let v: serde_json::Value = parse_json(&read_text(path)?, path)?;
    match v.get("format").and_then(|f| f.as_str()) {
        Some(GRAPH_FORMAT) => {
            let g = graph_from_file(&serde_json::from_value(v).map_err(|e| Error::Format(e.to_string()))?)?;
            Ok(LoadedAction {
                action: GroupAction::new(g, Vec::new(), ActionMode::Automorphism)?,
                base_point: None,
                ray: None,
            })
        }
        Some(ACTION_FORMAT) => {
            let f: ActionFile = serde_json::from_value(v).map_err(|e| Error::Format(e.to_string()))?;
            action_from_file(&f, path.parent())
        }
        other => Err(Error::Format(format!("unrecognized format {other:?}"))),
    }
}
