//! Builders for the example spaces and actions, as finite truncations.

mod bs12;
mod cayley;
mod coset;
mod farey;
mod groups;
mod misc;

pub use bs12::bass_serre_tree_bs12;
pub use cayley::{cayley_graph, CayleyFamily};
pub use coset::{coset_tree, CosetTree};
pub use farey::farey_graph;
pub use groups::FiniteGroupTable;
pub use misc::{cone_graph, double_line_graph, horoball, ladder, rips_graph};

use crate::action::GroupAction;
use crate::error::{Error, Result};
use crate::graph::Vertex;

/// A built action with a suggested base point and, for trees with a
/// distinguished end, a ray toward it.
#[derive(Debug, Clone)]
pub struct Construction {
    pub action: GroupAction,
    pub base_point: Vertex,
    pub ray: Option<Vec<Vertex>>,
}

/// Named fixtures shipped with the tool.
pub const FIXTURE_NAMES: &[&str] = &[
    "farey-Q20",
    "bs12-r8",
    "coset-c30",
    "horoball-line-d7",
    "doubleline-n16",
    "cone-z-r10",
    "f2-r5",
    "ladder-n12",
];

fn param<T: std::str::FromStr>(name: &str, prefix: &str) -> Option<T> {
    name.strip_prefix(prefix)?.parse().ok()
}

/// Builds a fixture by name. Besides the listed names the numeric parameter
/// may vary, e.g. `farey-Q8` or `f2-r3`.
pub fn fixture(name: &str) -> Result<Construction> {
    if let Some(q) = param::<i64>(name, "farey-Q") {
        return farey_graph(q, None);
    }
    if let Some(r) = param::<u32>(name, "bs12-r") {
        return bass_serre_tree_bs12(r);
    }
    if name == "coset-c30" {
        let t = coset_tree(&FiniteGroupTable::parse_chain("C2xC3xC5")?)?;
        return Ok(Construction {
            base_point: t.levels[0][0],
            action: t.action,
            ray: None,
        });
    }
    if let Some(d) = param::<u32>(name, "horoball-line-d") {
        let line = cayley_graph(&CayleyFamily::Z(vec![1]), 64)?;
        return horoball(&line.action, d);
    }
    if let Some(n) = param::<i64>(name, "doubleline-n") {
        return double_line_graph(n);
    }
    if let Some(r) = param::<u32>(name, "cone-z-r") {
        let line = cayley_graph(&CayleyFamily::Z(vec![1]), r)?;
        return cone_graph(&line.action);
    }
    if let Some(r) = param::<u32>(name, "f2-r") {
        return cayley_graph(&CayleyFamily::F2, r);
    }
    if let Some(n) = param::<usize>(name, "ladder-n") {
        return ladder(n);
    }
    Err(Error::UnknownFixture(name.to_string()))
}
