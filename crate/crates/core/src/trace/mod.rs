//! Traceability queries, statistics and exporters.

mod export;
mod stats;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{AnalysisModel, EntityId, EntityKind};

pub use export::{export, import_json, ExportFormat};
pub use stats::{stats, StatsReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("unknown reference \"{0}\"")]
    Dangling(EntityId),
    #[error("cannot trace from {0}: expected a loss or a triggering condition")]
    UnsupportedRoot(EntityId),
}

/// Closure of the relation chain from one root.
///
/// Shared descendants appear once as nodes but may have several parents, so
/// the structure is a rooted DAG. Children are ordered by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceTree {
    pub root: EntityId,
    pub edges: BTreeMap<EntityId, BTreeSet<EntityId>>,
}

impl TraceTree {
    fn new(root: EntityId) -> Self {
        Self { root, edges: BTreeMap::new() }
    }

    fn add(&mut self, parent: EntityId, child: EntityId) {
        self.edges.entry(parent).or_default().insert(child);
    }

    pub fn children(&self, id: EntityId) -> impl Iterator<Item = EntityId> + '_ {
        self.edges.get(&id).into_iter().flatten().copied()
    }

    /// Every node, root included, in id order.
    pub fn nodes(&self) -> BTreeSet<EntityId> {
        let mut nodes = BTreeSet::from([self.root]);
        for (parent, children) in &self.edges {
            nodes.insert(*parent);
            nodes.extend(children);
        }
        nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes().len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.values().map(BTreeSet::len).sum()
    }

    pub fn leaves(&self) -> BTreeSet<EntityId> {
        self.nodes().into_iter().filter(|n| !self.edges.contains_key(n)).collect()
    }

    /// Indented text rendering, one node per line with its text. A node
    /// already expanded earlier is printed once more, marked `(^)`, without
    /// its subtree.
    pub fn render(&self, model: &AnalysisModel) -> String {
        let mut out = String::new();
        let mut seen = BTreeSet::new();
        self.render_node(model, self.root, 0, &mut seen, &mut out);
        out
    }

    fn render_node(
        &self,
        model: &AnalysisModel,
        id: EntityId,
        depth: usize,
        seen: &mut BTreeSet<EntityId>,
        out: &mut String,
    ) {
        let text = model.lookup(id).and_then(|e| e.text().map(str::to_owned)).unwrap_or_default();
        let first = seen.insert(id);
        let marker = if first || !self.edges.contains_key(&id) { "" } else { " (^)" };
        let _ = writeln!(out, "{}{id} {text}{marker}", "  ".repeat(depth));
        if first {
            for child in self.children(id) {
                self.render_node(model, child, depth + 1, seen, out);
            }
        }
    }
}

fn check_root(model: &AnalysisModel, id: EntityId, kind: EntityKind) -> Result<(), TraceError> {
    if id.kind() != kind {
        return Err(TraceError::UnsupportedRoot(id));
    }
    if !model.contains(id) {
        return Err(TraceError::Dangling(id));
    }
    Ok(())
}

/// Downstream closure loss → hazards → behaviors → UCAs → scenarios →
/// (insufficiencies, triggers).
pub fn trace_from_loss(model: &AnalysisModel, loss: EntityId) -> Result<TraceTree, TraceError> {
    check_root(model, loss, EntityKind::Loss)?;
    let mut tree = TraceTree::new(loss);
    for h in model.hazards.values().filter(|h| h.losses.contains(&loss)) {
        tree.add(loss, h.id);
        for b in model.behaviors.values().filter(|b| b.hazards.contains(&h.id)) {
            tree.add(h.id, b.id);
            for u in model.ucas.values().filter(|u| u.behavior == b.id) {
                tree.add(b.id, u.id);
                for s in model.scenarios.values().filter(|s| s.uca == u.id) {
                    tree.add(u.id, s.id);
                    for link in model.links.iter().filter(|l| l.scenario == s.id) {
                        tree.add(s.id, link.insufficiency);
                        tree.add(s.id, link.trigger);
                    }
                }
            }
        }
    }
    Ok(tree)
}

/// Reverse closure trigger → scenarios → UCAs → behaviors → hazards → losses.
pub fn trace_from_trigger(model: &AnalysisModel, trigger: EntityId) -> Result<TraceTree, TraceError> {
    check_root(model, trigger, EntityKind::Trigger)?;
    let mut tree = TraceTree::new(trigger);
    for link in model.links.iter().filter(|l| l.trigger == trigger) {
        tree.add(trigger, link.scenario);
        let Some(s) = model.scenarios.get(&link.scenario) else { continue };
        tree.add(s.id, s.uca);
        let Some(u) = model.ucas.get(&s.uca) else { continue };
        tree.add(u.id, u.behavior);
        let Some(b) = model.behaviors.get(&u.behavior) else { continue };
        for &h in &b.hazards {
            tree.add(b.id, h);
            for &l in model.hazards.get(&h).map(|h| &h.losses).into_iter().flatten() {
                tree.add(h, l);
            }
        }
    }
    Ok(tree)
}

/// Dispatches on the root kind.
pub fn trace_from(model: &AnalysisModel, root: EntityId) -> Result<TraceTree, TraceError> {
    match root.kind() {
        EntityKind::Loss => trace_from_loss(model, root),
        EntityKind::Trigger => trace_from_trigger(model, root),
        _ => Err(TraceError::UnsupportedRoot(root)),
    }
}
