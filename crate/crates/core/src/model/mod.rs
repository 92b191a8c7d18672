//! Entities, relation tables and integrity rules of an analysis model.
//!
//! An [`AnalysisModel`] is built once by [`assemble_model`] and is immutable
//! afterwards; every query on it is a pure read.

mod assemble;
mod entities;
mod ids;
mod integrity;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::diagnostic::SourceSpan;

pub use assemble::assemble_model;
pub use entities::*;
pub use ids::{EntityId, EntityKind, IdError};
pub use integrity::validate_integrity;

/// Where an entity was declared, with the spans of the references it makes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Origin {
    pub span: Option<SourceSpan>,
    pub refs: Vec<(EntityId, SourceSpan)>,
}

impl Origin {
    pub fn ref_span(&self, target: EntityId) -> Option<&SourceSpan> {
        self.refs
            .iter()
            .find(|(id, _)| *id == target)
            .map(|(_, s)| s)
            .or(self.span.as_ref())
    }
}

/// Registry of every entity kind plus the trigger-link relation table.
///
/// Loss/hazard and hazard/behavior relations live on the child side
/// (`Hazard::losses`, `HazardousBehavior::hazards`) and are unrestricted
/// many-to-many. Source origins are carried for diagnostics only and take
/// no part in equality or serialization.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct AnalysisModel {
    #[serde(with = "registry")]
    pub losses: BTreeMap<EntityId, Loss>,
    #[serde(with = "registry")]
    pub hazards: BTreeMap<EntityId, Hazard>,
    #[serde(with = "registry")]
    pub behaviors: BTreeMap<EntityId, HazardousBehavior>,
    #[serde(with = "registry")]
    pub components: BTreeMap<EntityId, Component>,
    #[serde(with = "registry")]
    pub actions: BTreeMap<EntityId, ControlAction>,
    #[serde(with = "registry")]
    pub feedback: BTreeMap<EntityId, FeedbackLink>,
    #[serde(with = "registry")]
    pub ucas: BTreeMap<EntityId, UnsafeControlAction>,
    #[serde(with = "registry")]
    pub factors: BTreeMap<EntityId, CausalFactor>,
    #[serde(with = "registry")]
    pub contexts: BTreeMap<EntityId, ScenarioContext>,
    #[serde(with = "registry")]
    pub scenarios: BTreeMap<EntityId, LossScenario>,
    #[serde(with = "registry")]
    pub triggers: BTreeMap<EntityId, TriggeringCondition>,
    #[serde(with = "registry")]
    pub insufficiencies: BTreeMap<EntityId, FunctionalInsufficiency>,
    pub links: BTreeSet<TriggerLink>,
    #[serde(skip)]
    pub origins: BTreeMap<EntityId, Origin>,
    #[serde(skip)]
    pub link_origins: BTreeMap<TriggerLink, SourceSpan>,
}

impl PartialEq for AnalysisModel {
    fn eq(&self, other: &Self) -> bool {
        self.losses == other.losses
            && self.hazards == other.hazards
            && self.behaviors == other.behaviors
            && self.components == other.components
            && self.actions == other.actions
            && self.feedback == other.feedback
            && self.ucas == other.ucas
            && self.factors == other.factors
            && self.contexts == other.contexts
            && self.scenarios == other.scenarios
            && self.triggers == other.triggers
            && self.insufficiencies == other.insufficiencies
            && self.links == other.links
    }
}

impl Eq for AnalysisModel {}

/// Borrowed view of any registered entity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntityRef<'a> {
    Loss(&'a Loss),
    Hazard(&'a Hazard),
    Behavior(&'a HazardousBehavior),
    Component(&'a Component),
    Action(&'a ControlAction),
    Feedback(&'a FeedbackLink),
    Uca(&'a UnsafeControlAction),
    Factor(&'a CausalFactor),
    Context(&'a ScenarioContext),
    Scenario(&'a LossScenario),
    Trigger(&'a TriggeringCondition),
    Insufficiency(&'a FunctionalInsufficiency),
}

impl EntityRef<'_> {
    pub fn id(&self) -> EntityId {
        match self {
            EntityRef::Loss(e) => e.id,
            EntityRef::Hazard(e) => e.id,
            EntityRef::Behavior(e) => e.id,
            EntityRef::Component(e) => e.id,
            EntityRef::Action(e) => e.id,
            EntityRef::Feedback(e) => e.id,
            EntityRef::Uca(e) => e.id,
            EntityRef::Factor(e) => e.id,
            EntityRef::Context(e) => e.id,
            EntityRef::Scenario(e) => e.id,
            EntityRef::Trigger(e) => e.id,
            EntityRef::Insufficiency(e) => e.id,
        }
    }

    /// Human-readable text of the entity: a name, label or description.
    pub fn text(&self) -> Option<&str> {
        match self {
            EntityRef::Loss(e) => Some(&e.description),
            EntityRef::Hazard(e) => Some(&e.description),
            EntityRef::Behavior(e) => Some(&e.description),
            EntityRef::Component(e) => Some(&e.name),
            EntityRef::Action(e) => Some(&e.name),
            EntityRef::Feedback(e) => Some(&e.name),
            EntityRef::Uca(e) => e.narrative.as_deref(),
            EntityRef::Factor(e) => Some(e.display_text()),
            EntityRef::Context(e) => Some(&e.description),
            EntityRef::Scenario(e) => e.narrative.as_deref(),
            EntityRef::Trigger(e) => Some(&e.description),
            EntityRef::Insufficiency(e) => Some(&e.description),
        }
    }
}

impl AnalysisModel {
    pub fn new() -> Self {
        Self::default()
    }

    /// The unique entity with this id, if registered.
    pub fn lookup(&self, id: EntityId) -> Option<EntityRef<'_>> {
        Some(match id.kind() {
            EntityKind::Loss => EntityRef::Loss(self.losses.get(&id)?),
            EntityKind::Hazard => EntityRef::Hazard(self.hazards.get(&id)?),
            EntityKind::Behavior => EntityRef::Behavior(self.behaviors.get(&id)?),
            EntityKind::Component => EntityRef::Component(self.components.get(&id)?),
            EntityKind::Action => EntityRef::Action(self.actions.get(&id)?),
            EntityKind::Feedback => EntityRef::Feedback(self.feedback.get(&id)?),
            EntityKind::Uca => EntityRef::Uca(self.ucas.get(&id)?),
            EntityKind::Factor => EntityRef::Factor(self.factors.get(&id)?),
            EntityKind::Context => EntityRef::Context(self.contexts.get(&id)?),
            EntityKind::Scenario => EntityRef::Scenario(self.scenarios.get(&id)?),
            EntityKind::Trigger => EntityRef::Trigger(self.triggers.get(&id)?),
            EntityKind::Insufficiency => EntityRef::Insufficiency(self.insufficiencies.get(&id)?),
        })
    }

    pub fn contains(&self, id: EntityId) -> bool {
        self.lookup(id).is_some()
    }

    /// Number of registered entities of `kind`.
    pub fn count(&self, kind: EntityKind) -> usize {
        match kind {
            EntityKind::Loss => self.losses.len(),
            EntityKind::Hazard => self.hazards.len(),
            EntityKind::Behavior => self.behaviors.len(),
            EntityKind::Component => self.components.len(),
            EntityKind::Action => self.actions.len(),
            EntityKind::Feedback => self.feedback.len(),
            EntityKind::Uca => self.ucas.len(),
            EntityKind::Factor => self.factors.len(),
            EntityKind::Context => self.contexts.len(),
            EntityKind::Scenario => self.scenarios.len(),
            EntityKind::Trigger => self.triggers.len(),
            EntityKind::Insufficiency => self.insufficiencies.len(),
        }
    }

    /// All registered ids in canonical order.
    pub fn ids(&self) -> Vec<EntityId> {
        let mut ids = Vec::new();
        ids.extend(self.losses.keys());
        ids.extend(self.hazards.keys());
        ids.extend(self.behaviors.keys());
        ids.extend(self.components.keys());
        ids.extend(self.actions.keys());
        ids.extend(self.feedback.keys());
        ids.extend(self.ucas.keys());
        ids.extend(self.factors.keys());
        ids.extend(self.contexts.keys());
        ids.extend(self.scenarios.keys());
        ids.extend(self.triggers.keys());
        ids.extend(self.insufficiencies.keys());
        ids
    }

    /// The next unused id of `kind`: one past the highest registered ordinal.
    pub fn next_free(&self, kind: EntityKind) -> EntityId {
        let max = self
            .ids()
            .into_iter()
            .filter(|id| id.kind() == kind)
            .map(EntityId::ordinal)
            .max()
            .unwrap_or(0);
        EntityId::new(kind, max + 1)
    }

    /// The process component standing for the vehicle in its environment:
    /// the one flagged `environment`, or the sole process if none is flagged.
    pub fn environment_process(&self) -> Option<&Component> {
        let processes: Vec<_> = self
            .components
            .values()
            .filter(|c| c.kind == ComponentKind::Process)
            .collect();
        let flagged: Vec<_> = processes.iter().filter(|c| c.environment).collect();
        match (flagged.as_slice(), processes.as_slice()) {
            ([one], _) => Some(one),
            ([], [only]) => Some(only),
            _ => None,
        }
    }

    pub fn component_name(&self, id: EntityId) -> &str {
        self.components.get(&id).map(|c| c.name.as_str()).unwrap_or("?")
    }

    pub(crate) fn origin(&self, id: EntityId) -> Option<&Origin> {
        self.origins.get(&id)
    }
}

/// Serializes a registry as an array ordered by id and rebuilds the map on
/// the way back in, rejecting duplicate ids.
mod registry {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{Entity, EntityId};

    pub fn serialize<S, T>(map: &BTreeMap<EntityId, T>, serializer: S) -> Result<S::Ok, S::Error>
    where
        S: Serializer,
        T: Serialize,
    {
        serializer.collect_seq(map.values())
    }

    pub fn deserialize<'de, D, T>(deserializer: D) -> Result<BTreeMap<EntityId, T>, D::Error>
    where
        D: Deserializer<'de>,
        T: Deserialize<'de> + Entity,
    {
        let items = Vec::<T>::deserialize(deserializer)?;
        let mut map = BTreeMap::new();
        for item in items {
            let id = item.id();
            if map.insert(id, item).is_some() {
                return Err(D::Error::custom(format!("duplicate id {id}")));
            }
        }
        Ok(map)
    }
}
