use std::collections::{BTreeMap, BTreeSet};

use crate::model::{
    AnalysisModel, CausalFactor, ComponentKind, DefaultRelevance, EntityId, EntityKind, FactorCategory,
};

pub const MERGED_FACTOR_LABEL: &str = "controller_functional_flaw";
const ALGORITHM_FLAW: &str = "control_algorithm_flaw";
const PROCESS_MODEL_FLAW: &str = "process_model_flaw";

/// Ordered causal-factor catalog used to expand loss scenarios.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Taxonomy {
    pub factors: Vec<CausalFactor>,
    pub merge_controller_flaws: bool,
    /// Ids replaced by a merge, mapped to the merged factor.
    pub aliases: BTreeMap<EntityId, EntityId>,
}

use ComponentKind::{Actuator, Controller, HumanController, Process, Sensor};
use DefaultRelevance::{FunctionalSafety, NeedsReview, SotifCandidate};
use FactorCategory::{ControlPath, FeedbackPath, ProcessInput};

type FactorRow = (&'static str, FactorCategory, &'static [ComponentKind], DefaultRelevance, &'static str);

const DEFAULT_FACTORS: [FactorRow; 12] = [
    (ALGORITHM_FLAW, FactorCategory::Controller, &[Controller], SotifCandidate, "Fehler eines Kontrollalgorithmus"),
    (PROCESS_MODEL_FLAW, FactorCategory::Controller, &[Controller, HumanController], SotifCandidate, "Defizite eines Prozessmodells"),
    ("controller_physical_failure", FactorCategory::Controller, &[Controller], FunctionalSafety, "Physischer Ausfall des Reglers"),
    ("sensor_insufficiency", FeedbackPath, &[Sensor], SotifCandidate, "Unzureichende Leistungsfähigkeit des Sensors"),
    ("sensor_physical_failure", FeedbackPath, &[Sensor], FunctionalSafety, "Physischer Ausfall des Sensors"),
    ("feedback_transmission_failure", FeedbackPath, &[Sensor, Controller], FunctionalSafety, "Fehler bei der Übertragung der Rückführung"),
    ("feedback_inadequate", FeedbackPath, &[Sensor, Controller, HumanController], SotifCandidate, "Unzureichende oder fehlende Rückführung"),
    ("actuator_physical_failure", ControlPath, &[Actuator], FunctionalSafety, "Physischer Ausfall des Aktuators"),
    ("command_transmission_failure", ControlPath, &[Actuator, Controller], FunctionalSafety, "Fehler bei der Übertragung des Steuerbefehls"),
    ("actuator_response_inadequate", ControlPath, &[Actuator, Process], SotifCandidate, "Unzureichende Umsetzung durch den Aktuator"),
    ("process_disturbance", ProcessInput, &[Process], SotifCandidate, "Störeinfluss aus dem Prozess"),
    ("other_controller_interference", ProcessInput, &[Process], NeedsReview, "Einwirkung anderer Regler auf den Prozess"),
];

/// The built-in taxonomy, `CF-1` to `CF-12` in catalog order. With
/// `merge_controller_flaws` the algorithm and process-model flaws collapse
/// into one `controller_functional_flaw` factor (`CF-13`) at their position.
pub fn default_taxonomy(merge_controller_flaws: bool) -> Taxonomy {
    let factors = DEFAULT_FACTORS
        .iter()
        .enumerate()
        .map(|(i, (label, category, loci, relevance, text))| CausalFactor {
            id: EntityId::new(EntityKind::Factor, i as u32 + 1),
            label: (*label).to_owned(),
            description: Some((*text).to_owned()),
            category: *category,
            locus_kinds: loci.iter().copied().collect(),
            default_relevance: *relevance,
        })
        .collect();
    let taxonomy = Taxonomy { factors, merge_controller_flaws: false, aliases: BTreeMap::new() };
    if merge_controller_flaws {
        taxonomy.merged()
    } else {
        taxonomy
    }
}

impl Taxonomy {
    /// The model's declared factors in id order, or the built-in taxonomy
    /// when the model declares none.
    pub fn from_model(model: &AnalysisModel, merge_controller_flaws: bool) -> Self {
        if model.factors.is_empty() {
            return default_taxonomy(merge_controller_flaws);
        }
        let taxonomy = Taxonomy {
            factors: model.factors.values().cloned().collect(),
            merge_controller_flaws: false,
            aliases: BTreeMap::new(),
        };
        if merge_controller_flaws {
            taxonomy.merged()
        } else {
            taxonomy
        }
    }

    /// Replaces the algorithm-flaw and process-model-flaw pair by a single
    /// factor. A taxonomy lacking either of the pair is returned unchanged
    /// apart from the flag.
    pub fn merged(mut self) -> Self {
        self.merge_controller_flaws = true;
        let pos_a = self.factors.iter().position(|f| f.label == ALGORITHM_FLAW);
        let pos_b = self.factors.iter().position(|f| f.label == PROCESS_MODEL_FLAW);
        let (Some(a), Some(b)) = (pos_a, pos_b) else {
            return self;
        };
        // A model that already declares the merged factor keeps it.
        if let Some(existing) = self.by_label(MERGED_FACTOR_LABEL).map(|f| f.id) {
            let replaced = [self.factors[a].id, self.factors[b].id];
            for old in replaced {
                self.aliases.insert(old, existing);
            }
            self.factors.retain(|f| !replaced.contains(&f.id));
            return self;
        }
        let next = self.factors.iter().map(|f| f.id.ordinal()).max().unwrap_or(0) + 1;
        let id = EntityId::new(EntityKind::Factor, next);
        let (fa, fb) = (&self.factors[a], &self.factors[b]);
        let locus_kinds: BTreeSet<ComponentKind> = fa.locus_kinds.union(&fb.locus_kinds).copied().collect();
        let default_relevance =
            if fa.default_relevance == fb.default_relevance { fa.default_relevance } else { NeedsReview };
        let merged = CausalFactor {
            id,
            label: MERGED_FACTOR_LABEL.to_owned(),
            description: Some("Fehler eines Kontrollalgorithmus oder Defizite eines Prozessmodells".to_owned()),
            category: FactorCategory::Controller,
            locus_kinds,
            default_relevance,
        };
        self.aliases.insert(fa.id, id);
        self.aliases.insert(fb.id, id);
        let first = a.min(b);
        let replaced = [fa.id, fb.id];
        self.factors[first] = merged;
        self.factors.retain(|f| f.id == id || !replaced.contains(&f.id));
        self
    }

    /// Follows a merge alias, if any.
    pub fn resolve(&self, id: EntityId) -> EntityId {
        self.aliases.get(&id).copied().unwrap_or(id)
    }

    pub fn get(&self, id: EntityId) -> Option<&CausalFactor> {
        let id = self.resolve(id);
        self.factors.iter().find(|f| f.id == id)
    }

    pub fn by_label(&self, label: &str) -> Option<&CausalFactor> {
        self.factors.iter().find(|f| f.label == label)
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}
