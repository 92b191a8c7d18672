//! SOTIF relevance filter and triggering-condition linkage.

use thiserror::Error;

use crate::diagnostic::{Code, Diagnostic};
use crate::generate::Taxonomy;
use crate::model::{AnalysisModel, EntityId, EntityKind, LossScenario, Relevance, TriggerLink};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("scenario {scenario} refers to unknown factor {factor}")]
    UnknownFactor { scenario: EntityId, factor: EntityId },
}

/// The scenario's authored override, else its factor's default relevance.
pub fn classify_relevance(scenario: &LossScenario, taxonomy: &Taxonomy) -> Result<Relevance, ClassifyError> {
    if let Some(r) = scenario.relevance {
        return Ok(r);
    }
    taxonomy
        .get(scenario.factor)
        .map(|f| f.default_relevance.into())
        .ok_or(ClassifyError::UnknownFactor { scenario: scenario.id, factor: scenario.factor })
}

/// Partitions the model's scenarios into (retained, excluded) in id order.
/// `sotif` and `needs_review` are retained; so is a scenario whose factor the
/// taxonomy does not know, since it cannot be ruled out.
pub fn filter_sotif(model: &AnalysisModel, taxonomy: &Taxonomy) -> (Vec<LossScenario>, Vec<LossScenario>) {
    model
        .scenarios
        .values()
        .cloned()
        .partition(|s| classify_relevance(s, taxonomy) != Ok(Relevance::FunctionalSafety))
}

/// Returns a copy of `model` with the link added.
///
/// Unresolved ids give E002 and leave the model unchanged. Linking a
/// functional-safety scenario is stored with W301. A link already present
/// gives W302 and is not stored twice.
pub fn attach_trigger(
    model: &AnalysisModel,
    trigger: EntityId,
    scenario: EntityId,
    insufficiency: EntityId,
) -> (AnalysisModel, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    for (id, kind) in [
        (trigger, EntityKind::Trigger),
        (scenario, EntityKind::Scenario),
        (insufficiency, EntityKind::Insufficiency),
    ] {
        if id.kind() != kind || !model.contains(id) {
            diags.push(Diagnostic::new(Code::E002, format!("unknown reference \"{id}\"")));
        }
    }
    if !diags.is_empty() {
        return (model.clone(), diags);
    }

    let link = TriggerLink { trigger, scenario, insufficiency };
    if model.links.contains(&link) {
        diags.push(Diagnostic::new(
            Code::W302,
            format!("duplicate link {trigger} -> {scenario} via {insufficiency}"),
        ));
        return (model.clone(), diags);
    }
    let taxonomy = Taxonomy::from_model(model, false);
    if classify_relevance(&model.scenarios[&scenario], &taxonomy) == Ok(Relevance::FunctionalSafety) {
        diags.push(Diagnostic::new(
            Code::W301,
            format!("{trigger} linked to functional-safety scenario {scenario}"),
        ));
    }
    let mut next = model.clone();
    next.links.insert(link);
    (next, diags)
}
