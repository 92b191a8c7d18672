use std::collections::BTreeMap;

use crate::model::{AnalysisModel, EntityId, EntityKind, GuideWord, UcaStatus, UnsafeControlAction};

use super::{ensure_valid, GenerateError};

/// Sentence frame per guide word with `{controller}`, `{action}` and
/// `{behavior}` placeholders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UcaTemplate {
    pub not_provided: String,
    pub provided_unsafe: String,
    pub wrong_timing: String,
    pub wrong_duration: String,
}

impl Default for UcaTemplate {
    fn default() -> Self {
        Self {
            not_provided: "Der {controller} gibt keinen {action}; Folge: {behavior}".into(),
            provided_unsafe: "Der {controller} gibt einen falschen {action}; Folge: {behavior}".into(),
            wrong_timing: "Der {controller} gibt den {action} zu früh oder zu spät; Folge: {behavior}".into(),
            wrong_duration: "Der {controller} gibt den {action} zu lange oder zu kurz; Folge: {behavior}".into(),
        }
    }
}

impl UcaTemplate {
    pub fn pattern(&self, guide_word: GuideWord) -> &str {
        match guide_word {
            GuideWord::NotProvided => &self.not_provided,
            GuideWord::ProvidedUnsafe => &self.provided_unsafe,
            GuideWord::WrongTiming => &self.wrong_timing,
            GuideWord::WrongDuration => &self.wrong_duration,
        }
    }

    pub fn render(&self, guide_word: GuideWord, controller: &str, action: &str, behavior: &str) -> String {
        self.pattern(guide_word)
            .replace("{controller}", controller)
            .replace("{action}", action)
            .replace("{behavior}", behavior)
    }
}

/// Narrative of a UCA: the authored text if present, otherwise the default
/// template instantiated with the controller, action and behavior texts.
pub fn render_uca_text(uca: &UnsafeControlAction, model: &AnalysisModel) -> Result<String, GenerateError> {
    if let Some(text) = &uca.narrative {
        return Ok(text.clone());
    }
    let action = model.actions.get(&uca.action).ok_or(GenerateError::Dangling(uca.action))?;
    let controller = model.components.get(&action.source).ok_or(GenerateError::Dangling(action.source))?;
    let behavior = model.behaviors.get(&uca.behavior).ok_or(GenerateError::Dangling(uca.behavior))?;
    Ok(UcaTemplate::default().render(uca.guide_word, &controller.name, &action.name, &behavior.description))
}

/// One candidate per (control action, guide word, behavior), action-major,
/// then guide word in catalog order, then behavior id. An action with a
/// `behaviors` list is enumerated against that list only.
///
/// Authored UCAs with the same key are returned as authored, keeping their
/// id and review status. New candidates take fresh ids past the highest
/// declared one, in enumeration order, and carry the template narrative.
pub fn enumerate_uca_candidates(model: &AnalysisModel) -> Result<Vec<UnsafeControlAction>, GenerateError> {
    ensure_valid(model)?;
    let mut authored = BTreeMap::new();
    for uca in model.ucas.values() {
        authored.entry(uca.key()).or_insert(uca);
    }
    let mut next = model.next_free(EntityKind::Uca).ordinal();
    let mut out = Vec::new();
    for action in model.actions.values() {
        let behaviors: Vec<EntityId> = match &action.behaviors {
            Some(set) => set.iter().copied().collect(),
            None => model.behaviors.keys().copied().collect(),
        };
        for &guide_word in GuideWord::ALL {
            for &behavior in &behaviors {
                if let Some(existing) = authored.get(&(action.id, guide_word, behavior)) {
                    out.push((*existing).clone());
                    continue;
                }
                let mut uca = UnsafeControlAction {
                    id: EntityId::new(EntityKind::Uca, next),
                    action: action.id,
                    guide_word,
                    behavior,
                    narrative: None,
                    status: UcaStatus::Candidate,
                    exclusion_reason: None,
                };
                next += 1;
                uca.narrative = Some(render_uca_text(&uca, model)?);
                out.push(uca);
            }
        }
    }
    Ok(out)
}
