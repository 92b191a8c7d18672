use std::collections::{BTreeMap, BTreeSet};

use crate::diagnostic::{Code, Diagnostic};
use crate::model::{
    AnalysisModel, CausalFactor, ComponentKind, EntityId, EntityKind, FactorCategory, LinkKind, LossScenario,
    UcaStatus, UnsafeControlAction,
};

use super::{ensure_valid, render_uca_text, GenerateError, Taxonomy};

/// Components playing each causal role for one control action.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ControlLoop {
    pub controller: Option<EntityId>,
    /// Sources of `kind=feedback` links into the controller.
    pub feedback: BTreeSet<EntityId>,
    pub target: Option<EntityId>,
    /// Processes connected by any action or link to a loop member.
    pub processes: BTreeSet<EntityId>,
}

impl ControlLoop {
    pub fn loci(&self, category: FactorCategory) -> BTreeSet<EntityId> {
        match category {
            FactorCategory::Controller => self.controller.into_iter().collect(),
            FactorCategory::FeedbackPath => self.feedback.clone(),
            FactorCategory::ControlPath => self.target.into_iter().collect(),
            FactorCategory::ProcessInput => self.processes.clone(),
        }
    }
}

pub fn control_loop(model: &AnalysisModel, action: EntityId) -> ControlLoop {
    let Some(a) = model.actions.get(&action) else {
        return ControlLoop::default();
    };
    let feedback: BTreeSet<EntityId> = model
        .feedback
        .values()
        .filter(|f| f.kind == LinkKind::Feedback && f.target == a.source)
        .map(|f| f.source)
        .collect();
    let mut members: BTreeSet<EntityId> = feedback.clone();
    members.insert(a.source);
    members.insert(a.target);

    let edges = model
        .actions
        .values()
        .map(|x| (x.source, x.target))
        .chain(model.feedback.values().map(|f| (f.source, f.target)));
    let is_process = |id: &EntityId| model.components.get(id).is_some_and(|c| c.kind == ComponentKind::Process);
    let mut processes = BTreeSet::new();
    for (from, to) in edges {
        if members.contains(&from) && is_process(&to) {
            processes.insert(to);
        }
        if members.contains(&to) && is_process(&from) {
            processes.insert(from);
        }
    }
    processes.extend(members.iter().copied().filter(is_process));

    ControlLoop { controller: Some(a.source), feedback, target: Some(a.target), processes }
}

/// Result of scenario expansion.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Expansion {
    pub scenarios: Vec<LossScenario>,
    /// W201 for retained UCAs whose control loop matches no factor.
    pub diagnostics: Vec<Diagnostic>,
}

/// Applicable (factor, locus) pairs for a UCA, in taxonomy then locus order.
fn pairs<'t>(model: &AnalysisModel, taxonomy: &'t Taxonomy, uca: &UnsafeControlAction) -> Vec<(&'t CausalFactor, EntityId)> {
    let lp = control_loop(model, uca.action);
    let mut out = Vec::new();
    for factor in &taxonomy.factors {
        for locus in lp.loci(factor.category) {
            let kind = model.components.get(&locus).map(|c| c.kind);
            if kind.is_some_and(|k| factor.locus_kinds.contains(&k)) {
                out.push((factor, locus));
            }
        }
    }
    out
}

/// One skeleton per retained UCA × applicable (factor, locus) × applicable
/// context, or the implicit default context when none applies. Order is
/// UCA id, taxonomy order, locus id, context id.
///
/// Authored scenarios with the same (UCA, factor, locus, context) key are
/// returned as authored; keys are compared after merge aliasing. New
/// skeletons take fresh ids past the highest declared one, carry a generated
/// narrative and no relevance override.
pub fn expand_loss_scenarios(model: &AnalysisModel, taxonomy: &Taxonomy) -> Result<Expansion, GenerateError> {
    ensure_valid(model)?;
    let mut authored = BTreeMap::new();
    for s in model.scenarios.values() {
        let key = (s.uca, taxonomy.resolve(s.factor), s.locus, s.context);
        authored.entry(key).or_insert(s);
    }
    let mut next = model.next_free(EntityKind::Scenario).ordinal();
    let mut out = Expansion::default();

    for uca in model.ucas.values().filter(|u| u.status == UcaStatus::Retained) {
        let pairs = pairs(model, taxonomy, uca);
        if pairs.is_empty() {
            let span = model.origin(uca.id).and_then(|o| o.span.as_ref());
            out.diagnostics.push(
                Diagnostic::new(Code::W201, format!("control loop of {} matches no causal factor; no scenarios for {}", uca.action, uca.id))
                    .at(span),
            );
            continue;
        }
        let contexts: Vec<Option<EntityId>> = {
            let applicable: Vec<_> = model
                .contexts
                .values()
                .filter(|c| c.applicable_behaviors.contains(&uca.behavior))
                .map(|c| Some(c.id))
                .collect();
            if applicable.is_empty() {
                vec![None]
            } else {
                applicable
            }
        };
        let uca_text = render_uca_text(uca, model)?;
        for (factor, locus) in pairs {
            for &context in &contexts {
                if let Some(existing) = authored.get(&(uca.id, factor.id, locus, context)) {
                    let mut s = (*existing).clone();
                    s.factor = factor.id;
                    out.scenarios.push(s);
                    continue;
                }
                let mut narrative =
                    format!("{uca_text}; Ursache: {} bei {}", factor.display_text(), model.component_name(locus));
                if let Some(ctx) = context.and_then(|c| model.contexts.get(&c)) {
                    narrative.push_str("; Fall: ");
                    narrative.push_str(&ctx.description);
                }
                out.scenarios.push(LossScenario {
                    id: EntityId::new(EntityKind::Scenario, next),
                    uca: uca.id,
                    factor: factor.id,
                    locus,
                    context,
                    narrative: Some(narrative),
                    relevance: None,
                });
                next += 1;
            }
        }
    }
    Ok(out)
}
