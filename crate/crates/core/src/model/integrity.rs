use std::collections::BTreeSet;

use crate::diagnostic::{Code, Diagnostic};

use super::{AnalysisModel, ComponentKind, EntityId, EntityKind, LinkKind, UcaStatus};

/// Re-checks every entity invariant and reports orphans. Pure and
/// idempotent; violations are the return value.
///
/// Order is deterministic: registries in canonical kind order, entities by
/// id, then trigger links, then the environment-process rule.
pub fn validate_integrity(model: &AnalysisModel) -> Vec<Diagnostic> {
    let mut out = Checker { model, diags: Vec::new() };
    out.run();
    out.diags
}

struct Checker<'a> {
    model: &'a AnalysisModel,
    diags: Vec<Diagnostic>,
}

impl Checker<'_> {
    fn push(&mut self, owner: EntityId, code: Code, message: String) {
        let span = self.model.origin(owner).and_then(|o| o.span.as_ref());
        self.diags.push(Diagnostic::new(code, message).at(span));
    }

    /// Reports `target` as dangling unless it names a registered entity of
    /// `expected` kind. Returns true if the reference resolves.
    fn reference(&mut self, owner: EntityId, target: EntityId, expected: EntityKind) -> bool {
        if target.kind() == expected && self.model.contains(target) {
            return true;
        }
        let span = self.model.origin(owner).and_then(|o| o.ref_span(target));
        let message = if target.kind() == expected {
            format!("unknown reference \"{target}\"")
        } else {
            format!("unknown reference \"{target}\" (expected a {expected})")
        };
        self.diags.push(Diagnostic::new(Code::E002, message).at(span));
        false
    }

    fn component_kind(&self, id: EntityId) -> Option<ComponentKind> {
        self.model.components.get(&id).map(|c| c.kind)
    }

    fn run(&mut self) {
        let m = self.model;

        for loss in m.losses.values() {
            if loss.description.trim().is_empty() {
                self.push(loss.id, Code::E005, format!("{} has an empty description", loss.id));
            }
        }

        for hazard in m.hazards.values() {
            for &l in &hazard.losses {
                self.reference(hazard.id, l, EntityKind::Loss);
            }
            if hazard.losses.is_empty() {
                self.push(hazard.id, Code::W101, format!("hazard {} is not mapped to any loss", hazard.id));
            }
            let has_behavior = m.behaviors.values().any(|b| b.hazards.contains(&hazard.id));
            if !has_behavior {
                self.push(hazard.id, Code::W103, format!("hazard {} has no hazardous behavior", hazard.id));
            }
        }

        for behavior in m.behaviors.values() {
            for &h in &behavior.hazards {
                self.reference(behavior.id, h, EntityKind::Hazard);
            }
            if behavior.hazards.is_empty() {
                self.push(
                    behavior.id,
                    Code::W102,
                    format!("hazardous behavior {} is not mapped to any hazard", behavior.id),
                );
            }
        }

        for action in m.actions.values() {
            let source_ok = self.reference(action.id, action.source, EntityKind::Component);
            let target_ok = self.reference(action.id, action.target, EntityKind::Component);
            if source_ok {
                let kind = self.component_kind(action.source).expect("resolved");
                if !kind.is_controller() {
                    self.push(
                        action.id,
                        Code::E004,
                        format!("control action {} must originate at a controller, not a {kind}", action.id),
                    );
                }
            }
            if target_ok {
                let kind = self.component_kind(action.target).expect("resolved");
                if !matches!(kind, ComponentKind::Controller | ComponentKind::Actuator | ComponentKind::Process) {
                    self.push(
                        action.id,
                        Code::E004,
                        format!("control action {} cannot target a {kind}", action.id),
                    );
                }
            }
            if action.source == action.target {
                self.push(action.id, Code::E004, format!("control action {} targets its own source", action.id));
            }
            if let Some(behaviors) = &action.behaviors {
                for &b in behaviors {
                    self.reference(action.id, b, EntityKind::Behavior);
                }
            }
        }

        for link in m.feedback.values() {
            self.reference(link.id, link.source, EntityKind::Component);
            let target_ok = self.reference(link.id, link.target, EntityKind::Component);
            if target_ok && link.kind == LinkKind::Feedback {
                let kind = self.component_kind(link.target).expect("resolved");
                if !kind.is_controller() {
                    self.push(
                        link.id,
                        Code::E004,
                        format!("feedback {} must end at a controller, not a {kind}", link.id),
                    );
                }
            }
        }

        for uca in m.ucas.values() {
            self.reference(uca.id, uca.action, EntityKind::Action);
            self.reference(uca.id, uca.behavior, EntityKind::Behavior);
            if uca.status == UcaStatus::Excluded
                && uca.exclusion_reason.as_deref().is_none_or(|r| r.trim().is_empty())
            {
                self.push(uca.id, Code::E007, format!("excluded {} needs an exclusion reason", uca.id));
            }
            if uca.status == UcaStatus::Retained && !m.scenarios.values().any(|s| s.uca == uca.id) {
                self.push(uca.id, Code::W104, format!("retained {} has no loss scenario", uca.id));
            }
        }

        for factor in m.factors.values() {
            if factor.locus_kinds.is_empty() {
                self.push(factor.id, Code::E003, format!("causal factor {} applies to no component kind", factor.id));
            }
        }

        for ctx in m.contexts.values() {
            for &b in &ctx.applicable_behaviors {
                self.reference(ctx.id, b, EntityKind::Behavior);
            }
            if ctx.applicable_behaviors.is_empty() {
                self.push(ctx.id, Code::E003, format!("scenario context {} applies to no behavior", ctx.id));
            }
        }

        for s in m.scenarios.values() {
            let uca_ok = self.reference(s.id, s.uca, EntityKind::Uca);
            let factor_ok = self.reference(s.id, s.factor, EntityKind::Factor);
            let locus_ok = self.reference(s.id, s.locus, EntityKind::Component);
            if factor_ok && locus_ok {
                let factor = &m.factors[&s.factor];
                let kind = m.components[&s.locus].kind;
                if !factor.locus_kinds.contains(&kind) {
                    self.push(
                        s.id,
                        Code::E004,
                        format!(
                            "locus {} of {} is a {kind}, but factor {} applies to {}",
                            s.locus,
                            s.id,
                            factor.label,
                            join(factor.locus_kinds.iter())
                        ),
                    );
                }
            }
            if let Some(ctx) = s.context {
                if self.reference(s.id, ctx, EntityKind::Context) && uca_ok {
                    let behavior = m.ucas[&s.uca].behavior;
                    if !m.contexts[&ctx].applicable_behaviors.contains(&behavior) {
                        self.push(
                            s.id,
                            Code::E006,
                            format!("context {ctx} of {} does not apply to behavior {behavior}", s.id),
                        );
                    }
                }
            }
        }

        for t in m.triggers.values() {
            if t.description.trim().is_empty() {
                self.push(t.id, Code::E005, format!("{} has an empty description", t.id));
            }
            if !m.links.iter().any(|l| l.trigger == t.id) {
                self.push(t.id, Code::W105, format!("triggering condition {} is not linked to any scenario", t.id));
            }
        }

        for fi in m.insufficiencies.values() {
            if fi.description.trim().is_empty() {
                self.push(fi.id, Code::E005, format!("{} has an empty description", fi.id));
            }
            self.reference(fi.id, fi.locus, EntityKind::Component);
        }

        for link in &m.links {
            let span = m.link_origins.get(link);
            for (target, expected) in [
                (link.trigger, EntityKind::Trigger),
                (link.scenario, EntityKind::Scenario),
                (link.insufficiency, EntityKind::Insufficiency),
            ] {
                if target.kind() != expected || !m.contains(target) {
                    self.diags.push(
                        Diagnostic::new(Code::E002, format!("unknown reference \"{target}\"")).at(span),
                    );
                }
            }
        }

        let processes: Vec<_> = m
            .components
            .values()
            .filter(|c| c.kind == ComponentKind::Process)
            .collect();
        let flagged: BTreeSet<_> = processes.iter().filter(|c| c.environment).map(|c| c.id).collect();
        if flagged.len() > 1 || (flagged.is_empty() && processes.len() > 1) {
            let owner = flagged.iter().next().copied().unwrap_or(processes[0].id);
            self.push(
                owner,
                Code::E003,
                format!(
                    "exactly one process must be designated the environment ({} designated among {} processes)",
                    flagged.len(),
                    processes.len()
                ),
            );
        }
    }
}

fn join<T: std::fmt::Display>(items: impl Iterator<Item = T>) -> String {
    items.map(|i| i.to_string()).collect::<Vec<_>>().join(", ")
}
