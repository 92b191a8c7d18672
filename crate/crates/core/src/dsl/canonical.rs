use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::model::{AnalysisModel, CausalFactor, ComponentKind, EntityId, LinkKind, LossScenario, UnsafeControlAction};

fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            other => out.push(other),
        }
    }
    out.push('"');
    out
}

fn list(ids: &BTreeSet<EntityId>) -> String {
    let items: Vec<String> = ids.iter().map(ToString::to_string).collect();
    format!("[{}]", items.join(", "))
}

fn text_suffix(text: Option<&str>) -> String {
    text.map(|t| format!(" text {}", quote(t))).unwrap_or_default()
}

pub fn uca_line(uca: &UnsafeControlAction) -> String {
    let mut line = format!(
        "uca {} action={} guide={} behavior={} status={}",
        uca.id, uca.action, uca.guide_word, uca.behavior, uca.status
    );
    if let Some(reason) = &uca.exclusion_reason {
        let _ = write!(line, " reason={}", quote(reason));
    }
    line.push_str(&text_suffix(uca.narrative.as_deref()));
    line
}

pub fn factor_line(factor: &CausalFactor) -> String {
    let loci: Vec<&str> = factor.locus_kinds.iter().map(|k| k.as_str()).collect();
    format!(
        "factor {} label={} category={} loci=[{}] relevance={}{}",
        factor.id,
        factor.label,
        factor.category,
        loci.join(", "),
        factor.default_relevance,
        text_suffix(factor.description.as_deref())
    )
}

pub fn scenario_line(s: &LossScenario) -> String {
    let mut line = format!("scenario {} uca={} factor={} locus={}", s.id, s.uca, s.factor, s.locus);
    if let Some(ctx) = s.context {
        let _ = write!(line, " context={ctx}");
    }
    if let Some(rel) = s.relevance {
        let _ = write!(line, " relevance={rel}");
    }
    line.push_str(&text_suffix(s.narrative.as_deref()));
    line
}

/// Serializes a model to canonical `.stpa` text: entities grouped by kind in
/// registry order, one line each, `\n` line endings. Parsing the result
/// yields an equal model.
pub fn write_model(model: &AnalysisModel) -> String {
    let mut sections: Vec<Vec<String>> = Vec::new();

    sections.push(
        model
            .losses
            .values()
            .map(|l| format!("loss {}{}", l.id, text_suffix(Some(&l.description))))
            .collect(),
    );
    sections.push(
        model
            .hazards
            .values()
            .map(|h| format!("hazard {} losses={}{}", h.id, list(&h.losses), text_suffix(Some(&h.description))))
            .collect(),
    );
    sections.push(
        model
            .behaviors
            .values()
            .map(|b| format!("behavior {} hazards={}{}", b.id, list(&b.hazards), text_suffix(Some(&b.description))))
            .collect(),
    );
    sections.push(
        model
            .components
            .values()
            .map(|c| {
                let keyword = match c.kind {
                    ComponentKind::Controller => "controller",
                    ComponentKind::HumanController => "human",
                    ComponentKind::Sensor => "sensor",
                    ComponentKind::Actuator => "actuator",
                    ComponentKind::Process => "process",
                };
                let env = if c.environment { " environment=true" } else { "" };
                format!("{keyword} {}{env}{}", c.id, text_suffix(Some(&c.name)))
            })
            .collect(),
    );
    sections.push(
        model
            .actions
            .values()
            .map(|a| {
                let behaviors = a.behaviors.as_ref().map(|b| format!(" behaviors={}", list(b))).unwrap_or_default();
                format!("action {} from={} to={}{behaviors}{}", a.id, a.source, a.target, text_suffix(Some(&a.name)))
            })
            .collect(),
    );
    sections.push(
        model
            .feedback
            .values()
            .map(|f| {
                let kind = match f.kind {
                    LinkKind::Feedback => "feedback",
                    LinkKind::Other => "other",
                };
                format!("feedback {} from={} to={} kind={kind}{}", f.id, f.source, f.target, text_suffix(Some(&f.name)))
            })
            .collect(),
    );
    sections.push(model.ucas.values().map(uca_line).collect());
    sections.push(model.factors.values().map(factor_line).collect());
    sections.push(
        model
            .contexts
            .values()
            .map(|c| {
                format!("context {} behaviors={}{}", c.id, list(&c.applicable_behaviors), text_suffix(Some(&c.description)))
            })
            .collect(),
    );
    sections.push(model.scenarios.values().map(scenario_line).collect());
    sections.push(
        model
            .triggers
            .values()
            .map(|t| format!("trigger {}{}", t.id, text_suffix(Some(&t.description))))
            .collect(),
    );
    sections.push(
        model
            .insufficiencies
            .values()
            .map(|fi| format!("insufficiency {} locus={}{}", fi.id, fi.locus, text_suffix(Some(&fi.description))))
            .collect(),
    );
    sections.push(
        model
            .links
            .iter()
            .map(|l| format!("link {} -> {} via {}", l.trigger, l.scenario, l.insufficiency))
            .collect(),
    );

    let mut out = String::new();
    for section in sections.into_iter().filter(|s| !s.is_empty()) {
        if !out.is_empty() {
            out.push('\n');
        }
        for line in section {
            out.push_str(&line);
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting_escapes_quote_backslash_and_newline() {
        assert_eq!(quote("a\"b\\c\nd"), r#""a\"b\\c\nd""#);
        assert_eq!(quote("Fußgänger*innen"), "\"Fußgänger*innen\"");
    }

    #[test]
    fn empty_model_writes_nothing() {
        assert_eq!(write_model(&AnalysisModel::new()), "");
    }
}
