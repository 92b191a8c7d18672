use std::collections::BTreeSet;
use std::str::FromStr;

use crate::diagnostic::{Code, Diagnostic, SourceSpan};
use crate::dsl::{Declaration, Keyword, Value};

use super::*;

/// Builds a model from parsed declarations, in order.
///
/// The first declaration of an id wins; later duplicates are reported and
/// dropped. Declarations with an unusable attribute value are reported and
/// dropped. Every remaining integrity violation is reported by
/// [`validate_integrity`], whose diagnostics follow the assembly ones. The
/// model is valid iff no returned diagnostic is an error.
pub fn assemble_model(declarations: &[Declaration]) -> (AnalysisModel, Vec<Diagnostic>) {
    let mut model = AnalysisModel::new();
    let mut diags = Vec::new();
    for decl in declarations {
        if let Err(d) = add(&mut model, decl) {
            diags.push(d);
        }
    }
    diags.extend(validate_integrity(&model));
    (model, diags)
}

fn invalid(span: &SourceSpan, message: impl Into<String>) -> Diagnostic {
    Diagnostic::new(Code::E005, message).at(Some(span))
}

/// Collects references and their spans while reading attributes.
struct Reader<'a> {
    decl: &'a Declaration,
    refs: Vec<(EntityId, SourceSpan)>,
}

impl<'a> Reader<'a> {
    fn new(decl: &'a Declaration) -> Self {
        Self { decl, refs: Vec::new() }
    }

    fn span(&self, key: &str) -> &'a SourceSpan {
        self.decl.attributes.get(key).map(|a| &a.span).unwrap_or(&self.decl.id_span)
    }

    fn text(&self, key: &str) -> Result<String, Diagnostic> {
        match self.decl.attributes.get(key).map(|a| &a.value) {
            Some(Value::Str(s)) => Ok(s.clone()),
            Some(_) => Err(invalid(self.span(key), format!("`{key}` expects a quoted string"))),
            None => Err(Diagnostic::new(Code::E111, format!("missing attribute `{key}`")).at(Some(&self.decl.id_span))),
        }
    }

    fn opt_text(&self, key: &str) -> Result<Option<String>, Diagnostic> {
        if self.decl.attributes.contains_key(key) {
            self.text(key).map(Some)
        } else {
            Ok(None)
        }
    }

    /// A single-valued bare word. A list with other than one element is a
    /// cardinality violation.
    fn word(&self, key: &str) -> Result<(&'a str, &'a SourceSpan), Diagnostic> {
        let attr = self
            .decl
            .attributes
            .get(key)
            .ok_or_else(|| Diagnostic::new(Code::E111, format!("missing attribute `{key}`")).at(Some(&self.decl.id_span)))?;
        match &attr.value {
            Value::Word(w) => Ok((w, &attr.span)),
            Value::List(items) if items.len() == 1 => Ok((&items[0], &attr.items[0])),
            Value::List(items) => Err(Diagnostic::new(
                Code::E003,
                format!("`{key}` takes exactly one value, found {}", items.len()),
            )
            .at(Some(&attr.span))),
            Value::Str(_) => Err(invalid(&attr.span, format!("`{key}` expects a bare word, not a string"))),
        }
    }

    fn parse<T: FromStr<Err = String>>(&self, key: &str) -> Result<T, Diagnostic> {
        let (w, span) = self.word(key)?;
        w.parse().map_err(|e: String| invalid(span, format!("invalid `{key}`: {e}")))
    }

    fn opt_parse<T: FromStr<Err = String>>(&self, key: &str) -> Result<Option<T>, Diagnostic> {
        if self.decl.attributes.contains_key(key) {
            self.parse(key).map(Some)
        } else {
            Ok(None)
        }
    }

    fn reference(&mut self, key: &str) -> Result<EntityId, Diagnostic> {
        let (w, span) = self.word(key)?;
        let id: EntityId = w.parse().map_err(|e: IdError| invalid(span, e.to_string()))?;
        self.refs.push((id, span.clone()));
        Ok(id)
    }

    fn opt_reference(&mut self, key: &str) -> Result<Option<EntityId>, Diagnostic> {
        if self.decl.attributes.contains_key(key) {
            self.reference(key).map(Some)
        } else {
            Ok(None)
        }
    }

    /// Reference list; a bare word counts as a one-element list.
    fn references(&mut self, key: &str) -> Result<BTreeSet<EntityId>, Diagnostic> {
        let Some(attr) = self.decl.attributes.get(key) else {
            return Ok(BTreeSet::new());
        };
        let items: Vec<(&str, &SourceSpan)> = match &attr.value {
            Value::List(items) => items.iter().map(String::as_str).zip(attr.items.iter()).collect(),
            Value::Word(w) => vec![(w.as_str(), &attr.span)],
            Value::Str(_) => return Err(invalid(&attr.span, format!("`{key}` expects a reference list"))),
        };
        let mut out = BTreeSet::new();
        for (w, span) in items {
            let id: EntityId = w.parse().map_err(|e: IdError| invalid(span, e.to_string()))?;
            self.refs.push((id, span.clone()));
            out.insert(id);
        }
        Ok(out)
    }

    fn kinds(&self, key: &str) -> Result<BTreeSet<ComponentKind>, Diagnostic> {
        let attr = &self.decl.attributes[key];
        let items: Vec<&str> = match &attr.value {
            Value::List(items) => items.iter().map(String::as_str).collect(),
            Value::Word(w) => vec![w.as_str()],
            Value::Str(_) => return Err(invalid(&attr.span, format!("`{key}` expects a list of component kinds"))),
        };
        items
            .into_iter()
            .map(|w| w.parse().map_err(|e: String| invalid(&attr.span, format!("invalid `{key}`: {e}"))))
            .collect()
    }

    fn flag(&self, key: &str) -> Result<bool, Diagnostic> {
        match self.decl.attributes.get(key) {
            None => Ok(false),
            Some(_) => match self.word(key)?.0 {
                "true" => Ok(true),
                "false" => Ok(false),
                other => Err(invalid(self.span(key), format!("`{key}` expects true or false, found `{other}`"))),
            },
        }
    }
}

fn add(model: &mut AnalysisModel, decl: &Declaration) -> Result<(), Diagnostic> {
    let expected = decl.keyword.entity_kind();
    let id: EntityId = decl.id.parse().map_err(|e: IdError| invalid(&decl.id_span, e.to_string()))?;
    if id.kind() != expected {
        return Err(invalid(
            &decl.id_span,
            format!("`{}` declarations need a {}- identifier, found {id}", decl.keyword.as_str(), expected.prefix()),
        ));
    }

    if decl.keyword == Keyword::Link {
        let mut r = Reader::new(decl);
        let scenario = r.reference("scenario")?;
        let insufficiency = r.reference("insufficiency")?;
        let link = TriggerLink { trigger: id, scenario, insufficiency };
        if !model.links.insert(link) {
            return Err(Diagnostic::new(
                Code::W302,
                format!("duplicate link {} -> {} via {}", link.trigger, link.scenario, link.insufficiency),
            )
            .at(Some(&decl.span)));
        }
        model.link_origins.insert(link, decl.id_span.clone());
        return Ok(());
    }

    if let Some(first) = model.origin(id) {
        let previous = first
            .span
            .as_ref()
            .map(|s| format!(" (first declared at {}:{}:{})", s.file, s.line, s.column))
            .unwrap_or_default();
        return Err(Diagnostic::new(Code::E001, format!("duplicate id {id}{previous}")).at(Some(&decl.id_span)));
    }

    let mut r = Reader::new(decl);
    match decl.keyword {
        Keyword::Loss => {
            let description = r.text("text")?;
            model.losses.insert(id, Loss { id, description });
        }
        Keyword::Hazard => {
            let losses = r.references("losses")?;
            let description = r.text("text")?;
            model.hazards.insert(id, Hazard { id, description, losses });
        }
        Keyword::Behavior => {
            let hazards = r.references("hazards")?;
            let description = r.text("text")?;
            model.behaviors.insert(id, HazardousBehavior { id, description, hazards });
        }
        Keyword::Controller | Keyword::Human | Keyword::Sensor | Keyword::Actuator | Keyword::Process => {
            let kind = match decl.keyword {
                Keyword::Controller => ComponentKind::Controller,
                Keyword::Human => ComponentKind::HumanController,
                Keyword::Sensor => ComponentKind::Sensor,
                Keyword::Actuator => ComponentKind::Actuator,
                _ => ComponentKind::Process,
            };
            let environment = r.flag("environment")?;
            let name = r.text("text")?;
            model.components.insert(id, Component { id, name, kind, environment });
        }
        Keyword::Action => {
            let source = r.reference("from")?;
            let target = r.reference("to")?;
            let behaviors = if decl.attributes.contains_key("behaviors") {
                Some(r.references("behaviors")?)
            } else {
                None
            };
            let name = r.text("text")?;
            model.actions.insert(id, ControlAction { id, name, source, target, behaviors });
        }
        Keyword::Feedback => {
            let source = r.reference("from")?;
            let target = r.reference("to")?;
            let kind = r.opt_parse("kind")?.unwrap_or(LinkKind::Feedback);
            let name = r.text("text")?;
            model.feedback.insert(id, FeedbackLink { id, name, source, target, kind });
        }
        Keyword::Uca => {
            let action = r.reference("action")?;
            let guide_word = r.parse("guide")?;
            let behavior = r.reference("behavior")?;
            let status = r.opt_parse("status")?.unwrap_or(UcaStatus::Candidate);
            let exclusion_reason = r.opt_text("reason")?;
            let narrative = r.opt_text("text")?;
            model.ucas.insert(
                id,
                UnsafeControlAction { id, action, guide_word, behavior, narrative, status, exclusion_reason },
            );
        }
        Keyword::Factor => {
            let (label, _) = r.word("label")?;
            let category = r.parse("category")?;
            let locus_kinds = r.kinds("loci")?;
            let default_relevance = r.parse("relevance")?;
            let description = r.opt_text("text")?;
            model.factors.insert(
                id,
                CausalFactor { id, label: label.to_owned(), description, category, locus_kinds, default_relevance },
            );
        }
        Keyword::Context => {
            let applicable_behaviors = r.references("behaviors")?;
            let description = r.text("text")?;
            model.contexts.insert(id, ScenarioContext { id, description, applicable_behaviors });
        }
        Keyword::Scenario => {
            let uca = r.reference("uca")?;
            let factor = r.reference("factor")?;
            let locus = r.reference("locus")?;
            let context = r.opt_reference("context")?;
            let relevance = r.opt_parse("relevance")?;
            let narrative = r.opt_text("text")?;
            model.scenarios.insert(id, LossScenario { id, uca, factor, locus, context, narrative, relevance });
        }
        Keyword::Trigger => {
            let description = r.text("text")?;
            model.triggers.insert(id, TriggeringCondition { id, description });
        }
        Keyword::Insufficiency => {
            let locus = r.reference("locus")?;
            let description = r.text("text")?;
            model.insufficiencies.insert(id, FunctionalInsufficiency { id, description, locus });
        }
        Keyword::Link => unreachable!("handled above"),
    }
    let refs = std::mem::take(&mut r.refs);
    model.origins.insert(id, Origin { span: Some(decl.id_span.clone()), refs });
    Ok(())
}
