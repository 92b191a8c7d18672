use std::fmt::Write as _;
use std::str::FromStr;

use crate::classify::{classify_relevance, filter_sotif};
use crate::generate::{render_uca_text, Taxonomy};
use crate::model::{AnalysisModel, ComponentKind, LinkKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    CsvMatrix,
    Dot,
    Markdown,
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ExportFormat::Json),
            "csv" | "csv_matrix" => Ok(ExportFormat::CsvMatrix),
            "dot" => Ok(ExportFormat::Dot),
            "markdown" | "md" => Ok(ExportFormat::Markdown),
            other => Err(format!("unsupported export format \"{other}\" (expected json, csv, dot or markdown)")),
        }
    }
}

pub fn export(model: &AnalysisModel, format: ExportFormat) -> Vec<u8> {
    match format {
        ExportFormat::Json => json(model).into_bytes(),
        ExportFormat::CsvMatrix => csv_matrix(model),
        ExportFormat::Dot => dot(model).into_bytes(),
        ExportFormat::Markdown => markdown(model).into_bytes(),
    }
}

/// Reads a model written by the JSON exporter.
pub fn import_json(bytes: &[u8]) -> Result<AnalysisModel, serde_json::Error> {
    serde_json::from_slice(bytes)
}

/// Pretty-printed, keys sorted, trailing newline.
fn json(model: &AnalysisModel) -> String {
    // Going through `Value` sorts object keys.
    let value = serde_json::to_value(model).expect("model serializes");
    let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
    out.push('\n');
    out
}

/// Trigger × retained-scenario incidence matrix. Cells list the linking
/// insufficiencies, `;`-separated.
fn csv_matrix(model: &AnalysisModel) -> Vec<u8> {
    let (retained, _) = filter_sotif(model, &Taxonomy::from_model(model, false));
    let mut w = csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::Always)
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    let mut header = vec!["trigger".to_owned()];
    header.extend(retained.iter().map(|s| s.id.to_string()));
    w.write_record(&header).expect("in-memory write");
    for trigger in model.triggers.keys() {
        let mut row = vec![trigger.to_string()];
        for s in &retained {
            let fis: Vec<String> = model
                .links
                .iter()
                .filter(|l| l.trigger == *trigger && l.scenario == s.id)
                .map(|l| l.insufficiency.to_string())
                .collect();
            row.push(fis.join(";"));
        }
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n")
}

/// Control structure digraph: control actions solid, feedback dashed,
/// other links dotted.
fn dot(model: &AnalysisModel) -> String {
    let mut out = String::from("digraph control_structure {\n    rankdir=TB;\n    node [shape=box];\n");
    for c in model.components.values() {
        let shape = match c.kind {
            ComponentKind::HumanController => ", shape=ellipse",
            ComponentKind::Process => ", peripheries=2",
            _ => "",
        };
        let _ = writeln!(out, "    \"{}\" [label=\"{}\"{shape}];", c.id, dot_escape(&c.name));
    }
    for a in model.actions.values() {
        let _ = writeln!(out, "    \"{}\" -> \"{}\" [label=\"{}\", style=solid];", a.source, a.target, dot_escape(&a.name));
    }
    for f in model.feedback.values() {
        let style = match f.kind {
            LinkKind::Feedback => "dashed",
            LinkKind::Other => "dotted",
        };
        let _ = writeln!(out, "    \"{}\" -> \"{}\" [label=\"{}\", style={style}];", f.source, f.target, dot_escape(&f.name));
    }
    out.push_str("}\n");
    out
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

fn markdown(model: &AnalysisModel) -> String {
    let taxonomy = Taxonomy::from_model(model, false);
    let mut out = String::from("# STPA report\n");

    out.push_str("\n## Losses\n\n| ID | Description |\n|---|---|\n");
    for l in model.losses.values() {
        let _ = writeln!(out, "| {} | {} |", l.id, cell(&l.description));
    }
    out.push_str("\n## Hazards\n\n| ID | Description | Losses |\n|---|---|---|\n");
    for h in model.hazards.values() {
        let losses: Vec<String> = h.losses.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "| {} | {} | {} |", h.id, cell(&h.description), losses.join(", "));
    }
    out.push_str("\n## Hazardous behaviors\n\n| ID | Description | Hazards |\n|---|---|---|\n");
    for b in model.behaviors.values() {
        let hazards: Vec<String> = b.hazards.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "| {} | {} | {} |", b.id, cell(&b.description), hazards.join(", "));
    }
    out.push_str("\n## Unsafe control actions\n\n| ID | Control action | Guide word | Behavior | Status | Text |\n|---|---|---|---|---|---|\n");
    for u in model.ucas.values() {
        let action = model.actions.get(&u.action).map(|a| a.name.as_str()).unwrap_or("?");
        let mut text = render_uca_text(u, model).unwrap_or_default();
        if let Some(reason) = &u.exclusion_reason {
            let _ = write!(text, " (excluded: {reason})");
        }
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            u.id,
            cell(action),
            u.guide_word.label(),
            u.behavior,
            u.status,
            cell(&text)
        );
    }
    out.push_str("\n## Loss scenarios\n\n| ID | UCA | Causal factor | Locus | Context | Relevance | Text |\n|---|---|---|---|---|---|---|\n");
    for s in model.scenarios.values() {
        let factor = taxonomy.get(s.factor).map(|f| f.label.as_str()).unwrap_or("?");
        let relevance = classify_relevance(s, &taxonomy).map(|r| r.as_str()).unwrap_or("?");
        let context = s.context.map(|c| c.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} | {} |",
            s.id,
            s.uca,
            factor,
            cell(model.component_name(s.locus)),
            context,
            relevance,
            cell(s.narrative.as_deref().unwrap_or(""))
        );
    }
    out.push_str("\n## Triggering conditions\n\n| ID | Description | Scenarios | Links |\n|---|---|---|---|\n");
    for t in model.triggers.values() {
        let links: Vec<_> = model.links.iter().filter(|l| l.trigger == t.id).collect();
        let scenarios: std::collections::BTreeSet<_> = links.iter().map(|l| l.scenario).collect();
        let _ = writeln!(out, "| {} | {} | {} | {} |", t.id, cell(&t.description), scenarios.len(), links.len());
    }
    out.push_str("\n## Functional insufficiencies\n\n| ID | Locus | Description |\n|---|---|---|\n");
    for fi in model.insufficiencies.values() {
        let _ = writeln!(out, "| {} | {} | {} |", fi.id, cell(model.component_name(fi.locus)), cell(&fi.description));
    }
    out
}
