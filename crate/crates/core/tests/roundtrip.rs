mod common;

use common::{corpus, corpus_sources, load_text};
use stpa_sotif::dsl::{parse, write_model};
use stpa_sotif::model::assemble_model;
use stpa_sotif::trace::{export, import_json, ExportFormat};
use stpa_sotif::AnalysisModel;

#[test]
fn every_corpus_file_survives_canonical_dsl() {
    for (name, text) in corpus_sources() {
        let (decls, diags) = parse(&text, &name);
        assert!(diags.is_empty(), "{name}: {diags:?}");
        let (model, _) = assemble_model(&decls);
        let canonical = write_model(&model);
        let (again, diags) = parse(&canonical, &name);
        assert!(diags.is_empty(), "{name}: {diags:?}");
        let (model2, _) = assemble_model(&again);
        assert_eq!(model, model2, "{name}");
        // Writing twice is a fixpoint.
        assert_eq!(write_model(&assemble_model(&again).0), canonical, "{name}");
    }
}

#[test]
fn whole_corpus_survives_canonical_dsl() {
    let model = corpus();
    let (again, diags) = load_text(&write_model(&model));
    assert!(diags.is_empty(), "{diags:?}");
    assert_eq!(model, again);
}

#[test]
fn json_export_is_a_fixpoint() {
    let model = corpus();
    let first = export(&model, ExportFormat::Json);
    let imported = import_json(&first).unwrap();
    assert_eq!(imported, model);
    assert_eq!(export(&imported, ExportFormat::Json), first);
}

#[test]
fn empty_model_json() {
    let bytes = export(&AnalysisModel::new(), ExportFormat::Json);
    let value: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
    for (_, registry) in value.as_object().unwrap() {
        assert_eq!(registry.as_array().map(Vec::len), Some(0));
    }
    assert_eq!(import_json(&bytes).unwrap(), AnalysisModel::new());
}
