//! Loads the case-study corpus shipped with the crate.

use std::path::{Path, PathBuf};

use stpa_sotif::dsl::parse_files;
use stpa_sotif::model::assemble_model;
use stpa_sotif::{emit_diagnostics, AnalysisModel, Diagnostic, DiagnosticStyle};

pub fn corpus_paths() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .expect("corpus dir")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "stpa"))
        .collect();
    paths.sort();
    paths
}

pub fn load_corpus() -> (AnalysisModel, Vec<Diagnostic>) {
    let sources: Vec<(String, String)> = corpus_paths()
        .into_iter()
        .map(|p| (p.display().to_string(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    let (decls, mut diags) = parse_files(sources.iter().map(|(f, t)| (f.as_str(), t.as_str())));
    let (model, more) = assemble_model(&decls);
    diags.extend(more);
    (model, diags)
}

/// The corpus, or exit after printing its diagnostics.
#[allow(dead_code)]
pub fn corpus() -> AnalysisModel {
    let (model, diags) = load_corpus();
    if stpa_sotif::has_errors(&diags) {
        eprint!("{}", emit_diagnostics(&diags, DiagnosticStyle::Human));
        std::process::exit(1);
    }
    model
}
