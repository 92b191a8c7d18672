mod common;

use common::{cli, corpus, corpus_args, fixture, golden, id, load_text};
use stpa_sotif::generate::render_uca_text;
use stpa_sotif::model::EntityRef;
use stpa_sotif::{emit_diagnostics, DiagnosticStyle};

fn text_of(model: &stpa_sotif::AnalysisModel, s: &str) -> String {
    model.lookup(id(s)).and_then(|e| e.text().map(str::to_owned)).unwrap()
}

#[test]
fn hazard_text() {
    let model = corpus();
    assert_eq!(text_of(&model, "H-1") + "\n", golden("hazard.txt"));
}

#[test]
fn uca_text() {
    let model = corpus();
    let Some(EntityRef::Uca(uca)) = model.lookup(id("UCA-1")) else { panic!("UCA-1") };
    assert_eq!(render_uca_text(uca, &model).unwrap() + "\n", golden("uca.txt"));
}

#[test]
fn scenario_narrative() {
    let model = corpus();
    assert_eq!(text_of(&model, "LS-9") + "\n", golden("scenario.txt"));
}

#[test]
fn sun_glare_chain() {
    let model = corpus();
    let link = model
        .links
        .iter()
        .find(|l| l.trigger == id("TC-5") && l.scenario == id("LS-7"))
        .expect("TC-5 -> LS-7 link");
    let rendered = format!(
        "{} {}\n  {} {}\n    {} {}\n",
        link.trigger,
        text_of(&model, "TC-5"),
        link.insufficiency,
        text_of(&model, &link.insufficiency.to_string()),
        link.scenario,
        text_of(&model, "LS-7"),
    );
    assert_eq!(rendered, golden("sun_glare.txt"));
}

#[test]
fn dangling_uca_diagnostic() {
    let (_, diags) = load_text(&fixture("eight_ucas.stpa"));
    assert_eq!(emit_diagnostics(&diags, DiagnosticStyle::Human), golden("e002.txt"));
}

#[test]
fn mixed_diagnostics_keep_order() {
    let (_, diags) = load_text(&fixture("mixed.stpa"));
    assert_eq!(emit_diagnostics(&diags, DiagnosticStyle::Human), golden("mixed.txt"));
}

fn corpus_command(sub: &[&str]) -> String {
    let files = corpus_args();
    let mut args: Vec<&str> = vec![sub[0]];
    args.extend(files.iter().map(String::as_str));
    args.extend(&sub[1..]);
    let (code, out, err) = cli(&args);
    assert_eq!(code, 0, "{err}");
    out
}

#[test]
fn stats_output() {
    assert_eq!(corpus_command(&["stats"]), golden("stats.txt"));
}

#[test]
fn classify_output() {
    assert_eq!(corpus_command(&["classify"]), golden("classify.txt"));
}

#[test]
fn dot_output() {
    assert_eq!(corpus_command(&["export", "--format", "dot"]), golden("control_structure.dot"));
}
