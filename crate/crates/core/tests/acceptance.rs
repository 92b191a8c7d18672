//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

mod common;

use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use common::*;
use stpa_sotif::classify::filter_sotif;
use stpa_sotif::dsl::{parse, write_model};
use stpa_sotif::generate::{enumerate_uca_candidates, expand_loss_scenarios, render_uca_text, Taxonomy};
use stpa_sotif::model::{assemble_model, EntityRef, GuideWord};
use stpa_sotif::trace::{export, import_json, stats, trace_from_loss, trace_from_trigger, ExportFormat};
use stpa_sotif::{has_errors, AnalysisModel};

type Verdict = Result<String, String>;

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn property_run(cases: u32, check: impl Fn(&[u8]) -> Result<(), String>) -> Result<Duration, String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    let start = Instant::now();
    runner
        .run(&prop::collection::vec(any::<u8>(), 16..192), |data| check(&data).map_err(TestCaseError::fail))
        .map_err(|e| e.to_string())?;
    Ok(start.elapsed())
}

fn guide_words() -> Verdict {
    let labels: Vec<&str> = GuideWord::ALL.iter().map(|g| g.label()).collect();
    let expected = [
        "Keine Bereitstellung",
        "Falsche Bereitstellung",
        "Zu frühe oder zu späte Bereitstellung",
        "Zu lange oder zu kurze Bereitstellung",
    ];
    ensure(labels == expected, || format!("guide words {labels:?}"))?;
    let model = corpus();
    let start = Instant::now();
    let candidates = enumerate_uca_candidates(&model).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(candidates.len() == 24, || format!("{} candidates", candidates.len()))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("4 guide words, 24 candidates in {elapsed:?}"))
}

fn uca_arithmetic() -> Verdict {
    let report = stats(&corpus());
    ensure(report.ucas_identified == 14 && report.ucas_in_scope == 12, || {
        format!("identified {}, in scope {}", report.ucas_identified, report.ucas_in_scope)
    })?;
    Ok("14 identified, 12 in scope".into())
}

fn scenario_counts() -> Verdict {
    let model = corpus();
    let taxonomy = Taxonomy::from_model(&model, false);
    let expansion = expand_loss_scenarios(&model, &taxonomy).map_err(|e| e.to_string())?;
    let (retained, excluded) = filter_sotif(&model, &taxonomy);
    ensure(expansion.scenarios.len() == 103 && retained.len() == 55, || {
        format!("{} scenarios, {} retained", expansion.scenarios.len(), retained.len())
    })?;
    let elapsed = property_run(1000, |data| {
        let m = random_model(data);
        let candidates = enumerate_uca_candidates(&m).map_err(|e| e.to_string())?;
        ensure(candidates.len() == expected_candidate_count(&m), || "candidate formula".into())?;
        for merge in [false, true] {
            let t = Taxonomy::from_model(&m, merge);
            let e = expand_loss_scenarios(&m, &t).map_err(|e| e.to_string())?;
            ensure(e.scenarios.len() == expected_scenario_count(&m, &t), || format!("scenario formula, merge={merge}"))?;
        }
        Ok(())
    })?;
    ensure(elapsed < Duration::from_secs(10), || format!("property run took {elapsed:?}"))?;
    Ok(format!(
        "103 scenarios, 55 retained, {} excluded; 1000 formula cases in {elapsed:?}",
        excluded.len()
    ))
}

fn linkage_capacity() -> Verdict {
    let (model, diags) = load_text(&stress_source());
    ensure(!has_errors(&diags), || format!("{} error(s)", diags.iter().filter(|d| d.is_error()).count()))?;
    let report = stats(&model);
    ensure(report.max_scenarios_per_trigger() == 45 && report.max_triggers_per_scenario() == 15, || {
        format!("{} / {}", report.max_scenarios_per_trigger(), report.max_triggers_per_scenario())
    })?;
    for format in [ExportFormat::Json, ExportFormat::CsvMatrix, ExportFormat::Dot, ExportFormat::Markdown] {
        ensure(!export(&model, format).is_empty(), || format!("empty {format:?} export"))?;
    }
    let tree = trace_from_trigger(&model, id("TC-1")).map_err(|e| e.to_string())?;
    ensure(tree.children(id("TC-1")).count() == 45, || "TC-1 trace".into())?;
    let tree = trace_from_loss(&model, id("L-1")).map_err(|e| e.to_string())?;
    ensure((1..=15).all(|t| tree.leaves().contains(&id(&format!("TC-{t}")))), || "L-1 trace".into())?;
    Ok("45 scenarios on one trigger, 15 triggers on one scenario".into())
}

fn golden_texts() -> Verdict {
    let model = corpus();
    let text = |s: &str| model.lookup(id(s)).and_then(|e| e.text().map(str::to_owned)).unwrap_or_default();
    let Some(EntityRef::Uca(uca)) = model.lookup(id("UCA-1")) else {
        return Err("UCA-1 missing".into());
    };
    let chain = format!("TC-5 {}\n  FI-1 {}\n    LS-7 {}\n", text("TC-5"), text("FI-1"), text("LS-7"));
    let linked = model.links.iter().any(|l| l.trigger == id("TC-5") && l.scenario == id("LS-7") && l.insufficiency == id("FI-1"));
    ensure(linked, || "TC-5 -> LS-7 via FI-1 not linked".into())?;
    let rendered = [
        ("hazard.txt", text("H-1") + "\n"),
        ("uca.txt", render_uca_text(uca, &model).map_err(|e| e.to_string())? + "\n"),
        ("scenario.txt", text("LS-9") + "\n"),
        ("sun_glare.txt", chain),
    ];
    for (name, got) in &rendered {
        ensure(*got == golden(name), || format!("{name} differs"))?;
    }
    Ok(format!("{} golden files match", rendered.len()))
}

fn round_trips() -> Verdict {
    let sources = corpus_sources();
    for (name, text) in &sources {
        let (model, _) = assemble_model(&parse(text, name).0);
        let (again, _) = assemble_model(&parse(&write_model(&model), name).0);
        ensure(model == again, || format!("{name} canonical round trip"))?;
    }
    let model = corpus();
    let first = export(&model, ExportFormat::Json);
    let imported = import_json(&first).map_err(|e| e.to_string())?;
    ensure(imported == model && export(&imported, ExportFormat::Json) == first, || "json fixpoint".into())?;
    let empty = export(&AnalysisModel::new(), ExportFormat::Json);
    ensure(import_json(&empty).ok() == Some(AnalysisModel::new()), || "empty json".into())?;
    Ok(format!("{} files, json byte-identical", sources.len()))
}

fn partition_and_recount() -> Verdict {
    let elapsed = property_run(1000, |data| {
        let m = random_model(data);
        let t = Taxonomy::from_model(&m, false);
        let (retained, excluded) = filter_sotif(&m, &t);
        ensure(retained.len() + excluded.len() == m.scenarios.len(), || "partition".into())?;
        check_stats_recount(&m)
    })?;
    Ok(format!("1000 cases in {elapsed:?}"))
}

fn determinism() -> Verdict {
    let files = corpus_args();
    let runs: [(&[&str], &[&str]); 13] = [
        (&["check"], &[]),
        (&["gen", "ucas"], &[]),
        (&["gen", "scenarios"], &[]),
        (&["gen", "scenarios"], &["--merge-controller-flaws"]),
        (&["classify"], &[]),
        (&["trace"], &["--from", "L-1"]),
        (&["trace"], &["--from", "TC-5"]),
        (&["stats"], &[]),
        (&["export"], &["--format", "json"]),
        (&["export"], &["--format", "csv"]),
        (&["export"], &["--format", "dot"]),
        (&["export"], &["--format", "markdown"]),
        (&["--machine", "check"], &[]),
    ];
    for (sub, tail) in runs {
        let mut args: Vec<&str> = sub.to_vec();
        args.extend(files.iter().map(String::as_str));
        args.extend(tail);
        let first = cli(&args);
        ensure(first.0 == 0, || format!("{sub:?} exited {}", first.0))?;
        ensure(cli(&args) == first, || format!("{sub:?} {tail:?} differs between runs"))?;
    }
    Ok(format!("{} subcommand runs byte-identical", runs.len()))
}

fn main() {
    let criteria: [(&str, &str, fn() -> Verdict); 8] = [
        ("AC1", "guide-word completeness", guide_words),
        ("AC2", "UCA arithmetic", uca_arithmetic),
        ("AC3", "scenario counts", scenario_counts),
        ("AC4", "trigger linkage capacity", linkage_capacity),
        ("AC5", "golden texts", golden_texts),
        ("AC6", "round-trip fixpoints", round_trips),
        ("AC7", "partition and recount", partition_and_recount),
        ("AC8", "determinism", determinism),
    ];
    let mut failed = 0;
    for (code, name, check) in criteria {
        match std::panic::catch_unwind(check) {
            Ok(Ok(detail)) => println!("PASS {code} {name}: {detail}"),
            Ok(Err(detail)) => {
                failed += 1;
                println!("FAIL {code} {name}: {detail}");
            }
            Err(_) => {
                failed += 1;
                println!("FAIL {code} {name}: panicked");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
