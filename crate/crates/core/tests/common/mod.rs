//! Shared fixtures: the case-study corpus, a byte-driven random model
//! builder and brute-force oracles.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use stpa_sotif::diagnostic::Diagnostic;
use stpa_sotif::dsl::{factor_line, parse_files};
use stpa_sotif::generate::{default_taxonomy, Taxonomy};
use stpa_sotif::model::{
    assemble_model, AnalysisModel, ComponentKind, DefaultRelevance, EntityId, EntityKind, FactorCategory, LinkKind,
    Relevance, UcaStatus,
};
use stpa_sotif::trace::stats;

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub fn golden(name: &str) -> String {
    std::fs::read_to_string(golden_dir().join(name)).unwrap_or_else(|e| panic!("golden {name}: {e}"))
}

pub fn corpus_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "stpa"))
        .collect();
    files.sort();
    files
}

/// (display name, text) per corpus file, in file-name order.
pub fn corpus_sources() -> Vec<(String, String)> {
    corpus_files()
        .into_iter()
        .map(|p| {
            let name = format!("corpus/{}", p.file_name().unwrap().to_string_lossy());
            (name, std::fs::read_to_string(&p).unwrap())
        })
        .collect()
}

pub fn load(sources: &[(String, String)]) -> (AnalysisModel, Vec<Diagnostic>) {
    let (decls, mut diags) = parse_files(sources.iter().map(|(f, t)| (f.as_str(), t.as_str())));
    let (model, more) = assemble_model(&decls);
    diags.extend(more);
    (model, diags)
}

pub fn load_text(text: &str) -> (AnalysisModel, Vec<Diagnostic>) {
    load(&[("model.stpa".to_owned(), text.to_owned())])
}

pub fn corpus() -> AnalysisModel {
    let (model, diags) = load(&corpus_sources());
    assert!(diags.is_empty(), "corpus diagnostics: {diags:?}");
    model
}

pub fn id(s: &str) -> EntityId {
    s.parse().unwrap()
}

/// Deterministic choices drawn from a proptest-generated byte string.
pub struct Picks<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Picks<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        Self { data, pos: 0 }
    }

    fn byte(&mut self) -> u8 {
        let b = if self.data.is_empty() { 0 } else { self.data[self.pos % self.data.len()] };
        self.pos += 1;
        // Mix in the position so short inputs still vary.
        b.wrapping_add(((self.pos / self.data.len().max(1)) as u8).wrapping_mul(37))
    }

    pub fn below(&mut self, n: usize) -> usize {
        if n == 0 {
            0
        } else {
            self.byte() as usize % n
        }
    }

    pub fn chance(&mut self, percent: usize) -> bool {
        self.below(100) < percent
    }

    pub fn pick<T: Clone>(&mut self, items: &[T]) -> Option<T> {
        if items.is_empty() {
            None
        } else {
            Some(items[self.below(items.len())].clone())
        }
    }

    pub fn subset<T: Clone>(&mut self, items: &[T], percent: usize) -> Vec<T> {
        items.iter().filter(|_| self.chance(percent)).cloned().collect()
    }
}

fn list(ids: &[String]) -> String {
    format!("[{}]", ids.join(", "))
}

/// DSL text of a random model that assembles without errors. Warnings
/// (orphans) are allowed.
pub fn random_source(data: &[u8]) -> String {
    let mut r = Picks::new(data);
    let mut out = String::new();

    let nl = r.below(3);
    for i in 1..=nl {
        let _ = writeln!(out, "loss L-{i} text \"Verlust {i}\"");
    }
    let losses: Vec<String> = (1..=nl).map(|i| format!("L-{i}")).collect();
    let nh = r.below(4);
    for i in 1..=nh {
        let _ = writeln!(out, "hazard H-{i} losses={} text \"Gefährdung {i}\"", list(&r.subset(&losses, 60)));
    }
    let hazards: Vec<String> = (1..=nh).map(|i| format!("H-{i}")).collect();
    let nb = r.below(4);
    for i in 1..=nb {
        let _ = writeln!(out, "behavior HB-{i} hazards={} text \"Verhalten {i}\"", list(&r.subset(&hazards, 60)));
    }
    let behaviors: Vec<String> = (1..=nb).map(|i| format!("HB-{i}")).collect();

    let kinds = [
        ComponentKind::Controller,
        ComponentKind::Controller,
        ComponentKind::HumanController,
        ComponentKind::Sensor,
        ComponentKind::Sensor,
        ComponentKind::Actuator,
        ComponentKind::Process,
    ];
    let nc = 1 + r.below(7);
    let mut components: Vec<(u32, ComponentKind)> = Vec::new();
    let mut has_process = false;
    for i in 1..=nc as u32 {
        let mut kind = if i == 1 { ComponentKind::Controller } else { r.pick(&kinds).unwrap() };
        if kind == ComponentKind::Process && has_process {
            kind = ComponentKind::Sensor;
        }
        let keyword = match kind {
            ComponentKind::Controller => "controller",
            ComponentKind::HumanController => "human",
            ComponentKind::Sensor => "sensor",
            ComponentKind::Actuator => "actuator",
            ComponentKind::Process => {
                has_process = true;
                "process"
            }
        };
        let env = if kind == ComponentKind::Process && r.chance(50) { " environment=true" } else { "" };
        let _ = writeln!(out, "{keyword} C-{i}{env} text \"Komponente {i}\"");
        components.push((i, kind));
    }
    let of_kind = |pred: &dyn Fn(ComponentKind) -> bool| -> Vec<u32> {
        components.iter().filter(|(_, k)| pred(*k)).map(|(i, _)| *i).collect()
    };
    let sources = of_kind(&|k| k.is_controller());
    let targets = of_kind(&|k| matches!(k, ComponentKind::Controller | ComponentKind::Actuator | ComponentKind::Process));
    let controllers = sources.clone();
    let all: Vec<u32> = components.iter().map(|(i, _)| *i).collect();

    let mut actions: Vec<(u32, Vec<String>)> = Vec::new();
    for _ in 0..r.below(4) {
        let source = r.pick(&sources).unwrap();
        let options: Vec<u32> = targets.iter().copied().filter(|&t| t != source).collect();
        let Some(target) = r.pick(&options) else { continue };
        let i = actions.len() as u32 + 1;
        let (narrow, set) = if r.chance(25) {
            let s = r.subset(&behaviors, 50);
            (format!(" behaviors={}", list(&s)), s)
        } else {
            (String::new(), behaviors.clone())
        };
        let _ = writeln!(out, "action CA-{i} from=C-{source} to=C-{target}{narrow} text \"Aktion {i}\"");
        actions.push((i, set));
    }

    let mut nfb = 0;
    for _ in 0..r.below(5) {
        let source = r.pick(&all).unwrap();
        let feedback = r.chance(60);
        let options: Vec<u32> = (if feedback { &controllers } else { &all })
            .iter()
            .copied()
            .filter(|&t| t != source)
            .collect();
        let Some(target) = r.pick(&options) else { continue };
        nfb += 1;
        let kind = if feedback { "feedback" } else { "other" };
        let _ = writeln!(out, "feedback FB-{nfb} from=C-{source} to=C-{target} kind={kind} text \"Rückführung {nfb}\"");
    }

    let guides = ["not_provided", "provided_unsafe", "wrong_timing", "wrong_duration"];
    let mut nu = 0;
    let mut retained: Vec<(u32, String)> = Vec::new();
    for (a, set) in &actions {
        for g in guides {
            for b in set {
                if !r.chance(40) {
                    continue;
                }
                nu += 1;
                let status = match r.below(3) {
                    0 => "status=candidate".to_owned(),
                    1 => {
                        retained.push((nu, b.clone()));
                        "status=retained".to_owned()
                    }
                    _ => "status=excluded reason=\"ausgeschlossen\"".to_owned(),
                };
                let _ = writeln!(out, "uca UCA-{nu} action=CA-{a} guide={g} behavior={b} {status}");
            }
        }
    }

    // Scenarios reference factors, so they are only drawn when factors are
    // declared; otherwise the built-in taxonomy applies at generation time.
    let mut taxonomy = default_taxonomy(false);
    let declared = r.chance(50);
    if declared {
        let keep: Vec<bool> = (0..taxonomy.factors.len()).map(|_| r.chance(60)).collect();
        let mut kept: Vec<_> = taxonomy.factors.iter().zip(&keep).filter(|(_, k)| **k).map(|(f, _)| f.clone()).collect();
        if kept.is_empty() {
            kept.push(taxonomy.factors[r.below(12)].clone());
        }
        for f in &kept {
            out.push_str(&factor_line(f));
            out.push('\n');
        }
        taxonomy = Taxonomy { factors: kept, merge_controller_flaws: false, aliases: BTreeMap::new() };
    }

    let mut contexts: Vec<(u32, Vec<String>)> = Vec::new();
    if nb > 0 {
        for i in 1..=r.below(3) as u32 {
            let mut set = r.subset(&behaviors, 50);
            if set.is_empty() {
                set.push(r.pick(&behaviors).unwrap());
            }
            let _ = writeln!(out, "context CTX-{i} behaviors={} text \"Fall {i}\"", list(&set));
            contexts.push((i, set));
        }
    }

    let mut ns = 0;
    for _ in 0..if declared { r.below(8) } else { 0 } {
        let Some(&(u, ref b)) = retained.get(r.below(retained.len().max(1))) else { continue };
        let factor = &taxonomy.factors[r.below(taxonomy.factors.len())];
        let loci: Vec<u32> =
            components.iter().filter(|(_, k)| factor.locus_kinds.contains(k)).map(|(i, _)| *i).collect();
        let Some(locus) = r.pick(&loci) else { continue };
        ns += 1;
        let applicable: Vec<u32> = contexts.iter().filter(|(_, s)| s.contains(b)).map(|(i, _)| *i).collect();
        let ctx = match r.pick(&applicable) {
            Some(c) if r.chance(70) => format!(" context=CTX-{c}"),
            _ => String::new(),
        };
        let rel = match r.below(6) {
            0 => " relevance=sotif",
            1 => " relevance=functional_safety",
            2 => " relevance=needs_review",
            _ => "",
        };
        let _ = writeln!(out, "scenario LS-{ns} uca=UCA-{u} factor={} locus=C-{locus}{ctx}{rel}", factor.id);
    }

    let nt = r.below(4);
    for i in 1..=nt {
        let _ = writeln!(out, "trigger TC-{i} text \"Umstand {i}\"");
    }
    let nfi = r.below(3);
    for i in 1..=nfi {
        let locus = r.pick(&all).unwrap();
        let _ = writeln!(out, "insufficiency FI-{i} locus=C-{locus} text \"Insuffizienz {i}\"");
    }
    if nt > 0 && ns > 0 && nfi > 0 {
        let mut links = BTreeSet::new();
        for _ in 0..r.below(10) {
            links.insert((1 + r.below(nt), 1 + r.below(ns), 1 + r.below(nfi)));
        }
        for (t, s, f) in links {
            let _ = writeln!(out, "link TC-{t} -> LS-{s} via FI-{f}");
        }
    }
    out
}

pub fn random_model(data: &[u8]) -> AnalysisModel {
    let src = random_source(data);
    let (model, diags) = load_text(&src);
    assert!(!stpa_sotif::has_errors(&diags), "generator produced errors: {diags:?}\n{src}");
    model
}

/// Components playing `category`'s role for the UCA's action, found by
/// scanning every component against the relation tables.
pub fn role_players(model: &AnalysisModel, action: EntityId, category: FactorCategory) -> Vec<EntityId> {
    let a = &model.actions[&action];
    let feeds = |c: EntityId| {
        model.feedback.values().any(|f| f.kind == LinkKind::Feedback && f.source == c && f.target == a.source)
    };
    let member = |c: EntityId| c == a.source || c == a.target || feeds(c);
    let adjacent = |c: EntityId| {
        model.actions.values().any(|x| (x.source == c && member(x.target)) || (x.target == c && member(x.source)))
            || model.feedback.values().any(|f| (f.source == c && member(f.target)) || (f.target == c && member(f.source)))
    };
    model
        .components
        .values()
        .filter(|c| match category {
            FactorCategory::Controller => c.id == a.source,
            FactorCategory::FeedbackPath => feeds(c.id),
            FactorCategory::ControlPath => c.id == a.target,
            FactorCategory::ProcessInput => c.kind == ComponentKind::Process && (member(c.id) || adjacent(c.id)),
        })
        .map(|c| c.id)
        .collect()
}

/// Σ over retained UCAs of |applicable (factor, locus)| × max(1, |contexts|).
pub fn expected_scenario_count(model: &AnalysisModel, taxonomy: &Taxonomy) -> usize {
    let mut total = 0;
    for u in model.ucas.values().filter(|u| u.status == UcaStatus::Retained) {
        let mut pairs = 0;
        for f in &taxonomy.factors {
            for c in role_players(model, u.action, f.category) {
                if f.locus_kinds.contains(&model.components[&c].kind) {
                    pairs += 1;
                }
            }
        }
        let contexts = model.contexts.values().filter(|c| c.applicable_behaviors.contains(&u.behavior)).count();
        total += pairs * contexts.max(1);
    }
    total
}

/// |actions| × 4 × |behaviors|, honouring per-action narrowing.
pub fn expected_candidate_count(model: &AnalysisModel) -> usize {
    model
        .actions
        .values()
        .map(|a| 4 * a.behaviors.as_ref().map_or(model.behaviors.len(), |b| b.len()))
        .sum()
}

/// Every node reachable from a loss by walking the relation tables.
pub fn reachable_from_loss(model: &AnalysisModel, loss: EntityId) -> BTreeSet<EntityId> {
    let mut seen = BTreeSet::from([loss]);
    let mut frontier = vec![loss];
    while let Some(n) = frontier.pop() {
        let mut next = Vec::new();
        match n.kind() {
            stpa_sotif::EntityKind::Loss => next.extend(model.hazards.values().filter(|h| h.losses.contains(&n)).map(|h| h.id)),
            stpa_sotif::EntityKind::Hazard => next.extend(model.behaviors.values().filter(|b| b.hazards.contains(&n)).map(|b| b.id)),
            stpa_sotif::EntityKind::Behavior => next.extend(model.ucas.values().filter(|u| u.behavior == n).map(|u| u.id)),
            stpa_sotif::EntityKind::Uca => next.extend(model.scenarios.values().filter(|s| s.uca == n).map(|s| s.id)),
            stpa_sotif::EntityKind::Scenario => {
                for l in model.links.iter().filter(|l| l.scenario == n) {
                    next.push(l.trigger);
                    next.push(l.insufficiency);
                }
            }
            _ => {}
        }
        for m in next {
            if seen.insert(m) {
                frontier.push(m);
            }
        }
    }
    seen
}

/// Every node reachable upstream from a trigger.
pub fn reachable_from_trigger(model: &AnalysisModel, trigger: EntityId) -> BTreeSet<EntityId> {
    let mut seen = BTreeSet::from([trigger]);
    for l in model.links.iter().filter(|l| l.trigger == trigger) {
        seen.insert(l.scenario);
        let s = &model.scenarios[&l.scenario];
        seen.insert(s.uca);
        let u = &model.ucas[&s.uca];
        seen.insert(u.behavior);
        for h in &model.behaviors[&u.behavior].hazards {
            seen.insert(*h);
            seen.extend(model.hazards[h].losses.iter().copied());
        }
    }
    seen
}

pub fn fixture(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

pub fn fixture_path(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures").join(name).display().to_string()
}

/// Trigger TC-1 reaches 45 scenarios and scenario LS-1 is reached by 15
/// triggers, each link through its own insufficiency.
pub fn stress_source() -> String {
    let mut s = String::from(
        "loss L-1 text \"Verlust von Menschenleben oder Verletzung von Menschen\"\n\
         hazard H-1 losses=[L-1] text \"Unterschreitung eines angemessenen Mindestabstandes zu Fußgänger*innen\"\n\
         controller C-1 text \"Bewegungsregler\"\n\
         sensor C-2 text \"Wahrnehmungssystem\"\n\
         actuator C-3 text \"Aktorik\"\n\
         process C-4 text \"Fahrzeug in seiner Umgebung\"\n\
         action CA-1 from=C-1 to=C-3 text \"Steuerbefehle\"\n\
         feedback FB-1 from=C-2 to=C-1 text \"Objektliste\"\n\
         feedback FB-2 from=C-3 to=C-4 kind=other text \"Stellgrößen\"\n\
         feedback FB-3 from=C-4 to=C-2 kind=other text \"Umgebung\"\n",
    );
    let guides = ["not_provided", "provided_unsafe", "wrong_timing", "wrong_duration"];
    for b in 1..=3 {
        let _ = writeln!(s, "behavior HB-{b} hazards=[H-1] text \"Verhalten {b}\"");
    }
    for (i, (b, g)) in (1..=3).flat_map(|b| guides.iter().map(move |g| (b, g))).enumerate() {
        let _ = writeln!(s, "uca UCA-{} action=CA-1 guide={g} behavior=HB-{b} status=retained", i + 1);
    }
    for f in 1..=4 {
        let _ = writeln!(
            s,
            "factor CF-{f} label=flaw_{f} category=controller loci=[controller] relevance=sotif_candidate"
        );
    }
    for n in 0..45 {
        let _ = writeln!(s, "scenario LS-{} uca=UCA-{} factor=CF-{} locus=C-1", n + 1, n / 4 + 1, n % 4 + 1);
    }
    for t in 1..=15 {
        let _ = writeln!(s, "trigger TC-{t} text \"Umstand {t}\"");
        let _ = writeln!(s, "insufficiency FI-{t} locus=C-2 text \"Insuffizienz {t}\"");
    }
    for n in 1..=45 {
        let _ = writeln!(s, "link TC-1 -> LS-{n} via FI-1");
    }
    for t in 2..=15 {
        let _ = writeln!(s, "link TC-{t} -> LS-1 via FI-{t}");
    }
    s
}

/// Runs the command line in-process and returns (exit code, stdout, stderr).
pub fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("stpa-sotif").chain(args.iter().copied());
    let code = stpa_sotif::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Corpus file paths as command-line arguments.
pub fn corpus_args() -> Vec<String> {
    corpus_files().iter().map(|p| p.display().to_string()).collect()
}

/// Compares every `StatsReport` field with a brute-force recount.
pub fn check_stats_recount(m: &AnalysisModel) -> Result<(), String> {
    fn same<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
        if got == want {
            Ok(())
        } else {
            Err(format!("{what}: report {got:?}, recount {want:?}"))
        }
    }
    let r = stats(m);
    for kind in EntityKind::ALL {
        same(kind.plural(), r.count(kind), m.ids().iter().filter(|i| i.kind() == kind).count())?;
    }
    let status = |st| m.ucas.values().filter(|u| u.status == st).count();
    same("ucas_in_scope", r.ucas_in_scope, status(UcaStatus::Retained))?;
    same("ucas_identified", r.ucas_identified, status(UcaStatus::Retained) + status(UcaStatus::Excluded))?;
    same("ucas_candidate", r.ucas_candidate, status(UcaStatus::Candidate))?;
    same("scenarios", r.scenarios, m.scenarios.len())?;
    same("partition", r.sotif_retained + r.sotif_excluded, r.scenarios)?;
    let t = Taxonomy::from_model(m, false);
    let fs = m
        .scenarios
        .values()
        .filter(|s| {
            s.relevance.map_or_else(
                || t.get(s.factor).map(|f| f.default_relevance) == Some(DefaultRelevance::FunctionalSafety),
                |o| o == Relevance::FunctionalSafety,
            )
        })
        .count();
    same("sotif_excluded", r.sotif_excluded, fs)?;
    same("links", r.links, m.links.len())?;
    same("links_per_trigger", r.links_per_trigger.values().sum::<usize>(), m.links.len())?;
    same("links_per_scenario", r.links_per_scenario.values().sum::<usize>(), m.links.len())?;
    for (t, n) in &r.scenarios_per_trigger {
        let distinct: BTreeSet<_> = m.links.iter().filter(|l| l.trigger == *t).map(|l| l.scenario).collect();
        same("scenarios_per_trigger", *n, distinct.len())?;
    }
    for (s, n) in &r.triggers_per_scenario {
        let distinct: BTreeSet<_> = m.links.iter().filter(|l| l.scenario == *s).map(|l| l.trigger).collect();
        same("triggers_per_scenario", *n, distinct.len())?;
    }
    let max_chain = m
        .links
        .iter()
        .map(|a| m.links.iter().filter(|b| b.trigger == a.trigger && b.scenario == a.scenario).count())
        .max()
        .unwrap_or(0);
    same("max_insufficiencies_per_chain", r.max_insufficiencies_per_chain, max_chain)
}
