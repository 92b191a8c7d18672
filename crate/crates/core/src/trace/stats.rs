use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::classify::filter_sotif;
use crate::generate::Taxonomy;
use crate::model::{AnalysisModel, EntityId, EntityKind, UcaStatus};

/// Aggregate counts over a model.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StatsReport {
    /// Registry size for every entity kind.
    pub counts: BTreeMap<EntityKind, usize>,
    pub links: usize,
    /// UCAs judged unsafe: retained plus excluded.
    pub ucas_identified: usize,
    /// Retained UCAs, the ones carried into scenario analysis.
    pub ucas_in_scope: usize,
    pub ucas_candidate: usize,
    pub scenarios: usize,
    pub sotif_retained: usize,
    pub sotif_excluded: usize,
    /// Distinct linked scenarios per trigger; every trigger appears.
    pub scenarios_per_trigger: BTreeMap<EntityId, usize>,
    /// Distinct linked triggers per scenario; every scenario appears.
    pub triggers_per_scenario: BTreeMap<EntityId, usize>,
    /// Link rows per trigger and per scenario. Each sums to `links`.
    pub links_per_trigger: BTreeMap<EntityId, usize>,
    pub links_per_scenario: BTreeMap<EntityId, usize>,
    /// Largest number of insufficiencies joining one (trigger, scenario) pair.
    pub max_insufficiencies_per_chain: usize,
}

pub fn stats(model: &AnalysisModel) -> StatsReport {
    let mut r = StatsReport {
        counts: EntityKind::ALL.iter().map(|&k| (k, model.count(k))).collect(),
        links: model.links.len(),
        scenarios: model.scenarios.len(),
        ..StatsReport::default()
    };
    for uca in model.ucas.values() {
        match uca.status {
            UcaStatus::Retained => {
                r.ucas_in_scope += 1;
                r.ucas_identified += 1;
            }
            UcaStatus::Excluded => r.ucas_identified += 1,
            UcaStatus::Candidate => r.ucas_candidate += 1,
        }
    }
    let (retained, excluded) = filter_sotif(model, &Taxonomy::from_model(model, false));
    r.sotif_retained = retained.len();
    r.sotif_excluded = excluded.len();

    let mut per_trigger: BTreeMap<EntityId, BTreeSet<EntityId>> =
        model.triggers.keys().map(|&t| (t, BTreeSet::new())).collect();
    let mut per_scenario: BTreeMap<EntityId, BTreeSet<EntityId>> =
        model.scenarios.keys().map(|&s| (s, BTreeSet::new())).collect();
    r.links_per_trigger = model.triggers.keys().map(|&t| (t, 0)).collect();
    r.links_per_scenario = model.scenarios.keys().map(|&s| (s, 0)).collect();
    let mut chains: BTreeMap<(EntityId, EntityId), usize> = BTreeMap::new();
    for link in &model.links {
        per_trigger.entry(link.trigger).or_default().insert(link.scenario);
        per_scenario.entry(link.scenario).or_default().insert(link.trigger);
        *r.links_per_trigger.entry(link.trigger).or_default() += 1;
        *r.links_per_scenario.entry(link.scenario).or_default() += 1;
        *chains.entry((link.trigger, link.scenario)).or_default() += 1;
    }
    r.scenarios_per_trigger = per_trigger.into_iter().map(|(k, v)| (k, v.len())).collect();
    r.triggers_per_scenario = per_scenario.into_iter().map(|(k, v)| (k, v.len())).collect();
    r.max_insufficiencies_per_chain = chains.values().copied().max().unwrap_or(0);
    r
}

impl StatsReport {
    pub fn count(&self, kind: EntityKind) -> usize {
        self.counts.get(&kind).copied().unwrap_or(0)
    }

    pub fn max_scenarios_per_trigger(&self) -> usize {
        self.scenarios_per_trigger.values().copied().max().unwrap_or(0)
    }

    pub fn max_triggers_per_scenario(&self) -> usize {
        self.triggers_per_scenario.values().copied().max().unwrap_or(0)
    }

    /// `key: value` lines, then one line per trigger.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for kind in EntityKind::ALL {
            let _ = writeln!(out, "{}: {}", kind.plural(), self.count(kind));
        }
        let rows = [
            ("links", self.links),
            ("ucas_identified", self.ucas_identified),
            ("ucas_in_scope", self.ucas_in_scope),
            ("ucas_candidate", self.ucas_candidate),
            ("sotif_retained", self.sotif_retained),
            ("sotif_excluded", self.sotif_excluded),
            ("max_scenarios_per_trigger", self.max_scenarios_per_trigger()),
            ("max_triggers_per_scenario", self.max_triggers_per_scenario()),
            ("max_insufficiencies_per_chain", self.max_insufficiencies_per_chain),
        ];
        for (key, value) in rows {
            let _ = writeln!(out, "{key}: {value}");
        }
        if !self.scenarios_per_trigger.is_empty() {
            out.push_str("\ntrigger scenarios links\n");
            for (t, n) in &self.scenarios_per_trigger {
                let _ = writeln!(out, "{t} {n} {}", self.links_per_trigger.get(t).copied().unwrap_or(0));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_model_is_all_zero() {
        let r = stats(&AnalysisModel::new());
        assert!(r.counts.values().all(|&n| n == 0));
        assert_eq!(r.counts.len(), 12);
        assert_eq!(r.links + r.scenarios + r.sotif_retained + r.sotif_excluded, 0);
        assert_eq!(r.max_insufficiencies_per_chain, 0);
        assert!(r.render().contains("scenarios: 0\n"));
    }
}
