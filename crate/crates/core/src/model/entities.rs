use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::EntityId;

/// Shared by every registered entity type.
pub trait Entity {
    fn id(&self) -> EntityId;
}

macro_rules! impl_entity {
    ($($ty:ty),* $(,)?) => {
        $(impl Entity for $ty {
            fn id(&self) -> EntityId {
                self.id
            }
        })*
    };
}

/// Declares a closed vocabulary with its snake_case wire token.
macro_rules! vocabulary {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $token:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $token)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $token),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($token => Ok($name::$variant),)+
                    other => Err(format!(
                        "\"{}\" is not one of {}",
                        other,
                        [$($token),+].join(", ")
                    )),
                }
            }
        }
    };
}

vocabulary! {
    ComponentKind {
        Controller => "controller",
        HumanController => "human_controller",
        Sensor => "sensor",
        Actuator => "actuator",
        Process => "process",
    }
}

impl ComponentKind {
    pub fn is_controller(self) -> bool {
        matches!(self, ComponentKind::Controller | ComponentKind::HumanController)
    }
}

vocabulary! {
    LinkKind {
        Feedback => "feedback",
        Other => "other",
    }
}

vocabulary! {
    /// The four deviation categories applied to a control action.
    GuideWord {
        NotProvided => "not_provided",
        ProvidedUnsafe => "provided_unsafe",
        WrongTiming => "wrong_timing",
        WrongDuration => "wrong_duration",
    }
}

impl GuideWord {
    /// German catalog label.
    pub fn label(self) -> &'static str {
        match self {
            GuideWord::NotProvided => "Keine Bereitstellung",
            GuideWord::ProvidedUnsafe => "Falsche Bereitstellung",
            GuideWord::WrongTiming => "Zu frühe oder zu späte Bereitstellung",
            GuideWord::WrongDuration => "Zu lange oder zu kurze Bereitstellung",
        }
    }

    /// English alias used in exports.
    pub fn alias(self) -> &'static str {
        match self {
            GuideWord::NotProvided => "Not provided",
            GuideWord::ProvidedUnsafe => "Provided incorrectly",
            GuideWord::WrongTiming => "Too early or too late",
            GuideWord::WrongDuration => "Too long or too short",
        }
    }
}

vocabulary! {
    UcaStatus {
        Candidate => "candidate",
        Retained => "retained",
        Excluded => "excluded",
    }
}

vocabulary! {
    FactorCategory {
        Controller => "controller",
        FeedbackPath => "feedback_path",
        ControlPath => "control_path",
        ProcessInput => "process_input",
    }
}

vocabulary! {
    DefaultRelevance {
        SotifCandidate => "sotif_candidate",
        FunctionalSafety => "functional_safety",
        NeedsReview => "needs_review",
    }
}

vocabulary! {
    Relevance {
        Sotif => "sotif",
        FunctionalSafety => "functional_safety",
        NeedsReview => "needs_review",
    }
}

impl From<DefaultRelevance> for Relevance {
    fn from(value: DefaultRelevance) -> Self {
        match value {
            DefaultRelevance::SotifCandidate => Relevance::Sotif,
            DefaultRelevance::FunctionalSafety => Relevance::FunctionalSafety,
            DefaultRelevance::NeedsReview => Relevance::NeedsReview,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Loss {
    pub id: EntityId,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hazard {
    pub id: EntityId,
    pub description: String,
    pub losses: BTreeSet<EntityId>,
}

/// Concrete, externally observable vehicle action entailing hazards.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HazardousBehavior {
    pub id: EntityId,
    pub description: String,
    pub hazards: BTreeSet<EntityId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub id: EntityId,
    pub name: String,
    pub kind: ComponentKind,
    /// Marks the process block that stands for the vehicle in its
    /// environment. A model with a single process designates it implicitly.
    pub environment: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlAction {
    pub id: EntityId,
    pub name: String,
    pub source: EntityId,
    pub target: EntityId,
    /// Narrows UCA enumeration to these behaviors; `None` means all.
    pub behaviors: Option<BTreeSet<EntityId>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedbackLink {
    pub id: EntityId,
    pub name: String,
    pub source: EntityId,
    pub target: EntityId,
    pub kind: LinkKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnsafeControlAction {
    pub id: EntityId,
    pub action: EntityId,
    pub guide_word: GuideWord,
    pub behavior: EntityId,
    pub narrative: Option<String>,
    pub status: UcaStatus,
    pub exclusion_reason: Option<String>,
}

impl UnsafeControlAction {
    /// Reconciliation key between generated candidates and authored UCAs.
    pub fn key(&self) -> (EntityId, GuideWord, EntityId) {
        (self.action, self.guide_word, self.behavior)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausalFactor {
    pub id: EntityId,
    pub label: String,
    pub description: Option<String>,
    pub category: FactorCategory,
    pub locus_kinds: BTreeSet<ComponentKind>,
    pub default_relevance: DefaultRelevance,
}

impl CausalFactor {
    pub fn display_text(&self) -> &str {
        self.description.as_deref().unwrap_or(&self.label)
    }
}

/// Case distinction applied when expanding scenarios for some behaviors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioContext {
    pub id: EntityId,
    pub description: String,
    pub applicable_behaviors: BTreeSet<EntityId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LossScenario {
    pub id: EntityId,
    pub uca: EntityId,
    pub factor: EntityId,
    pub locus: EntityId,
    pub context: Option<EntityId>,
    pub narrative: Option<String>,
    /// Authored relevance override; `None` defers to the factor default.
    pub relevance: Option<Relevance>,
}

impl LossScenario {
    /// Reconciliation key between generated skeletons and authored scenarios.
    pub fn key(&self) -> (EntityId, EntityId, EntityId, Option<EntityId>) {
        (self.uca, self.factor, self.locus, self.context)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriggeringCondition {
    pub id: EntityId,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalInsufficiency {
    pub id: EntityId,
    pub description: String,
    pub locus: EntityId,
}

/// Bridges a triggering condition to a loss scenario through exactly one
/// functional insufficiency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TriggerLink {
    pub trigger: EntityId,
    pub scenario: EntityId,
    pub insufficiency: EntityId,
}

impl_entity!(
    Loss,
    Hazard,
    HazardousBehavior,
    Component,
    ControlAction,
    FeedbackLink,
    UnsafeControlAction,
    CausalFactor,
    ScenarioContext,
    LossScenario,
    TriggeringCondition,
    FunctionalInsufficiency,
);
