use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// The entity kinds of an analysis model, in canonical registry order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityKind {
    Loss,
    Hazard,
    Behavior,
    Component,
    Action,
    Feedback,
    Uca,
    Factor,
    Context,
    Scenario,
    Trigger,
    Insufficiency,
}

impl EntityKind {
    pub const ALL: [EntityKind; 12] = [
        EntityKind::Loss,
        EntityKind::Hazard,
        EntityKind::Behavior,
        EntityKind::Component,
        EntityKind::Action,
        EntityKind::Feedback,
        EntityKind::Uca,
        EntityKind::Factor,
        EntityKind::Context,
        EntityKind::Scenario,
        EntityKind::Trigger,
        EntityKind::Insufficiency,
    ];

    pub fn prefix(self) -> &'static str {
        match self {
            EntityKind::Loss => "L",
            EntityKind::Hazard => "H",
            EntityKind::Behavior => "HB",
            EntityKind::Component => "C",
            EntityKind::Action => "CA",
            EntityKind::Feedback => "FB",
            EntityKind::Uca => "UCA",
            EntityKind::Factor => "CF",
            EntityKind::Context => "CTX",
            EntityKind::Scenario => "LS",
            EntityKind::Trigger => "TC",
            EntityKind::Insufficiency => "FI",
        }
    }

    pub fn from_prefix(prefix: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.prefix() == prefix)
    }

    /// Plural name used in reports and JSON registries.
    pub fn plural(self) -> &'static str {
        match self {
            EntityKind::Loss => "losses",
            EntityKind::Hazard => "hazards",
            EntityKind::Behavior => "behaviors",
            EntityKind::Component => "components",
            EntityKind::Action => "actions",
            EntityKind::Feedback => "feedback",
            EntityKind::Uca => "ucas",
            EntityKind::Factor => "factors",
            EntityKind::Context => "contexts",
            EntityKind::Scenario => "scenarios",
            EntityKind::Trigger => "triggers",
            EntityKind::Insufficiency => "insufficiencies",
        }
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            EntityKind::Loss => "loss",
            EntityKind::Hazard => "hazard",
            EntityKind::Behavior => "hazardous behavior",
            EntityKind::Component => "component",
            EntityKind::Action => "control action",
            EntityKind::Feedback => "feedback link",
            EntityKind::Uca => "unsafe control action",
            EntityKind::Factor => "causal factor",
            EntityKind::Context => "scenario context",
            EntityKind::Scenario => "loss scenario",
            EntityKind::Trigger => "triggering condition",
            EntityKind::Insufficiency => "functional insufficiency",
        };
        f.write_str(name)
    }
}

/// Stable identifier of the form `<PREFIX>-<ordinal>`, e.g. `UCA-3`.
///
/// Ordering is by kind, then by ordinal, so registries iterate `UCA-2`
/// before `UCA-10`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntityId {
    kind: EntityKind,
    ordinal: u32,
}

impl EntityId {
    /// Panics if `ordinal` is zero.
    pub fn new(kind: EntityKind, ordinal: u32) -> Self {
        assert!(ordinal > 0, "entity ordinals are positive");
        Self { kind, ordinal }
    }

    pub fn kind(self) -> EntityKind {
        self.kind
    }

    pub fn ordinal(self) -> u32 {
        self.ordinal
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.kind.prefix(), self.ordinal)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdError {
    #[error("malformed identifier \"{0}\" (expected PREFIX-N)")]
    Malformed(String),
    #[error("unknown identifier prefix in \"{0}\"")]
    UnknownPrefix(String),
    #[error("identifier ordinal must be positive in \"{0}\"")]
    ZeroOrdinal(String),
}

impl FromStr for EntityId {
    type Err = IdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (prefix, digits) = s
            .rsplit_once('-')
            .ok_or_else(|| IdError::Malformed(s.to_owned()))?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') && digits.len() > 1 {
            return Err(IdError::Malformed(s.to_owned()));
        }
        let kind = EntityKind::from_prefix(prefix).ok_or_else(|| IdError::UnknownPrefix(s.to_owned()))?;
        let ordinal: u32 = digits.parse().map_err(|_| IdError::Malformed(s.to_owned()))?;
        if ordinal == 0 {
            return Err(IdError::ZeroOrdinal(s.to_owned()));
        }
        Ok(Self { kind, ordinal })
    }
}

impl Serialize for EntityId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EntityId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
