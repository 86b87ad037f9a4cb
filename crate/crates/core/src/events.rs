//! Engagement events, the unit of the JSONL run log.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::audio_logic::Tag;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    ZoneEnter,
    ZoneExit,
    ClipStart,
    ClipEnd,
    AttractorStart,
    ModeChange,
    /// Listener pose sample, once per second and once at the end of a run.
    Pose,
}

impl EventKind {
    /// Kinds that always refer to a source.
    pub fn has_source(self) -> bool {
        !matches!(self, EventKind::ModeChange | EventKind::Pose)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngagementEvent {
    pub t: f64,
    pub kind: EventKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<Tag>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub payload: BTreeMap<String, Value>,
}

impl EngagementEvent {
    pub fn new(t: f64, kind: EventKind) -> Self {
        EngagementEvent {
            t,
            kind,
            source_id: None,
            tag: None,
            payload: BTreeMap::new(),
        }
    }

    pub fn for_source(t: f64, kind: EventKind, source_id: &str, tag: Tag) -> Self {
        EngagementEvent {
            source_id: Some(source_id.to_string()),
            tag: Some(tag),
            ..EngagementEvent::new(t, kind)
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.payload.insert(key.to_string(), value.into());
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("event serializes")
    }
}
