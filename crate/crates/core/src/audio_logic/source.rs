use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::Vec2;

/// A clip file, or a section of one. Times are seconds into the file.
#[derive(Debug, Clone, PartialEq)]
pub struct ClipRef {
    pub file: String,
    pub start: f64,
    pub end: Option<f64>,
}

impl ClipRef {
    pub fn new(file: impl Into<String>) -> Self {
        ClipRef {
            file: file.into(),
            start: 0.0,
            end: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlaybackMode {
    /// Restarts from the top on every visit and loops while inside.
    Loop,
    /// Plays once from the top per visit; completes at the clip end.
    OneShot,
    /// Pauses on exit and continues on the next visit; completes at the clip end.
    Resume,
}

impl PlaybackMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PlaybackMode::Loop => "LOOP",
            PlaybackMode::OneShot => "ONE_SHOT",
            PlaybackMode::Resume => "RESUME",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "LOOP" => Some(PlaybackMode::Loop),
            "ONE_SHOT" => Some(PlaybackMode::OneShot),
            "RESUME" => Some(PlaybackMode::Resume),
            _ => None,
        }
    }
}

/// Narrative role of a source's audio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Tag {
    Thematic,
    Functional,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Thematic => "THEMATIC",
            Tag::Functional => "FUNCTIONAL",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "THEMATIC" => Some(Tag::Thematic),
            "FUNCTIONAL" => Some(Tag::Functional),
            _ => None,
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Coordinate a [`ContentSelector`] switches on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    /// Listener distance from the source, meters.
    Distance,
    /// World-frame angle from the source to the listener, radians.
    OrbitAngle,
}

impl Dimension {
    pub fn as_str(self) -> &'static str {
        match self {
            Dimension::Distance => "DISTANCE",
            Dimension::OrbitAngle => "ORBIT_ANGLE",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "DISTANCE" => Some(Dimension::Distance),
            "ORBIT_ANGLE" => Some(Dimension::OrbitAngle),
            _ => None,
        }
    }

    pub fn default_crossfade(self) -> f64 {
        match self {
            Dimension::Distance => 0.4,
            Dimension::OrbitAngle => 10f64.to_radians(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Interstitial {
    pub clip: ClipRef,
    pub gain: f64,
}

/// Band-wise clip selection, the "tuning dial" of a source.
///
/// `boundaries` holds every band edge including the two outer ones, so band
/// `i` spans `boundaries[i]..boundaries[i + 1]` and plays `clips[i]`. For
/// [`Dimension::OrbitAngle`] a selector whose edges span a full turn is
/// cyclic: the last band crossfades back into the first.
#[derive(Debug, Clone, PartialEq)]
pub struct ContentSelector {
    pub dimension: Dimension,
    pub boundaries: Vec<f64>,
    pub clips: Vec<ClipRef>,
    pub crossfade_width: f64,
    pub interstitial: Option<Interstitial>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Content {
    Clip(ClipRef),
    Selector(ContentSelector),
}

impl Content {
    /// Every clip the content can play, in band order.
    pub fn clips(&self) -> Vec<&ClipRef> {
        match self {
            Content::Clip(c) => vec![c],
            Content::Selector(s) => {
                let mut v: Vec<&ClipRef> = s.clips.iter().collect();
                if let Some(i) = &s.interstitial {
                    v.push(&i.clip);
                }
                v
            }
        }
    }
}

/// A virtual sound source pinned to a physical location.
#[derive(Debug, Clone, PartialEq)]
pub struct SoundSource {
    pub id: String,
    pub position: Vec2,
    pub d_ref: f64,
    pub d_cull: f64,
    pub gain: f64,
    pub r_on: f64,
    pub r_off: f64,
    pub mode: PlaybackMode,
    pub content: Content,
    pub attractor_clip: Option<ClipRef>,
    pub priority: i64,
    pub tag: Tag,
}

impl SoundSource {
    /// A looping single-clip source with default radii.
    pub fn new(id: impl Into<String>, position: Vec2, clip: ClipRef) -> Self {
        SoundSource {
            id: id.into(),
            position,
            d_ref: 1.0,
            d_cull: 20.0,
            gain: 1.0,
            r_on: 2.0,
            r_off: 3.0,
            mode: PlaybackMode::Loop,
            content: Content::Clip(clip),
            attractor_clip: None,
            priority: 0,
            tag: Tag::Thematic,
        }
    }
}
