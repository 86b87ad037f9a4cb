//! Scripted listener trajectories (the locative model used offline).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{wrap_angle, Pose2D};
use crate::scene::deg_for_file;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Keyframe {
    pub t: f64,
    pub pose: Pose2D,
}

/// Keyframed listener path with strictly increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkScript {
    keyframes: Vec<Keyframe>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WalkDoc {
    keyframes: Vec<KeyframeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KeyframeDoc {
    t: f64,
    x: f64,
    y: f64,
    /// Heading in degrees.
    h: f64,
}

impl WalkScript {
    pub fn new(keyframes: Vec<Keyframe>) -> Result<Self> {
        if keyframes.is_empty() {
            return Err(Error::validation("keyframes", "need at least one keyframe"));
        }
        for (i, k) in keyframes.iter().enumerate() {
            if !(k.t >= 0.0 && k.t.is_finite())
                || !k.pose.position().is_finite()
                || !k.pose.heading.is_finite()
            {
                return Err(Error::validation(
                    format!("keyframes[{i}]"),
                    "values must be finite with t >= 0",
                ));
            }
            if i > 0 && k.t <= keyframes[i - 1].t {
                return Err(Error::validation(
                    format!("keyframes[{i}].t"),
                    "times must be strictly increasing",
                ));
            }
        }
        Ok(WalkScript { keyframes })
    }

    /// Convenience constructor from `(t, x, y, heading_radians)` tuples.
    pub fn from_tuples(points: &[(f64, f64, f64, f64)]) -> Result<Self> {
        WalkScript::new(
            points
                .iter()
                .map(|&(t, x, y, h)| Keyframe {
                    t,
                    pose: Pose2D::new(x, y, h),
                })
                .collect(),
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        WalkScript::from_json(&bytes, &path.display().to_string())
    }

    pub fn from_json(bytes: &[u8], label: &str) -> Result<Self> {
        let doc: WalkDoc = serde_json::from_slice(bytes).map_err(|e| Error::Parse {
            file: label.to_string(),
            msg: e.to_string(),
        })?;
        WalkScript::new(
            doc.keyframes
                .into_iter()
                .map(|k| Keyframe {
                    t: k.t,
                    pose: Pose2D::new(k.x, k.y, k.h.to_radians()),
                })
                .collect(),
        )
    }

    pub fn to_json(&self) -> String {
        let doc = WalkDoc {
            keyframes: self
                .keyframes
                .iter()
                .map(|k| KeyframeDoc {
                    t: k.t,
                    x: k.pose.x,
                    y: k.pose.y,
                    h: deg_for_file(k.pose.heading),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("walk serializes")
    }

    pub fn keyframes(&self) -> &[Keyframe] {
        &self.keyframes
    }

    pub fn start_time(&self) -> f64 {
        self.keyframes[0].t
    }

    pub fn end_time(&self) -> f64 {
        self.keyframes[self.keyframes.len() - 1].t
    }

    /// Listener pose at time `t`.
    ///
    /// Position is linear between the bracketing keyframes; heading turns the
    /// short way round (an exact half-turn goes counterclockwise). Outside the
    /// script the nearest end keyframe holds.
    pub fn pose_at(&self, t: f64) -> Pose2D {
        let ks = &self.keyframes;
        if t <= ks[0].t {
            return ks[0].pose;
        }
        let last = ks[ks.len() - 1];
        if t >= last.t {
            return last.pose;
        }
        // first keyframe strictly after t
        let i = ks.partition_point(|k| k.t <= t);
        let (a, b) = (ks[i - 1], ks[i]);
        if t == a.t {
            return a.pose;
        }
        let u = (t - a.t) / (b.t - a.t);
        let dh = wrap_angle(b.pose.heading - a.pose.heading);
        Pose2D::new(
            a.pose.x + (b.pose.x - a.pose.x) * u,
            a.pose.y + (b.pose.y - a.pose.y) * u,
            a.pose.heading + dh * u,
        )
    }
}
