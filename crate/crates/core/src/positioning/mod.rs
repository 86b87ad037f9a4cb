//! Simulated landmark positioning.
//!
//! The camera is modelled as a detection channel that reports range, bearing
//! and relative orientation of visible anchors. Detections are inverted into
//! listener poses and fused; without detections the estimate dead-reckons on
//! odometry and the rendered pose is smoothed across handoffs.

mod dead_reckoning;
mod detection;
mod fusion;
mod smoothing;

pub use dead_reckoning::{dead_reckon, Odometry};
pub use detection::{forward_model, invert_detection, simulate_detections, visible, Detection};
pub use fusion::fuse_detections;
pub use smoothing::PoseSmoother;

use crate::geometry::Pose2D;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrackingMode {
    /// At least one anchor was detected this tick.
    Tracked,
    /// Dead reckoning since the last detection.
    Extended,
    /// Dead reckoning for longer than `t_lost`.
    Lost,
}

impl TrackingMode {
    pub fn as_str(self) -> &'static str {
        match self {
            TrackingMode::Tracked => "TRACKED",
            TrackingMode::Extended => "EXTENDED",
            TrackingMode::Lost => "LOST",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "TRACKED" => Some(TrackingMode::Tracked),
            "EXTENDED" => Some(TrackingMode::Extended),
            "LOST" => Some(TrackingMode::Lost),
            _ => None,
        }
    }
}

/// Best current guess of the listener pose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseEstimate {
    pub pose: Pose2D,
    pub confidence: f64,
    pub mode: TrackingMode,
    pub t: f64,
    /// Continuous time spent without detections.
    pub untracked_for: f64,
}

impl PoseEstimate {
    /// Estimate at session start: a known pose but no detections yet.
    pub fn initial(pose: Pose2D, t: f64) -> Self {
        PoseEstimate {
            pose,
            confidence: 0.0,
            mode: TrackingMode::Extended,
            t,
            untracked_for: 0.0,
        }
    }
}
