//! Audio augmented reality engine: simulated landmark positioning, per-source
//! audio logic, block rendering to stereo, and engagement analytics.
//!
//! [`Engine`] runs the per-block pipeline shared by offline runs
//! ([`sim::run_simulation`]) and live sessions.

pub mod analytics;
pub mod audio_logic;
pub mod engine;
pub mod error;
pub mod events;
pub mod geometry;
pub mod params;
pub mod positioning;
pub mod renderer;
pub mod rng;
pub mod scene;
pub mod sim;
pub mod walk;

pub use analytics::{accumulate_report, parse_report, write_report, EngagementReport, SourceStats};
pub use audio_logic::{
    ClipRef, Content, ContentSelector, Dimension, PlaybackMode, SoundSource, Tag,
};
pub use engine::{Engine, EngineSnapshot, SourceStatus, Tick};
pub use error::{Error, Result};
pub use events::{EngagementEvent, EventKind};
pub use geometry::{wrap_angle, Occluder, Pose2D, Vec2};
pub use params::SimParams;
pub use positioning::{Detection, Odometry, PoseEstimate, TrackingMode};
pub use scene::{Ambient, AnchorFeature, Scene};
pub use sim::{run_simulation, RunConfig, RunSummary, Simulation};
pub use walk::{Keyframe, WalkScript};
