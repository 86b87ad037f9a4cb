//! Per-source control logic evaluated once per block: how loud, from which
//! direction, whether the zone is active, which clip is "tuned in", whether
//! a wall muffles it, and which attractor to play.

mod attractor;
mod gain;
mod selector;
pub mod source;
mod zone;

pub use attractor::{arm_sequences, choose_attractor, AttractorContext};
pub use gain::{occlusion_params, source_azimuth, source_gain, OCCLUDED_GAIN};
pub use selector::{select_content, ClipSlot};
pub use source::{
    ClipRef, Content, ContentSelector, Dimension, Interstitial, PlaybackMode, SoundSource, Tag,
};
pub use zone::{update_zone, ZonePhase, ZoneState};
