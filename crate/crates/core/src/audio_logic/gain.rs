use super::SoundSource;
use crate::geometry::{wrap_angle, Pose2D, Vec2};

pub const OCCLUDED_GAIN: f64 = 0.5;

/// Distance law: unity inside `d_ref`, 1/d beyond it, and a 1 m linear fade
/// that reaches zero at `d_cull`.
pub fn source_gain(d: f64, src: &SoundSource) -> f64 {
    let rolloff = (src.d_ref / d.max(src.d_ref)).min(1.0);
    let fade = (src.d_cull - d).clamp(0.0, 1.0);
    src.gain * rolloff * fade
}

/// Direction of `src_pos` relative to the listener's nose, CCW positive
/// (positive is to the left).
pub fn source_azimuth(listener: &Pose2D, src_pos: Vec2) -> f64 {
    let p = listener.position();
    if p == src_pos {
        return 0.0;
    }
    wrap_angle(p.bearing_to(src_pos) - listener.heading)
}

/// `(gain multiplier, lowpass enabled)` for a source behind a wall.
pub fn occlusion_params(blocked: bool) -> (f64, bool) {
    if blocked {
        (OCCLUDED_GAIN, true)
    } else {
        (1.0, false)
    }
}
