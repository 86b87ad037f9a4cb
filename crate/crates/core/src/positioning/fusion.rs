use super::{invert_detection, Detection, PoseEstimate, TrackingMode};
use crate::error::{Error, Result};
use crate::geometry::Pose2D;
use crate::scene::Scene;

/// Combines same-tick detections into one tracked estimate.
///
/// Each detection is inverted separately; positions are averaged with
/// weights 1/r̂² and headings with the same weights on the unit circle.
pub fn fuse_detections(ds: &[Detection], scene: &Scene) -> Result<PoseEstimate> {
    if ds.is_empty() {
        return Err(Error::NoDetections);
    }
    let (mut wsum, mut x, mut y, mut s, mut c) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut t = f64::NEG_INFINITY;
    for d in ds {
        let anchor = scene
            .anchor(&d.anchor_id)
            .ok_or_else(|| Error::UnknownAnchor(d.anchor_id.clone()))?;
        let pose = invert_detection(d, anchor);
        let w = 1.0 / (d.range * d.range);
        wsum += w;
        x += w * pose.x;
        y += w * pose.y;
        s += w * pose.heading.sin();
        c += w * pose.heading.cos();
        t = t.max(d.t);
    }
    Ok(PoseEstimate {
        pose: Pose2D::new(x / wsum, y / wsum, s.atan2(c)),
        confidence: 1.0 - (-wsum).exp(),
        mode: TrackingMode::Tracked,
        t,
        untracked_for: 0.0,
    })
}
