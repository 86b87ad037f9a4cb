use crate::geometry::{los_blocked, wrap_angle, Pose2D, Vec2};
use crate::params::SimParams;
use crate::rng::{bernoulli, gauss, SimRng};
use crate::scene::{AnchorFeature, Scene};

/// One simulated landmark observation, relative to the camera axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub anchor_id: String,
    pub range: f64,
    /// Direction of the anchor relative to the camera axis.
    pub bearing: f64,
    /// Facing of the anchor relative to the camera axis.
    pub rel_orientation: f64,
    pub t: f64,
}

/// Noise-free `(range, bearing, rel_orientation)` of `anchor` seen from `pose`.
pub fn forward_model(pose: &Pose2D, anchor: &AnchorFeature) -> (f64, f64, f64) {
    let p = pose.position();
    let range = p.dist(anchor.position);
    let alpha = p.bearing_to(anchor.position);
    (
        range,
        wrap_angle(alpha - pose.heading),
        wrap_angle(anchor.facing - pose.heading),
    )
}

/// Geometric gates: field of view, range window, feature facing the camera,
/// and an unobstructed sight line.
pub fn visible(pose: &Pose2D, anchor: &AnchorFeature, scene: &Scene, params: &SimParams) -> bool {
    let p = pose.position();
    let range = p.dist(anchor.position);
    if range < params.r_min || range > anchor.max_range {
        return false;
    }
    let alpha = p.bearing_to(anchor.position);
    if wrap_angle(alpha - pose.heading).abs() > params.fov / 2.0 {
        return false;
    }
    if wrap_angle(anchor.facing - (alpha + std::f64::consts::PI)).abs() > params.facing_limit {
        return false;
    }
    !los_blocked(p, anchor.position, &scene.occluders)
}

/// Runs the detection channel for one tick.
///
/// Anchors are visited in id order. Each visible anchor costs one Bernoulli
/// draw and, if admitted, three Gaussian draws (range, bearing, orientation).
pub fn simulate_detections(
    true_pose: &Pose2D,
    scene: &Scene,
    params: &SimParams,
    rng: &mut SimRng,
    t: f64,
) -> Vec<Detection> {
    let mut anchors: Vec<&AnchorFeature> = scene.anchors.iter().collect();
    anchors.sort_by(|a, b| a.id.cmp(&b.id));

    let p = params.detection_probability();
    let mut out = Vec::new();
    for anchor in anchors {
        if !visible(true_pose, anchor, scene, params) {
            continue;
        }
        if !bernoulli(rng, p) {
            continue;
        }
        let (r, beta, psi) = forward_model(true_pose, anchor);
        let range = (r * (1.0 + gauss(rng, params.sigma_range))).max(1e-6);
        let bearing = wrap_angle(beta + gauss(rng, params.sigma_bearing));
        let rel_orientation = wrap_angle(psi + gauss(rng, params.sigma_psi));
        out.push(Detection {
            anchor_id: anchor.id.clone(),
            range,
            bearing,
            rel_orientation,
            t,
        });
    }
    out
}

/// Recovers the listener pose from one detection of a known anchor.
pub fn invert_detection(d: &Detection, anchor: &AnchorFeature) -> Pose2D {
    let heading = wrap_angle(anchor.facing - d.rel_orientation);
    let alpha = wrap_angle(heading + d.bearing);
    let p = anchor.position - Vec2::from_angle(alpha) * d.range;
    Pose2D::new(p.x, p.y, heading)
}
