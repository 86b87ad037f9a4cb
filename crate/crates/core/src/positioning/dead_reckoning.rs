use super::{PoseEstimate, TrackingMode};
use crate::geometry::{Pose2D, Vec2};
use crate::params::SimParams;
use crate::rng::{gauss, SimRng};

/// Motion over one tick, world frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Odometry {
    pub delta_pos: Vec2,
    pub delta_heading: f64,
    pub dt: f64,
}

/// Advances an estimate on odometry alone.
///
/// Position noise per axis scales with distance travelled; heading noise is
/// a random walk in √dt. Confidence decays by exp(-dt/t_lost) and the mode
/// drops to LOST once untracked time exceeds `t_lost`. Draws two position
/// samples then one heading sample.
pub fn dead_reckon(
    prev: &PoseEstimate,
    odo: &Odometry,
    params: &SimParams,
    rng: &mut SimRng,
) -> PoseEstimate {
    let step = odo.delta_pos.norm();
    let pos_sigma = params.drift_pos * step;
    let nx = gauss(rng, pos_sigma);
    let ny = gauss(rng, pos_sigma);
    let nh = gauss(rng, params.drift_heading * odo.dt.max(0.0).sqrt());

    let pose = Pose2D::new(
        prev.pose.x + odo.delta_pos.x + nx,
        prev.pose.y + odo.delta_pos.y + ny,
        prev.pose.heading + odo.delta_heading + nh,
    );
    let untracked_for = match prev.mode {
        TrackingMode::Tracked => odo.dt,
        _ => prev.untracked_for + odo.dt,
    };
    PoseEstimate {
        pose,
        confidence: prev.confidence * (-odo.dt / params.t_lost).exp(),
        mode: if untracked_for > params.t_lost {
            TrackingMode::Lost
        } else {
            TrackingMode::Extended
        },
        t: prev.t + odo.dt,
        untracked_for,
    }
}
