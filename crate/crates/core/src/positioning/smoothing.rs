use crate::geometry::{wrap_angle, Pose2D};
use crate::params::SimParams;

const ENTER_BLEND_POS: f64 = 0.5;
const ENTER_BLEND_HEADING_DEG: f64 = 10.0;
const EXIT_BLEND_POS: f64 = 0.05;
const EXIT_BLEND_HEADING_DEG: f64 = 1.0;

/// Exponential follower from the estimated pose to the pose the listener
/// hears, with slew limits.
///
/// A large innovation (a tracking handoff) latches the slow `tau_blend`
/// time constant until the rendered pose has nearly converged; otherwise
/// `tau_track` applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseSmoother {
    rendered: Pose2D,
    blending: bool,
}

impl PoseSmoother {
    pub fn new(initial: Pose2D) -> Self {
        PoseSmoother {
            rendered: initial,
            blending: false,
        }
    }

    pub fn rendered(&self) -> Pose2D {
        self.rendered
    }

    pub fn is_blending(&self) -> bool {
        self.blending
    }

    /// Moves the rendered pose one tick of `dt` seconds towards `target`.
    pub fn step(&mut self, target: &Pose2D, dt: f64, params: &SimParams) -> Pose2D {
        let dp = target.position() - self.rendered.position();
        let dh = wrap_angle(target.heading - self.rendered.heading);
        let err_pos = dp.norm();
        let err_h = dh.abs();

        if err_pos > ENTER_BLEND_POS || err_h > ENTER_BLEND_HEADING_DEG.to_radians() {
            self.blending = true;
        } else if err_pos < EXIT_BLEND_POS && err_h < EXIT_BLEND_HEADING_DEG.to_radians() {
            self.blending = false;
        }
        let tau = if self.blending {
            params.tau_blend
        } else {
            params.tau_track
        };
        let k = 1.0 - (-dt / tau).exp();

        let mut move_pos = dp * k;
        let max_pos = params.slew_pos * dt;
        let n = move_pos.norm();
        if n > max_pos {
            move_pos = move_pos * (max_pos / n);
        }
        let max_h = params.slew_heading * dt;
        let move_h = (dh * k).clamp(-max_h, max_h);

        let p = self.rendered.position() + move_pos;
        self.rendered = Pose2D::new(p.x, p.y, self.rendered.heading + move_h);
        self.rendered
    }

    /// Jumps to `pose` without smoothing.
    pub fn reset(&mut self, pose: Pose2D) {
        self.rendered = pose;
        self.blending = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn fixed_point() {
        let p = Pose2D::new(1.0, -2.0, 0.4);
        let mut s = PoseSmoother::new(p);
        assert_eq!(s.step(&p, 0.02, &SimParams::default()), p);
    }

    #[test]
    fn one_meter_step_decays_like_exponential() {
        let params = SimParams {
            tau_blend: 0.5,
            ..SimParams::default()
        };
        let dt: f64 = 1024.0 / 48000.0;
        let mut s = PoseSmoother::new(Pose2D::new(0.0, 0.0, 0.0));
        let target = Pose2D::new(1.0, 0.0, 0.0);
        let ticks = (0.5 / dt).round() as usize;
        for _ in 0..ticks {
            s.step(&target, dt, &params);
        }
        assert!(s.is_blending());
        let residual = 1.0 - s.rendered().x;
        // Analytic: e^(-t/τ) with t the elapsed tick time.
        let analytic = (-(ticks as f64) * dt / 0.5).exp();
        assert_abs_diff_eq!(residual, analytic, epsilon = 1e-9);
        assert!((residual / (-1f64).exp() - 1.0).abs() < 0.02, "{residual}");
    }

    #[test]
    fn large_step_is_slew_limited() {
        let params = SimParams::default();
        let mut s = PoseSmoother::new(Pose2D::new(0.0, 0.0, 0.0));
        let after = s.step(&Pose2D::new(10.0, 0.0, 0.0), 0.1, &params);
        assert!(after.x <= 0.25 + 1e-12, "{}", after.x);
        assert_abs_diff_eq!(after.x, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn heading_moves_short_way_and_is_slew_limited() {
        let params = SimParams::default();
        let mut s = PoseSmoother::new(Pose2D::new(0.0, 0.0, 3.0));
        let after = s.step(&Pose2D::new(0.0, 0.0, -3.0), 0.01, &params);
        // short arc from 3.0 to -3.0 goes up through π
        assert!(after.heading > 3.0 || after.heading < -3.0);
        let moved = wrap_angle(after.heading - 3.0).abs();
        assert!(moved <= params.slew_heading * 0.01 + 1e-12);
    }

    #[test]
    fn blend_latch_has_hysteresis() {
        let params = SimParams::default();
        let mut s = PoseSmoother::new(Pose2D::new(0.0, 0.0, 0.0));
        s.step(&Pose2D::new(0.6, 0.0, 0.0), 0.02, &params);
        assert!(s.is_blending());
        // innovation now ~0.58 m, then shrinks below 0.5 but stays latched
        let target = Pose2D::new(0.6, 0.0, 0.0);
        let mut saw_mid_band = false;
        while s.is_blending() {
            let err = 0.6 - s.rendered().x;
            if err < 0.5 && err > 0.05 {
                saw_mid_band = true;
            }
            s.step(&target, 0.02, &params);
        }
        assert!(saw_mid_band);
        assert!(0.6 - s.rendered().x < 0.05);
    }
}
