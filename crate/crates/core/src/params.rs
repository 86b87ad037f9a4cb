//! Simulation constants. Everything here can be overridden per scene.

use crate::error::{Error, Result};

/// Tunable constants for detection, tracking, smoothing, attractors and the
/// render loop. Angles are radians and angular rates radians per second
/// (per √s for the heading random walk).
#[derive(Debug, Clone, PartialEq)]
pub struct SimParams {
    pub fov: f64,
    pub r_min: f64,
    /// Detection range for anchors that do not set their own `max_range`.
    pub r_max: f64,
    pub facing_limit: f64,
    pub p_base: f64,
    pub lighting: f64,
    pub traffic: f64,
    pub sigma_range: f64,
    pub sigma_bearing: f64,
    pub sigma_psi: f64,
    pub drift_pos: f64,
    pub drift_heading: f64,
    pub tau_track: f64,
    pub tau_blend: f64,
    pub slew_pos: f64,
    pub slew_heading: f64,
    pub t_lost: f64,
    pub t_idle: f64,
    pub r_adv: f64,
    pub cooldown: f64,
    pub sample_rate: u32,
    pub block: usize,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            fov: 60f64.to_radians(),
            r_min: 0.3,
            r_max: 8.0,
            facing_limit: 75f64.to_radians(),
            p_base: 0.95,
            lighting: 1.0,
            traffic: 0.0,
            sigma_range: 0.03,
            sigma_bearing: 1f64.to_radians(),
            sigma_psi: 2f64.to_radians(),
            drift_pos: 0.05,
            drift_heading: 0.5f64.to_radians(),
            tau_track: 0.1,
            tau_blend: 0.7,
            slew_pos: 2.5,
            slew_heading: std::f64::consts::PI,
            t_lost: 10.0,
            t_idle: 20.0,
            r_adv: 15.0,
            cooldown: 60.0,
            sample_rate: 48_000,
            block: 1024,
        }
    }
}

impl SimParams {
    /// Control tick length in seconds.
    pub fn block_duration(&self) -> f64 {
        self.block as f64 / f64::from(self.sample_rate)
    }

    /// Probability that a geometrically visible anchor is detected.
    pub fn detection_probability(&self) -> f64 {
        self.p_base * self.lighting * (1.0 - self.traffic)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("fov_deg", self.fov),
            ("r_min", self.r_min),
            ("r_max", self.r_max),
            ("facing_limit_deg", self.facing_limit),
            ("tau_track", self.tau_track),
            ("tau_blend", self.tau_blend),
            ("slew_pos", self.slew_pos),
            ("slew_heading_deg", self.slew_heading),
            ("t_lost", self.t_lost),
            ("t_idle", self.t_idle),
            ("r_adv", self.r_adv),
            ("cooldown", self.cooldown),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::validation(
                    format!("params.{name}"),
                    "must be positive",
                ));
            }
        }
        let non_negative = [
            ("sigma_range", self.sigma_range),
            ("sigma_bearing_deg", self.sigma_bearing),
            ("sigma_psi_deg", self.sigma_psi),
            ("drift_pos", self.drift_pos),
            ("drift_heading_deg", self.drift_heading),
        ];
        for (name, v) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::validation(
                    format!("params.{name}"),
                    "must be non-negative",
                ));
            }
        }
        for (name, v) in [
            ("p_base", self.p_base),
            ("lighting", self.lighting),
            ("traffic", self.traffic),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::validation(
                    format!("params.{name}"),
                    "must be in [0, 1]",
                ));
            }
        }
        if self.r_min >= self.r_max {
            return Err(Error::validation("params.r_min", "must be below r_max"));
        }
        if self.sample_rate == 0 {
            return Err(Error::validation("params.sample_rate", "must be positive"));
        }
        if self.block == 0 {
            return Err(Error::validation("params.block", "must be positive"));
        }
        Ok(())
    }
}
