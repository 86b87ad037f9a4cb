#![allow(dead_code)]

use std::path::PathBuf;

use aar_core::{Scene, SimParams, WalkScript};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn scene(name: &str) -> Scene {
    Scene::load(fixtures().join(format!("{name}.json"))).expect("fixture scene loads")
}

pub fn walk(name: &str) -> WalkScript {
    WalkScript::load(fixtures().join("walks").join(format!("{name}.json")))
        .expect("fixture walk loads")
}

/// Zero measurement noise and drift, so the estimate equals the true pose.
pub fn noiseless(p: &mut SimParams) {
    p.sigma_range = 0.0;
    p.sigma_bearing = 0.0;
    p.sigma_psi = 0.0;
    p.drift_pos = 0.0;
    p.drift_heading = 0.0;
}

/// Distance law evaluated from its definition.
pub fn gain_law(d: f64, gain: f64, d_ref: f64, d_cull: f64) -> f64 {
    let rolloff = if d <= d_ref { 1.0 } else { d_ref / d };
    let fade = (d_cull - d).clamp(0.0, 1.0);
    gain * rolloff * fade
}
