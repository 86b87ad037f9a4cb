use std::f64::consts::FRAC_PI_4;

/// Level cue for sources behind the listener: 1 in the front hemisphere,
/// down to 0.8 directly behind.
pub fn rear_factor(azimuth: f64) -> f64 {
    1.0 - 0.2 * (-azimuth.cos()).max(0.0)
}

/// Constant-power `(left, right)` gains. Positive azimuth is to the left.
pub fn pan_gains(azimuth: f64) -> (f64, f64) {
    let p = -azimuth.sin();
    let zeta = (p + 1.0) * FRAC_PI_4;
    let f = rear_factor(azimuth);
    (f * zeta.cos(), f * zeta.sin())
}
