use std::f64::consts::TAU;

pub const OCCLUSION_CUTOFF_HZ: f64 = 800.0;

/// Feedback coefficient of the one-pole low-pass.
pub fn lowpass_coefficient(cutoff_hz: f64, sample_rate: f64) -> f64 {
    1.0 - (-TAU * cutoff_hz / sample_rate).exp()
}

/// `y[n] = y[n-1] + a (x[n] - y[n-1])`. Returns `(new_state, y)`; the state
/// is the previous output.
pub fn lowpass_step(state: f64, x: f64, cutoff_hz: f64, sample_rate: f64) -> (f64, f64) {
    let y = state + lowpass_coefficient(cutoff_hz, sample_rate) * (x - state);
    (y, y)
}

/// One-pole low-pass with the coefficient computed once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnePole {
    a: f64,
    y: f64,
}

impl OnePole {
    pub fn new(cutoff_hz: f64, sample_rate: f64) -> Self {
        OnePole {
            a: lowpass_coefficient(cutoff_hz, sample_rate),
            y: 0.0,
        }
    }

    #[inline]
    pub fn step(&mut self, x: f64) -> f64 {
        self.y += self.a * (x - self.y);
        self.y
    }
}
