//! Regenerates the placeholder clips under `fixtures/clips`.
//!
//! ```text
//! cargo run -p aar-core --example gen_fixture_clips
//! ```
//!
//! Tones use whole-hertz frequencies over whole-second lengths so looping is
//! seamless. Noise is seeded, so the output is reproducible.

use std::f64::consts::TAU;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RATE: u32 = 48_000;

fn tone(freqs: &[f64], amp: f64, secs: u32) -> Vec<f64> {
    let n = (RATE * secs) as usize;
    (0..n)
        .map(|i| {
            let t = i as f64 / f64::from(RATE);
            let s: f64 = freqs.iter().map(|f| (TAU * f * t).sin()).sum();
            amp * s / freqs.len() as f64
        })
        .collect()
}

fn noise(seed: u64, amp: f64, secs: u32, smoothing: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut y = 0.0;
    (0..RATE * secs)
        .map(|_| {
            let x: f64 = rng.random_range(-1.0..1.0);
            y += smoothing * (x - y);
            amp * y
        })
        .collect()
}

fn chime(freq: f64, amp: f64, secs: f64) -> Vec<f64> {
    let n = (f64::from(RATE) * secs) as usize;
    (0..n)
        .map(|i| {
            let t = i as f64 / f64::from(RATE);
            let env = (t * 200.0).min(1.0) * (-t * 6.0).exp();
            amp * env * (TAU * freq * t).sin()
        })
        .collect()
}

fn write(dir: &Path, name: &str, samples: &[f64]) {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: RATE,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut w = hound::WavWriter::create(dir.join(name), spec).expect("create clip");
    for &s in samples {
        w.write_sample((s * 32767.0).round() as i16)
            .expect("write sample");
    }
    w.finalize().expect("finalize clip");
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/clips");
    std::fs::create_dir_all(&dir).expect("clips dir");

    write(&dir, "tone_440.wav", &tone(&[440.0], 0.25, 2));
    write(&dir, "tone_2k.wav", &tone(&[2000.0], 0.25, 2));

    write(&dir, "radio_news.wav", &tone(&[330.0], 0.2, 3));
    write(&dir, "radio_music.wav", &tone(&[523.0, 659.0], 0.2, 3));
    write(&dir, "radio_drama.wav", &tone(&[220.0, 277.0], 0.2, 3));
    write(&dir, "radio_static.wav", &noise(1, 0.15, 2, 1.0));

    write(&dir, "hall_strings.wav", &tone(&[196.0, 294.0], 0.15, 3));
    write(&dir, "hall_brass.wav", &tone(&[233.0, 349.0], 0.15, 3));
    write(
        &dir,
        "hall_choir.wav",
        &tone(&[262.0, 330.0, 392.0], 0.15, 3),
    );
    write(&dir, "hall_winds.wav", &tone(&[440.0, 587.0], 0.15, 3));
    write(&dir, "chime.wav", &chime(880.0, 0.3, 1.0));

    write(&dir, "portrait_voice.wav", &tone(&[180.0, 360.0], 0.15, 3));
    write(&dir, "jungle.wav", &tone(&[1200.0, 2500.0, 3100.0], 0.2, 2));
    write(&dir, "city.wav", &noise(2, 0.3, 2, 0.2));
    write(&dir, "lobby_ambient.wav", &noise(3, 0.08, 2, 0.05));
}
