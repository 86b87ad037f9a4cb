use std::collections::BTreeMap;

use super::clip::ClipSection;
use super::filter::{OnePole, OCCLUSION_CUTOFF_HZ};

/// Control values for one playing voice for one block.
#[derive(Debug, Clone)]
pub struct VoiceParams {
    /// Stable identity across blocks; ramps are continued per key.
    pub key: String,
    pub section: ClipSection,
    /// Frames into the section at the start of this block.
    pub playhead: u64,
    pub looping: bool,
    pub gain_l: f64,
    pub gain_r: f64,
    pub lowpass: bool,
}

/// One rendered block of interleaved stereo.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderBlock {
    pub frames: Vec<[f32; 2]>,
    pub t_start: f64,
    pub virtual_rms: f64,
    pub ambient_rms: f64,
    /// Samples clamped in this block.
    pub clipped: u64,
}

#[derive(Debug, Clone)]
struct VoiceState {
    section: ClipSection,
    playhead: u64,
    looping: bool,
    gain_l: f64,
    gain_r: f64,
    wet: f64,
    filter: OnePole,
}

#[derive(Debug, Clone)]
struct AmbientState {
    gain: f64,
    playhead: u64,
}

/// Stateful block mixer. Holds each voice's last targets, filter memory and
/// playhead so that parameters ramp smoothly from block to block.
#[derive(Debug, Clone)]
pub struct Mixer {
    sample_rate: u32,
    block: usize,
    voices: BTreeMap<String, VoiceState>,
    ambient: Option<AmbientState>,
    clip_count: u64,
}

impl Mixer {
    pub fn new(sample_rate: u32, block: usize) -> Self {
        Mixer {
            sample_rate,
            block,
            voices: BTreeMap::new(),
            ambient: None,
            clip_count: 0,
        }
    }

    /// Total clamped samples since construction.
    pub fn clip_count(&self) -> u64 {
        self.clip_count
    }

    pub fn block(&self) -> usize {
        self.block
    }

    /// Mixes one block.
    ///
    /// Gains ramp linearly per sample from the previous block's targets to
    /// these targets; voices missing from `voices` ramp to silence and are
    /// dropped, new voices ramp in from silence. Low-pass engagement
    /// crossfades between the dry and filtered signal over the block.
    pub fn render_block(
        &mut self,
        voices: &[VoiceParams],
        ambient: Option<(&ClipSection, f64)>,
        t_start: f64,
    ) -> RenderBlock {
        let n = self.block;
        let inv_n = 1.0 / n as f64;
        let mut virt = vec![[0.0f64; 2]; n];
        let mut amb = vec![0.0f64; n];

        // (state, target l, target r, target wet)
        let mut work: BTreeMap<String, (VoiceState, f64, f64, f64)> = BTreeMap::new();
        let mut previous = std::mem::take(&mut self.voices);
        for v in voices {
            let state = match previous.remove(&v.key) {
                Some(mut s) => {
                    s.section = v.section.clone();
                    s.playhead = v.playhead;
                    s.looping = v.looping;
                    s
                }
                None => VoiceState {
                    section: v.section.clone(),
                    playhead: v.playhead,
                    looping: v.looping,
                    gain_l: 0.0,
                    gain_r: 0.0,
                    wet: if v.lowpass { 1.0 } else { 0.0 },
                    filter: OnePole::new(OCCLUSION_CUTOFF_HZ, f64::from(self.sample_rate)),
                },
            };
            let wet = if v.lowpass { 1.0 } else { 0.0 };
            work.insert(v.key.clone(), (state, v.gain_l, v.gain_r, wet));
        }
        // released voices fade out this block and are not kept
        let released: Vec<String> = previous.keys().cloned().collect();
        for (k, s) in previous {
            let wet = s.wet;
            work.insert(k, (s, 0.0, 0.0, wet));
        }

        for (key, (mut s, tl, tr, tw)) in work {
            let len = s.section.len() as u64;
            let (dl, dr, dw) = (tl - s.gain_l, tr - s.gain_r, tw - s.wet);
            for (i, out) in virt.iter_mut().enumerate() {
                let u = (i + 1) as f64 * inv_n;
                let pos = s.playhead + i as u64;
                let idx = if s.looping && len > 0 { pos % len } else { pos };
                let x = f64::from(s.section.get(idx as usize));
                let y = s.filter.step(x);
                let w = s.wet + dw * u;
                let sig = x + w * (y - x);
                out[0] += (s.gain_l + dl * u) * sig;
                out[1] += (s.gain_r + dr * u) * sig;
            }
            if !released.contains(&key) {
                s.playhead += n as u64;
                if s.looping && len > 0 {
                    s.playhead %= len;
                }
                s.gain_l = tl;
                s.gain_r = tr;
                s.wet = tw;
                self.voices.insert(key, s);
            }
        }

        match ambient {
            Some((section, target)) => {
                let st = self.ambient.get_or_insert(AmbientState {
                    gain: 0.0,
                    playhead: 0,
                });
                let len = section.len() as u64;
                let dg = target - st.gain;
                for (i, a) in amb.iter_mut().enumerate() {
                    let u = (i + 1) as f64 * inv_n;
                    let idx = if len > 0 {
                        (st.playhead + i as u64) % len
                    } else {
                        0
                    };
                    *a = (st.gain + dg * u) * f64::from(section.get(idx as usize));
                }
                st.gain = target;
                if len > 0 {
                    st.playhead = (st.playhead + n as u64) % len;
                }
            }
            None => self.ambient = None,
        }

        let mut frames = Vec::with_capacity(n);
        let (mut pv, mut pa) = (0.0, 0.0);
        let mut clipped = 0;
        for (v, a) in virt.iter().zip(&amb) {
            pv += v[0] * v[0] + v[1] * v[1];
            pa += 2.0 * a * a;
            let mut frame = [0.0f32; 2];
            for (c, out) in frame.iter_mut().enumerate() {
                let s = v[c] + a;
                let c = s.clamp(-1.0, 1.0);
                if c != s {
                    clipped += 1;
                }
                *out = c as f32;
            }
            frames.push(frame);
        }
        self.clip_count += clipped;
        let denom = (2 * n) as f64;
        RenderBlock {
            frames,
            t_start,
            virtual_rms: (pv / denom).sqrt(),
            ambient_rms: (pa / denom).sqrt(),
            clipped,
        }
    }
}
