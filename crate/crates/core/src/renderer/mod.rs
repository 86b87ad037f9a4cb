//! Deterministic block renderer: stereo amplitude panning with a rear cue,
//! occlusion low-pass, per-sample parameter ramps, ambient bed, metering and
//! 16-bit WAV output.

mod clip;
mod filter;
mod mixer;
mod pan;
mod wav;

pub use clip::{AudioClip, ClipBank, ClipSection};
pub use filter::{lowpass_coefficient, lowpass_step, OnePole, OCCLUSION_CUTOFF_HZ};
pub use mixer::{Mixer, RenderBlock, VoiceParams};
pub use pan::{pan_gains, rear_factor};
pub use wav::{encode_pcm16, quantize, wav_bytes, WavWriter, WAV_HEADER_LEN};
