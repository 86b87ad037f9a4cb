use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::audio_logic::{ClipRef, Content};
use crate::error::{Error, Result};
use crate::scene::Scene;

/// Mono PCM at the engine rate.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioClip {
    pub samples: Vec<f32>,
    pub sample_rate: u32,
}

impl AudioClip {
    /// Decodes a 16- or 24-bit PCM WAV. Stereo is averaged to mono; any rate
    /// other than `engine_rate` is rejected.
    pub fn load(path: &Path, engine_rate: u32) -> Result<AudioClip> {
        let err = |msg: String| Error::Clip {
            file: path.to_path_buf(),
            msg,
        };
        let mut reader = hound::WavReader::open(path).map_err(|e| match e {
            hound::Error::IoError(io) => Error::io(path, io),
            other => err(other.to_string()),
        })?;
        let spec = reader.spec();
        if spec.sample_rate != engine_rate {
            return Err(err(format!(
                "sample rate {} Hz, engine runs at {} Hz",
                spec.sample_rate, engine_rate
            )));
        }
        if spec.sample_format != hound::SampleFormat::Int
            || !(spec.bits_per_sample == 16 || spec.bits_per_sample == 24)
        {
            return Err(err(format!(
                "unsupported format: {:?} {}-bit (need 16/24-bit PCM)",
                spec.sample_format, spec.bits_per_sample
            )));
        }
        let channels = usize::from(spec.channels);
        if !(channels == 1 || channels == 2) {
            return Err(err(format!("{channels} channels (need mono or stereo)")));
        }
        let scale = 1.0 / f64::from(1u32 << (spec.bits_per_sample - 1));
        let raw: Vec<i32> = reader
            .samples::<i32>()
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| err(e.to_string()))?;
        let samples = raw
            .chunks_exact(channels)
            .map(|frame| {
                let sum: f64 = frame.iter().map(|&s| f64::from(s)).sum();
                (sum / channels as f64 * scale) as f32
            })
            .collect();
        Ok(AudioClip {
            samples,
            sample_rate: spec.sample_rate,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// A frame range of a decoded clip.
#[derive(Debug, Clone)]
pub struct ClipSection {
    pub clip: Arc<AudioClip>,
    pub start: usize,
    pub end: usize,
}

impl ClipSection {
    pub fn whole(clip: Arc<AudioClip>) -> Self {
        let end = clip.len();
        ClipSection {
            clip,
            start: 0,
            end,
        }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    /// Sample at `i` frames into the section; silence past the end.
    #[inline]
    pub fn get(&self, i: usize) -> f32 {
        if i < self.len() {
            self.clip.samples[self.start + i]
        } else {
            0.0
        }
    }
}

/// Every clip a scene refers to, decoded once.
#[derive(Debug, Clone, Default)]
pub struct ClipBank {
    files: BTreeMap<PathBuf, Arc<AudioClip>>,
    rate: u32,
}

impl ClipBank {
    pub fn load(scene: &Scene) -> Result<ClipBank> {
        let mut bank = ClipBank {
            files: BTreeMap::new(),
            rate: scene.params.sample_rate,
        };
        bank.refresh(scene)?;
        Ok(bank)
    }

    /// Decodes any clips of `scene` not already loaded. Nothing is added
    /// unless every new clip decodes.
    pub fn refresh(&mut self, scene: &Scene) -> Result<()> {
        let mut refs: Vec<&ClipRef> = Vec::new();
        for src in &scene.sources {
            refs.extend(src.content.clips());
            refs.extend(src.attractor_clip.iter());
        }
        refs.extend(scene.ambient.iter().map(|a| &a.clip));

        let mut fresh = BTreeMap::new();
        for c in refs {
            let path = scene.resolve_clip(c);
            if !self.files.contains_key(&path) && !fresh.contains_key(&path) {
                let clip = AudioClip::load(&path, self.rate)?;
                fresh.insert(path, Arc::new(clip));
            }
        }
        self.files.extend(fresh);
        Ok(())
    }

    /// Resolves a clip reference to its frame range.
    pub fn section(&self, scene: &Scene, c: &ClipRef) -> Option<ClipSection> {
        let clip = self.files.get(&scene.resolve_clip(c))?.clone();
        let rate = f64::from(self.rate);
        let start = ((c.start * rate).round() as usize).min(clip.len());
        let end = c
            .end
            .map(|e| (e * rate).round() as usize)
            .unwrap_or(clip.len())
            .clamp(start, clip.len());
        Some(ClipSection { clip, start, end })
    }

    /// Longest section among a content's band clips, in frames.
    pub fn content_len(&self, scene: &Scene, content: &Content) -> u64 {
        let clips: Vec<&ClipRef> = match content {
            Content::Clip(c) => vec![c],
            Content::Selector(s) => s.clips.iter().collect(),
        };
        clips
            .into_iter()
            .filter_map(|c| self.section(scene, c))
            .map(|s| s.len() as u64)
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(path: &Path, rate: u32, channels: u16, bits: u16, frames: &[Vec<i32>]) {
        let spec = hound::WavSpec {
            channels,
            sample_rate: rate,
            bits_per_sample: bits,
            sample_format: hound::SampleFormat::Int,
        };
        let mut w = hound::WavWriter::create(path, spec).unwrap();
        for f in frames {
            for &s in f {
                w.write_sample(s).unwrap();
            }
        }
        w.finalize().unwrap();
    }

    #[test]
    fn stereo_is_averaged() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.wav");
        write(&p, 48_000, 2, 16, &[vec![16384, 0], vec![-32768, -32768]]);
        let c = AudioClip::load(&p, 48_000).unwrap();
        assert_eq!(c.samples, vec![0.25, -1.0]);
    }

    #[test]
    fn twenty_four_bit_scales() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.wav");
        write(&p, 48_000, 1, 24, &[vec![4_194_304]]);
        let c = AudioClip::load(&p, 48_000).unwrap();
        assert_eq!(c.samples, vec![0.5]);
    }

    #[test]
    fn wrong_rate_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.wav");
        write(&p, 44_100, 1, 16, &[vec![0]]);
        let err = AudioClip::load(&p, 48_000).unwrap_err().to_string();
        assert!(err.contains("44100"), "{err}");
    }

    #[test]
    fn section_reads_silence_past_end() {
        let clip = Arc::new(AudioClip {
            samples: vec![0.1, 0.2, 0.3, 0.4],
            sample_rate: 4,
        });
        let s = ClipSection {
            clip,
            start: 1,
            end: 3,
        };
        assert_eq!((s.get(0), s.get(1), s.get(2)), (0.2, 0.3, 0.0));
    }
}
